#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lrbound/errors.hpp"

namespace lrbound {

enum class SystemClass { bounded, commutator_bounded };
enum class GraphKind { lattice, homogeneous_isotropic };

inline const char* to_string(SystemClass c) {
  return c == SystemClass::bounded ? "bounded" : "commutator-bounded";
}
inline const char* to_string(GraphKind g) {
  return g == GraphKind::lattice ? "lattice" : "homogeneous-isotropic";
}

// One interaction type: a family of mutually commuting local operators
// sharing a coupling constant.  Operator norms are absorbed into the
// coupling, so there is no separate norm field.
struct InteractionType {
  std::string label;
  double coupling = 0.0;  // h_l, energy units
};

// Directed transition between two interaction types: how many operators of
// the target type intersect a given source operator (n), how far one moves
// along the graph by stepping (distance), and, for commutator-bounded
// systems, the norm bound K on the pairwise commutator.
struct Transition {
  int n = 0;
  double distance = 0.0;
  std::optional<double> commutator_bound;
};

class ModelSpec {
 public:
  SystemClass system_class = SystemClass::bounded;
  GraphKind graph_kind = GraphKind::lattice;
  std::vector<InteractionType> interactions;
  // Dense from x to table, row-major; diagonal entries are ignored.
  std::vector<Transition> table;
  bool validated = false;

  int type_count() const { return static_cast<int>(interactions.size()); }

  const Transition& transition(int from, int to) const {
    return table[static_cast<std::size_t>(from) * interactions.size() + to];
  }
  Transition& transition(int from, int to) {
    return table[static_cast<std::size_t>(from) * interactions.size() + to];
  }

  int find_label(std::string_view label) const {
    for (int i = 0; i < type_count(); ++i)
      if (interactions[i].label == label) return i;
    return -1;
  }

  // C = 2(m-1) for bounded operators, sqrt(8)(m-1) for commutator-bounded.
  double speed_constant() const {
    double m = static_cast<double>(type_count());
    return system_class == SystemClass::bounded ? 2.0 * (m - 1.0)
                                                : std::sqrt(8.0) * (m - 1.0);
  }
};

namespace detail {

// Arc i->j participates in chains: both types retained, n > 0.
inline bool arc_alive(const ModelSpec& s, const std::vector<char>& keep,
                      int i, int j) {
  return i != j && keep[i] && keep[j] && s.transition(i, j).n > 0;
}

inline std::vector<char> reachable(const ModelSpec& s,
                                   const std::vector<char>& keep, int start,
                                   bool forward) {
  const int m = s.type_count();
  std::vector<char> seen(m, 0);
  std::vector<int> stack{start};
  seen[start] = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v = 0; v < m; ++v) {
      bool edge = forward ? arc_alive(s, keep, u, v) : arc_alive(s, keep, v, u);
      if (edge && !seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

}  // namespace detail

// Normalizes a raw model: rejects negative inputs, prunes interactions with
// zero coupling or no nonzero transition, compacts indices, and verifies
// that the retained type graph is strongly connected (otherwise no
// elementary cycle exists and the speed is undefined).  Idempotent.
inline ModelSpec validate(ModelSpec spec) {
  const int m0 = spec.type_count();
  if (m0 == 0) fail(Errc::empty_model, "model has no interactions");
  if (spec.table.size() != static_cast<std::size_t>(m0) * m0)
    fail(Errc::invalid_field, "transition table must be a full from x to grid");

  for (const auto& it : spec.interactions) {
    if (!(it.coupling >= 0.0))
      fail(Errc::negative_value, "coupling of '" + it.label + "'");
    if (it.label.empty()) fail(Errc::invalid_field, "empty interaction label");
  }
  for (int i = 0; i < m0; ++i)
    for (int j = i + 1; j < m0; ++j)
      if (spec.interactions[i].label == spec.interactions[j].label)
        fail(Errc::invalid_field,
             "duplicate interaction label '" + spec.interactions[i].label + "'");

  for (int i = 0; i < m0; ++i) {
    for (int j = 0; j < m0; ++j) {
      const Transition& tr = spec.transition(i, j);
      std::string arc = spec.interactions[i].label + "->" + spec.interactions[j].label;
      if (tr.n < 0) fail(Errc::negative_value, "n of " + arc);
      if (!(tr.distance >= 0.0)) fail(Errc::negative_value, "D of " + arc);
      if (tr.commutator_bound && !(*tr.commutator_bound > 0.0))
        fail(Errc::negative_value, "K of " + arc);
      if (i == j && tr.n != 0)
        fail(Errc::invalid_field, "self-transition on " +
                                      spec.interactions[i].label +
                                      " (same-type operators commute)");
    }
  }

  // Prune to a fixpoint: zero couplings first, then anything stranded
  // without a nonzero transition to another retained type.
  std::vector<char> keep(m0);
  for (int i = 0; i < m0; ++i) keep[i] = spec.interactions[i].coupling > 0.0;
  for (bool changed = true; changed;) {
    changed = false;
    for (int i = 0; i < m0; ++i) {
      if (!keep[i]) continue;
      bool incident = false;
      for (int j = 0; j < m0 && !incident; ++j)
        incident = detail::arc_alive(spec, keep, i, j) ||
                   detail::arc_alive(spec, keep, j, i);
      if (!incident) {
        keep[i] = 0;
        changed = true;
      }
    }
  }

  int m = 0;
  for (int i = 0; i < m0; ++i) m += keep[i];
  if (m < 2)
    fail(Errc::empty_model, "fewer than two interactions remain after pruning");

  if (spec.system_class == SystemClass::commutator_bounded) {
    for (int i = 0; i < m0; ++i)
      for (int j = 0; j < m0; ++j)
        if (detail::arc_alive(spec, keep, i, j) &&
            !spec.transition(i, j).commutator_bound)
          fail(Errc::missing_k, "transition " + spec.interactions[i].label +
                                    "->" + spec.interactions[j].label +
                                    " lacks K in a commutator-bounded model");
  }

  int first = 0;
  while (!keep[first]) ++first;
  auto fwd = detail::reachable(spec, keep, first, true);
  auto bwd = detail::reachable(spec, keep, first, false);
  for (int i = 0; i < m0; ++i)
    if (keep[i] && !(fwd[i] && bwd[i]))
      fail(Errc::disconnected, "no cycle reaches interaction '" +
                                   spec.interactions[i].label + "'");

  ModelSpec out;
  out.system_class = spec.system_class;
  out.graph_kind = spec.graph_kind;
  std::vector<int> map(m0, -1);
  for (int i = 0; i < m0; ++i) {
    if (!keep[i]) continue;
    map[i] = static_cast<int>(out.interactions.size());
    out.interactions.push_back(spec.interactions[i]);
  }
  out.table.assign(static_cast<std::size_t>(m) * m, Transition{});
  for (int i = 0; i < m0; ++i) {
    if (!keep[i]) continue;
    for (int j = 0; j < m0; ++j) {
      if (!keep[j] || i == j) continue;
      out.transition(map[i], map[j]) = spec.transition(i, j);
    }
  }
  out.validated = true;
  return out;
}

// N_{from,to}(lambda): n * h_to * e^{lambda D}, with the commutator bound K
// folded in for commutator-bounded systems.  Zero on the diagonal.
inline double transition_factor(const ModelSpec& spec, int from, int to,
                                double lambda) {
  if (!(lambda > 0.0)) fail(Errc::invalid_lambda, "lambda must be positive");
  if (from < 0 || to < 0 || from >= spec.type_count() || to >= spec.type_count())
    fail(Errc::invalid_field, "transition index out of range");
  if (from == to) return 0.0;
  const Transition& tr = spec.transition(from, to);
  double f = static_cast<double>(tr.n) * spec.interactions[to].coupling *
             std::exp(lambda * tr.distance);
  if (spec.system_class == SystemClass::commutator_bounded)
    f *= tr.commutator_bound.value_or(0.0);
  return f;
}

}  // namespace lrbound
