#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lrbound/errors.hpp"
#include "lrbound/format.hpp"
#include "lrbound/model.hpp"

namespace lrbound {

// An elementary cycle of interaction types: a closed walk on the type graph
// in which no directed arc repeats (the wrap-around arc included), so its
// length r is at most m(m-1).  Two walks with equal arc multisets produce
// identical envelope terms, so cycles are deduplicated by arc multiset and
// type_sequence is just a canonical representative walk.
struct Cycle {
  std::vector<int> type_sequence;             // canonical, r >= 2
  std::vector<std::pair<int, int>> arcs;      // sorted, wrap arc included
  double k = 0.0;                             // geometric-mean weight
  double log_k = 0.0;
  double xi = 0.0;                            // arithmetic-mean step distance
};

struct CycleStats {
  double k = 0.0;
  double log_k = 0.0;
  double xi = 0.0;
};

namespace detail {

inline void check_elementary(const ModelSpec& spec, const std::vector<int>& seq) {
  const int r = static_cast<int>(seq.size());
  if (r < 2) fail(Errc::invalid_field, "cycle needs at least two types");
  for (int t : seq)
    if (t < 0 || t >= spec.type_count())
      fail(Errc::invalid_field, "cycle type index out of range");
  std::set<std::pair<int, int>> used;
  for (int l = 0; l < r; ++l) {
    int a = seq[l], b = seq[(l + 1) % r];
    if (a == b) fail(Errc::invalid_field, "consecutive cycle types must differ");
    if (!used.insert({a, b}).second)
      fail(Errc::invalid_field, "cycle repeats a directed transition");
  }
}

}  // namespace detail

// (k, xi) of an elementary cycle.  k is accumulated in log space; the
// commutator bound K enters the product for commutator-bounded systems.
inline CycleStats cycle_stats(const ModelSpec& spec, const std::vector<int>& seq) {
  detail::check_elementary(spec, seq);
  const int r = static_cast<int>(seq.size());
  double log_k = 0.0, dist = 0.0;
  for (int l = 0; l < r; ++l) {
    int a = seq[l], b = seq[(l + 1) % r];
    const Transition& tr = spec.transition(a, b);
    double h = spec.interactions[a].coupling;
    if (h <= 0.0 || tr.n <= 0)
      fail(Errc::zero_k, "zero coupling or transition count on arc " +
                             spec.interactions[a].label + "->" +
                             spec.interactions[b].label);
    log_k += std::log(h) + std::log(static_cast<double>(tr.n));
    if (spec.system_class == SystemClass::commutator_bounded) {
      if (!tr.commutator_bound)
        fail(Errc::zero_k, "missing K on arc " + spec.interactions[a].label +
                               "->" + spec.interactions[b].label);
      log_k += std::log(*tr.commutator_bound);
    }
    dist += tr.distance;
  }
  CycleStats st;
  st.log_k = log_k / r;
  st.k = std::exp(st.log_k);
  st.xi = dist / r;
  if (st.xi <= 0.0)
    fail(Errc::zero_xi, "cycle has zero mean step distance");
  return st;
}

namespace detail {

// Lexicographically smallest Eulerian circuit over the given arcs, starting
// at the smallest node.  Arcs are balanced and connected by construction,
// so a circuit exists; DFS in ascending target order finds the smallest.
inline std::vector<int> canonical_circuit(const std::vector<std::pair<int, int>>& arcs) {
  int start = arcs.front().first;
  for (const auto& a : arcs) start = std::min({start, a.first, a.second});
  std::vector<char> used(arcs.size(), 0);
  std::vector<int> walk{start};
  auto dfs = [&](auto&& self, int node, std::size_t remaining) -> bool {
    if (remaining == 0) return node == start;
    // candidate arcs from node, ascending by target
    std::vector<int> order;
    for (std::size_t i = 0; i < arcs.size(); ++i)
      if (!used[i] && arcs[i].first == node) order.push_back(static_cast<int>(i));
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return arcs[x].second < arcs[y].second; });
    for (int i : order) {
      used[i] = 1;
      walk.push_back(arcs[i].second);
      if (self(self, arcs[i].second, remaining - 1)) return true;
      walk.pop_back();
      used[i] = 0;
    }
    return false;
  };
  if (!dfs(dfs, start, arcs.size()))
    throw InternalError("balanced connected arc set admits no circuit");
  walk.pop_back();  // drop the closing repeat of start
  return walk;
}

inline bool balanced_and_connected(const std::vector<std::pair<int, int>>& arcs, int m) {
  std::vector<int> in(m, 0), out(m, 0);
  for (const auto& a : arcs) {
    ++out[a.first];
    ++in[a.second];
  }
  int root = -1;
  for (int v = 0; v < m; ++v) {
    if (in[v] != out[v]) return false;
    if (root < 0 && in[v] > 0) root = v;
  }
  if (root < 0) return false;
  // weak connectivity of active nodes; with balance this gives an Eulerian circuit
  std::vector<char> seen(m, 0);
  std::vector<int> stack{root};
  seen[root] = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (const auto& a : arcs) {
      int v = a.first == u ? a.second : (a.second == u ? a.first : -1);
      if (v >= 0 && !seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
    }
  }
  for (int v = 0; v < m; ++v)
    if (in[v] > 0 && !seen[v]) return false;
  return true;
}

}  // namespace lrbound::detail

// Enumerates every elementary cycle of the validated model, one per arc
// multiset, sorted by (length, type sequence).  Arcs with n = 0 never
// appear.  A subset of the type-graph arcs hosts exactly one cycle iff it
// is in/out balanced at every node and connected, so for small models we
// scan subsets directly; larger arc sets fall back to a walk search with
// arc-set deduplication.
inline std::vector<Cycle> enumerate_cycles(const ModelSpec& spec) {
  const int m = spec.type_count();
  std::vector<std::pair<int, int>> arcs;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j && spec.transition(i, j).n > 0 &&
          spec.interactions[i].coupling > 0.0 &&
          spec.interactions[j].coupling > 0.0)
        arcs.emplace_back(i, j);

  std::set<std::vector<std::pair<int, int>>> arc_sets;
  const int a = static_cast<int>(arcs.size());
  if (a <= 24) {
    for (std::uint32_t mask = 1; mask < (1u << a); ++mask) {
      std::vector<std::pair<int, int>> sub;
      for (int i = 0; i < a; ++i)
        if (mask & (1u << i)) sub.push_back(arcs[i]);
      if (sub.size() < 2) continue;
      if (detail::balanced_and_connected(sub, m)) {
        std::sort(sub.begin(), sub.end());
        arc_sets.insert(std::move(sub));
      }
    }
  } else {
    // walk search: closed walks with distinct arcs, visited nodes >= start
    std::vector<std::vector<int>> from(m);
    for (int i = 0; i < a; ++i) from[arcs[i].first].push_back(i);
    for (int s = 0; s < m; ++s) {
      std::vector<char> used(a, 0);
      auto dfs = [&](auto&& self, int node, int depth) -> void {
        for (int i : from[node]) {
          if (used[i] || arcs[i].second < s) continue;
          used[i] = 1;
          if (arcs[i].second == s) {
            std::vector<std::pair<int, int>> sub;
            for (int x = 0; x < a; ++x)
              if (used[x]) sub.push_back(arcs[x]);
            arc_sets.insert(std::move(sub));
          }
          self(self, arcs[i].second, depth + 1);
          used[i] = 0;
        }
      };
      dfs(dfs, s, 0);
    }
  }

  std::vector<Cycle> cycles;
  for (const auto& set : arc_sets) {
    Cycle c;
    c.arcs = set;
    c.type_sequence = detail::canonical_circuit(set);
    CycleStats st = cycle_stats(spec, c.type_sequence);
    c.k = st.k;
    c.log_k = st.log_k;
    c.xi = st.xi;
    cycles.push_back(std::move(c));
  }
  std::sort(cycles.begin(), cycles.end(), [](const Cycle& x, const Cycle& y) {
    if (x.type_sequence.size() != y.type_sequence.size())
      return x.type_sequence.size() < y.type_sequence.size();
    return x.type_sequence < y.type_sequence;
  });
  if (cycles.empty())
    fail(Errc::no_cycles, "model admits no elementary cycle");
  return cycles;
}

// "X-Y-Z" style label string for a cycle sequence; used in region ids and
// CLI output.
inline std::string sequence_string(const ModelSpec& spec,
                                   const std::vector<int>& seq,
                                   const std::string& sep = "-") {
  std::vector<std::string> labels;
  labels.reserve(seq.size());
  for (int t : seq) labels.push_back(spec.interactions[t].label);
  return join(labels, sep);
}

}  // namespace lrbound
