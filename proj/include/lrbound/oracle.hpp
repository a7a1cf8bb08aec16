#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "lrbound/errors.hpp"
#include "lrbound/model.hpp"

namespace lrbound {

using BigInt = boost::multiprecision::cpp_int;

// What a local operator does physically; consumed by the dynamics module
// when the same graph model is turned into a Hamiltonian.
enum class LocalOpKind {
  pauli_x_site,   // -sigma^x on one site
  pauli_zz_bond,  // -sigma^z sigma^z on a bond
  spin_xx_bond,   // S^x S^x on a bond
  spin_yy_bond,   // S^y S^y on a bond
  spin_z2_site,   // (S^z)^2 on one site
};

struct LocalOperator {
  int type = 0;
  std::vector<int> support;  // sorted cell ids
  LocalOpKind kind = LocalOpKind::pauli_x_site;
  bool interior = false;  // adjacency counts match the lattice tables
};

// A concrete finite-graph realization of a model: cells with positions,
// typed local operators with supports, and the per-type-pair step-distance
// and branching tables the lattice conventions fix.  Chains step between
// operators of different type with intersecting supports only.
class ExplicitGraphModel {
 public:
  std::string name;
  std::vector<std::string> type_labels;
  std::vector<std::array<double, 2>> cell_pos;  // Manhattan metric
  std::vector<LocalOperator> operators;
  std::vector<double> step_dist;  // type x type, lattice cell conventions
  std::vector<int> lattice_n;     // type x type interior branching counts
  double range = 1.0;             // max support diameter R

  int types() const { return static_cast<int>(type_labels.size()); }
  int cells() const { return static_cast<int>(cell_pos.size()); }

  double step_distance(int from_type, int to_type) const {
    return step_dist[static_cast<std::size_t>(from_type) * types() + to_type];
  }
  int lattice_count(int from_type, int to_type) const {
    return lattice_n[static_cast<std::size_t>(from_type) * types() + to_type];
  }

  double cell_distance(int a, int b) const {
    return std::abs(cell_pos[a][0] - cell_pos[b][0]) +
           std::abs(cell_pos[a][1] - cell_pos[b][1]);
  }
  double region_distance(std::span<const int> p, std::span<const int> q) const {
    double best = std::numeric_limits<double>::infinity();
    for (int a : p)
      for (int b : q) best = std::min(best, cell_distance(a, b));
    return best;
  }

  static bool supports_intersect(const LocalOperator& a, const LocalOperator& b) {
    std::size_t i = 0, j = 0;
    while (i < a.support.size() && j < b.support.size()) {
      if (a.support[i] == b.support[j]) return true;
      if (a.support[i] < b.support[j])
        ++i;
      else
        ++j;
    }
    return false;
  }

  bool intersects(int a, int b) const {
    return supports_intersect(operators[a], operators[b]);
  }

  // ops of a different type with intersecting support, per operator
  const std::vector<std::vector<int>>& adjacency() const {
    if (adjacency_.empty() && !operators.empty()) {
      adjacency_.resize(operators.size());
      for (std::size_t a = 0; a < operators.size(); ++a)
        for (std::size_t b = a + 1; b < operators.size(); ++b) {
          if (operators[a].type == operators[b].type) continue;
          if (supports_intersect(operators[a], operators[b])) {
            adjacency_[a].push_back(static_cast<int>(b));
            adjacency_[b].push_back(static_cast<int>(a));
          }
        }
    }
    return adjacency_;
  }

  int cross_degree(int op, int to_type) const {
    int c = 0;
    for (int b : adjacency()[op])
      if (operators[b].type == to_type) ++c;
    return c;
  }

  int max_cross_degree() const {
    int best = 0;
    for (std::size_t a = 0; a < operators.size(); ++a)
      best = std::max(best, static_cast<int>(adjacency()[a].size()));
    return best;
  }

  void mark_interior() {
    for (std::size_t a = 0; a < operators.size(); ++a) {
      bool ok = true;
      for (int t = 0; t < types() && ok; ++t) {
        if (t == operators[a].type) continue;
        ok = cross_degree(static_cast<int>(a), t) == lattice_count(operators[a].type, t);
      }
      operators[a].interior = ok;
    }
  }

 private:
  mutable std::vector<std::vector<int>> adjacency_;
};

// Transverse-field Ising chain: field operators on vertices, bond operators
// on edges, vertex-edge step of half a lattice spacing.
inline ExplicitGraphModel build_ising_chain(int sites) {
  if (sites < 2) fail(Errc::too_small, "Ising chain needs at least 2 sites");
  ExplicitGraphModel g;
  g.name = "ising";
  g.type_labels = {"X", "ZZ"};
  g.step_dist = {0.0, 0.5, 0.5, 0.0};
  g.lattice_n = {0, 2, 2, 0};
  g.range = 1.0;
  for (int i = 0; i < sites; ++i)
    g.cell_pos.push_back({static_cast<double>(i), 0.0});
  for (int i = 0; i < sites; ++i)
    g.operators.push_back({0, {i}, LocalOpKind::pauli_x_site, false});
  for (int i = 0; i + 1 < sites; ++i)
    g.operators.push_back({1, {i, i + 1}, LocalOpKind::pauli_zz_bond, false});
  g.mark_interior();
  return g;
}

// Anisotropic XY model on a square lattice: X and Y exchange operators on
// edges, single-ion Z operators on sites.  Interior counts reproduce
// n_XZ=2, n_ZX=4, n_XY=7 with steps X-Z 1/2 and X-Y 1.
inline ExplicitGraphModel build_xy_lattice(int rows, int cols) {
  if (rows < 2 || cols < 2) fail(Errc::too_small, "XY lattice needs a 2x2 grid");
  ExplicitGraphModel g;
  g.name = "xy";
  g.type_labels = {"X", "Y", "Z"};
  g.step_dist = {0.0, 1.0, 0.5,
                 1.0, 0.0, 0.5,
                 0.5, 0.5, 0.0};
  g.lattice_n = {0, 7, 2,
                 7, 0, 2,
                 4, 4, 0};
  g.range = 1.0;
  auto site = [cols](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      g.cell_pos.push_back({static_cast<double>(r), static_cast<double>(c)});

  std::vector<std::vector<int>> bonds;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c + 1 < cols; ++c)
      bonds.push_back({site(r, c), site(r, c + 1)});
  for (int r = 0; r + 1 < rows; ++r)
    for (int c = 0; c < cols; ++c)
      bonds.push_back({site(r, c), site(r + 1, c)});

  for (const auto& b : bonds)
    g.operators.push_back({0, b, LocalOpKind::spin_xx_bond, false});
  for (const auto& b : bonds)
    g.operators.push_back({1, b, LocalOpKind::spin_yy_bond, false});
  for (int s = 0; s < rows * cols; ++s)
    g.operators.push_back({2, {s}, LocalOpKind::spin_z2_site, false});
  g.mark_interior();
  return g;
}

struct ChainCount {
  int n = 0;
  BigInt count;
  std::vector<int> from_region, to_region;
  double distance = 0.0;
};

// Exact number of operator chains (i_1..i_n): support(i_1) meets P,
// consecutive operators differ in type and share a cell, support(i_n)
// meets Q.  Vector iteration over the cross-type adjacency; counts are
// exact integers since they grow exponentially in n.
inline ChainCount count_chains(const ExplicitGraphModel& g,
                               std::span<const int> p, std::span<const int> q,
                               int n) {
  if (n < 1) fail(Errc::invalid_field, "chain length must be at least 1");
  if (p.empty() || q.empty()) fail(Errc::invalid_field, "empty region");
  const auto& adj = g.adjacency();
  const std::size_t ops = g.operators.size();

  auto meets = [&](const LocalOperator& op, std::span<const int> region) {
    for (int c : op.support)
      for (int r : region)
        if (c == r) return true;
    return false;
  };

  std::vector<BigInt> v(ops);
  for (std::size_t a = 0; a < ops; ++a)
    v[a] = meets(g.operators[a], p) ? 1 : 0;
  for (int step = 1; step < n; ++step) {
    std::vector<BigInt> w(ops);
    for (std::size_t a = 0; a < ops; ++a) {
      if (v[a] == 0) continue;
      for (int b : adj[a]) w[b] += v[a];
    }
    v = std::move(w);
  }
  ChainCount out;
  out.n = n;
  out.from_region.assign(p.begin(), p.end());
  out.to_region.assign(q.begin(), q.end());
  out.distance = g.region_distance(p, q);
  for (std::size_t a = 0; a < ops; ++a)
    if (v[a] != 0 && meets(g.operators[a], q)) out.count += v[a];
  return out;
}

struct BoundSlack {
  int n = 0;
  BigInt count;
  double log_generic = 0.0;
  std::optional<double> log_lattice, log_hi;
  double min_slack = std::numeric_limits<double>::infinity();
};

struct BoundReport {
  double lambda = 0.0;
  double nu = 0.0;  // max cross-type degree
  double distance = 0.0;
  std::vector<BoundSlack> rows;
};

// Checks every applicable chain-count bound for n = 1..n_max: the generic
// degree bound nu^n e^{lambda(Rn - d)} always, and for two-interaction
// lattices the alternation bound with gamma = sqrt(n01 n10) and the
// homogeneous-graph bound with nbar, Dbar.  These are theorems, so a
// negative slack is reported as an error.
inline BoundReport check_count_bounds(const ExplicitGraphModel& g,
                                      std::span<const int> p,
                                      std::span<const int> q, int n_max,
                                      double lambda) {
  if (!(lambda > 0.0)) fail(Errc::invalid_lambda, "lambda must be positive");
  BoundReport report;
  report.lambda = lambda;
  report.nu = g.max_cross_degree();
  report.distance = g.region_distance(p, q);
  const double d = report.distance;

  bool two_type = g.types() == 2 && g.lattice_count(0, 1) > 0 &&
                  g.lattice_count(1, 0) > 0;
  double log_gamma = 0.0, d_mean = 0.0, log_m_tilde = 0.0;
  if (two_type) {
    double n01 = g.lattice_count(0, 1), n10 = g.lattice_count(1, 0);
    log_gamma = 0.5 * (std::log(n01) + std::log(n10));
    d_mean = (g.step_distance(0, 1) + g.step_distance(1, 0)) / 2.0;
    log_m_tilde = 0.5 * std::abs(std::log(n01) - std::log(n10)) + lambda * d_mean;
  }

  const auto& adj = g.adjacency();
  auto meets = [&](const LocalOperator& op, std::span<const int> region) {
    for (int c : op.support)
      for (int r : region)
        if (c == r) return true;
    return false;
  };
  std::vector<BigInt> v(g.operators.size());
  for (std::size_t a = 0; a < v.size(); ++a)
    v[a] = meets(g.operators[a], p) ? 1 : 0;

  for (int n = 1; n <= n_max; ++n) {
    if (n > 1) {
      std::vector<BigInt> w(v.size());
      for (std::size_t a = 0; a < v.size(); ++a) {
        if (v[a] == 0) continue;
        for (int b : adj[a]) w[b] += v[a];
      }
      v = std::move(w);
    }
    BigInt count = 0;
    for (std::size_t a = 0; a < v.size(); ++a)
      if (v[a] != 0 && meets(g.operators[a], q)) count += v[a];

    BoundSlack row;
    row.n = n;
    row.count = count;
    row.log_generic = n * std::log(report.nu) + lambda * (g.range * n - d);
    if (two_type) {
      row.log_lattice = log_m_tilde + n * log_gamma + lambda * (n * d_mean - d);
      row.log_hi = n * log_gamma + lambda * (n * d_mean - d);
    }
    if (count > 0) {
      double log_c = std::log(count.convert_to<double>());
      row.min_slack = row.log_generic - log_c;
      if (row.log_lattice)
        row.min_slack = std::min(row.min_slack, *row.log_lattice - log_c);
      if (row.log_hi)
        row.min_slack = std::min(row.min_slack, *row.log_hi - log_c);
      if (row.min_slack < 0.0)
        fail(Errc::bound_violated,
             "chain-count bound broken at n=" + std::to_string(n) +
                 " (slack " + std::to_string(row.min_slack) + ")");
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

struct HomogeneityEstimate {
  double n_bar = 0.0;      // geometric mean of per-step branching
  double d_bar = 0.0;      // arithmetic mean of per-step distances
  double dispersion = 0.0; // max per-chain deviation of either mean
  std::size_t chains = 0;
};

// Follows every chain that starts at start_op and repeats the given type
// pattern for `steps` transitions (a multiple of the pattern length, so
// whole cycles are covered and lattice estimates come out exact).  The
// per-chain spread of the two means is the homogeneity diagnostic.
inline HomogeneityEstimate estimate_homogeneity(const ExplicitGraphModel& g,
                                                int start_op,
                                                std::span<const int> pattern,
                                                int steps) {
  const int r = static_cast<int>(pattern.size());
  if (r < 2) fail(Errc::invalid_field, "pattern needs at least two types");
  for (int t : pattern)
    if (t < 0 || t >= g.types())
      fail(Errc::invalid_field, "pattern type out of range");
  for (int l = 0; l < r; ++l)
    if (pattern[l] == pattern[(l + 1) % r])
      fail(Errc::invalid_field, "consecutive pattern types must differ");
  if (steps <= 0 || steps % r != 0)
    fail(Errc::invalid_field, "steps must be a positive multiple of the pattern length");
  if (start_op < 0 || start_op >= static_cast<int>(g.operators.size()))
    fail(Errc::invalid_field, "start operator out of range");
  if (g.operators[start_op].type != pattern[0])
    fail(Errc::invalid_field, "start operator type must match pattern[0]");

  const auto& adj = g.adjacency();
  std::vector<double> chain_log_n, chain_dist;
  auto walk = [&](auto&& self, int op, int k, double log_n, double dist) -> void {
    if (k == steps) {
      chain_log_n.push_back(log_n / steps);
      chain_dist.push_back(dist / steps);
      return;
    }
    int next_type = pattern[(k + 1) % r];
    int branch = 0;
    for (int b : adj[op])
      if (g.operators[b].type == next_type) ++branch;
    if (branch == 0) return;
    double step = g.step_distance(g.operators[op].type, next_type);
    for (int b : adj[op])
      if (g.operators[b].type == next_type)
        self(self, b, k + 1, log_n + std::log(static_cast<double>(branch)),
             dist + step);
  };
  walk(walk, start_op, 0, 0.0, 0.0);

  if (chain_log_n.empty())
    fail(Errc::no_chains, "no chain follows the pattern from this operator");

  HomogeneityEstimate est;
  est.chains = chain_log_n.size();
  double mean_log = 0.0, mean_d = 0.0;
  for (double l : chain_log_n) mean_log += l;
  for (double d : chain_dist) mean_d += d;
  mean_log /= est.chains;
  mean_d /= est.chains;
  est.n_bar = std::exp(mean_log);
  est.d_bar = mean_d;
  for (std::size_t i = 0; i < est.chains; ++i) {
    est.dispersion = std::max(est.dispersion,
                              std::abs(std::exp(chain_log_n[i]) - est.n_bar));
    est.dispersion = std::max(est.dispersion, std::abs(chain_dist[i] - est.d_bar));
  }
  return est;
}

// The declarative model a lattice realization advertises; feeds the speed
// solver so oracle and solver can be compared on the same system.
inline ModelSpec model_spec_from_graph(const ExplicitGraphModel& g,
                                       std::span<const double> couplings) {
  if (couplings.size() != static_cast<std::size_t>(g.types()))
    fail(Errc::invalid_field, "one coupling per interaction type required");
  ModelSpec spec;
  spec.system_class = SystemClass::bounded;
  spec.graph_kind = GraphKind::lattice;
  for (int t = 0; t < g.types(); ++t)
    spec.interactions.push_back({g.type_labels[t], couplings[t]});
  spec.table.assign(static_cast<std::size_t>(g.types()) * g.types(), Transition{});
  for (int i = 0; i < g.types(); ++i)
    for (int j = 0; j < g.types(); ++j) {
      if (i == j) continue;
      spec.transition(i, j) = {g.lattice_count(i, j), g.step_distance(i, j), {}};
    }
  return spec;
}

}  // namespace lrbound
