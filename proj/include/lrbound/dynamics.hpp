#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lrbound/errors.hpp"
#include "lrbound/oracle.hpp"
#include "lrbound/speed.hpp"

namespace lrbound {

using Complex = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

inline constexpr int kMaxSites = 12;  // dense dimension cap 4096

enum class PauliAxis { x, y, z };

inline const char* to_string(PauliAxis a) {
  switch (a) {
    case PauliAxis::x: return "x";
    case PauliAxis::y: return "y";
    default: return "z";
  }
}

// sigma^axis acting on one site of a spin-1/2 chain, site i on bit i.
inline MatrixXcd pauli_site(int sites, int site, PauliAxis axis) {
  if (site < 0 || site >= sites) fail(Errc::invalid_field, "site out of range");
  const long dim = 1L << sites;
  const long bit = 1L << site;
  MatrixXcd m = MatrixXcd::Zero(dim, dim);
  for (long s = 0; s < dim; ++s) {
    bool up = (s & bit) == 0;
    switch (axis) {
      case PauliAxis::x: m(s ^ bit, s) = 1.0; break;
      case PauliAxis::y: m(s ^ bit, s) = up ? Complex(0, 1) : Complex(0, -1); break;
      case PauliAxis::z: m(s, s) = up ? 1.0 : -1.0; break;
    }
  }
  return m;
}

// Assembles the dense Hamiltonian of a graph model: one term per local
// operator, scaled by the coupling of its type.  Ising terms carry the
// -J(g sx + sz sz) sign convention; XY terms enter with a plus sign.
inline MatrixXcd build_hamiltonian(const ExplicitGraphModel& g,
                                   std::span<const double> couplings) {
  const int sites = g.cells();
  if (sites > kMaxSites)
    fail(Errc::too_large, "dense dynamics limited to 12 sites");
  if (couplings.size() != static_cast<std::size_t>(g.types()))
    fail(Errc::invalid_field, "one coupling per interaction type required");
  const long dim = 1L << sites;
  MatrixXcd h = MatrixXcd::Zero(dim, dim);

  for (const auto& op : g.operators) {
    double c = couplings[op.type];
    if (c == 0.0) continue;
    switch (op.kind) {
      case LocalOpKind::pauli_x_site: {
        long bit = 1L << op.support[0];
        for (long s = 0; s < dim; ++s) h(s ^ bit, s) += -c;
        break;
      }
      case LocalOpKind::pauli_zz_bond: {
        long b0 = 1L << op.support[0], b1 = 1L << op.support[1];
        for (long s = 0; s < dim; ++s) {
          double z0 = (s & b0) ? -1.0 : 1.0;
          double z1 = (s & b1) ? -1.0 : 1.0;
          h(s, s) += -c * z0 * z1;
        }
        break;
      }
      case LocalOpKind::spin_xx_bond: {
        long b0 = 1L << op.support[0], b1 = 1L << op.support[1];
        for (long s = 0; s < dim; ++s) h(s ^ b0 ^ b1, s) += c * 0.25;
        break;
      }
      case LocalOpKind::spin_yy_bond: {
        long b0 = 1L << op.support[0], b1 = 1L << op.support[1];
        for (long s = 0; s < dim; ++s) {
          Complex p0 = (s & b0) ? Complex(0, -1) : Complex(0, 1);
          Complex p1 = (s & b1) ? Complex(0, -1) : Complex(0, 1);
          h(s ^ b0 ^ b1, s) += c * 0.25 * p0 * p1;
        }
        break;
      }
      case LocalOpKind::spin_z2_site: {
        for (long s = 0; s < dim; ++s) h(s, s) += c * 0.25;
        break;
      }
    }
  }

  double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    fail(Errc::non_hermitian, "assembled Hamiltonian is not Hermitian");
  return h;
}

struct Eigensystem {
  VectorXd values;
  MatrixXcd vectors;  // columns are eigenvectors
};

inline Eigensystem diagonalize(const MatrixXcd& h) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success)
    throw InternalError("eigendecomposition failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

// Heisenberg evolution O(t) = e^{iHt} O e^{-iHt} through the
// eigendecomposition; exact for Hermitian H.  Conjugation must preserve the
// Frobenius norm, which is checked to 1e-9.
inline MatrixXcd evolve(const MatrixXcd& o, const Eigensystem& es, double t) {
  if (o.rows() != es.vectors.rows() || o.cols() != es.vectors.cols())
    fail(Errc::dimension_mismatch, "operator and Hamiltonian dimensions differ");
  MatrixXcd tilde = es.vectors.adjoint() * o * es.vectors;
  const long dim = o.rows();
  VectorXcd phase(dim);
  for (long j = 0; j < dim; ++j)
    phase[j] = std::exp(Complex(0, es.values[j] * t));
  for (long c = 0; c < dim; ++c)
    tilde.col(c) = phase.array() * tilde.col(c).array() * std::conj(phase[c]);
  MatrixXcd out = es.vectors * tilde * es.vectors.adjoint();
  double before = o.norm(), after = out.norm();
  if (std::abs(before - after) > 1e-9 * (1.0 + before))
    throw InternalError("evolution failed to preserve the operator norm");
  return out;
}

inline MatrixXcd evolve(const MatrixXcd& o, const MatrixXcd& h, double t) {
  if (o.rows() != h.rows() || o.cols() != h.cols())
    fail(Errc::dimension_mismatch, "operator and Hamiltonian dimensions differ");
  return evolve(o, diagonalize(h), t);
}

namespace detail {

inline VectorXcd deterministic_start(long n) {
  std::mt19937 rng(0x5eed);
  std::normal_distribution<double> dist;
  VectorXcd v(n);
  for (long i = 0; i < n; ++i) v[i] = Complex(dist(rng), dist(rng));
  return v;
}

// Largest singular value by power iteration on A^dagger A; apply/adjoint are
// callables so the matrix never has to be formed.  A warm-start vector makes
// repeated calls on slowly varying operators converge in a few sweeps.
template <class Apply, class Adjoint>
double power_sigma_max(long cols, Apply&& apply, Adjoint&& adjoint,
                       double rel_tol, int max_iter,
                       VectorXcd* warm = nullptr) {
  VectorXcd v = (warm && warm->size() == cols) ? *warm
                                               : deterministic_start(cols);
  double nv = v.norm();
  if (nv == 0.0) v = deterministic_start(cols), nv = v.norm();
  v /= nv;
  double sigma = 0.0, prev = -1.0;
  for (int it = 0; it < max_iter; ++it) {
    VectorXcd av = apply(v);
    sigma = av.norm();
    if (sigma < 1e-150) {
      sigma = 0.0;
      break;
    }
    VectorXcd w = adjoint(av);
    double wn = w.norm();
    if (wn == 0.0) break;
    v = w / wn;
    if (std::abs(sigma - prev) <= rel_tol * sigma + 1e-14) break;
    prev = sigma;
  }
  if (warm) *warm = v;
  return sigma;
}

}  // namespace detail

// Spectral norm (largest singular value).  Deterministic power iteration;
// tests pin it against a full decomposition.
inline double spectral_norm(const MatrixXcd& a) {
  return detail::power_sigma_max(
      a.cols(), [&](const VectorXcd& v) -> VectorXcd { return a * v; },
      [&](const VectorXcd& v) -> VectorXcd { return a.adjoint() * v; },
      1e-13, 50000);
}

inline double commutator_norm(const MatrixXcd& a, const MatrixXcd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    fail(Errc::dimension_mismatch, "commutator of mismatched dimensions");
  MatrixXcd c = a * b - b * a;
  return spectral_norm(c);
}

struct CommutatorTrace {
  double distance = 0.0;
  std::vector<double> times;
  std::vector<double> norms;
  double epsilon = 0.0;
  std::optional<double> arrival_time;
};

struct LightConeScan {
  std::vector<CommutatorTrace> traces;
  std::optional<double> empirical_velocity;
  double v_lr = 0.0;
  std::optional<double> ratio;
};

namespace detail {

// For B a single-site Pauli, [A, B] in B's eigenbasis is purely
// off-diagonal block, so ||[A, B]|| = 2 sigma_max(A_{+-}) with A Hermitian.
// The block is accessed through V-row combinations, never formed densely.
struct PauliBlock {
  MatrixXcd vp, vq;  // (dim/2 x dim) rows of V combined per B eigenvector

  PauliBlock(const MatrixXcd& v, int site, PauliAxis axis) {
    const long dim = v.rows();
    const long bit = 1L << site;
    const long half = dim / 2;
    vp.resize(half, dim);
    vq.resize(half, dim);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    long r = 0;
    for (long s = 0; s < dim; ++s) {
      if (s & bit) continue;  // enumerate pairs by their bit=0 member
      long s1 = s | bit;
      switch (axis) {
        case PauliAxis::z:
          vp.row(r) = v.row(s);
          vq.row(r) = v.row(s1);
          break;
        case PauliAxis::x:
          vp.row(r) = (v.row(s) + v.row(s1)) * inv_sqrt2;
          vq.row(r) = (v.row(s) - v.row(s1)) * inv_sqrt2;
          break;
        case PauliAxis::y:
          // +1: (|0> + i|1>)/sqrt2, -1: (|0> - i|1>)/sqrt2; rows get conj coefs
          vp.row(r) = (v.row(s) + Complex(0, -1) * v.row(s1)) * inv_sqrt2;
          vq.row(r) = (v.row(s) + Complex(0, 1) * v.row(s1)) * inv_sqrt2;
          break;
      }
      ++r;
    }
  }

  // ||[A(t), B]|| with A(t) given in the H eigenbasis
  double commutator_norm(const MatrixXcd& a_tilde, VectorXcd* warm) const {
    auto apply = [&](const VectorXcd& x) -> VectorXcd {
      return vp * (a_tilde * (vq.adjoint() * x));
    };
    auto adjoint = [&](const VectorXcd& y) -> VectorXcd {
      return vq * (a_tilde.adjoint() * (vp.adjoint() * y));
    };
    return 2.0 * power_sigma_max(vq.rows(), apply, adjoint, 1e-8, 500, warm);
  }
};

}  // namespace detail

// Sweeps the observable across a chain and measures ||[O_P(t), O_Q]||, with
// O_P pinned at site 0.  Arrival is the first grid time with norm above
// epsilon; the empirical velocity is the least-squares slope of distance
// versus arrival time over the distances that arrived.  The solver's v_LR
// for the same couplings rides along for comparison.
inline LightConeScan light_cone_scan(const ExplicitGraphModel& g,
                                     std::span<const double> couplings,
                                     PauliAxis axis, double epsilon,
                                     double t_max, int steps) {
  if (g.name != "ising")
    fail(Errc::invalid_field, "light-cone scan expects a chain model");
  const int sites = g.cells();
  if (sites < 5)
    fail(Errc::too_small, "scan needs at least 4 distinct distances");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    fail(Errc::invalid_field, "epsilon must lie in (0, 1)");
  if (!(t_max > 0.0) || steps < 2)
    fail(Errc::invalid_field, "need t_max > 0 and at least 2 time steps");

  MatrixXcd h = build_hamiltonian(g, couplings);
  Eigensystem es = diagonalize(h);
  const long dim = h.rows();

  MatrixXcd op = pauli_site(sites, 0, axis);
  MatrixXcd op_tilde = es.vectors.adjoint() * (op * es.vectors);

  std::vector<detail::PauliBlock> blocks;
  blocks.reserve(sites - 1);
  for (int site = 1; site < sites; ++site)
    blocks.emplace_back(es.vectors, site, axis);

  LightConeScan scan;
  scan.traces.resize(sites - 1);
  std::vector<VectorXcd> warm(sites - 1);
  for (int j = 0; j < sites - 1; ++j) {
    scan.traces[j].distance = g.cell_distance(0, j + 1);
    scan.traces[j].epsilon = epsilon;
  }

  VectorXcd phase(dim);
  MatrixXcd a_tilde(dim, dim);
  for (int step = 0; step <= steps; ++step) {
    double t = t_max * step / steps;
    for (long k = 0; k < dim; ++k)
      phase[k] = std::exp(Complex(0, es.values[k] * t));
    for (long c = 0; c < dim; ++c)
      a_tilde.col(c) = phase.array() * op_tilde.col(c).array() * std::conj(phase[c]);
    for (int j = 0; j < sites - 1; ++j) {
      double norm = blocks[j].commutator_norm(a_tilde, &warm[j]);
      scan.traces[j].times.push_back(t);
      scan.traces[j].norms.push_back(norm);
      if (!scan.traces[j].arrival_time && norm > epsilon)
        scan.traces[j].arrival_time = t;
    }
  }

  // least squares d = v t + b over detected arrivals
  double st = 0, sd = 0, stt = 0, std_ = 0;
  int arrived = 0;
  for (const auto& tr : scan.traces) {
    if (!tr.arrival_time) continue;
    ++arrived;
    st += *tr.arrival_time;
    sd += tr.distance;
    stt += *tr.arrival_time * *tr.arrival_time;
    std_ += *tr.arrival_time * tr.distance;
  }
  if (arrived >= 2) {
    double denom = arrived * stt - st * st;
    if (denom > 0.0)
      scan.empirical_velocity = (arrived * std_ - st * sd) / denom;
  }

  SpeedResult res = solve_speed(validate(model_spec_from_graph(g, couplings)));
  scan.v_lr = res.v_lr;
  if (scan.empirical_velocity)
    scan.ratio = *scan.empirical_velocity / scan.v_lr;
  return scan;
}

}  // namespace lrbound
