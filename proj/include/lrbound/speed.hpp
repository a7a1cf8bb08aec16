#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lrbound/cycles.hpp"
#include "lrbound/errors.hpp"
#include "lrbound/model.hpp"

namespace lrbound {

// One curve k e^{xi lambda} / lambda of the envelope family A.  Strictly
// convex on (0, inf) with its single minimum at lambda = 1/xi.
struct EnvelopeTerm {
  double k = 0.0;
  double log_k = 0.0;
  double xi = 0.0;
  int cycle = -1;  // index into the census this term represents
};

enum class SpeedForm { single_term, breakpoint };

inline const char* to_string(SpeedForm f) {
  return f == SpeedForm::single_term ? "single-term" : "breakpoint";
}

struct SpeedResult {
  double v_lr = 0.0;
  double lambda_star = 0.0;
  SpeedForm form = SpeedForm::single_term;
  std::vector<Cycle> active_cycles;  // one (single-term) or two (breakpoint)
  double C = 0.0;
};

// L(lambda) = max over terms of k e^{xi lambda}.
inline double big_L(std::span<const EnvelopeTerm> terms, double lambda) {
  if (!(lambda > 0.0)) fail(Errc::invalid_lambda, "lambda must be positive");
  if (terms.empty()) fail(Errc::no_cycles, "no envelope terms");
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& t : terms) best = std::max(best, t.log_k + t.xi * lambda);
  return std::exp(best);
}

// lambda at which two envelope terms cross, when that crossing is at
// positive lambda; parallel exponents or nonpositive crossings yield none.
inline std::optional<double> intersection(const EnvelopeTerm& a,
                                          const EnvelopeTerm& b) {
  if (a.xi == b.xi) return std::nullopt;
  double lambda = (a.log_k - b.log_k) / (b.xi - a.xi);
  if (!(lambda > 0.0) || !std::isfinite(lambda)) return std::nullopt;
  return lambda;
}

// Envelope terms of a cycle census: one term per distinct (k, xi) value,
// keeping the first cycle in census order as representative.  Values that
// agree to relative 1e-12 are treated as the same curve (symmetric models
// produce exact duplicates, e.g. equal couplings on mirrored cycles).
inline std::vector<EnvelopeTerm> envelope_terms(const std::vector<Cycle>& census) {
  auto close = [](double x, double y) {
    return std::abs(x - y) <= 1e-12 * std::max({1.0, std::abs(x), std::abs(y)});
  };
  std::vector<EnvelopeTerm> terms;
  for (std::size_t i = 0; i < census.size(); ++i) {
    const Cycle& c = census[i];
    bool merged = false;
    for (const auto& t : terms)
      if (close(t.log_k, c.log_k) && close(t.xi, c.xi)) {
        merged = true;
        break;
      }
    if (!merged)
      terms.push_back({c.k, c.log_k, c.xi, static_cast<int>(i)});
  }
  return terms;
}

namespace detail {

inline double log_a_max(std::span<const EnvelopeTerm> terms, double lambda) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& t : terms) best = std::max(best, t.log_k + t.xi * lambda);
  return best - std::log(lambda);
}

}  // namespace detail

// Finds inf over lambda > 0 of C * max_i k_i e^{xi_i lambda} / lambda.  The
// minimizer of an upper envelope of single-minimum convex curves sits either
// at the interior minimum 1/xi of the active curve or at a crossing of two
// curves, so evaluating the envelope on that finite candidate set and taking
// the minimum is exact for every ordering scenario.
inline SpeedResult solve_speed(const ModelSpec& spec,
                               const std::vector<Cycle>& census) {
  if (census.empty()) fail(Errc::no_cycles, "empty cycle census");
  std::vector<EnvelopeTerm> terms = envelope_terms(census);

  // terms dominated in both k and xi never reach the envelope
  std::vector<EnvelopeTerm> live;
  for (const auto& t : terms) {
    bool dominated = false;
    for (const auto& u : terms)
      if ((u.log_k >= t.log_k && u.xi >= t.xi) &&
          (u.log_k > t.log_k || u.xi > t.xi)) {
        dominated = true;
        break;
      }
    if (!dominated) live.push_back(t);
  }

  std::vector<double> candidates;
  for (const auto& t : live) candidates.push_back(1.0 / t.xi);
  for (std::size_t i = 0; i < live.size(); ++i)
    for (std::size_t j = i + 1; j < live.size(); ++j)
      if (auto lambda = intersection(live[i], live[j]))
        candidates.push_back(*lambda);
  std::sort(candidates.begin(), candidates.end());

  double best_lambda = candidates.front();
  double best_log = detail::log_a_max(live, best_lambda);
  for (double lambda : candidates) {
    double v = detail::log_a_max(live, lambda);
    if (v < best_log) {
      best_log = v;
      best_lambda = lambda;
    }
  }

  // classify: which curves achieve the envelope at the minimizer
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& t : live) top = std::max(top, t.log_k + t.xi * best_lambda);
  std::vector<const EnvelopeTerm*> tied;
  for (const auto& t : live)
    if (t.log_k + t.xi * best_lambda >= top - 1e-9) tied.push_back(&t);

  SpeedResult res;
  res.C = spec.speed_constant();
  if (tied.size() == 1) {
    const EnvelopeTerm& t = *tied.front();
    res.form = SpeedForm::single_term;
    res.lambda_star = 1.0 / t.xi;
    res.v_lr = res.C * std::exp(t.log_k + 1.0) * t.xi;
    res.active_cycles = {census[t.cycle]};
  } else {
    // the kink is between the flattest and steepest tied exponents
    const EnvelopeTerm* lo = tied.front();
    const EnvelopeTerm* hi = tied.front();
    for (const auto* t : tied) {
      if (t->xi < lo->xi) lo = t;
      if (t->xi > hi->xi) hi = t;
    }
    res.form = SpeedForm::breakpoint;
    res.lambda_star = (lo->log_k - hi->log_k) / (hi->xi - lo->xi);
    res.v_lr = res.C * std::exp(lo->log_k + lo->xi * res.lambda_star -
                                std::log(res.lambda_star));
    res.active_cycles = {census[lo->cycle], census[hi->cycle]};
    std::sort(res.active_cycles.begin(), res.active_cycles.end(),
              [](const Cycle& x, const Cycle& y) {
                if (x.type_sequence.size() != y.type_sequence.size())
                  return x.type_sequence.size() < y.type_sequence.size();
                return x.type_sequence < y.type_sequence;
              });
  }
  return res;
}

inline SpeedResult solve_speed(const ModelSpec& spec) {
  return solve_speed(spec, enumerate_cycles(spec));
}

// Evaluates the closed form the solver identified: C e k xi for a
// single-term minimum, and the two-curve crossing expression
// C (xi1 - xi2) k1^{xi2/(xi2-xi1)} k2^{xi1/(xi1-xi2)} / (ln k2 - ln k1)
// for a breakpoint.  Must agree with the numeric infimum.
inline double closed_form_speed(SpeedForm form, std::span<const Cycle> active,
                                double C) {
  if (form == SpeedForm::single_term) {
    if (active.size() != 1)
      fail(Errc::form_mismatch, "single-term form expects one cycle");
    return C * std::exp(active[0].log_k + 1.0) * active[0].xi;
  }
  if (active.size() != 2)
    fail(Errc::form_mismatch, "breakpoint form expects two cycles");
  const Cycle& c1 = active[0];
  const Cycle& c2 = active[1];
  if (c1.xi == c2.xi || c1.log_k == c2.log_k)
    fail(Errc::form_mismatch, "breakpoint cycles must differ in k and xi");
  double lambda = (c1.log_k - c2.log_k) / (c2.xi - c1.xi);
  if (!(lambda > 0.0))
    fail(Errc::form_mismatch, "breakpoint cycles do not cross at positive lambda");
  double log_v = std::log(C) + c1.log_k + c1.xi * lambda - std::log(lambda);
  return std::exp(log_v);
}

// Upper-bound prefactor M~(lambda) = M G(lambda)^{m(m-1)} where G is the
// largest ratio of nonzero transition factors.  The seed M is only pinned
// for two interactions; for larger m we use max over coupling pairs of
// sqrt(h_a/h_b), which keeps the bound valid but not tight.
inline double prefactor(const ModelSpec& spec, double lambda) {
  if (!(lambda > 0.0)) fail(Errc::invalid_lambda, "lambda must be positive");
  const int m = spec.type_count();
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      double f = transition_factor(spec, i, j, lambda);
      if (f > 0.0) {
        lo = std::min(lo, f);
        hi = std::max(hi, f);
      }
    }
  if (!(hi > 0.0)) fail(Errc::no_cycles, "model has no nonzero transition");
  double h_lo = std::numeric_limits<double>::infinity(), h_hi = 0.0;
  for (const auto& it : spec.interactions) {
    if (it.coupling <= 0.0) continue;
    h_lo = std::min(h_lo, it.coupling);
    h_hi = std::max(h_hi, it.coupling);
  }
  double log_m = 0.5 * (std::log(h_hi) - std::log(h_lo)) +
                 static_cast<double>(m) * (m - 1) * (std::log(hi) - std::log(lo));
  return std::exp(log_m);
}

// Bound envelope M~(lambda) exp(lambda (C L(lambda)/lambda |t| - d)).
inline double bound_envelope(const ModelSpec& spec,
                             const std::vector<Cycle>& census, double lambda,
                             double t, double d) {
  if (!(lambda > 0.0)) fail(Errc::invalid_lambda, "lambda must be positive");
  if (!(d >= 0.0)) fail(Errc::invalid_field, "distance must be nonnegative");
  std::vector<EnvelopeTerm> terms = envelope_terms(census);
  double log_l = -std::numeric_limits<double>::infinity();
  for (const auto& tm : terms) log_l = std::max(log_l, tm.log_k + tm.xi * lambda);
  double v_lambda = spec.speed_constant() * std::exp(log_l) / lambda;
  return prefactor(spec, lambda) * std::exp(lambda * (v_lambda * std::abs(t) - d));
}

inline double bound_envelope(const ModelSpec& spec, double lambda, double t,
                             double d) {
  return bound_envelope(spec, enumerate_cycles(spec), lambda, t, d);
}

}  // namespace lrbound
