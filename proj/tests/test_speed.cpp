#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "lrbound/speed.hpp"
#include "test_helpers.hpp"

using namespace lrbound;
using namespace lrbound::testing;
using Catch::Matchers::WithinRel;

namespace {

EnvelopeTerm term(double k, double xi) {
  return {k, std::log(k), xi, -1};
}

}  // namespace

TEST_CASE("big_L of a single unit term at lambda 1 is e") {
  std::vector<EnvelopeTerm> terms = {term(1.0, 1.0)};
  CHECK_THAT(big_L(terms, 1.0), WithinRel(std::exp(1.0), 1e-12));
}

TEST_CASE("big_L equals the directly evaluated maximum for the XY terms") {
  ModelSpec spec = validate(xy_model(1.0, 1.0));
  std::vector<Cycle> census = enumerate_cycles(spec);
  std::vector<EnvelopeTerm> terms = envelope_terms(census);
  REQUIRE(terms.size() == 4);
  for (double lambda : {0.17, 0.5, 1.0, 2.3, 7.0}) {
    double direct = 0.0;
    for (const auto& t : terms)
      direct = std::max(direct, t.k * std::exp(t.xi * lambda));
    CHECK_THAT(big_L(terms, lambda), WithinRel(direct, 1e-12));
  }
}

TEST_CASE("a term dominated in k and xi never achieves the maximum") {
  std::vector<EnvelopeTerm> terms = {term(3.0, 1.2), term(2.0, 0.7)};
  for (double lambda = 0.05; lambda < 20.0; lambda *= 1.5) {
    double dominator = terms[0].k * std::exp(terms[0].xi * lambda);
    CHECK_THAT(big_L(terms, lambda), WithinRel(dominator, 1e-12));
  }
}

TEST_CASE("intersection solves ln-k over xi gaps") {
  // (k=e, xi=1/2) vs (k=1, xi=1): lambda = (1 - 0) / (1 - 1/2) = 2
  auto lambda = intersection(term(std::exp(1.0), 0.5), term(1.0, 1.0));
  REQUIRE(lambda.has_value());
  CHECK_THAT(*lambda, WithinRel(2.0, 1e-12));

  SECTION("parallel exponents never cross") {
    CHECK_FALSE(intersection(term(2.0, 1.0), term(3.0, 1.0)).has_value());
  }
  SECTION("nonpositive crossings are rejected") {
    // bigger k with bigger xi puts the crossing at negative lambda
    CHECK_FALSE(intersection(term(1.0, 0.5), term(2.0, 1.0)).has_value());
  }
}

TEST_CASE("all positive XY intersections coincide") {
  for (double d_over_2j : {4.0, 12.0, 30.0}) {
    ModelSpec spec = validate(xy_model(1.0, 2.0 * d_over_2j));
    std::vector<EnvelopeTerm> terms = envelope_terms(enumerate_cycles(spec));
    REQUIRE(terms.size() == 4);
    double expected = 2.0 * std::log(4.0 / 7.0) + std::log(d_over_2j);
    int positive = 0;
    for (std::size_t i = 0; i < terms.size(); ++i)
      for (std::size_t j = i + 1; j < terms.size(); ++j)
        if (auto lambda = intersection(terms[i], terms[j])) {
          ++positive;
          CHECK_THAT(*lambda, WithinRel(expected, 1e-9));
        }
    CHECK(positive == (d_over_2j > 49.0 / 16.0 ? 6 : 0));
  }
}

TEST_CASE("Ising speed is 2 e sqrt(g) J") {
  for (double g : {0.25, 1.0, 4.0})
    for (double j : {0.5, 1.0, 2.0}) {
      SpeedResult res = solve_speed(validate(ising_model(g, j)));
      CHECK_THAT(res.v_lr, WithinRel(2.0 * std::exp(1.0) * std::sqrt(g) * j, 1e-12));
      CHECK(res.form == SpeedForm::single_term);
      CHECK_THAT(res.lambda_star, WithinRel(2.0, 1e-12));
    }
}

TEST_CASE("two-interaction lattice speed matches the closed identity") {
  std::mt19937 rng(90210);
  for (int rep = 0; rep < 200; ++rep) {
    ModelSpec spec = validate(random_model(rng, 2));
    double h0 = spec.interactions[0].coupling, h1 = spec.interactions[1].coupling;
    double n01 = spec.transition(0, 1).n, n10 = spec.transition(1, 0).n;
    double d0 = spec.transition(0, 1).distance, d1 = spec.transition(1, 0).distance;
    double expected = std::exp(1.0) * std::sqrt(n01 * n10 * h0 * h1) * (d0 + d1);
    SpeedResult res = solve_speed(spec);
    CHECK_THAT(res.v_lr, WithinRel(expected, 1e-12));
  }
}

TEST_CASE("XY speed crosses its three functional forms") {
  const double e = std::exp(1.0);
  SECTION("small D/2J: single term on the exchange cycle, 14e at J=1, S=1/2") {
    SpeedResult res = solve_speed(validate(xy_model(1.0, 1.0)));
    CHECK(res.form == SpeedForm::single_term);
    CHECK_THAT(res.v_lr, WithinRel(14.0 * e, 1e-12));
    REQUIRE(res.active_cycles.size() == 1);
    CHECK(res.active_cycles[0].type_sequence == std::vector<int>{0, 1});
  }
  SECTION("middle band: breakpoint value at D/2J = 12") {
    SpeedResult res = solve_speed(validate(xy_model(1.0, 24.0)));
    CHECK(res.form == SpeedForm::breakpoint);
    double lambda = 2.0 * std::log(4.0 / 7.0) + std::log(12.0);
    double expected = (32.0 / 7.0) * (24.0 * 0.5) / lambda;
    CHECK_THAT(res.v_lr, WithinRel(expected, 1e-9));
    CHECK_THAT(res.lambda_star, WithinRel(lambda, 1e-9));
    REQUIRE(res.active_cycles.size() == 2);
    CHECK(res.active_cycles[0].type_sequence == std::vector<int>{0, 1});
    CHECK(res.active_cycles[1].type_sequence == std::vector<int>{0, 2});
  }
  SECTION("large D/2J: single term on the mixed cycle, 2e sqrt(200) at D=100") {
    SpeedResult res = solve_speed(validate(xy_model(1.0, 100.0)));
    CHECK(res.form == SpeedForm::single_term);
    CHECK_THAT(res.v_lr, WithinRel(2.0 * e * std::sqrt(200.0), 1e-12));
    REQUIRE(res.active_cycles.size() == 1);
    CHECK(res.active_cycles[0].type_sequence == std::vector<int>{0, 2});
  }
}

TEST_CASE("speed is continuous across the XY region boundaries") {
  const double e = std::exp(1.0);
  for (double boundary : {std::pow(7.0 / 4.0, 2) * e, std::pow(7.0 / 4.0, 2) * e * e}) {
    double below = solve_speed(validate(xy_model(1.0, 2.0 * boundary * (1 - 1e-7)))).v_lr;
    double above = solve_speed(validate(xy_model(1.0, 2.0 * boundary * (1 + 1e-7)))).v_lr;
    CHECK_THAT(below, WithinRel(above, 1e-5));
  }
}

TEST_CASE("closed form reproduces the solver") {
  SECTION("single-term: C e k xi") {
    ModelSpec spec = validate(full_model(2));
    SpeedResult res = solve_speed(spec);
    double direct = closed_form_speed(res.form, res.active_cycles, res.C);
    CHECK_THAT(direct, WithinRel(res.v_lr, 1e-12));
    CHECK_THAT(direct, WithinRel(2.0 * std::exp(1.0), 1e-12));
  }
  SECTION("three-type single term evaluates the cube-root identity") {
    // force the 3-cycle a->b->c->a to dominate via a heavy return arc
    ModelSpec spec = full_model(3);
    spec.interactions = {{"a", 2.0}, {"b", 1.5}, {"c", 1.25}};
    spec.transition(0, 1) = {5, 1.0, {}};
    spec.transition(1, 2) = {4, 1.1, {}};
    spec.transition(2, 0) = {6, 1.2, {}};
    spec.transition(1, 0) = {1, 0.2, {}};
    spec.transition(2, 1) = {1, 0.2, {}};
    spec.transition(0, 2) = {1, 0.2, {}};
    SpeedResult res = solve_speed(validate(spec));
    REQUIRE(res.form == SpeedForm::single_term);
    REQUIRE(res.active_cycles.size() == 1);
    REQUIRE(res.active_cycles[0].type_sequence == std::vector<int>{0, 1, 2});
    double k = std::cbrt(2.0 * 1.5 * 1.25 * 5.0 * 4.0 * 6.0);
    double xi = (1.0 + 1.1 + 1.2) / 3.0;
    CHECK_THAT(res.v_lr, WithinRel(4.0 * std::exp(1.0) * k * xi, 1e-12));
    CHECK_THAT(closed_form_speed(res.form, res.active_cycles, res.C),
               WithinRel(res.v_lr, 1e-12));
  }
  SECTION("breakpoint: two-curve crossing expression") {
    SpeedResult res = solve_speed(validate(xy_model(1.0, 24.0)));
    REQUIRE(res.form == SpeedForm::breakpoint);
    CHECK_THAT(closed_form_speed(res.form, res.active_cycles, res.C),
               WithinRel(res.v_lr, 1e-12));
  }
  SECTION("form mismatch is rejected") {
    SpeedResult res = solve_speed(validate(xy_model(1.0, 24.0)));
    CHECK_THROWS_MATCHES(
        closed_form_speed(SpeedForm::single_term, res.active_cycles, res.C),
        LrError, Catch::Matchers::Predicate<LrError>([](const LrError& e) {
          return e.code() == Errc::form_mismatch;
        }));
  }
}

TEST_CASE("scaling laws of the speed") {
  std::mt19937 rng(555);
  for (int rep = 0; rep < 20; ++rep) {
    ModelSpec base = random_model(rng, 2 + rep % 3);
    SpeedResult ref = solve_speed(validate(base));
    double s = 1.0 + (rep % 5) * 0.71;

    ModelSpec coupled = base;
    for (auto& it : coupled.interactions) it.coupling *= s;
    SpeedResult scaled = solve_speed(validate(coupled));
    CHECK_THAT(scaled.v_lr, WithinRel(ref.v_lr * s, 1e-10));
    CHECK_THAT(scaled.lambda_star, WithinRel(ref.lambda_star, 1e-10));

    ModelSpec stretched = base;
    for (auto& tr : stretched.table) tr.distance *= s;
    SpeedResult far = solve_speed(validate(stretched));
    CHECK_THAT(far.v_lr, WithinRel(ref.v_lr * s, 1e-10));
    CHECK_THAT(far.lambda_star, WithinRel(ref.lambda_star / s, 1e-10));
  }
}

TEST_CASE("envelope dominates the speed at every lambda") {
  std::mt19937 rng(31415);
  for (int rep = 0; rep < 10; ++rep) {
    ModelSpec spec = validate(random_model(rng, 2 + rep % 3));
    std::vector<Cycle> census = enumerate_cycles(spec);
    std::vector<EnvelopeTerm> terms = envelope_terms(census);
    SpeedResult res = solve_speed(spec, census);
    for (int i = 0; i < 2000; ++i) {
      double lambda = 1e-3 + (50.0 - 1e-3) * i / 1999.0;
      double value = spec.speed_constant() * big_L(terms, lambda) / lambda;
      CHECK(value >= res.v_lr * (1.0 - 1e-9));
    }
  }
}

TEST_CASE("prefactor behaviour") {
  SECTION("equal transition factors leave only the coupling seed") {
    ModelSpec spec = validate(full_model(3));
    CHECK_THAT(prefactor(spec, 1.7), WithinRel(1.0, 1e-12));
  }
  SECTION("Ising prefactor against the direct ratio") {
    ModelSpec spec = validate(ising_model(2.0, 1.0));
    double lambda = 2.0;
    double f01 = transition_factor(spec, 0, 1, lambda);
    double f10 = transition_factor(spec, 1, 0, lambda);
    double g = std::max(f01, f10) / std::min(f01, f10);
    double seed = std::sqrt(std::max(2.0, 1.0) / std::min(2.0, 1.0));
    CHECK_THAT(prefactor(spec, lambda), WithinRel(seed * g * g, 1e-12));
  }
  SECTION("never below one") {
    std::mt19937 rng(8);
    for (int rep = 0; rep < 25; ++rep) {
      ModelSpec spec = validate(random_model(rng, 2 + rep % 3));
      CHECK(prefactor(spec, 0.3 + rep * 0.2) >= 1.0);
    }
  }
}

TEST_CASE("bound envelope") {
  ModelSpec spec = validate(ising_model(1.0, 1.0));
  SECTION("t = 0, d = 0 reduces to the prefactor") {
    CHECK_THAT(bound_envelope(spec, 2.0, 0.0, 0.0),
               WithinRel(prefactor(spec, 2.0), 1e-12));
  }
  SECTION("decays to zero with distance") {
    double prev = bound_envelope(spec, 2.0, 1.0, 0.0);
    for (double d = 5.0; d <= 40.0; d += 5.0) {
      double b = bound_envelope(spec, 2.0, 1.0, d);
      CHECK(b < prev);
      prev = b;
    }
    CHECK(prev < 1e-8);
  }
  SECTION("g = J = 1 at lambda = 2, t = 1, d = 10") {
    double expected = prefactor(spec, 2.0) *
                      std::exp(2.0 * (2.0 * std::exp(1.0) * 1.0 - 10.0));
    CHECK_THAT(bound_envelope(spec, 2.0, 1.0, 10.0), WithinRel(expected, 1e-12));
  }
  SECTION("non-increasing in d, non-decreasing in |t|") {
    for (double t : {0.0, 0.5, 2.0}) {
      CHECK(bound_envelope(spec, 1.3, t, 1.0) >= bound_envelope(spec, 1.3, t, 2.0));
      CHECK(bound_envelope(spec, 1.3, t, 1.0) <= bound_envelope(spec, 1.3, t + 0.5, 1.0));
      CHECK_THAT(bound_envelope(spec, 1.3, -t, 3.0),
                 WithinRel(bound_envelope(spec, 1.3, t, 3.0), 1e-12));
    }
  }
}
