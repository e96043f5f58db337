#include <doctest.h>

#include <cmath>
#include <random>

#include <laakso/params.hpp>
#include <laakso/profiles.hpp>

#include "oracles.hpp"

using namespace laakso;

TEST_SUITE("profiles") {
  TEST_CASE("eval examples") {
    CHECK(DoublingProfile::power(2).eval(4) == 16.0);
    CHECK(DoublingProfile::table(1, {2, 8}).eval(3) == 5.0);
    CHECK(DoublingProfile::power(1).eval(7) == 7.0);
  }

  TEST_CASE("table anchors are exact and extend geometrically") {
    const auto p = DoublingProfile::table(0, {1, 3, 6});
    CHECK(p.eval(1) == 1.0);
    CHECK(p.eval(2) == 3.0);
    CHECK(p.eval(4) == 6.0);
    CHECK(p.eval(8) == doctest::Approx(12.0));
    CHECK(p.eval(0.5) == doctest::Approx(1.0 / 3.0));
  }

  TEST_CASE("doubling_constant examples") {
    CHECK(doubling_constant(DoublingProfile::power(2), -3, 9) == doctest::Approx(4.0));
    CHECK(doubling_constant(DoublingProfile::power(1), 0, 5) == doctest::Approx(2.0));
    CHECK(doubling_constant(DoublingProfile::table(0, {1, 3, 6}), 0, 2) == doctest::Approx(3.0));
  }

  TEST_CASE("check_admissible examples") {
    const auto V1 = DoublingProfile::power(1), V2 = DoublingProfile::power(2);
    const auto P2 = DoublingProfile::power(2), P3 = DoublingProfile::power(3);
    auto a = check_admissible(V1, P2, 1.0, 0, 20);
    CHECK(a.admissible);
    CHECK_FALSE(a.witness.has_value());
    a = check_admissible(V1, P3, 1000.0, 0, 20);
    CHECK_FALSE(a.admissible);
    REQUIRE(a.witness.has_value());
    CHECK(a.witness->first < a.witness->second);
    CHECK(check_admissible(V2, P2, 1.0, 0, 20).admissible);
  }

  TEST_CASE("phi examples against a fine-grid maximization") {
    const auto P2 = DoublingProfile::power(2);
    auto psi = [](double r) { return r * r; };
    CHECK(phi(P2, 0.0, kContinuumRMin) == 0.0);
    CHECK(phi(P2, 2.0, kContinuumRMin) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(phi(P2, 1.0, kContinuumRMin) == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(oracle::phi_grid(psi, 2.0, 1e-6) == doctest::Approx(1.0).epsilon(1e-6));
    for (double s : {0.01, 0.3, 1.7, 5.0, 40.0}) {
      CHECK(phi(P2, s, 1.0) == doctest::Approx(oracle::phi_grid(psi, s, 1.0)).epsilon(1e-6));
    }
    const auto T = psi_b(BranchingFunction::constant_branching(3));
    auto tf = [&](double r) { return T.eval(r); };
    for (double s : {0.05, 0.5, 2.0, 9.0}) {
      CHECK(phi(T, s, 1.0) == doctest::Approx(oracle::phi_grid(tf, s, 1.0)).epsilon(1e-6));
    }
  }

  TEST_CASE("eval is strictly increasing on random pairs") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> lr(-10.0, 25.0);
    const std::vector<DoublingProfile> profiles{
        DoublingProfile::power(1), DoublingProfile::power(2.5),
        psi_b(BranchingFunction::constant_branching(3)),
        v_from_counts(ParamFunction(1, {2, 3, 5, 2}, 2, 4, true)),
        DoublingProfile::table(-2, {0.1, 0.3, 1.0, 2.5, 9.0})};
    for (const auto& p : profiles) {
      for (int i = 0; i < 1000; ++i) {
        double a = std::exp2(lr(rng)), b = std::exp2(lr(rng));
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        CHECK(p.eval(a) < p.eval(b));
      }
    }
  }

  TEST_CASE("phi is nondecreasing and convex in s") {
    for (const auto& p : {DoublingProfile::power(2), DoublingProfile::power(3),
                          psi_b(BranchingFunction::constant_branching(3))}) {
      std::vector<double> f;
      for (int i = 0; i < 100; ++i) f.push_back(phi(p, 0.05 * i, 1.0));
      for (int i = 1; i < 100; ++i) CHECK(f[i] >= f[i - 1] - 1e-6 * std::abs(f[i]));
      for (int i = 1; i + 1 < 100; ++i) {
        CHECK(f[i + 1] - 2 * f[i] + f[i - 1] >= -1e-6 * std::max(1.0, std::abs(f[i])));
      }
    }
  }

  TEST_CASE("check_admissible is monotone in C0") {
    const auto V = DoublingProfile::power(1.5), P = DoublingProfile::power(2.7);
    const double best = check_admissible(V, P, 1.0, 0, 20).best_constant;
    CHECK_FALSE(check_admissible(V, P, best * 0.99, 0, 20).admissible);
    for (double c : {best, best * 1.5, best * 10}) CHECK(check_admissible(V, P, c, 0, 20).admissible);
  }

  TEST_CASE("power laws have best constant 1 iff 2 <= beta <= alpha + 1") {
    for (double alpha : {0.5, 1.0, 1.5, 2.0, 3.0}) {
      for (double beta : {1.5, 2.0, 2.5, 3.0, 4.0}) {
        const double best =
            check_admissible(DoublingProfile::power(alpha), DoublingProfile::power(beta), 1.0, 0, 20)
                .best_constant;
        const bool inside = beta >= 2.0 && beta <= alpha + 1.0;
        CHECK_MESSAGE((std::abs(best - 1.0) < 1e-9) == inside, "alpha=", alpha, " beta=", beta);
      }
    }
  }

  TEST_CASE("inverse is the smallest preimage") {
    const auto p = DoublingProfile::table(0, {1, 3, 6});
    CHECK(p.inverse(3.0) == 2.0);
    CHECK(p.inverse(4.5) == doctest::Approx(3.0));
    CHECK(DoublingProfile::power(2).inverse(16) == doctest::Approx(4.0));
  }
}
