#include <doctest.h>

#include <cmath>
#include <limits>
#include <map>

#include <laakso/error.hpp>
#include <laakso/verify.hpp>

#include "oracles.hpp"

using namespace laakso;

namespace {

LaaksoGraph make(int b, int g) {
  return LaaksoGraph(BranchingFunction::constant_branching(b), GluingFunction::constant_gluing(g));
}

std::vector<std::pair<double, double>> sample(double (*f)(double), std::vector<double> xs) {
  std::vector<std::pair<double, double>> pts;
  for (double x : xs) pts.emplace_back(x, f(x));
  return pts;
}

bool overlap(const EnvelopeReport& a, const EnvelopeReport& b) {
  return a.ratio_min <= b.ratio_max && b.ratio_min <= a.ratio_max;
}

const std::vector<int> kWideRadii{4, 8, 16, 32, 64, 128};

}  // namespace

TEST_SUITE("verify") {
  TEST_CASE("fit_exponent on exact power laws") {
    const auto sq = fit_exponent(sample([](double r) { return r * r; }, {2, 4, 8, 16, 32}));
    CHECK(sq.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(sq.stderr_ <= 1e-10);
    const auto flat = fit_exponent(sample([](double) { return 5.0; }, {2, 4, 8, 16}));
    CHECK(std::abs(flat.slope) <= 1e-12);
    CHECK(flat.intercept == doctest::Approx(std::log(5.0)));
  }

  TEST_CASE("fit_exponent rejects degenerate input") {
    CHECK_THROWS_AS(fit_exponent({{1, 1}, {2, 2}, {4, 4}}), Error);
    CHECK_THROWS_AS(fit_exponent({{2, 1}, {2, 2}, {2, 3}, {2, 4}}), Error);
    CHECK_THROWS_AS(fit_exponent({{1, 1}, {2, 0}, {4, 4}, {8, 8}}), Error);
    try {
      fit_exponent({{1, 1}});
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kDegenerate);
    }
  }

  TEST_CASE("half-line return probability decays like n^-1/2") {
    const auto G = make(2, 1);
    const auto p = base_return_kernel(G, 4097);
    std::vector<std::pair<double, double>> pts;
    for (int n = 16; n <= 2048; n *= 2) pts.emplace_back(n, p[static_cast<std::size_t>(2 * n)]);
    CHECK(fit_exponent(pts).slope == doctest::Approx(-0.5).epsilon(0.12));
    for (int n = 16; n <= 2048; n *= 2) {
      CHECK(p[static_cast<std::size_t>(2 * n)] == doctest::Approx(oracle::half_line_return(n)).epsilon(1e-9));
    }
  }

  TEST_CASE("volume check: half-line band and exponents") {
    const auto half = make(2, 1);
    const auto rep = check_volume(half, {LaaksoGraph::base()}, {4, 8, 16, 32, 64}, 64);
    CHECK(rep.pass);
    CHECK(rep.calibrated);
    CHECK(rep.spread() <= 1.5);
    for (auto [b, g, expect] : std::vector<std::tuple<int, int, double>>{{3, 1, std::log2(3.0)}, {2, 2, 2.0}}) {
      const auto G = make(b, g);
      const auto root = G.resolve_center("root");
      std::vector<std::pair<double, double>> pts;
      for (int r : kWideRadii) pts.emplace_back(r, static_cast<double>(ball_volume(G, root, r)));
      CHECK(fit_exponent(pts).slope == doctest::Approx(expect).epsilon(0.1 / expect));
      CHECK(check_volume(G, {root}, kWideRadii, 64).pass);
    }
  }

  TEST_CASE("exit-time check: half-line ratio and exponents") {
    const auto half = make(2, 1);
    const auto rep = check_exit_time(half, {LaaksoGraph::base()}, {4, 8, 16, 32}, 64);
    CHECK(rep.pass);
    for (const auto& gp : rep.grid) CHECK(gp.lo == doctest::Approx(2.0).epsilon(1e-6));
    for (auto [b, g, expect] : std::vector<std::tuple<int, int, double>>{{3, 1, std::log2(6.0)}, {2, 2, 2.0}}) {
      const auto G = make(b, g);
      const auto root = G.resolve_center("root");
      std::vector<std::pair<double, double>> pts;
      for (int r : kWideRadii) pts.emplace_back(r, exact_mean_exit_time(G, root, r).mean);
      CHECK(fit_exponent(pts).slope == doctest::Approx(expect).epsilon(0.15 / expect));
    }
  }

  TEST_CASE("exit-time check fails when the reference is off by a large factor") {
    const auto G = make(2, 2);
    const auto root = G.resolve_center("root");
    const auto good = check_exit_time(G, {root}, {4, 8, 16}, 64, 1.0);
    const auto bad = check_exit_time(G, {root}, {4, 8, 16}, 64, 1e6);
    CHECK(good.pass);
    CHECK_FALSE(bad.pass);
    CHECK(bad.spread() == doctest::Approx(good.spread()));
  }

  TEST_CASE("heat-kernel check on the half-line") {
    const auto G = make(2, 1);
    HkeOptions opts;
    const auto rep = check_hke(G, LaaksoGraph::base(), {16, 32, 64, 128, 256, 512, 1024}, opts);
    CHECK(rep.lower.pass);
    CHECK(rep.lower.spread() <= 10.0);
    CHECK(rep.lower.ratio_min > 0.0);
    CHECK(rep.upper.pass);
    // On-diagonal p_n m(B(x, R_n)) stays bounded above and below.
    const DoublingProfile law = volume_law(BranchingFunction::constant_branching(2), GluingFunction::constant_gluing(1));
    const DoublingProfile psi = psi_b(BranchingFunction::constant_branching(2));
    double lo = 1e300, hi = 0.0;
    for (auto [n, p] : rep.on_diagonal) {
      if (p <= 0.0) continue;
      const double v = p * law.eval(psi.inverse(n));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    CHECK(hi / lo <= 4.0);
  }

  TEST_CASE("transience classification from profiles") {
    const auto r1 = classify_transience(DoublingProfile::power(1), DoublingProfile::power(2), 20);
    CHECK(r1.verdict == Transience::kRecurrent);
    const auto r3 = classify_transience(DoublingProfile::power(3), DoublingProfile::power(2), 20);
    CHECK(r3.verdict == Transience::kTransient);
    CHECK(r3.trend == doctest::Approx(0.5).epsilon(1e-6));
    try {
      classify_transience(DoublingProfile::power(2), DoublingProfile::power(2), 20);
      FAIL("expected Inconclusive");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kInconclusive);
    }
    CHECK_THROWS_AS(classify_transience(DoublingProfile::power(1), DoublingProfile::power(2), 3), Error);
  }

  TEST_CASE("verify_all is deterministic") {
    const auto G = make(3, 1);
    VerifyPlan plan;
    plan.radii = {4, 8, 16};
    plan.n_values = {16, 32, 64};
    plan.green_n = {64, 128, 256};
    plan.trials = 200;
    const auto a = verify_all(G, plan, {});
    const auto b = verify_all(G, plan, {});
    REQUIRE(a.checks.size() == b.checks.size());
    for (std::size_t i = 0; i < a.checks.size(); ++i) {
      CHECK(a.checks[i].ratio_min == b.checks[i].ratio_min);
      CHECK(a.checks[i].ratio_max == b.checks[i].ratio_max);
    }
    REQUIRE(a.monte_carlo.size() == b.monte_carlo.size());
    for (std::size_t i = 0; i < a.monte_carlo.size(); ++i) CHECK(a.monte_carlo[i].mean == b.monte_carlo[i].mean);
    CHECK(a.exit_code == b.exit_code);
  }

  TEST_CASE("volume bands from disjoint center sets overlap") {
    for (auto [b, g] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {2, 2}, {2, 4}, {3, 2}}) {
      const auto G = make(b, g);
      const auto v1 = check_volume(G, {G.resolve_center("root"), G.resolve_center("hub:1")}, {4, 8, 16, 32}, 64);
      const auto v2 = check_volume(G, {G.resolve_center("hub:2"), G.resolve_center("hub:3")}, {4, 8, 16, 32}, 64);
      CHECK(v1.pass);
      CHECK(v2.pass);
      CHECK(overlap(v1, v2));
    }
  }

  TEST_CASE("volume band across centers does not grow with r") {
    for (auto [b, g] : std::vector<std::pair<int, int>>{{2, 2}, {3, 1}, {2, 4}, {3, 2}}) {
      const auto G = make(b, g);
      std::vector<LaaksoVertex> centers;
      for (const char* c : {"root", "hub:1", "hub:2", "hub:3", "hub:4"}) centers.push_back(G.resolve_center(c));
      const auto rep = check_volume(G, centers, {4, 8, 16, 32, 64}, 64);
      std::map<double, std::pair<double, double>> by_r;
      for (const auto& p : rep.grid) {
        auto& e = by_r.try_emplace(p.r, p.lo, p.hi).first->second;
        e.first = std::min(e.first, p.lo);
        e.second = std::max(e.second, p.hi);
      }
      double prev = std::numeric_limits<double>::infinity();
      for (const auto& [r, e] : by_r) {
        const double spread = e.second / e.first;
        CAPTURE(r);
        CHECK(spread <= prev * (1 + 1e-12));
        prev = spread;
      }
    }
  }

  TEST_CASE("exit-time bands agree across gluing choices") {
    const auto root = LaaksoGraph::base();
    std::vector<EnvelopeReport> reps;
    for (int g = 1; g <= 4; ++g) reps.push_back(check_exit_time(make(2, g), {root}, {4, 8, 16, 32}, 64));
    double lo = 1e300, hi = 0.0;
    for (const auto& r : reps) {
      CHECK(r.pass);
      lo = std::min(lo, r.ratio_min);
      hi = std::max(hi, r.ratio_max);
    }
    // Same radius, different gluing: the ratios differ by a bounded factor.
    for (std::size_t i = 0; i + 1 < reps.size(); ++i) {
      for (std::size_t k = 0; k < reps[i].grid.size(); ++k) {
        const double q = reps[i].grid[k].lo / reps[i + 1].grid[k].lo;
        CHECK(q >= 1.0);
        CHECK(q <= 2.0);
      }
    }
    CHECK(hi / lo <= 64.0);
  }

  TEST_CASE("transience verdict matches Green function growth") {
    // G(1024) / G(64) grows like 16^(1 - alpha/beta) when recurrent and stays
    // near 1 when transient.
    for (auto [b, g] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {2, 3}, {2, 4}}) {
      const auto G = make(b, g);
      const auto bf = BranchingFunction::constant_branching(b);
      const auto t = classify_transience(volume_law(bf, GluingFunction::constant_gluing(g)), psi_b(bf), 20);
      const auto s = base_green_series(G, 1024);
      const double growth = s[1024] / s[64];
      CAPTURE(b);
      CAPTURE(g);
      CAPTURE(growth);
      CHECK((t.verdict == Transience::kRecurrent) == (growth > 2.0));
    }
  }

  TEST_CASE("Monte Carlo check agrees with the exact mean") {
    const auto G = make(2, 2);
    const auto c = check_monte_carlo(G, G.resolve_center("root"), 6, 2000, RandomStream(7, 0));
    CHECK(c.pass);
    CHECK(std::abs(c.mean - c.exact) <= 3 * c.half_width);
    CHECK(c.trials == 2000);
  }
}
