#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "poisswave/signals.hpp"

using namespace poisswave;

namespace {

// Empirical CDF vs model CDF sup-distance for sorted samples.
double ks_distance(const Signal& f, const std::vector<double>& pts) {
    const double mass = f.mass();
    const double m = static_cast<double>(pts.size());
    double d = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double F = f.cdf(pts[i]) / mass;
        d = std::max(d, std::abs(F - static_cast<double>(i) / m));
        d = std::max(d, std::abs(F - static_cast<double>(i + 1) / m));
    }
    return d;
}

}  // namespace

TEST_SUITE("signals") {

TEST_CASE("token registry round-trips and rejects unknowns") {
    const auto& toks = Signal::tokens();
    REQUIRE(toks.size() == 9);
    for (const auto& t : toks) CHECK(Signal::from_token(t).token() == t);
    CHECK_THROWS_AS(Signal::from_token("haar3"), std::invalid_argument);
    CHECK_THROWS_AS(Signal::from_token(""), std::invalid_argument);
}

TEST_CASE("total masses") {
    // blocks: 2 + sum h_j (1 - p_j) equals the 3.551 divisor exactly.
    CHECK(Signal::from_token("haar1").mass() == 1.0);
    CHECK(Signal::from_token("haar2").mass() == 1.0);
    CHECK(Signal::from_token("blocks").mass() == doctest::Approx(1.0).epsilon(1e-14));
    // comb: sum_{k<=50} 2^-k = 1 - 2^-50.
    CHECK(Signal::from_token("comb").mass() ==
          doctest::Approx(1.0 - std::ldexp(1.0, -50)).epsilon(1e-15));
    CHECK(Signal::from_token("gauss1").mass() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(Signal::from_token("gauss2").mass() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(Signal::from_token("beta05").mass() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(Signal::from_token("beta4").mass() == doctest::Approx(1.0).epsilon(1e-14));
    // bumps keeps the conventional 0.284 divisor, so its mass is not 1.
    CHECK(Signal::from_token("bumps").mass() ==
          doctest::Approx(0.9865369555320433).epsilon(1e-13));
}

TEST_CASE("piecewise values take the right limit at breakpoints") {
    Signal haar2 = Signal::from_token("haar2");
    CHECK(haar2.density(0.0) == 1.5);
    CHECK(haar2.density(0.1249) == 1.5);
    CHECK(haar2.density(0.125) == 0.5);
    CHECK(haar2.density(0.25) == 1.0);
    CHECK(haar2.density(1.0) == 0.0);
    CHECK(haar2.density(-0.001) == 0.0);

    Signal blocks = Signal::from_token("blocks");
    CHECK(blocks.density(0.05) == doctest::Approx(2.0 / 3.551).epsilon(1e-15));
    CHECK(blocks.density(0.1) == doctest::Approx(6.0 / 3.551).epsilon(1e-15));
    CHECK(blocks.density(0.11) == doctest::Approx(6.0 / 3.551).epsilon(1e-15));
}

TEST_CASE("cdf differentiates back to the density") {
    const double h = 1e-6;
    // Probe points chosen away from breakpoints/kinks of each signal.
    struct Probe {
        const char* token;
        std::vector<double> xs;
    };
    const std::vector<Probe> probes = {
        {"haar1", {0.2, 0.7}},
        {"haar2", {0.06, 0.2, 0.6}},
        {"blocks", {0.05, 0.3, 0.5, 0.9}},
        {"comb", {0.04, 0.2, 1.6, 12.8}},
        {"gauss1", {0.2, 0.5, 0.9}},
        {"gauss2", {0.4, 4.9, 5.3}},
        {"beta05", {0.1, 0.5, 0.9}},
        {"beta4", {1.1, 2.0, 5.0}},
        {"bumps", {0.2, 0.405, 0.6}},
    };
    for (const auto& p : probes) {
        Signal f = Signal::from_token(p.token);
        for (double x : p.xs) {
            double fd = (f.cdf(x + h) - f.cdf(x)) / h;
            INFO(p.token << " at x=" << x);
            CHECK(std::abs(fd - f.density(x)) <= 1e-4 * (1.0 + std::abs(f.density(x))));
        }
    }
}

TEST_CASE("cdf is monotone and saturates at the mass") {
    for (const auto& t : Signal::tokens()) {
        Signal f = Signal::from_token(t);
        INFO(t);
        CHECK(f.cdf(f.support_lo() - 1.0) == 0.0);
        double hi = f.tail_cut(1e-12);
        CHECK(f.mass() - f.cdf(hi) <= (std::isinf(f.support_hi()) ? 1e-10 : 1e-12));
        double prev = -1.0;
        for (int i = 0; i <= 40; ++i) {
            double x = f.head_cut(1e-12) + (hi - f.head_cut(1e-12)) * i / 40.0;
            double c = f.cdf(x);
            CHECK(c >= prev);
            prev = c;
        }
    }
}

TEST_CASE("quantile inverts the cdf") {
    for (const auto& t : Signal::tokens()) {
        Signal f = Signal::from_token(t);
        INFO(t);
        for (double q : {0.01, 0.1, 0.37, 0.5, 0.73, 0.9, 0.99}) {
            double u = q * f.mass();
            double x = f.quantile(u);
            CHECK(f.cdf(x) == doctest::Approx(u).epsilon(1e-9));
        }
        CHECK_THROWS_AS(f.quantile(0.0), std::invalid_argument);
        CHECK_THROWS_AS(f.quantile(f.mass() * 1.0001 + 0.001), std::invalid_argument);
    }
}

TEST_CASE("tail and head cuts") {
    // Compact supports cut at the support edge regardless of eps.
    for (const char* t : {"haar1", "haar2", "blocks", "beta05", "bumps"}) {
        Signal f = Signal::from_token(t);
        CHECK(f.tail_cut(1e-12) == f.support_hi());
        CHECK(f.head_cut(1e-12) == f.support_lo());
    }
    // beta4: mass - cdf(X) = X^-3, so the cut solves X = eps^{-1/3}.
    Signal b4 = Signal::from_token("beta4");
    CHECK(b4.tail_cut(1e-12) == doctest::Approx(1e4).epsilon(1e-12));
    CHECK(b4.tail_cut(1e-3) == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(b4.head_cut(1e-12) == 1.0);
    // Gaussians cut on both sides; cut points bracket the eps mass.
    for (const char* t : {"gauss1", "gauss2"}) {
        Signal f = Signal::from_token(t);
        double hi = f.tail_cut(1e-9), lo = f.head_cut(1e-9);
        // The cdf near saturation moves in ulps of 1, so allow that much.
        CHECK(f.mass() - f.cdf(hi) <= 1e-9 + 1e-15);
        CHECK(f.cdf(lo) <= 1e-9 + 1e-15);
        CHECK(lo < hi);
    }
    CHECK_THROWS_AS(b4.tail_cut(0.0), std::invalid_argument);
    CHECK_THROWS_AS(b4.head_cut(-1.0), std::invalid_argument);
}

TEST_CASE("sampling is deterministic, sorted, and in-support") {
    for (const auto& t : Signal::tokens()) {
        Signal f = Signal::from_token(t);
        INFO(t);
        PointProcess a = f.sample(500, 77);
        PointProcess b = f.sample(500, 77);
        PointProcess c = f.sample(500, 78);
        CHECK(a.n == 500);
        CHECK(a.points == b.points);
        CHECK(a.points != c.points);
        CHECK(std::is_sorted(a.points.begin(), a.points.end()));
        for (double x : a.points) {
            CHECK(x >= f.support_lo());
            CHECK(x <= f.support_hi());
        }
    }
    CHECK_THROWS_AS(Signal::from_token("haar1").sample(1, 5), std::invalid_argument);
}

TEST_CASE("event count matches the Poisson mean") {
    // K ~ Poisson(n * mass); mean of 10^4 draws within 4 sd of n * mass.
    Signal f = Signal::from_token("haar1");
    const std::int64_t n = 64;
    const int M = 10000;
    double sum = 0.0;
    for (int i = 0; i < M; ++i) sum += static_cast<double>(f.sample(n, 1000 + i).points.size());
    double mean = sum / M;
    double band = 4.0 * std::sqrt(64.0 / M);
    CHECK(std::abs(mean - 64.0) <= band);
}

TEST_CASE("position law passes a KS test") {
    // ~1e5 points; 1% critical value 1.6276 / sqrt(K).
    for (const char* t : {"haar2", "blocks", "gauss2", "beta05", "beta4", "bumps"}) {
        Signal f = Signal::from_token(t);
        PointProcess pp = f.sample(100000, 424242);
        double crit = 1.6276 / std::sqrt(static_cast<double>(pp.points.size()));
        INFO(t << " K=" << pp.points.size());
        CHECK(ks_distance(f, pp.points) < crit);
    }
}

TEST_CASE("adversarial signal construction") {
    const std::int64_t n = 1024;
    const double gmin = 1.0 + std::sqrt(2.0);
    Signal adv = Signal::uppth_adversary(n, 16.0, gmin);
    // alpha=1 makes the density negative, so the builder lands on alpha=2,
    // where n/(ln n)^3 < 2^j <= 2n/(ln n)^3 forces level j=2.
    CHECK(adv.bump_alpha() == 2);
    CHECK(adv.bump_level() == 2);
    double c = std::sqrt(2.0 * std::pow(std::sqrt(16.0) - std::sqrt(gmin), 2) * std::log(1024.0) /
                         1024.0);
    CHECK(adv.bump_coeff() == doctest::Approx(c).epsilon(1e-14));
    CHECK(adv.bump_coeff() == doctest::Approx(0.2846258446674747).epsilon(1e-14));
    // Bumps integrate to zero, so the unit mass survives.
    CHECK(adv.mass() == doctest::Approx(1.0).epsilon(1e-12));
    // Piecewise-constant extremes: 1 -+ 2^{j/2} c.
    double lo = 1.0 - 2.0 * adv.bump_coeff();
    double hi = 1.0 + 2.0 * adv.bump_coeff();
    CHECK(adv.density(0.0) == doctest::Approx(hi).epsilon(1e-13));
    CHECK(adv.density(0.126) == doctest::Approx(lo).epsilon(1e-13));
    CHECK(lo > 0.0);

    // Explicit alpha=1 is the infeasible case above; n and gamma guards.
    CHECK_THROWS_AS(Signal::uppth_adversary(n, 16.0, gmin, 1), std::invalid_argument);
    CHECK_THROWS_AS(Signal::uppth_adversary(8, 16.0, gmin), std::invalid_argument);
    CHECK_THROWS_AS(Signal::uppth_adversary(n, 2.0, 3.0), std::invalid_argument);
    CHECK_THROWS_AS(Signal::uppth_adversary(n, 2.0, 0.5), std::invalid_argument);

    // Diagnostics only exist for the adversary.
    CHECK_THROWS_AS(Signal::from_token("haar1").bump_level(), std::logic_error);

    // Sampling the adversary stays within [0,1].
    PointProcess pp = adv.sample(1024, 3);
    for (double x : pp.points) {
        CHECK(x >= 0.0);
        CHECK(x <= 1.0);
    }
}

TEST_CASE("merged realizations match a doubled budget in law") {
    // Superposing two independent n-realizations is a 2n-realization.
    // First and second moments of the count agree within MC bands.
    Signal f = Signal::from_token("haar2");
    const int M = 4000;
    double sum_merged = 0.0, sum_direct = 0.0;
    for (int i = 0; i < M; ++i) {
        auto a = f.sample(32, 50000 + 2 * i);
        auto b = f.sample(32, 50001 + 2 * i);
        auto d = f.sample(64, 90000 + i);
        sum_merged += static_cast<double>(a.points.size() + b.points.size());
        sum_direct += static_cast<double>(d.points.size());
    }
    double band = 8.0 * std::sqrt(64.0 / M);
    CHECK(std::abs(sum_merged / M - 64.0) <= band);
    CHECK(std::abs(sum_direct / M - 64.0) <= band);
}

}  // TEST_SUITE
