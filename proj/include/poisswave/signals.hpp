#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace poisswave {

/// A realization of the point process observed on the line.  `n` is the
/// scaling parameter: the process has intensity n * f(x) dx, equivalently the
/// superposition of n unit-intensity processes.  Points are sorted ascending.
struct PointProcess {
    std::int64_t n = 0;
    std::vector<double> points;
};

enum class SignalId {
    Haar1,
    Haar2,
    Blocks,
    Comb,
    Gauss1,
    Gauss2,
    Beta05,
    Beta4,
    Bumps,
    UppthAdversary,
};

/// Test intensity f: a finite nonnegative measure on R with density f and
/// exact closed-form CDF.  All truth computations (true coefficients, oracle
/// sums) go through cdf(); density() exists for sampling diagnostics and
/// plotting.  Piecewise densities use half-open pieces [a, b): evaluating at a
/// breakpoint returns the right-limit.
class Signal {
  public:
    static Signal from_token(const std::string& token);
    static const std::vector<std::string>& tokens();

    /// Adversarial signal 1_[0,1] + c * sum_k psi_{j,k} over k = 0..2^j - 1,
    /// with c = sqrt(2 (sqrt(gamma) - sqrt(gamma_min))^2 ln(n) / n) and j the
    /// integer with n/(ln n)^{1+alpha} < 2^j <= 2n/(ln n)^{1+alpha}.
    /// alpha <= 0 picks the smallest positive integer keeping the density
    /// nonnegative; an explicit alpha is rejected if the density goes negative.
    static Signal uppth_adversary(std::int64_t n, double gamma, double gamma_min, int alpha = 0);

    SignalId id() const { return id_; }
    const std::string& token() const { return token_; }

    double mass() const { return mass_; }
    double support_lo() const { return support_lo_; }
    double support_hi() const { return support_hi_; }

    double density(double x) const;
    double cdf(double x) const;

    /// Smallest X (up to the resolution of the representation) with
    /// mass - cdf(X) <= eps.  Compact supports return support_hi.
    double tail_cut(double eps) const;
    /// Largest X with cdf(X) <= eps; equals support_lo when that is finite.
    double head_cut(double eps) const;

    /// Inverse CDF for u in (0, mass).
    double quantile(double u) const;

    /// Draw one realization: K ~ Poisson(n * mass), then K independent
    /// positions by inverse CDF, sorted.  Deterministic in `seed`.
    PointProcess sample(std::int64_t n, std::uint64_t seed) const;

    // UppthAdversary diagnostics (throw for other signals).
    int bump_level() const;
    double bump_coeff() const;
    int bump_alpha() const;

  private:
    Signal() = default;

    SignalId id_ = SignalId::Haar1;
    std::string token_;
    double mass_ = 0.0;
    double support_lo_ = 0.0;
    double support_hi_ = 0.0;

    // Piecewise-constant densities (Haar1, Haar2, Blocks, Comb, UppthAdversary).
    std::vector<double> pw_edges_;   // size m+1
    std::vector<double> pw_values_;  // size m
    std::vector<double> pw_cum_;     // size m+1, pw_cum_[i] = cdf(pw_edges_[i])

    // Gaussian mixtures (Gauss1, Gauss2): component (weight, mu, sigma).
    struct GaussComp {
        double weight, mu, sigma;
    };
    std::vector<GaussComp> gauss_;

    // Bumps parameters.
    std::vector<double> bp_, bg_, bw_;

    int uppth_level_ = -1;
    double uppth_coeff_ = 0.0;
    int uppth_alpha_ = 0;

    bool piecewise() const { return !pw_edges_.empty(); }
    void finish_piecewise();  // fills pw_cum_, mass_, support bounds
    double bumps_antiderivative(double x) const;
};

}  // namespace poisswave
