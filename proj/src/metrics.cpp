#include "poisswave/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace poisswave {

namespace {

// k range at level j whose atom support intersects (lo, hi) nontrivially.
std::pair<std::int64_t, std::int64_t> k_window(const PiecewiseConstant& atom, int j, double lo,
                                               double hi) {
    double y_lo = j < 0 ? lo : std::ldexp(lo, j);
    double y_hi = j < 0 ? hi : std::ldexp(hi, j);
    std::int64_t kfirst = static_cast<std::int64_t>(std::floor(y_lo - atom.hi())) + 1;
    std::int64_t klast = static_cast<std::int64_t>(std::ceil(y_hi - atom.lo())) - 1;
    return {kfirst, klast};
}

}  // namespace

TruthSummary compute_truth(const Signal& f, const BiorthBasis& basis, std::int64_t n, int j0,
                           double tail_eps) {
    if (n < 2) throw std::invalid_argument("compute_truth: n must be >= 2");
    if (j0 < -1) throw std::invalid_argument("compute_truth: j0 must be >= -1");
    TruthSummary out;
    out.n = n;
    out.j0 = j0;
    out.tail_eps = tail_eps;
    out.lo_cut = f.head_cut(tail_eps);
    out.hi_cut = f.tail_cut(tail_eps);
    const double ln = std::log(static_cast<double>(n));
    const double inv_n = 1.0 / static_cast<double>(n);
    const double eps_lo = f.cdf(out.lo_cut);
    const double eps_hi = f.mass() - f.cdf(out.hi_cut);

    for (int j = -1; j <= j0; ++j) {
        const PiecewiseConstant& atom = j < 0 ? basis.phi() : basis.psi();
        auto [kfirst, klast] = k_window(atom, j, out.lo_cut, out.hi_cut);
        for (std::int64_t k = kfirst; k <= klast; ++k) {
            LambdaIndex l{j, k};
            double beta = true_coeff(f, basis, l);
            double sigma2 = true_sigma2(f, basis, l);
            double b2 = beta * beta;
            out.beta_sq_total += b2;
            out.oracle_denom += std::min(b2, sigma2 * inv_n);
            out.oracle_log_denom += std::min(b2, sigma2 * ln * inv_n);
        }
        // Certified bound on the energy of the skipped coefficients at this
        // level: each has |beta| <= scale * sup * (omitted mass on its side)
        // and at most ceil(width) of them touch any point.
        double scale2 = j < 0 ? 1.0 : std::ldexp(1.0, j);
        double sup = atom.sup_abs();
        double width = std::ceil(atom.hi() - atom.lo());
        out.tail_energy += scale2 * sup * sup * width * (eps_lo * eps_lo + eps_hi * eps_hi);
    }
    return out;
}

std::pair<double, double> oracle_denominators(const Signal& f, const BiorthBasis& basis,
                                              std::int64_t n, int j0, double tail_eps) {
    TruthSummary t = compute_truth(f, basis, n, j0, tail_eps);
    return {t.oracle_denom, t.oracle_log_denom};
}

void attach_truth(CoeffTable& table, const Signal& f, const BiorthBasis& basis) {
    const double inv_n = 1.0 / static_cast<double>(table.n);
    for (CoeffRecord& rec : table.records) {
        rec.beta_true = true_coeff(f, basis, rec.lambda);
        rec.sigma2_true = true_sigma2(f, basis, rec.lambda);
        rec.v_true = rec.sigma2_true * inv_n;
    }
}

RiskBreakdown risk_breakdown(const CoeffTable& table, const TruthSummary& truth) {
    if (table.n != truth.n)
        throw std::invalid_argument("risk_breakdown: table and truth disagree on n");
    RiskBreakdown out;
    double r = truth.beta_sq_total;
    for (const CoeffRecord& rec : table.records) {
        if (!rec.has_truth()) throw std::invalid_argument("risk_breakdown: record missing truth");
        if (!rec.kept) continue;
        double d = rec.beta_hat - rec.beta_true;
        r += d * d - rec.beta_true * rec.beta_true;
    }
    out.r_n = r;
    out.oracle_denom = truth.oracle_denom;
    out.oracle_log_denom = truth.oracle_log_denom;
    out.tail_energy = truth.tail_energy;
    out.R_n = r / truth.oracle_denom;
    out.R_n_log = r / truth.oracle_log_denom;
    return out;
}

namespace {

double changepoint_for(double beta_hat, double v_hat, double sup, std::int64_t n) {
    // Solve sqrt(2 g ln(n) v_hat) + g ln(n) sup / (3n) = |beta_hat| for g > 0:
    // with s = sqrt(g), a s^2 + b s - |beta_hat| = 0.
    double ln = std::log(static_cast<double>(n));
    double a = ln * sup / (3.0 * static_cast<double>(n));
    double b = std::sqrt(2.0 * ln * v_hat);
    double s = (-b + std::sqrt(b * b + 4.0 * a * std::abs(beta_hat))) / (2.0 * a);
    return s * s;
}

}  // namespace

std::vector<double> gamma_changepoints(const CoeffTable& table, const BiorthBasis& basis) {
    std::vector<double> out;
    out.reserve(table.records.size());
    for (const CoeffRecord& rec : table.records) {
        if (rec.beta_hat == 0.0) continue;
        out.push_back(
            changepoint_for(rec.beta_hat, rec.v_hat, basis.sup_norm(rec.lambda), table.n));
    }
    std::sort(out.begin(), out.end());
    return out;
}

RunStepCurve run_step_curve(const CoeffTable& table, const Signal& f, const BiorthBasis& basis,
                            const TruthSummary& truth) {
    if (table.n != truth.n)
        throw std::invalid_argument("run_step_curve: table and truth disagree on n");
    RunStepCurve curve;
    curve.r_keep_all = truth.beta_sq_total;
    curve.events.reserve(table.records.size());
    for (const CoeffRecord& rec : table.records) {
        if (rec.beta_hat == 0.0) continue;  // eta > 0 >= |beta_hat|: never kept
        double beta = true_coeff(f, basis, rec.lambda);
        double d = rec.beta_hat - beta;
        double kept_term = d * d - beta * beta;
        curve.r_keep_all += kept_term;
        double gs = changepoint_for(rec.beta_hat, rec.v_hat, basis.sup_norm(rec.lambda), table.n);
        curve.events.push_back({gs, -kept_term});
    }
    std::sort(curve.events.begin(), curve.events.end(),
              [](const RunStepCurve::Event& a, const RunStepCurve::Event& b) {
                  return a.gamma_star < b.gamma_star;
              });
    return curve;
}

double step_curve_value(const RunStepCurve& curve, double gamma) {
    double r = curve.r_keep_all;
    for (const auto& ev : curve.events) {
        if (ev.gamma_star >= gamma) break;
        r += ev.delta_r;
    }
    return r;
}

}  // namespace poisswave
