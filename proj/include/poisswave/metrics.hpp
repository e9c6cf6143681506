#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "poisswave/estimator.hpp"
#include "poisswave/signals.hpp"
#include "poisswave/wavelet.hpp"

namespace poisswave {

/// Deterministic per-(signal, basis, n, j0) truth quantities, computed by one
/// enumeration of the window levels -1..j0 over the signal support out to the
/// tail cut.  V uses the true sigma^2 / n.
struct TruthSummary {
    double oracle_denom = 0.0;      // sum min(beta^2, sigma^2 / n)
    double oracle_log_denom = 0.0;  // sum min(beta^2, sigma^2 ln(n) / n)
    double beta_sq_total = 0.0;     // sum beta^2 over the enumerated window
    double tail_energy = 0.0;       // certified bound on coefficient energy beyond the cut
    double lo_cut = 0.0, hi_cut = 0.0;
    std::int64_t n = 0;
    int j0 = 0;
    double tail_eps = 0.0;
};

TruthSummary compute_truth(const Signal& f, const BiorthBasis& basis, std::int64_t n, int j0,
                           double tail_eps = 1e-12);

/// (sum min(beta^2, V), sum min(beta^2, V ln n)); natural logarithm.
std::pair<double, double> oracle_denominators(const Signal& f, const BiorthBasis& basis,
                                              std::int64_t n, int j0, double tail_eps = 1e-12);

/// Fill beta_true / sigma2_true / v_true on every materialized record.
void attach_truth(CoeffTable& table, const Signal& f, const BiorthBasis& basis);

struct RiskBreakdown {
    double r_n = 0.0;
    double R_n = 0.0;      // r_n / oracle_denom
    double R_n_log = 0.0;  // r_n / oracle_log_denom
    double oracle_denom = 0.0;
    double oracle_log_denom = 0.0;
    double tail_energy = 0.0;
};

/// r_n = sum over the window of (kept ? (beta_hat - beta)^2 : beta^2); the
/// un-materialized part enters through truth.beta_sq_total.  Rejects tables
/// whose records lack truth fields.
RiskBreakdown risk_breakdown(const CoeffTable& table, const TruthSummary& truth);

/// Change points of the keep rule in gamma, one per record with beta_hat != 0:
/// the gamma* solving sqrt(2 gamma ln n v_hat) + gamma ln(n) sup/(3n) = |beta_hat|
/// (SimulationForm thresholds are increasing in gamma, so the record is kept
/// exactly for gamma <= gamma*).  Sorted ascending.
std::vector<double> gamma_changepoints(const CoeffTable& table, const BiorthBasis& basis);

/// Step representation of one realization's risk as a function of gamma under
/// SimulationForm: r(gamma) = r_keep_all + sum of delta_r over events with
/// gamma_star < gamma.  Events are sorted by gamma_star.
struct RunStepCurve {
    double r_keep_all = 0.0;
    struct Event {
        double gamma_star;
        double delta_r;  // beta^2 - (beta_hat - beta)^2, applied when the record drops
    };
    std::vector<Event> events;
};

RunStepCurve run_step_curve(const CoeffTable& table, const Signal& f, const BiorthBasis& basis,
                            const TruthSummary& truth);

/// Evaluate a step curve at gamma (records with gamma_star >= gamma still kept).
double step_curve_value(const RunStepCurve& curve, double gamma);

}  // namespace poisswave
