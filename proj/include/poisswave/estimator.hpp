#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "poisswave/wavelet.hpp"

namespace poisswave {

enum class ThresholdVariant { TheoremForm, SimulationForm };

ThresholdVariant variant_from_token(const std::string& token);
const std::string& variant_token(ThresholdVariant v);

/// Estimation window and threshold tuning: levels -1 <= j <= j0 (k unbounded,
/// only cells containing events materialize), threshold scale gamma > 0.
struct GammaNConfig {
    int j0 = 10;
    double gamma = 1.0;
    ThresholdVariant variant = ThresholdVariant::SimulationForm;
};

struct CoeffRecord {
    LambdaIndex lambda;
    double beta_hat = 0.0;  // (1/n) sum over events of the analysis atom
    double v_hat = 0.0;     // (1/n^2) sum of its squares
    double v_tilde = 0.0;
    double eta = 0.0;
    bool kept = false;

    // Truth fields; NaN until attach_truth() fills them.
    double beta_true = std::nan("");
    double sigma2_true = std::nan("");
    double v_true = std::nan("");

    bool has_truth() const { return !std::isnan(beta_true); }
};

/// Materialized coefficients, sorted by (j, k).
struct CoeffTable {
    std::int64_t n = 0;
    std::string basis;
    int j0 = 0;
    std::vector<CoeffRecord> records;
};

/// One pass over the events; O(#points * (j0 + 2) * support width) updates.
CoeffTable accumulate(const PointProcess& pp, const BiorthBasis& basis, int j0);

/// V~ at deviation level u: v_hat + sqrt(2 v_hat sup^2 u / n^2) + 3 sup^2 u / n^2.
double v_tilde_at(double v_hat, double sup_norm, std::int64_t n, double u);
/// The thresholding form binds u = gamma * ln n.
double v_tilde(double v_hat, double sup_norm, std::int64_t n, double gamma);

/// TheoremForm:    sqrt(2 gamma ln(n) v_tilde) + gamma ln(n) sup / (3n)
/// SimulationForm: sqrt(2 gamma ln(n) v_hat)   + gamma ln(n) sup / (3n)
double threshold(double v_hat, double sup_norm, std::int64_t n, double gamma,
                 ThresholdVariant variant);

/// Recompute v_tilde / eta / kept in place (records and statistics unchanged),
/// so one accumulation pass serves many gamma values.
void apply_threshold(CoeffTable& table, const BiorthBasis& basis, const GammaNConfig& cfg);

/// accumulate + apply_threshold.  Keep rule: kept iff |beta_hat| >= eta.
CoeffTable estimate(const PointProcess& pp, const BiorthBasis& basis, const GammaNConfig& cfg);

/// Exhaustive minimizer of -sum_{l in m} beta_hat^2 + sum_{l in m} eta^2 over
/// all subsets m of the table (ties resolved toward inclusion).  Guarded to
/// tables of at most 20 records; equals the kept set of the threshold rule.
std::vector<LambdaIndex> select_bruteforce(const CoeffTable& table);

}  // namespace poisswave
