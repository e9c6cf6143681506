#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "poisswave/estimator.hpp"

namespace poisswave {

/// SplitMix64 step (Steele, Lea & Flood; the java.util.SplittableRandom mixer).
std::uint64_t splitmix64(std::uint64_t x);
/// FNV-1a 64-bit over the bytes of a token.
std::uint64_t fnv1a64(const std::string& s);

/// Child seed for (master, signal, basis, n, run): four chained SplitMix64
/// applications folding in each component.  Independent of worker count and
/// execution order by construction.
std::uint64_t child_seed(std::uint64_t master, const std::string& signal_token,
                         const std::string& basis_token, std::int64_t n, std::int64_t run);

struct ExperimentPlan {
    std::vector<std::string> signals{"haar1"};
    std::vector<std::string> bases{"haar"};
    std::vector<std::int64_t> n_values{1024};
    std::vector<double> gammas{1.0};
    std::int64_t runs = 100;
    enum class J0Policy { Log2N, Fixed };
    J0Policy j0_policy = J0Policy::Log2N;
    int j0_fixed = 10;
    ThresholdVariant variant = ThresholdVariant::SimulationForm;
    std::uint64_t master_seed = 1;
    double tail_eps = 1e-12;
    int workers = 0;  // 0: hardware concurrency

    int j0_for(std::int64_t n) const;

    /// Line-oriented key=value format; '#' comments and blank lines ignored.
    static ExperimentPlan parse(std::istream& in);
    static ExperimentPlan parse_file(const std::string& path);
    std::string to_text() const;
};

struct CellAggregate {
    std::string signal, basis;
    std::int64_t n = 0;
    double gamma = 0.0;
    std::int64_t runs = 0;
    double mean_r = 0.0, se_r = 0.0;
    double mean_R = 0.0, se_R = 0.0;
    double mean_R_log = 0.0, se_R_log = 0.0;
    double oracle_denom = 0.0, oracle_log_denom = 0.0, tail_energy = 0.0;
};

struct PerRunRow {
    std::string signal, basis;
    std::int64_t n = 0;
    double gamma = 0.0;
    std::int64_t run = 0;
    double r_n = 0.0, R_n = 0.0, R_n_log = 0.0, tail_energy = 0.0;
};

struct SweepCell {
    std::string signal, basis;
    std::int64_t n = 0;
    std::int64_t runs = 0;
    double gamma_min = 0.0;           // leftmost minimizer of the mean curve
    double min_value = 0.0;           // mean R at gamma_min
    std::vector<double> curve_gamma;  // union of run change points (ascending)
    std::vector<double> curve_mean_R;
    double oracle_denom = 0.0;
};

struct ExperimentReport {
    std::vector<CellAggregate> cells;
    std::vector<PerRunRow> per_run;
    std::vector<SweepCell> sweeps;
};

/// Monte Carlo over the plan's (signal, basis, n) cells: truth precomputed
/// once per cell, one accumulation per run re-thresholded for every gamma.
/// Per-cell and final reductions run in fixed order with pairwise summation,
/// so results are bit-identical for any worker count.  Throws if any cell
/// has tail_energy > 1e-6 * oracle_denom.
ExperimentReport run_plan(const ExperimentPlan& plan, bool keep_per_run = false);

/// Change-point sweep of the mean oracle ratio over gamma (SimulationForm):
/// exact step curve on the union of all runs' change points per cell.
ExperimentReport sweep_gamma(const ExperimentPlan& plan);

/// Evaluate a sweep cell's mean curve at an arbitrary gamma.
double sweep_value_at(const SweepCell& cell, double gamma);

struct ProbeRow {
    std::int64_t n = 0;
    double gamma = 0.0;
    std::int64_t runs = 0;
    double mean_r = 0.0, se_r = 0.0;
    double mean_ratio = 0.0, se_ratio = 0.0;
};

/// Haar1 / Haar risk at fixed gammas as n grows (j0 = log2 n).
std::vector<ProbeRow> lower_bound_probe(const std::vector<std::int64_t>& n_values,
                                        const std::vector<double>& gammas, std::int64_t runs,
                                        std::uint64_t master_seed, int workers = 0);

struct UppthResult {
    std::int64_t n = 0;
    int level = 0;
    int alpha = 0;
    double coeff = 0.0;
    double gamma_min = 0.0;
    double oracle_denom = 0.0;
    std::vector<ProbeRow> rows;        // one per gamma in gamma_list order
    double paired_diff_mean = 0.0;     // ratio(max gamma) - ratio(min gamma), per-run pairing
    double paired_diff_se = 0.0;
};

/// Oracle ratios on the adversarial signal built from (n, max gamma, gamma_min).
UppthResult uppth_probe(std::int64_t n, double gamma_min, const std::vector<double>& gamma_list,
                        std::int64_t runs, std::uint64_t master_seed, int workers = 0);

// Deterministic text emission (%.17g floats; one row per line, '\n' endings).
std::string csv_cells(const ExperimentReport& report);
std::string csv_per_run(const ExperimentReport& report);
std::string csv_curve(const SweepCell& cell);
std::string csv_probe(const std::vector<ProbeRow>& rows);
std::string json_summary(const ExperimentReport& report);

/// Fixed-shape pairwise reduction; deterministic for any worker count.
double pairwise_sum(const std::vector<double>& xs);

}  // namespace poisswave
