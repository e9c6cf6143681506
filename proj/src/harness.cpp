#include "poisswave/harness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <initializer_list>
#include <istream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "poisswave/metrics.hpp"
#include "poisswave/signals.hpp"

namespace poisswave {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t child_seed(std::uint64_t master, const std::string& signal_token,
                         const std::string& basis_token, std::int64_t n, std::int64_t run) {
    std::uint64_t h = splitmix64(master ^ fnv1a64(signal_token));
    h = splitmix64(h ^ fnv1a64(basis_token));
    h = splitmix64(h ^ static_cast<std::uint64_t>(n));
    h = splitmix64(h ^ static_cast<std::uint64_t>(run));
    return h;
}

int ExperimentPlan::j0_for(std::int64_t n) const {
    if (j0_policy == J0Policy::Fixed) return j0_fixed;
    return static_cast<int>(std::bit_width(static_cast<std::uint64_t>(n)) - 1);
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t c = s.find(',', pos);
        if (c == std::string::npos) c = s.size();
        std::string item = trim(s.substr(pos, c - pos));
        if (!item.empty()) out.push_back(item);
        pos = c + 1;
    }
    return out;
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("plan: bad numeric value for " + key + ": " + v);
    }
}

std::int64_t parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        std::int64_t x = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("plan: bad integer value for " + key + ": " + v);
    }
}

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

template <typename T, typename F>
std::string join(const std::vector<T>& xs, F&& f) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ',';
        out += f(xs[i]);
    }
    return out;
}

}  // namespace

ExperimentPlan ExperimentPlan::parse(std::istream& in) {
    ExperimentPlan p;
    std::string line;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("plan: expected key=value: " + t);
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        if (key == "signals") {
            p.signals = split_list(val);
        } else if (key == "bases") {
            p.bases = split_list(val);
        } else if (key == "n") {
            p.n_values.clear();
            for (const auto& v : split_list(val)) p.n_values.push_back(parse_int(key, v));
        } else if (key == "gammas") {
            p.gammas.clear();
            for (const auto& v : split_list(val)) p.gammas.push_back(parse_double(key, v));
        } else if (key == "runs") {
            p.runs = parse_int(key, val);
        } else if (key == "j0") {
            if (val == "log2n") {
                p.j0_policy = J0Policy::Log2N;
            } else {
                p.j0_policy = J0Policy::Fixed;
                p.j0_fixed = static_cast<int>(parse_int(key, val));
            }
        } else if (key == "variant") {
            p.variant = variant_from_token(val);
        } else if (key == "seed") {
            p.master_seed = static_cast<std::uint64_t>(parse_int(key, val));
        } else if (key == "tail_eps") {
            p.tail_eps = parse_double(key, val);
        } else if (key == "workers") {
            p.workers = static_cast<int>(parse_int(key, val));
        } else {
            throw std::invalid_argument("plan: unknown key: " + key);
        }
    }
    if (p.signals.empty() || p.bases.empty() || p.n_values.empty() || p.gammas.empty())
        throw std::invalid_argument("plan: signals, bases, n, gammas must be nonempty");
    if (p.runs < 1) throw std::invalid_argument("plan: runs must be >= 1");
    return p;
}

ExperimentPlan ExperimentPlan::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("plan: cannot open " + path);
    return parse(in);
}

std::string ExperimentPlan::to_text() const {
    std::string out;
    out += "signals=" + join(signals, [](const std::string& s) { return s; }) + "\n";
    out += "bases=" + join(bases, [](const std::string& s) { return s; }) + "\n";
    out += "n=" + join(n_values, [](std::int64_t v) { return std::to_string(v); }) + "\n";
    out += "gammas=" + join(gammas, fmt17) + "\n";
    out += "runs=" + std::to_string(runs) + "\n";
    out += "j0=" + (j0_policy == J0Policy::Log2N ? std::string("log2n") : std::to_string(j0_fixed)) +
           "\n";
    out += "variant=" + variant_token(variant) + "\n";
    out += "seed=" + std::to_string(master_seed) + "\n";
    out += "tail_eps=" + fmt17(tail_eps) + "\n";
    out += "workers=" + std::to_string(workers) + "\n";
    return out;
}

double pairwise_sum(const std::vector<double>& xs) {
    // Fixed reduction tree independent of how the values were produced.
    struct Rec {
        static double sum(const double* p, std::size_t len) {
            if (len <= 8) {
                double s = 0.0;
                for (std::size_t i = 0; i < len; ++i) s += p[i];
                return s;
            }
            std::size_t half = len / 2;
            return sum(p, half) + sum(p + half, len - half);
        }
    };
    return Rec::sum(xs.data(), xs.size());
}

namespace {

// Runs body(i) for i in [0, count) on `workers` threads over contiguous
// blocks; each i writes only its own output slot, so results are identical
// for any worker count.
template <typename F>
void parallel_for(std::int64_t count, int workers, F&& body) {
    if (count <= 0) return;
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (workers <= 0) workers = hw > 0 ? hw : 1;
    if (workers > count) workers = static_cast<int>(count);
    if (workers <= 1) {
        for (std::int64_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::mutex mu;
    std::exception_ptr first_error;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) {
        std::int64_t lo = count * t / workers;
        std::int64_t hi = count * (t + 1) / workers;
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::int64_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> g(mu);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

void check_tail_gate(const std::string& signal, const std::string& basis, std::int64_t n,
                     const TruthSummary& truth) {
    if (truth.tail_energy > 1e-6 * truth.oracle_denom) {
        std::ostringstream msg;
        msg << "tail gate: " << signal << "/" << basis << " n=" << n
            << " tail_energy=" << truth.tail_energy << " exceeds 1e-6 * oracle_denom="
            << 1e-6 * truth.oracle_denom;
        throw std::runtime_error(msg.str());
    }
}

struct MeanSe {
    double mean, se;
};

MeanSe mean_se(const std::vector<double>& xs) {
    std::int64_t m = static_cast<std::int64_t>(xs.size());
    double mean = pairwise_sum(xs) / static_cast<double>(m);
    if (m < 2) return {mean, 0.0};
    std::vector<double> dev(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double d = xs[i] - mean;
        dev[i] = d * d;
    }
    double var = pairwise_sum(dev) / static_cast<double>(m - 1);
    return {mean, std::sqrt(var / static_cast<double>(m))};
}

}  // namespace

ExperimentReport run_plan(const ExperimentPlan& plan, bool keep_per_run) {
    ExperimentReport report;
    for (const std::string& sig_tok : plan.signals) {
        Signal f = Signal::from_token(sig_tok);
        for (const std::string& bas_tok : plan.bases) {
            BiorthBasis basis = BiorthBasis::from_token(bas_tok);
            for (std::int64_t n : plan.n_values) {
                int j0 = plan.j0_for(n);
                TruthSummary truth = compute_truth(f, basis, n, j0, plan.tail_eps);
                check_tail_gate(sig_tok, bas_tok, n, truth);

                std::vector<std::vector<double>> r_runs(plan.gammas.size());
                for (auto& v : r_runs) v.resize(plan.runs);
                parallel_for(plan.runs, plan.workers, [&](std::int64_t run) {
                    std::uint64_t seed = child_seed(plan.master_seed, sig_tok, bas_tok, n, run);
                    PointProcess pp = f.sample(n, seed);
                    CoeffTable table = accumulate(pp, basis, j0);
                    attach_truth(table, f, basis);
                    for (std::size_t g = 0; g < plan.gammas.size(); ++g) {
                        GammaNConfig cfg{j0, plan.gammas[g], plan.variant};
                        apply_threshold(table, basis, cfg);
                        r_runs[g][run] = risk_breakdown(table, truth).r_n;
                    }
                });

                for (std::size_t g = 0; g < plan.gammas.size(); ++g) {
                    MeanSe r = mean_se(r_runs[g]);
                    CellAggregate cell;
                    cell.signal = sig_tok;
                    cell.basis = bas_tok;
                    cell.n = n;
                    cell.gamma = plan.gammas[g];
                    cell.runs = plan.runs;
                    cell.mean_r = r.mean;
                    cell.se_r = r.se;
                    cell.mean_R = r.mean / truth.oracle_denom;
                    cell.se_R = r.se / truth.oracle_denom;
                    cell.mean_R_log = r.mean / truth.oracle_log_denom;
                    cell.se_R_log = r.se / truth.oracle_log_denom;
                    cell.oracle_denom = truth.oracle_denom;
                    cell.oracle_log_denom = truth.oracle_log_denom;
                    cell.tail_energy = truth.tail_energy;
                    report.cells.push_back(cell);
                    if (keep_per_run) {
                        for (std::int64_t run = 0; run < plan.runs; ++run) {
                            PerRunRow row;
                            row.signal = sig_tok;
                            row.basis = bas_tok;
                            row.n = n;
                            row.gamma = plan.gammas[g];
                            row.run = run;
                            row.r_n = r_runs[g][run];
                            row.R_n = row.r_n / truth.oracle_denom;
                            row.R_n_log = row.r_n / truth.oracle_log_denom;
                            row.tail_energy = truth.tail_energy;
                            report.per_run.push_back(row);
                        }
                    }
                }
            }
        }
    }
    return report;
}

namespace {

SweepCell merge_step_curves(const std::string& sig_tok, const std::string& bas_tok, std::int64_t n,
                            const std::vector<RunStepCurve>& curves, const TruthSummary& truth) {
    SweepCell cell;
    cell.signal = sig_tok;
    cell.basis = bas_tok;
    cell.n = n;
    cell.runs = static_cast<std::int64_t>(curves.size());
    cell.oracle_denom = truth.oracle_denom;

    std::vector<double> starts(curves.size());
    std::size_t total_events = 0;
    for (std::size_t i = 0; i < curves.size(); ++i) {
        starts[i] = curves[i].r_keep_all;
        total_events += curves[i].events.size();
    }
    double r_total = pairwise_sum(starts);

    struct Tagged {
        double gamma_star;
        double delta_r;
        std::size_t run;
    };
    std::vector<Tagged> events;
    events.reserve(total_events);
    for (std::size_t i = 0; i < curves.size(); ++i)
        for (const auto& ev : curves[i].events) events.push_back({ev.gamma_star, ev.delta_r, i});
    std::sort(events.begin(), events.end(), [](const Tagged& a, const Tagged& b) {
        if (a.gamma_star != b.gamma_star) return a.gamma_star < b.gamma_star;
        return a.run < b.run;  // per-run event order is stable within equal gamma_star
    });

    // Value at a grid point is the mean risk with that point's record still
    // kept; the drop applies strictly after it.
    const double denom = truth.oracle_denom * static_cast<double>(curves.size());
    cell.curve_gamma.reserve(events.size() + 1);
    cell.curve_mean_R.reserve(events.size() + 1);
    std::size_t i = 0;
    while (i < events.size()) {
        double gs = events[i].gamma_star;
        cell.curve_gamma.push_back(gs);
        cell.curve_mean_R.push_back(r_total / denom);
        while (i < events.size() && events[i].gamma_star == gs) {
            r_total += events[i].delta_r;
            ++i;
        }
    }
    // Open tail: everything dropped.
    cell.curve_gamma.push_back(std::numeric_limits<double>::infinity());
    cell.curve_mean_R.push_back(r_total / denom);

    std::size_t best = 0;
    for (std::size_t t = 1; t < cell.curve_mean_R.size(); ++t)
        if (cell.curve_mean_R[t] < cell.curve_mean_R[best]) best = t;
    cell.gamma_min = cell.curve_gamma[best];
    cell.min_value = cell.curve_mean_R[best];
    return cell;
}

}  // namespace

ExperimentReport sweep_gamma(const ExperimentPlan& plan) {
    ExperimentReport report;
    for (const std::string& sig_tok : plan.signals) {
        Signal f = Signal::from_token(sig_tok);
        for (const std::string& bas_tok : plan.bases) {
            BiorthBasis basis = BiorthBasis::from_token(bas_tok);
            for (std::int64_t n : plan.n_values) {
                int j0 = plan.j0_for(n);
                TruthSummary truth = compute_truth(f, basis, n, j0, plan.tail_eps);
                check_tail_gate(sig_tok, bas_tok, n, truth);

                std::vector<RunStepCurve> curves(plan.runs);
                parallel_for(plan.runs, plan.workers, [&](std::int64_t run) {
                    std::uint64_t seed = child_seed(plan.master_seed, sig_tok, bas_tok, n, run);
                    PointProcess pp = f.sample(n, seed);
                    CoeffTable table = accumulate(pp, basis, j0);
                    curves[run] = run_step_curve(table, f, basis, truth);
                });
                report.sweeps.push_back(merge_step_curves(sig_tok, bas_tok, n, curves, truth));
            }
        }
    }
    return report;
}

double sweep_value_at(const SweepCell& cell, double gamma) {
    auto it = std::lower_bound(cell.curve_gamma.begin(), cell.curve_gamma.end(), gamma);
    if (it == cell.curve_gamma.end()) return cell.curve_mean_R.back();
    return cell.curve_mean_R[static_cast<std::size_t>(it - cell.curve_gamma.begin())];
}

std::vector<ProbeRow> lower_bound_probe(const std::vector<std::int64_t>& n_values,
                                        const std::vector<double>& gammas, std::int64_t runs,
                                        std::uint64_t master_seed, int workers) {
    ExperimentPlan plan;
    plan.signals = {"haar1"};
    plan.bases = {"haar"};
    plan.n_values = n_values;
    plan.gammas = gammas;
    plan.runs = runs;
    plan.j0_policy = ExperimentPlan::J0Policy::Log2N;
    plan.variant = ThresholdVariant::SimulationForm;
    plan.master_seed = master_seed;
    plan.workers = workers;
    ExperimentReport report = run_plan(plan);
    std::vector<ProbeRow> rows;
    rows.reserve(report.cells.size());
    for (const CellAggregate& cell : report.cells) {
        ProbeRow row;
        row.n = cell.n;
        row.gamma = cell.gamma;
        row.runs = cell.runs;
        row.mean_r = cell.mean_r;
        row.se_r = cell.se_r;
        row.mean_ratio = cell.mean_R;
        row.se_ratio = cell.se_R;
        rows.push_back(row);
    }
    return rows;
}

UppthResult uppth_probe(std::int64_t n, double gamma_min, const std::vector<double>& gamma_list,
                        std::int64_t runs, std::uint64_t master_seed, int workers) {
    if (gamma_list.empty()) throw std::invalid_argument("uppth_probe: empty gamma list");
    double gamma_max = *std::max_element(gamma_list.begin(), gamma_list.end());
    double gamma_lo = *std::min_element(gamma_list.begin(), gamma_list.end());
    Signal f = Signal::uppth_adversary(n, gamma_max, gamma_min);
    BiorthBasis basis = BiorthBasis::haar();
    ExperimentPlan plan;  // only for j0_for
    int j0 = plan.j0_for(n);
    TruthSummary truth = compute_truth(f, basis, n, j0);
    check_tail_gate(f.token(), "haar", n, truth);

    UppthResult out;
    out.n = n;
    out.level = f.bump_level();
    out.alpha = f.bump_alpha();
    out.coeff = f.bump_coeff();
    out.gamma_min = gamma_min;
    out.oracle_denom = truth.oracle_denom;

    std::vector<std::vector<double>> r_runs(gamma_list.size());
    for (auto& v : r_runs) v.resize(runs);
    parallel_for(runs, workers, [&](std::int64_t run) {
        std::uint64_t seed = child_seed(master_seed, f.token(), "haar", n, run);
        PointProcess pp = f.sample(n, seed);
        CoeffTable table = accumulate(pp, basis, j0);
        attach_truth(table, f, basis);
        for (std::size_t g = 0; g < gamma_list.size(); ++g) {
            GammaNConfig cfg{j0, gamma_list[g], ThresholdVariant::SimulationForm};
            apply_threshold(table, basis, cfg);
            r_runs[g][run] = risk_breakdown(table, truth).r_n;
        }
    });

    std::size_t g_hi = 0, g_lo = 0;
    for (std::size_t g = 0; g < gamma_list.size(); ++g) {
        MeanSe r = mean_se(r_runs[g]);
        ProbeRow row;
        row.n = n;
        row.gamma = gamma_list[g];
        row.runs = runs;
        row.mean_r = r.mean;
        row.se_r = r.se;
        row.mean_ratio = r.mean / truth.oracle_denom;
        row.se_ratio = r.se / truth.oracle_denom;
        out.rows.push_back(row);
        if (gamma_list[g] == gamma_max) g_hi = g;
        if (gamma_list[g] == gamma_lo) g_lo = g;
    }

    std::vector<double> diffs(runs);
    for (std::int64_t run = 0; run < runs; ++run)
        diffs[run] = (r_runs[g_hi][run] - r_runs[g_lo][run]) / truth.oracle_denom;
    MeanSe d = mean_se(diffs);
    out.paired_diff_mean = d.mean;
    out.paired_diff_se = d.se;
    return out;
}

namespace {

void append_row(std::string& out, std::initializer_list<std::string> fields) {
    bool first = true;
    for (const auto& f : fields) {
        if (!first) out += ',';
        out += f;
        first = false;
    }
    out += '\n';
}

}  // namespace

std::string csv_cells(const ExperimentReport& report) {
    std::string out =
        "signal,basis,n,gamma,runs,mean_r_n,se_r_n,mean_R_n,se_R_n,mean_R_n_log,se_R_n_log,"
        "oracle_denom,oracle_log_denom,tail_energy\n";
    for (const CellAggregate& c : report.cells)
        append_row(out, {c.signal, c.basis, std::to_string(c.n), fmt17(c.gamma),
                         std::to_string(c.runs), fmt17(c.mean_r), fmt17(c.se_r), fmt17(c.mean_R),
                         fmt17(c.se_R), fmt17(c.mean_R_log), fmt17(c.se_R_log),
                         fmt17(c.oracle_denom), fmt17(c.oracle_log_denom), fmt17(c.tail_energy)});
    return out;
}

std::string csv_per_run(const ExperimentReport& report) {
    std::string out = "signal,basis,n,gamma,run,r_n,R_n,R_n_log,tail_energy\n";
    for (const PerRunRow& r : report.per_run)
        append_row(out, {r.signal, r.basis, std::to_string(r.n), fmt17(r.gamma),
                         std::to_string(r.run), fmt17(r.r_n), fmt17(r.R_n), fmt17(r.R_n_log),
                         fmt17(r.tail_energy)});
    return out;
}

std::string csv_curve(const SweepCell& cell) {
    std::string out = "gamma,mean_R_n,runs\n";
    for (std::size_t i = 0; i < cell.curve_gamma.size(); ++i) {
        if (std::isinf(cell.curve_gamma[i])) continue;
        append_row(out,
                   {fmt17(cell.curve_gamma[i]), fmt17(cell.curve_mean_R[i]),
                    std::to_string(cell.runs)});
    }
    return out;
}

std::string csv_probe(const std::vector<ProbeRow>& rows) {
    std::string out = "n,gamma,runs,mean_r_n,se_r_n,mean_ratio,se_ratio\n";
    for (const ProbeRow& r : rows)
        append_row(out, {std::to_string(r.n), fmt17(r.gamma), std::to_string(r.runs),
                         fmt17(r.mean_r), fmt17(r.se_r), fmt17(r.mean_ratio), fmt17(r.se_ratio)});
    return out;
}

std::string json_summary(const ExperimentReport& report) {
    nlohmann::json root;
    root["cells"] = nlohmann::json::array();
    for (const CellAggregate& c : report.cells) {
        nlohmann::json cell;
        cell["signal"] = c.signal;
        cell["basis"] = c.basis;
        cell["n"] = c.n;
        cell["gamma"] = c.gamma;
        cell["runs"] = c.runs;
        cell["mean_r_n"] = c.mean_r;
        cell["se_r_n"] = c.se_r;
        cell["mean_R_n"] = c.mean_R;
        cell["se_R_n"] = c.se_R;
        cell["mean_R_n_log"] = c.mean_R_log;
        cell["se_R_n_log"] = c.se_R_log;
        cell["oracle_denom"] = c.oracle_denom;
        cell["oracle_log_denom"] = c.oracle_log_denom;
        cell["tail_energy"] = c.tail_energy;
        root["cells"].push_back(cell);
    }
    root["sweeps"] = nlohmann::json::array();
    for (const SweepCell& s : report.sweeps) {
        nlohmann::json cell;
        cell["signal"] = s.signal;
        cell["basis"] = s.basis;
        cell["n"] = s.n;
        cell["runs"] = s.runs;
        cell["gamma_min"] = s.gamma_min;
        cell["min_value"] = s.min_value;
        cell["oracle_denom"] = s.oracle_denom;
        root["sweeps"].push_back(cell);
    }
    return root.dump(2) + "\n";
}

}  // namespace poisswave
