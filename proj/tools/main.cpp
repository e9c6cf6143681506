#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "poisswave/estimator.hpp"
#include "poisswave/harness.hpp"
#include "poisswave/metrics.hpp"
#include "poisswave/signals.hpp"
#include "poisswave/wavelet.hpp"

namespace {

using namespace poisswave;

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t c = s.find(',', pos);
        if (c == std::string::npos) c = s.size();
        std::string item = s.substr(pos, c - pos);
        std::size_t a = item.find_first_not_of(" \t");
        std::size_t b = item.find_last_not_of(" \t");
        if (a != std::string::npos) out.push_back(item.substr(a, b - a + 1));
        pos = c + 1;
    }
    return out;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f << content;
}

/// One '#'-prefixed line carrying the resolved configuration that determines
/// the output bytes (execution-only knobs like worker count are excluded so
/// reruns stay byte-identical).
std::string manifest(const std::string& sub,
                     const std::vector<std::pair<std::string, std::string>>& kv) {
    std::string line = "# poisswave " + sub;
    for (const auto& [k, v] : kv) line += " " + k + "=" + v;
    return line;
}

int parse_j0(const std::string& s, std::int64_t n) {
    if (s == "log2n") return static_cast<int>(std::bit_width(static_cast<std::uint64_t>(n)) - 1);
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument("bad --j0 value: " + s);
    if (v < -1) throw std::invalid_argument("--j0 must be >= -1");
    return v;
}

struct GridSpec {
    double lo = 0.0, hi = 0.0, step = 0.0;
    std::vector<double> points() const {
        std::int64_t count = static_cast<std::int64_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
        std::vector<double> xs(count);
        for (std::int64_t i = 0; i < count; ++i) xs[i] = lo + static_cast<double>(i) * step;
        return xs;
    }
};

GridSpec parse_grid(const std::string& s) {
    std::size_t c1 = s.find(':');
    std::size_t c2 = c1 == std::string::npos ? std::string::npos : s.find(':', c1 + 1);
    if (c2 == std::string::npos) throw std::invalid_argument("--grid expects lo:hi:step");
    GridSpec g;
    g.lo = std::stod(s.substr(0, c1));
    g.hi = std::stod(s.substr(c1 + 1, c2 - c1 - 1));
    g.step = std::stod(s.substr(c2 + 1));
    if (!(g.step > 0.0) || !(g.hi >= g.lo)) throw std::invalid_argument("--grid expects lo:hi:step with step > 0");
    return g;
}

std::vector<double> read_points_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open points file: " + path);
    std::vector<double> pts;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#' || line == "x") continue;
        std::size_t used = 0;
        double v = std::stod(line, &used);
        if (used != line.size()) throw std::invalid_argument("bad points line: " + line);
        pts.push_back(v);
    }
    return pts;
}

int cmd_simulate(const std::string& signal, std::int64_t n, std::uint64_t seed,
                 const std::string& out, const std::string& format) {
    Signal f = Signal::from_token(signal);
    PointProcess pp = f.sample(n, seed);
    std::string man = manifest("simulate", {{"signal", signal},
                                            {"n", std::to_string(n)},
                                            {"seed", std::to_string(seed)},
                                            {"count", std::to_string(pp.points.size())}});
    if (format == "json") {
        nlohmann::json doc;
        doc["manifest"] = man;
        doc["signal"] = signal;
        doc["n"] = n;
        doc["seed"] = seed;
        doc["points"] = pp.points;
        write_output(out, doc.dump(2) + "\n");
    } else {
        std::string body = man + "\nx\n";
        for (double x : pp.points) body += fmt17(x) + "\n";
        write_output(out, body);
    }
    return 0;
}

int cmd_estimate(const std::string& signal, const std::string& basis_tok, std::int64_t n,
                 double gamma, const std::string& j0_str, const std::string& variant_tok,
                 std::uint64_t seed, const std::string& points_path, const std::string& grid_str,
                 const std::string& grid_out, const std::string& out, const std::string& format) {
    Signal f = Signal::from_token(signal);
    const BiorthBasis& basis = BiorthBasis::from_token(basis_tok);
    int j0 = parse_j0(j0_str, n);
    GammaNConfig cfg{j0, gamma, variant_from_token(variant_tok)};

    PointProcess pp;
    std::string source;
    if (!points_path.empty()) {
        pp.n = n;
        pp.points = read_points_csv(points_path);
        source = "points:" + points_path;
    } else {
        pp = f.sample(n, seed);
        source = "seed:" + std::to_string(seed);
    }
    CoeffTable table = estimate(pp, basis, cfg);

    std::vector<std::pair<std::string, std::string>> kv = {
        {"signal", signal},       {"basis", basis_tok},
        {"n", std::to_string(n)}, {"j0", std::to_string(j0)},
        {"gamma", fmt17(gamma)},  {"variant", variant_tok},
        {"source", source}};
    std::string man = manifest("estimate", kv);

    std::vector<std::pair<LambdaIndex, double>> kept;
    for (const CoeffRecord& rec : table.records)
        if (rec.kept) kept.emplace_back(rec.lambda, rec.beta_hat);

    std::vector<double> xs;
    std::vector<double> recon;
    if (!grid_str.empty()) {
        xs = parse_grid(grid_str).points();
        recon = reconstruct(basis, kept, xs);
    }

    if (format == "json") {
        nlohmann::json doc;
        doc["manifest"] = man;
        for (const auto& [k, v] : kv) doc["config"][k] = v;
        doc["kept"] = nlohmann::json::array();
        for (const CoeffRecord& rec : table.records) {
            if (!rec.kept) continue;
            nlohmann::json row;
            row["j"] = rec.lambda.j;
            row["k"] = rec.lambda.k;
            row["beta_hat"] = rec.beta_hat;
            row["eta"] = rec.eta;
            doc["kept"].push_back(row);
        }
        if (!grid_str.empty()) {
            doc["grid"]["x"] = xs;
            doc["grid"]["estimate"] = recon;
        }
        write_output(out, doc.dump(2) + "\n");
        return 0;
    }

    std::string body = man + "\nj,k,beta_hat,eta\n";
    for (const CoeffRecord& rec : table.records) {
        if (!rec.kept) continue;
        body += std::to_string(rec.lambda.j) + "," + std::to_string(rec.lambda.k) + "," +
                fmt17(rec.beta_hat) + "," + fmt17(rec.eta) + "\n";
    }
    if (grid_str.empty()) {
        write_output(out, body);
        return 0;
    }
    kv.emplace_back("grid", grid_str);
    std::string grid_body = manifest("estimate", kv) + "\nx,estimate\n";
    for (std::size_t i = 0; i < xs.size(); ++i)
        grid_body += fmt17(xs[i]) + "," + fmt17(recon[i]) + "\n";
    if (!grid_out.empty()) {
        write_output(out, body);
        write_output(grid_out, grid_body);
    } else if (!out.empty()) {
        write_output(out, body);
        write_output(out + ".grid.csv", grid_body);
    } else {
        write_output("", body + "\n" + grid_body);
    }
    return 0;
}

int cmd_sweep(ExperimentPlan plan, const std::string& out, const std::string& format) {
    if (plan.signals.size() * plan.bases.size() * plan.n_values.size() != 1)
        throw std::invalid_argument("sweep-gamma runs one (signal, basis, n) cell per invocation");
    ExperimentReport report = sweep_gamma(plan);
    const SweepCell& cell = report.sweeps.front();
    std::string man = manifest(
        "sweep-gamma",
        {{"signal", cell.signal},
         {"basis", cell.basis},
         {"n", std::to_string(cell.n)},
         {"runs", std::to_string(cell.runs)},
         {"j0", plan.j0_policy == ExperimentPlan::J0Policy::Log2N
                    ? std::string("log2n")
                    : std::to_string(plan.j0_fixed)},
         {"seed", std::to_string(plan.master_seed)},
         {"gamma_min", fmt17(cell.gamma_min)},
         {"min_value", fmt17(cell.min_value)},
         {"oracle_denom", fmt17(cell.oracle_denom)}});
    if (format == "json") {
        nlohmann::json doc;
        doc["manifest"] = man;
        doc["signal"] = cell.signal;
        doc["basis"] = cell.basis;
        doc["n"] = cell.n;
        doc["runs"] = cell.runs;
        doc["gamma_min"] = cell.gamma_min;
        doc["min_value"] = cell.min_value;
        doc["oracle_denom"] = cell.oracle_denom;
        doc["curve_gamma"] = cell.curve_gamma;
        doc["curve_mean_R"] = cell.curve_mean_R;
        write_output(out, doc.dump(2) + "\n");
    } else {
        write_output(out, man + "\n" + csv_curve(cell));
    }
    return 0;
}

int cmd_table1(const ExperimentPlan& plan, const std::string& per_run_out, const std::string& out,
               const std::string& format) {
    ExperimentReport report = run_plan(plan, !per_run_out.empty());
    std::string man = manifest(
        "table1",
        {{"signals", [&] {
              std::string s;
              for (std::size_t i = 0; i < plan.signals.size(); ++i)
                  s += (i ? "," : "") + plan.signals[i];
              return s;
          }()},
         {"bases",
          [&] {
              std::string s;
              for (std::size_t i = 0; i < plan.bases.size(); ++i) s += (i ? "," : "") + plan.bases[i];
              return s;
          }()},
         {"n",
          [&] {
              std::string s;
              for (std::size_t i = 0; i < plan.n_values.size(); ++i)
                  s += (i ? "," : "") + std::to_string(plan.n_values[i]);
              return s;
          }()},
         {"gammas",
          [&] {
              std::string s;
              for (std::size_t i = 0; i < plan.gammas.size(); ++i)
                  s += (i ? "," : "") + fmt17(plan.gammas[i]);
              return s;
          }()},
         {"runs", std::to_string(plan.runs)},
         {"j0", plan.j0_policy == ExperimentPlan::J0Policy::Log2N
                    ? std::string("log2n")
                    : std::to_string(plan.j0_fixed)},
         {"variant", variant_token(plan.variant)},
         {"seed", std::to_string(plan.master_seed)}});
    if (format == "json") {
        nlohmann::json doc = nlohmann::json::parse(json_summary(report));
        doc["manifest"] = man;
        write_output(out, doc.dump(2) + "\n");
    } else {
        write_output(out, man + "\n" + csv_cells(report));
    }
    if (!per_run_out.empty()) write_output(per_run_out, man + "\n" + csv_per_run(report));
    return 0;
}

int cmd_probes(const std::string& which, const std::vector<std::int64_t>& lower_n,
               const std::vector<double>& lower_gammas, std::int64_t uppth_n, double gamma_min,
               const std::vector<double>& uppth_gammas, std::int64_t runs, std::uint64_t seed,
               int workers, const std::string& out, const std::string& format) {
    bool do_lower = which == "lower" || which == "both";
    bool do_uppth = which == "uppth" || which == "both";
    if (!do_lower && !do_uppth)
        throw std::invalid_argument("--which must be lower, uppth, or both");

    std::vector<ProbeRow> lower_rows;
    UppthResult up;
    if (do_lower) lower_rows = lower_bound_probe(lower_n, lower_gammas, runs, seed, workers);
    if (do_uppth) up = uppth_probe(uppth_n, gamma_min, uppth_gammas, runs, seed, workers);

    if (format == "json") {
        nlohmann::json doc;
        doc["manifest"] = manifest("probes", {{"which", which},
                                              {"runs", std::to_string(runs)},
                                              {"seed", std::to_string(seed)}});
        if (do_lower) {
            doc["lower"] = nlohmann::json::array();
            for (const ProbeRow& r : lower_rows) {
                nlohmann::json row;
                row["n"] = r.n;
                row["gamma"] = r.gamma;
                row["runs"] = r.runs;
                row["mean_r_n"] = r.mean_r;
                row["se_r_n"] = r.se_r;
                row["mean_ratio"] = r.mean_ratio;
                row["se_ratio"] = r.se_ratio;
                doc["lower"].push_back(row);
            }
        }
        if (do_uppth) {
            nlohmann::json u;
            u["n"] = up.n;
            u["level"] = up.level;
            u["alpha"] = up.alpha;
            u["coeff"] = up.coeff;
            u["gamma_min"] = up.gamma_min;
            u["oracle_denom"] = up.oracle_denom;
            u["paired_diff_mean"] = up.paired_diff_mean;
            u["paired_diff_se"] = up.paired_diff_se;
            u["rows"] = nlohmann::json::array();
            for (const ProbeRow& r : up.rows) {
                nlohmann::json row;
                row["gamma"] = r.gamma;
                row["mean_ratio"] = r.mean_ratio;
                row["se_ratio"] = r.se_ratio;
                row["mean_r_n"] = r.mean_r;
                row["se_r_n"] = r.se_r;
                u["rows"].push_back(row);
            }
            doc["uppth"] = u;
        }
        write_output(out, doc.dump(2) + "\n");
        return 0;
    }

    std::string body;
    if (do_lower) {
        body += manifest("probes", {{"which", "lower"},
                                    {"runs", std::to_string(runs)},
                                    {"seed", std::to_string(seed)}}) +
                "\n" + csv_probe(lower_rows);
    }
    if (do_uppth) {
        if (!body.empty()) body += "\n";
        body += manifest("probes", {{"which", "uppth"},
                                    {"runs", std::to_string(runs)},
                                    {"seed", std::to_string(seed)},
                                    {"n", std::to_string(up.n)},
                                    {"level", std::to_string(up.level)},
                                    {"alpha", std::to_string(up.alpha)},
                                    {"coeff", fmt17(up.coeff)},
                                    {"gamma_min", fmt17(up.gamma_min)},
                                    {"paired_diff_mean", fmt17(up.paired_diff_mean)},
                                    {"paired_diff_se", fmt17(up.paired_diff_se)}}) +
                "\n" + csv_probe(up.rows);
    }
    write_output(out, body);
    return 0;
}

int cmd_dump_basis(const std::string& basis_tok, double dual_step, const std::string& out,
                   const std::string& format) {
    const BiorthBasis& b = BiorthBasis::from_token(basis_tok);
    std::string man =
        manifest("dump-basis", {{"basis", basis_tok},
                                {"vanishing_degree", std::to_string(b.vanishing_degree())},
                                {"cascade_depth", std::to_string(b.cascade_depth())}});
    LambdaIndex phi_idx{-1, 0};
    double dual_lo = b.dual_support_lo(phi_idx);
    double dual_hi = b.dual_support_hi(phi_idx);

    if (format == "json") {
        nlohmann::json doc;
        doc["manifest"] = man;
        doc["basis"] = basis_tok;
        doc["vanishing_degree"] = b.vanishing_degree();
        doc["phi"]["edges"] = b.phi().edges;
        doc["phi"]["values"] = b.phi().values;
        doc["psi"]["edges"] = b.psi().edges;
        doc["psi"]["values"] = b.psi().values;
        doc["recon_lo"]["offset"] = b.recon_lo_offset();
        doc["recon_lo"]["coeffs"] = b.recon_lo();
        doc["recon_hi"]["offset"] = b.recon_hi_offset();
        doc["recon_hi"]["coeffs"] = b.recon_hi();
        if (dual_step > 0.0) {
            std::vector<double> xs, vs;
            for (double x = dual_lo; x <= dual_hi; x += dual_step) {
                xs.push_back(x);
                vs.push_back(b.dual_phi(x));
            }
            doc["dual_phi"]["x"] = xs;
            doc["dual_phi"]["value"] = vs;
        }
        write_output(out, doc.dump(2) + "\n");
        return 0;
    }

    std::string body = man + "\npart,a,b,value\n";
    auto pieces = [&body](const char* part, const PiecewiseConstant& p) {
        for (std::size_t i = 0; i < p.values.size(); ++i)
            body += std::string(part) + "," + fmt17(p.edges[i]) + "," + fmt17(p.edges[i + 1]) +
                    "," + fmt17(p.values[i]) + "\n";
    };
    pieces("phi", b.phi());
    pieces("psi", b.psi());
    for (std::size_t i = 0; i < b.recon_lo().size(); ++i) {
        std::string k = std::to_string(b.recon_lo_offset() + static_cast<int>(i));
        body += "recon_lo," + k + "," + k + "," + fmt17(b.recon_lo()[i]) + "\n";
    }
    for (std::size_t i = 0; i < b.recon_hi().size(); ++i) {
        std::string k = std::to_string(b.recon_hi_offset() + static_cast<int>(i));
        body += "recon_hi," + k + "," + k + "," + fmt17(b.recon_hi()[i]) + "\n";
    }
    if (dual_step > 0.0) {
        for (double x = dual_lo; x <= dual_hi; x += dual_step)
            body += "dual_phi," + fmt17(x) + "," + fmt17(x) + "," + fmt17(b.dual_phi(x)) + "\n";
    }
    write_output(out, body);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wavelet threshold estimation of Poisson process intensities"};
    app.require_subcommand(1);

    std::string out, format = "csv";
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", out, "Output file (default: standard output)");
        sub->add_option("--format", format, "Output format")
            ->check(CLI::IsMember({"csv", "json"}));
    };

    // simulate
    std::string sim_signal;
    std::int64_t sim_n = 1024;
    std::uint64_t sim_seed = 1;
    CLI::App* sim = app.add_subcommand("simulate", "Draw one realization of the point process");
    sim->add_option("--signal", sim_signal, "Signal token")->required();
    sim->add_option("--n", sim_n, "Intensity scale (number of superposed unit processes)")
        ->required();
    sim->add_option("--seed", sim_seed, "RNG seed");
    add_common(sim);

    // estimate
    std::string est_signal, est_basis, est_j0 = "log2n", est_variant = "simulation";
    std::string est_points, est_grid, est_grid_out;
    std::int64_t est_n = 1024;
    double est_gamma = 1.0;
    std::uint64_t est_seed = 1;
    CLI::App* est = app.add_subcommand("estimate", "Threshold-estimate coefficients from events");
    est->add_option("--signal", est_signal, "Signal token")->required();
    est->add_option("--basis", est_basis, "Basis token")->required();
    est->add_option("--n", est_n, "Intensity scale")->required();
    est->add_option("--gamma", est_gamma, "Threshold tuning constant (> 0)");
    est->add_option("--j0", est_j0, "Finest level (integer or log2n)");
    est->add_option("--variant", est_variant, "Threshold variant")
        ->check(CLI::IsMember({"theorem", "simulation"}));
    est->add_option("--seed", est_seed, "RNG seed (ignored with --points)");
    est->add_option("--points", est_points, "Read the realization from a simulate CSV");
    est->add_option("--grid", est_grid, "Also reconstruct on lo:hi:step");
    est->add_option("--grid-out", est_grid_out, "Output file for the reconstruction grid");
    add_common(est);

    // sweep-gamma
    std::string sw_signal = "haar1", sw_basis = "haar", sw_j0 = "log2n", sw_plan;
    std::int64_t sw_n = 1024, sw_runs = 1000;
    std::uint64_t sw_seed = 1;
    int sw_workers = 0;
    CLI::App* sw = app.add_subcommand("sweep-gamma",
                                      "Exact risk curve over gamma for one (signal, basis, n)");
    sw->add_option("--signal", sw_signal, "Signal token");
    sw->add_option("--basis", sw_basis, "Basis token");
    sw->add_option("--n", sw_n, "Intensity scale");
    sw->add_option("--runs", sw_runs, "Monte Carlo runs");
    sw->add_option("--j0", sw_j0, "Finest level (integer or log2n)");
    sw->add_option("--seed", sw_seed, "Master seed");
    sw->add_option("--workers", sw_workers, "Worker threads (0: all cores)");
    sw->add_option("--plan", sw_plan, "Plan file (key=value lines), overrides the flags above");
    add_common(sw);

    // table1
    std::string t1_signals, t1_bases = "haar,spline15", t1_n = "64,256,1024,4096";
    std::string t1_j0 = "10", t1_variant = "simulation", t1_plan, t1_per_run;
    std::int64_t t1_runs = 100;
    double t1_gamma = 1.0;
    std::uint64_t t1_seed = 1;
    int t1_workers = 0;
    CLI::App* t1 = app.add_subcommand("table1", "Aggregate oracle-ratio table over signal cells");
    t1->add_option("--signals", t1_signals, "Comma list of signal tokens (default: all)");
    t1->add_option("--basis,--bases", t1_bases, "Comma list of basis tokens");
    t1->add_option("--n", t1_n, "Comma list of intensity scales");
    t1->add_option("--runs", t1_runs, "Monte Carlo runs per cell");
    t1->add_option("--gamma", t1_gamma, "Threshold tuning constant");
    t1->add_option("--j0", t1_j0, "Finest level (integer or log2n)");
    t1->add_option("--variant", t1_variant, "Threshold variant")
        ->check(CLI::IsMember({"theorem", "simulation"}));
    t1->add_option("--seed", t1_seed, "Master seed");
    t1->add_option("--workers", t1_workers, "Worker threads (0: all cores)");
    t1->add_option("--plan", t1_plan, "Plan file (key=value lines), overrides the flags above");
    t1->add_option("--per-run-out", t1_per_run, "Also write per-run rows to this CSV file");
    add_common(t1);

    // probes
    std::string pr_which = "both", pr_lower_n = "256,1024,4096", pr_lower_gammas = "0.5,1.5";
    std::string pr_uppth_gammas = "2.4142135623730951,16";
    std::int64_t pr_uppth_n = 1024, pr_runs = 200;
    double pr_gamma_min = 1.0 + std::sqrt(2.0);
    std::uint64_t pr_seed = 1;
    int pr_workers = 0;
    CLI::App* pr = app.add_subcommand("probes", "Calibration direction checks");
    pr->add_option("--which", pr_which, "lower, uppth, or both")
        ->check(CLI::IsMember({"lower", "uppth", "both"}));
    pr->add_option("--lower-n", pr_lower_n, "Comma list of n for the lower probe");
    pr->add_option("--lower-gammas", pr_lower_gammas, "Comma list of gammas for the lower probe");
    pr->add_option("--uppth-n", pr_uppth_n, "n for the adversarial probe");
    pr->add_option("--gamma-min", pr_gamma_min, "Adversary target gamma_min");
    pr->add_option("--uppth-gammas", pr_uppth_gammas, "Comma list of gammas for the adversary");
    pr->add_option("--runs", pr_runs, "Monte Carlo runs");
    pr->add_option("--seed", pr_seed, "Master seed");
    pr->add_option("--workers", pr_workers, "Worker threads (0: all cores)");
    add_common(pr);

    // dump-basis
    std::string db_basis;
    double db_dual_step = 0.0;
    CLI::App* db = app.add_subcommand("dump-basis", "Emit basis breakpoints, values and filters");
    db->add_option("--basis", db_basis, "Basis token")->required();
    db->add_option("--dual-step", db_dual_step,
                   "Also sample the dual scaling function at this step (> 0)");
    add_common(db);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(sim))
            return cmd_simulate(sim_signal, sim_n, sim_seed, out, format);
        if (app.got_subcommand(est))
            return cmd_estimate(est_signal, est_basis, est_n, est_gamma, est_j0, est_variant,
                                est_seed, est_points, est_grid, est_grid_out, out, format);
        if (app.got_subcommand(sw)) {
            ExperimentPlan plan;
            if (!sw_plan.empty()) {
                plan = ExperimentPlan::parse_file(sw_plan);
            } else {
                plan.signals = {sw_signal};
                plan.bases = {sw_basis};
                plan.n_values = {sw_n};
                plan.runs = sw_runs;
                if (sw_j0 == "log2n") {
                    plan.j0_policy = ExperimentPlan::J0Policy::Log2N;
                } else {
                    plan.j0_policy = ExperimentPlan::J0Policy::Fixed;
                    plan.j0_fixed = parse_j0(sw_j0, sw_n);
                }
                plan.master_seed = sw_seed;
            }
            plan.workers = sw_workers;
            return cmd_sweep(plan, out, format);
        }
        if (app.got_subcommand(t1)) {
            ExperimentPlan plan;
            if (!t1_plan.empty()) {
                plan = ExperimentPlan::parse_file(t1_plan);
            } else {
                plan.signals = t1_signals.empty() ? Signal::tokens() : split_csv(t1_signals);
                plan.bases = split_csv(t1_bases);
                plan.n_values.clear();
                for (const auto& tok : split_csv(t1_n)) plan.n_values.push_back(std::stoll(tok));
                plan.gammas = {t1_gamma};
                plan.runs = t1_runs;
                if (t1_j0 == "log2n") {
                    plan.j0_policy = ExperimentPlan::J0Policy::Log2N;
                } else {
                    plan.j0_policy = ExperimentPlan::J0Policy::Fixed;
                    plan.j0_fixed = std::stoi(t1_j0);
                }
                plan.variant = variant_from_token(t1_variant);
                plan.master_seed = t1_seed;
            }
            plan.workers = t1_workers;
            return cmd_table1(plan, t1_per_run, out, format);
        }
        if (app.got_subcommand(pr)) {
            std::vector<std::int64_t> lower_n;
            for (const auto& tok : split_csv(pr_lower_n)) lower_n.push_back(std::stoll(tok));
            std::vector<double> lower_gammas;
            for (const auto& tok : split_csv(pr_lower_gammas)) lower_gammas.push_back(std::stod(tok));
            std::vector<double> uppth_gammas;
            for (const auto& tok : split_csv(pr_uppth_gammas)) uppth_gammas.push_back(std::stod(tok));
            return cmd_probes(pr_which, lower_n, lower_gammas, pr_uppth_n, pr_gamma_min,
                              uppth_gammas, pr_runs, pr_seed, pr_workers, out, format);
        }
        if (app.got_subcommand(db)) return cmd_dump_basis(db_basis, db_dual_step, out, format);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
