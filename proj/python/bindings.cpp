#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "poisswave/estimator.hpp"
#include "poisswave/harness.hpp"
#include "poisswave/metrics.hpp"
#include "poisswave/signals.hpp"
#include "poisswave/wavelet.hpp"

namespace py = pybind11;
using namespace poisswave;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Wavelet threshold estimation of Poisson process intensities";

    py::class_<PointProcess>(m, "PointProcess")
        .def(py::init<>())
        .def_readwrite("n", &PointProcess::n)
        .def_readwrite("points", &PointProcess::points);

    py::class_<Signal>(m, "Signal")
        .def_static("from_token", &Signal::from_token)
        .def_static("tokens", &Signal::tokens)
        .def_static("uppth_adversary", &Signal::uppth_adversary, py::arg("n"), py::arg("gamma"),
                    py::arg("gamma_min"), py::arg("alpha") = 0)
        .def_property_readonly("token", &Signal::token)
        .def_property_readonly("mass", &Signal::mass)
        .def_property_readonly("support_lo", &Signal::support_lo)
        .def_property_readonly("support_hi", &Signal::support_hi)
        .def("density", &Signal::density)
        .def("cdf", &Signal::cdf)
        .def("quantile", &Signal::quantile)
        .def("tail_cut", &Signal::tail_cut)
        .def("head_cut", &Signal::head_cut)
        .def("sample", &Signal::sample, py::arg("n"), py::arg("seed"));

    py::class_<LambdaIndex>(m, "LambdaIndex")
        .def(py::init([](int j, std::int64_t k) { return LambdaIndex{j, k}; }), py::arg("j"),
             py::arg("k"))
        .def_readwrite("j", &LambdaIndex::j)
        .def_readwrite("k", &LambdaIndex::k)
        .def("__repr__", [](const LambdaIndex& l) {
            return "LambdaIndex(j=" + std::to_string(l.j) + ", k=" + std::to_string(l.k) + ")";
        });

    py::class_<BiorthBasis, std::unique_ptr<BiorthBasis, py::nodelete>>(m, "BiorthBasis")
        .def_static("from_token", &BiorthBasis::from_token, py::return_value_policy::reference)
        .def_static("tokens", &BiorthBasis::tokens)
        .def_property_readonly("token", &BiorthBasis::token)
        .def_property_readonly("vanishing_degree", &BiorthBasis::vanishing_degree)
        .def("sup_norm", &BiorthBasis::sup_norm)
        .def("support_lo", &BiorthBasis::support_lo)
        .def("support_hi", &BiorthBasis::support_hi)
        .def("eval_analysis", &BiorthBasis::eval_analysis)
        .def("eval_dual", &BiorthBasis::eval_dual);

    m.def("true_coeff", &true_coeff);
    m.def("true_sigma2", &true_sigma2);
    m.def("reconstruct", &reconstruct);

    py::class_<CoeffRecord>(m, "CoeffRecord")
        .def_readonly("lam", &CoeffRecord::lambda)
        .def_readonly("beta_hat", &CoeffRecord::beta_hat)
        .def_readonly("v_hat", &CoeffRecord::v_hat)
        .def_readonly("v_tilde", &CoeffRecord::v_tilde)
        .def_readonly("eta", &CoeffRecord::eta)
        .def_readonly("kept", &CoeffRecord::kept)
        .def_readonly("beta_true", &CoeffRecord::beta_true)
        .def_readonly("sigma2_true", &CoeffRecord::sigma2_true);

    py::class_<CoeffTable>(m, "CoeffTable")
        .def_readonly("n", &CoeffTable::n)
        .def_readonly("basis", &CoeffTable::basis)
        .def_readonly("j0", &CoeffTable::j0)
        .def_readonly("records", &CoeffTable::records);

    py::class_<GammaNConfig>(m, "GammaNConfig")
        .def(py::init([](int j0, double gamma, const std::string& variant) {
                 return GammaNConfig{j0, gamma, variant_from_token(variant)};
             }),
             py::arg("j0"), py::arg("gamma") = 1.0, py::arg("variant") = "simulation")
        .def_readwrite("j0", &GammaNConfig::j0)
        .def_readwrite("gamma", &GammaNConfig::gamma);

    m.def("estimate", &estimate);
    m.def("accumulate", &accumulate);

    py::class_<TruthSummary>(m, "TruthSummary")
        .def_readonly("oracle_denom", &TruthSummary::oracle_denom)
        .def_readonly("oracle_log_denom", &TruthSummary::oracle_log_denom)
        .def_readonly("beta_sq_total", &TruthSummary::beta_sq_total)
        .def_readonly("tail_energy", &TruthSummary::tail_energy);

    m.def("compute_truth", &compute_truth, py::arg("f"), py::arg("basis"), py::arg("n"),
          py::arg("j0"), py::arg("tail_eps") = 1e-12);
    m.def("attach_truth", &attach_truth);

    py::class_<RiskBreakdown>(m, "RiskBreakdown")
        .def_readonly("r_n", &RiskBreakdown::r_n)
        .def_readonly("R_n", &RiskBreakdown::R_n)
        .def_readonly("R_n_log", &RiskBreakdown::R_n_log)
        .def_readonly("oracle_denom", &RiskBreakdown::oracle_denom)
        .def_readonly("oracle_log_denom", &RiskBreakdown::oracle_log_denom)
        .def_readonly("tail_energy", &RiskBreakdown::tail_energy);

    m.def("risk_breakdown", &risk_breakdown);

    py::class_<ExperimentPlan> plan(m, "ExperimentPlan");
    plan.def(py::init<>())
        .def_readwrite("signals", &ExperimentPlan::signals)
        .def_readwrite("bases", &ExperimentPlan::bases)
        .def_readwrite("n_values", &ExperimentPlan::n_values)
        .def_readwrite("gammas", &ExperimentPlan::gammas)
        .def_readwrite("runs", &ExperimentPlan::runs)
        .def_readwrite("j0_fixed", &ExperimentPlan::j0_fixed)
        .def_readwrite("master_seed", &ExperimentPlan::master_seed)
        .def_readwrite("workers", &ExperimentPlan::workers)
        .def("set_j0_fixed",
             [](ExperimentPlan& p, int j0) {
                 p.j0_policy = ExperimentPlan::J0Policy::Fixed;
                 p.j0_fixed = j0;
             })
        .def("to_text", &ExperimentPlan::to_text);

    py::class_<CellAggregate>(m, "CellAggregate")
        .def_readonly("signal", &CellAggregate::signal)
        .def_readonly("basis", &CellAggregate::basis)
        .def_readonly("n", &CellAggregate::n)
        .def_readonly("gamma", &CellAggregate::gamma)
        .def_readonly("runs", &CellAggregate::runs)
        .def_readonly("mean_r", &CellAggregate::mean_r)
        .def_readonly("se_r", &CellAggregate::se_r)
        .def_readonly("mean_R", &CellAggregate::mean_R)
        .def_readonly("se_R", &CellAggregate::se_R)
        .def_readonly("mean_R_log", &CellAggregate::mean_R_log)
        .def_readonly("se_R_log", &CellAggregate::se_R_log);

    py::class_<SweepCell>(m, "SweepCell")
        .def_readonly("signal", &SweepCell::signal)
        .def_readonly("basis", &SweepCell::basis)
        .def_readonly("n", &SweepCell::n)
        .def_readonly("runs", &SweepCell::runs)
        .def_readonly("gamma_min", &SweepCell::gamma_min)
        .def_readonly("min_value", &SweepCell::min_value)
        .def_readonly("curve_gamma", &SweepCell::curve_gamma)
        .def_readonly("curve_mean_R", &SweepCell::curve_mean_R);

    py::class_<ExperimentReport>(m, "ExperimentReport")
        .def_readonly("cells", &ExperimentReport::cells)
        .def_readonly("sweeps", &ExperimentReport::sweeps);

    m.def("run_plan", &run_plan, py::arg("plan"), py::arg("keep_per_run") = false);
    m.def("sweep_gamma", &sweep_gamma);
    m.def("sweep_value_at", &sweep_value_at);
    m.def("csv_cells", &csv_cells);
    m.def("json_summary", &json_summary);
    m.def("child_seed", &child_seed);
    m.def("splitmix64", &splitmix64);
}
