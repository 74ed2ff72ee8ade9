#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gar/backtest.hpp"
#include "gar/baseline.hpp"
#include "gar/cli.hpp"
#include "gar/dataset.hpp"
#include "gar/errors.hpp"
#include "gar/extreme.hpp"
#include "gar/kernel.hpp"
#include "gar/quantile_regression.hpp"
#include "gar/simulation.hpp"
#include "gar/skew_t.hpp"
#include "gar/tail_index.hpp"
#include "gar/threshold.hpp"

namespace py = pybind11;
using namespace gar;

PYBIND11_MODULE(_gar, m) {
    m.doc() = "tail-risk forecasting for growth-at-risk";

    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
    py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);

    py::enum_<TailSide>(m, "TailSide")
        .value("Upper", TailSide::Upper)
        .value("Lower", TailSide::Lower);

    py::enum_<KernelType>(m, "KernelType")
        .value("Gaussian", KernelType::Gaussian)
        .value("Epanechnikov", KernelType::Epanechnikov);

    py::class_<CsvSchema>(m, "CsvSchema")
        .def(py::init<>())
        .def_readwrite("timestamp", &CsvSchema::timestamp)
        .def_readwrite("response", &CsvSchema::response)
        .def_readwrite("covariates", &CsvSchema::covariates);

    py::class_<TimeSeriesDataset>(m, "TimeSeriesDataset")
        .def(py::init<>())
        .def_readwrite("timestamps", &TimeSeriesDataset::timestamps)
        .def_readwrite("y", &TimeSeriesDataset::y)
        .def_readwrite("x", &TimeSeriesDataset::x)
        .def_readwrite("covariate_names", &TimeSeriesDataset::covariate_names)
        .def_readwrite("timestamp_name", &TimeSeriesDataset::timestamp_name)
        .def_readwrite("response_name", &TimeSeriesDataset::response_name)
        .def("__len__", &TimeSeriesDataset::size)
        .def_property_readonly("covariate_dim", &TimeSeriesDataset::covariate_dim);

    py::class_<PredictorResponsePairs>(m, "PredictorResponsePairs")
        .def(py::init<>())
        .def_readwrite("x", &PredictorResponsePairs::x)
        .def_readwrite("y", &PredictorResponsePairs::y)
        .def_readwrite("horizon", &PredictorResponsePairs::horizon)
        .def("__len__", &PredictorResponsePairs::n_pairs)
        .def_property_readonly("n_pairs", &PredictorResponsePairs::n_pairs)
        .def_property_readonly("n_coef", &PredictorResponsePairs::n_coef);

    m.def("load_dataset", &load_dataset, py::arg("path"), py::arg("schema") = CsvSchema{});
    m.def("parse_dataset_csv", &parse_dataset_csv, py::arg("text"),
          py::arg("schema") = CsvSchema{});
    m.def("write_dataset", &write_dataset, py::arg("dataset"), py::arg("path"));
    m.def("dataset_to_csv", &dataset_to_csv);
    m.def("align_horizon", &align_horizon, py::arg("dataset"), py::arg("horizon"));

    py::class_<TailFit>(m, "TailFit")
        .def_readonly("side", &TailFit::side)
        .def_readonly("beta", &TailFit::beta)
        .def_readonly("threshold", &TailFit::threshold)
        .def_readonly("median", &TailFit::median)
        .def_readonly("n_exceed", &TailFit::n_exceed)
        .def_readonly("converged", &TailFit::converged)
        .def_readonly("iterations", &TailFit::iterations);

    m.def("tail_objective", &tail_objective, py::arg("beta"), py::arg("pairs"), py::arg("side"),
          py::arg("threshold"), py::arg("median"));
    m.def("tail_objective_gradient", &tail_objective_gradient, py::arg("beta"), py::arg("pairs"),
          py::arg("side"), py::arg("threshold"), py::arg("median"));
    m.def(
        "fit_tail_index",
        [](const PredictorResponsePairs& pairs, TailSide side, double threshold) {
            return fit_tail_index(pairs, side, threshold);
        },
        py::arg("pairs"), py::arg("side"), py::arg("threshold"));
    m.def("tail_exponent_at", &tail_exponent_at, py::arg("fit"), py::arg("x0"));

    py::class_<KernelSpec>(m, "KernelSpec")
        .def(py::init<>())
        .def_readwrite("kernel", &KernelSpec::kernel)
        .def_readwrite("bandwidths", &KernelSpec::bandwidths)
        .def_readwrite("kernel_l2", &KernelSpec::kernel_l2);

    m.def("bandwidth_rule", &bandwidth_rule, py::arg("pairs"), py::arg("scale") = 1.0,
          py::arg("kernel") = KernelType::Gaussian);
    m.def("conditional_cdf", &conditional_cdf, py::arg("pairs"), py::arg("y"), py::arg("x0"),
          py::arg("spec"));
    m.def("covariate_density", &covariate_density, py::arg("pairs"), py::arg("x0"),
          py::arg("spec"));

    py::class_<EstimateWithSE>(m, "EstimateWithSE")
        .def_readonly("estimate", &EstimateWithSE::estimate)
        .def_readonly("se", &EstimateWithSE::se)
        .def_readonly("v_at_x0", &EstimateWithSE::v_at_x0)
        .def_readonly("cdf_at_threshold", &EstimateWithSE::cdf_at_threshold)
        .def_readonly("effective_n", &EstimateWithSE::effective_n)
        .def_readonly("sigma_f", &EstimateWithSE::sigma_f)
        .def_readonly("near_nonexistence", &EstimateWithSE::near_nonexistence);

    m.def("sigma_f", &sigma_f, py::arg("cdf_value"), py::arg("density_value"),
          py::arg("kernel_l2"));
    m.def("extreme_quantile", &extreme_quantile, py::arg("fit"), py::arg("pairs"), py::arg("x0"),
          py::arg("tau"), py::arg("spec"));
    m.def("expected_tail", &expected_tail, py::arg("fit"), py::arg("quantile"), py::arg("x0"));

    py::class_<ThresholdSearchResult>(m, "ThresholdSearchResult")
        .def_readonly("chosen", &ThresholdSearchResult::chosen)
        .def_readonly("chosen_index", &ThresholdSearchResult::chosen_index)
        .def_readonly("grid", &ThresholdSearchResult::grid)
        .def_readonly("levels", &ThresholdSearchResult::levels)
        .def_readonly("discrepancies", &ThresholdSearchResult::discrepancies)
        .def_readonly("tail_sizes", &ThresholdSearchResult::tail_sizes)
        .def_readonly("admissible", &ThresholdSearchResult::admissible);

    m.def("pit_values", &pit_values, py::arg("fit"), py::arg("pairs"));
    m.def("discrepancy", &discrepancy, py::arg("u"));
    m.def(
        "select_threshold",
        [](const PredictorResponsePairs& pairs, TailSide side,
           const std::vector<double>& grid_quantiles, Eigen::Index min_exceed) {
            ThresholdSearchOptions opts;
            opts.grid_quantiles = grid_quantiles;
            opts.min_exceed = min_exceed;
            return select_threshold(pairs, side, opts);
        },
        py::arg("pairs"), py::arg("side"), py::arg("grid_quantiles") = std::vector<double>{},
        py::arg("min_exceed") = 0);

    py::class_<SkewTParams>(m, "SkewTParams")
        .def(py::init<>())
        .def(py::init([](double mu, double sigma, double alpha, double nu) {
                 return SkewTParams{mu, sigma, alpha, nu};
             }),
             py::arg("mu"), py::arg("sigma"), py::arg("alpha"), py::arg("nu"))
        .def_readwrite("mu", &SkewTParams::mu)
        .def_readwrite("sigma", &SkewTParams::sigma)
        .def_readwrite("alpha", &SkewTParams::alpha)
        .def_readwrite("nu", &SkewTParams::nu);

    py::class_<SkewTDist>(m, "SkewTDist")
        .def(py::init<const SkewTParams&>(), py::arg("params"))
        .def_property_readonly("params", &SkewTDist::params)
        .def("pdf", &SkewTDist::pdf)
        .def("cdf", &SkewTDist::cdf)
        .def("quantile", &SkewTDist::quantile)
        .def("expected_tail", &SkewTDist::expected_tail, py::arg("pi"), py::arg("side"));

    m.def("skewt_pdf", &skewt_pdf);
    m.def("skewt_cdf", &skewt_cdf);
    m.def("skewt_quantile", &skewt_quantile);
    m.def("skewt_expected_tail", &skewt_expected_tail);

    m.def("check_loss", &check_loss, py::arg("pairs"), py::arg("beta"), py::arg("tau"));
    m.def("quantile_regression", &quantile_regression, py::arg("pairs"), py::arg("tau"));

    py::class_<QuantileGridFit>(m, "QuantileGridFit")
        .def_readonly("taus", &QuantileGridFit::taus)
        .def_readonly("betas", &QuantileGridFit::betas);

    m.def("default_tau_grid", &default_tau_grid);
    m.def("fit_quantile_grid", &fit_quantile_grid, py::arg("pairs"),
          py::arg("taus") = default_tau_grid());
    m.def("grid_quantiles_at", &grid_quantiles_at, py::arg("grid"), py::arg("x0"));
    m.def("fit_skewt_to_quantile_values", &fit_skewt_to_quantile_values, py::arg("taus"),
          py::arg("quantiles"));
    m.def("fit_skewt_to_quantiles", &fit_skewt_to_quantiles, py::arg("grid"), py::arg("x0"));
    m.def("baseline_fit_at", &baseline_fit_at, py::arg("pairs"), py::arg("x0"),
          py::arg("taus") = default_tau_grid());

    py::class_<CoeffTriple>(m, "CoeffTriple")
        .def(py::init([](double c0, double c1, double c2) {
                 return CoeffTriple{c0, c1, c2};
             }),
             py::arg("c0"), py::arg("c1"), py::arg("c2"))
        .def_readwrite("c0", &CoeffTriple::c0)
        .def_readwrite("c1", &CoeffTriple::c1)
        .def_readwrite("c2", &CoeffTriple::c2);

    py::class_<DgpSpec>(m, "DgpSpec")
        .def_static("quarter_ahead", &DgpSpec::quarter_ahead)
        .def_static("year_ahead", &DgpSpec::year_ahead)
        .def_readwrite("m_x", &DgpSpec::m_x)
        .def_readwrite("s_x", &DgpSpec::s_x)
        .def_readwrite("d_x", &DgpSpec::d_x)
        .def_readwrite("mu", &DgpSpec::mu)
        .def_readwrite("log_sigma", &DgpSpec::log_sigma)
        .def_readwrite("alpha", &DgpSpec::alpha)
        .def_readwrite("log_nu", &DgpSpec::log_nu)
        .def_readwrite("label", &DgpSpec::label)
        .def_readwrite("horizon", &DgpSpec::horizon)
        .def("theta_at", &DgpSpec::theta_at, py::arg("x1"), py::arg("x2"));

    m.def("sample_covariates", &sample_covariates, py::arg("spec"), py::arg("n"),
          py::arg("seed"));
    m.def("sample_dataset", &sample_dataset, py::arg("spec"), py::arg("n"), py::arg("seed"));

    py::class_<McTarget> mc_target(m, "McTarget");
    py::enum_<McTarget::Kind>(mc_target, "Kind")
        .value("Quantile", McTarget::Kind::Quantile)
        .value("Shortfall", McTarget::Kind::Shortfall)
        .value("Longrise", McTarget::Kind::Longrise);
    mc_target
        .def(py::init([](McTarget::Kind kind, double level) {
                 return McTarget{kind, level};
             }),
             py::arg("kind"), py::arg("level"))
        .def_readwrite("kind", &McTarget::kind)
        .def_readwrite("level", &McTarget::level)
        .def("name", &McTarget::name);

    py::class_<McConfig>(m, "McConfig")
        .def(py::init<>())
        .def_readwrite("targets", &McConfig::targets)
        .def_readwrite("sample_sizes", &McConfig::sample_sizes)
        .def_readwrite("reps", &McConfig::reps)
        .def_readwrite("seed", &McConfig::seed)
        .def_readwrite("run_new", &McConfig::run_new)
        .def_readwrite("run_old", &McConfig::run_old)
        .def_readwrite("threads", &McConfig::threads)
        .def_readwrite("upper_threshold_quantile", &McConfig::upper_threshold_quantile)
        .def_readwrite("lower_threshold_quantile", &McConfig::lower_threshold_quantile)
        .def_readwrite("bandwidth_scale", &McConfig::bandwidth_scale);

    py::class_<McRow>(m, "McRow")
        .def_readonly("method", &McRow::method)
        .def_readonly("target", &McRow::target)
        .def_readonly("sample_size", &McRow::sample_size)
        .def_readonly("mean", &McRow::mean)
        .def_readonly("iqr_lo", &McRow::iqr_lo)
        .def_readonly("iqr_hi", &McRow::iqr_hi)
        .def_readonly("rmse", &McRow::rmse)
        .def_readonly("truth", &McRow::truth)
        .def_readonly("failures", &McRow::failures);

    py::class_<McSummary>(m, "McSummary")
        .def_readonly("rows", &McSummary::rows)
        .def_readonly("x0", &McSummary::x0);

    m.def("run_monte_carlo", &run_monte_carlo, py::arg("spec"), py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
    m.def("mc_summary_to_csv", &mc_summary_to_csv);

    py::class_<BacktestConfig>(m, "BacktestConfig")
        .def(py::init<>())
        .def_readwrite("tau_low", &BacktestConfig::tau_low)
        .def_readwrite("tau_high", &BacktestConfig::tau_high)
        .def_readwrite("run_new", &BacktestConfig::run_new)
        .def_readwrite("run_old", &BacktestConfig::run_old)
        .def_readwrite("select_thresholds", &BacktestConfig::select_thresholds)
        .def_readwrite("upper_threshold_quantile", &BacktestConfig::upper_threshold_quantile)
        .def_readwrite("lower_threshold_quantile", &BacktestConfig::lower_threshold_quantile)
        .def_readwrite("bandwidth_scale", &BacktestConfig::bandwidth_scale)
        .def_readwrite("threads", &BacktestConfig::threads);

    py::class_<BacktestRow>(m, "BacktestRow")
        .def_readonly("period", &BacktestRow::period)
        .def_readonly("train_len", &BacktestRow::train_len)
        .def_readonly("realized", &BacktestRow::realized)
        .def_readonly("q_low_new", &BacktestRow::q_low_new)
        .def_readonly("q_high_new", &BacktestRow::q_high_new)
        .def_readonly("q_low_old", &BacktestRow::q_low_old)
        .def_readonly("q_high_old", &BacktestRow::q_high_old)
        .def_readonly("thr_lower", &BacktestRow::thr_lower)
        .def_readonly("thr_upper", &BacktestRow::thr_upper)
        .def_readonly("new_ok", &BacktestRow::new_ok)
        .def_readonly("old_ok", &BacktestRow::old_ok)
        .def_readonly("note", &BacktestRow::note);

    py::class_<BacktestReport>(m, "BacktestReport")
        .def_readonly("rows", &BacktestReport::rows)
        .def_readonly("horizon", &BacktestReport::horizon)
        .def_readonly("min_train", &BacktestReport::min_train)
        .def_readonly("config", &BacktestReport::config);

    py::class_<CoverageRow>(m, "CoverageRow")
        .def_readonly("method", &CoverageRow::method)
        .def_readonly("n_pred", &CoverageRow::n_pred)
        .def_readonly("n_below", &CoverageRow::n_below)
        .def_readonly("n_above", &CoverageRow::n_above)
        .def_readonly("freq_below", &CoverageRow::freq_below)
        .def_readonly("freq_above", &CoverageRow::freq_above);

    py::class_<CoverageTable>(m, "CoverageTable")
        .def_readonly("rows", &CoverageTable::rows)
        .def_readonly("intended_low", &CoverageTable::intended_low)
        .def_readonly("intended_high", &CoverageTable::intended_high);

    py::class_<ScenarioDensity>(m, "ScenarioDensity")
        .def_readonly("grid", &ScenarioDensity::grid)
        .def_readonly("density_old", &ScenarioDensity::density_old)
        .def_readonly("density_new", &ScenarioDensity::density_new)
        .def_readonly("marker_old", &ScenarioDensity::marker_old)
        .def_readonly("marker_new", &ScenarioDensity::marker_new)
        .def_readonly("marker_level", &ScenarioDensity::marker_level)
        .def_readonly("tail", &ScenarioDensity::tail)
        .def_readonly("threshold_new", &ScenarioDensity::threshold_new)
        .def_readonly("cdf_at_threshold", &ScenarioDensity::cdf_at_threshold);

    m.def("expanding_backtest", &expanding_backtest, py::arg("dataset"), py::arg("horizon"),
          py::arg("min_train"), py::arg("config") = BacktestConfig{},
          py::call_guard<py::gil_scoped_release>());
    m.def("coverage_table", &coverage_table, py::arg("report"));
    m.def("scenario_density", &scenario_density, py::arg("dataset"), py::arg("horizon"),
          py::arg("x_scenario"), py::arg("tail"), py::arg("grid"),
          py::arg("config") = BacktestConfig{});
    m.def("backtest_report_to_csv", &backtest_report_to_csv);
    m.def("coverage_table_to_csv", &coverage_table_to_csv);
    m.def("scenario_density_to_csv", &scenario_density_to_csv);

    m.def("run_command", &run_command, py::arg("args"),
          "run a CLI invocation in-process; returns the exit code");
}
