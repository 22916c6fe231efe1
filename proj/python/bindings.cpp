#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <string>
#include <vector>

#include "cusplab/coeff_engine.hpp"
#include "cusplab/error.hpp"
#include "cusplab/exp_sums.hpp"
#include "cusplab/experiment.hpp"
#include "cusplab/meansquare.hpp"
#include "cusplab/oscillatory.hpp"
#include "cusplab/rational.hpp"
#include "cusplab/voronoi.hpp"
#include "cusplab/weight.hpp"

namespace py = pybind11;
using namespace cusplab;

namespace {

py::int_ to_py_int(Int128 v) {
  return py::int_(py::reinterpret_steal<py::object>(PyLong_FromString(to_string(v).c_str(), nullptr, 10)));
}

py::array_t<double> as_array(std::span<const double> values) {
  py::array_t<double> out(static_cast<py::ssize_t>(values.size()));
  std::copy(values.begin(), values.end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Short-interval exponential sums of cusp form coefficients";
  m.attr("__version__") = kVersion;

  // Base first so the subclasses can name it.
  static py::exception<Error> base_error(m, "CusplabError");
  static py::exception<ValidationError> validation_error(m, "ValidationError", base_error.ptr());
  static py::exception<TableTooShort> table_too_short(m, "TableTooShort", validation_error.ptr());
  static py::exception<OverflowError> overflow_error(m, "CoefficientOverflow", base_error.ptr());
  static py::exception<BudgetExceeded> budget_exceeded(m, "BudgetExceeded", base_error.ptr());
  static py::exception<IoError> io_error(m, "IoError", base_error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const TableTooShort& e) {
      table_too_short(e.what());
    } catch (const ValidationError& e) {
      validation_error(e.what());
    } catch (const OverflowError& e) {
      overflow_error(e.what());
    } catch (const BudgetExceeded& e) {
      budget_exceeded(e.what());
    } catch (const IoError& e) {
      io_error(e.what());
    } catch (const Error& e) {
      base_error(e.what());
    }
  });

  // ------------------------------------------------------------ coefficients
  py::class_<CoefficientTable>(m, "CoefficientTable")
      .def_property_readonly("weight", &CoefficientTable::weight)
      .def("__len__", &CoefficientTable::size)
      .def_property_readonly("size", &CoefficientTable::size)
      .def("tau", [](const CoefficientTable& t, std::int64_t n) {
        if (n < 1 || n > t.size()) throw py::index_error("n out of range");
        return to_py_int(t.tau(n));
      })
      .def("a", [](const CoefficientTable& t, std::int64_t n) {
        if (n < 1 || n > t.size()) throw py::index_error("n out of range");
        return t.a(n);
      })
      .def("normalized_values", [](const CoefficientTable& t) { return as_array(t.a_values()); },
           "a(1..N) as a float64 array")
      .def("checksum", &tau_checksum);

  m.def("generate_tau", &generate_tau, py::arg("n_max"), py::call_guard<py::gil_scoped_release>());
  m.def("save_cache", &save_cache, py::arg("table"), py::arg("path"));
  m.def("load_cache", [](const std::filesystem::path& path) { return load_cache(path); }, py::arg("path"));

  py::class_<DeligneReport>(m, "DeligneReport")
      .def_readonly("max_ratio", &DeligneReport::max_ratio)
      .def_readonly("argmax", &DeligneReport::argmax)
      .def_readonly("first_violation", &DeligneReport::first_violation);
  m.def("deligne_check", &deligne_check, py::arg("table"));

  // ------------------------------------------------------------ rationals
  py::class_<RationalPoint>(m, "RationalPoint")
      .def(py::init(&RationalPoint::make), py::arg("h"), py::arg("k"))
      .def_property_readonly("h", &RationalPoint::h)
      .def_property_readonly("k", &RationalPoint::k)
      .def_property_readonly("h_bar", &RationalPoint::h_bar)
      .def_property_readonly("value", &RationalPoint::value)
      .def("__eq__", [](const RationalPoint& a, const RationalPoint& b) { return a == b; })
      .def("__repr__", [](const RationalPoint& p) {
        return "RationalPoint(" + std::to_string(p.h()) + ", " + std::to_string(p.k()) + ")";
      });
  m.def("e", &e, py::arg("x"));
  m.def("e_k", &e_k, py::arg("a"), py::arg("k"));

  // ------------------------------------------------------------ weight
  py::class_<WeightProfile>(m, "WeightProfile")
      .def(py::init<double, double, double, int>(), py::arg("M"), py::arg("delta"), py::arg("rise"),
           py::arg("smoothness_order") = 4)
      .def_static("with_default_rise", &WeightProfile::with_default_rise, py::arg("M"), py::arg("delta"))
      .def_property_readonly("M", &WeightProfile::M)
      .def_property_readonly("delta", &WeightProfile::delta)
      .def_property_readonly("rise", &WeightProfile::rise)
      .def("__call__", &WeightProfile::operator(), py::arg("x"))
      .def("__call__", [](const WeightProfile& w, py::array_t<double, py::array::c_style | py::array::forcecast> xs) {
        py::array_t<double> out(xs.request().shape);
        auto* dst = out.mutable_data();
        const auto* src = xs.data();
        for (py::ssize_t i = 0; i < xs.size(); ++i) dst[i] = w(src[i]);
        return out;
      });
  m.def("derivative_bound_report", &derivative_bound_report, py::arg("weight"), py::arg("n_max"),
        py::arg("grid_points") = 20000);

  // ------------------------------------------------------------ sums
  py::class_<Window>(m, "Window")
      .def_readonly("first", &Window::first)
      .def_readonly("last", &Window::last)
      .def("count", &Window::count);
  m.def("short_window", &short_window, py::arg("x"));
  m.def("short_sum", py::overload_cast<double, const RationalPoint&, const CoefficientTable&>(&short_sum),
        py::arg("x"), py::arg("point"), py::arg("table"));
  m.def("short_sum", py::overload_cast<double, double, const CoefficientTable&>(&short_sum), py::arg("x"),
        py::arg("alpha"), py::arg("table"));
  m.def("long_sum", py::overload_cast<double, const RationalPoint&, const CoefficientTable&>(&long_sum),
        py::arg("x"), py::arg("point"), py::arg("table"));
  m.def("long_sum", py::overload_cast<double, double, const CoefficientTable&>(&long_sum), py::arg("x"),
        py::arg("alpha"), py::arg("table"));
  m.def("breakpoints", &breakpoints, py::arg("M"), py::arg("delta"));

  py::class_<StepSeries>(m, "StepSeries")
      .def_readonly("edges", &StepSeries::edges)
      .def_readonly("values", &StepSeries::values)
      .def("pieces", &StepSeries::pieces)
      .def("__call__", &StepSeries::operator(), py::arg("x"));
  m.def("step_series", &step_series, py::arg("M"), py::arg("delta"), py::arg("point"), py::arg("table"));

  // ------------------------------------------------------------ dual sums
  py::enum_<PhaseConvention>(m, "PhaseConvention")
      .value("ZERO", PhaseConvention::kZero)
      .value("MINUS_QUARTER_PI", PhaseConvention::kMinusQuarterPi);
  m.def("voronoi_main_term",
        [](double x, const RationalPoint& point, std::int64_t n_trunc, PhaseConvention phase,
           const CoefficientTable& table) {
          return voronoi_main_term(x, VoronoiParams{point, n_trunc, phase}, table);
        },
        py::arg("x"), py::arg("point"), py::arg("n_trunc"), py::arg("phase") = PhaseConvention::kMinusQuarterPi,
        py::arg("table"));
  m.def("dual_constant_term", &dual_constant_term, py::arg("point"), py::arg("table"), py::arg("terms"));

  // ------------------------------------------------------------ oscillatory integrals
  py::enum_<PhaseFamily>(m, "PhaseFamily")
      .value("SUM", PhaseFamily::kSum)
      .value("DIFFERENCE", PhaseFamily::kDifference)
      .value("SHIFTED_DIFFERENCE", PhaseFamily::kShiftedDifference);
  py::enum_<Argument>(m, "Argument").value("PLAIN", Argument::kPlain).value("SHIFTED", Argument::kShifted);

  py::class_<PhaseSpec>(m, "PhaseSpec")
      .def(py::init([](PhaseFamily family, std::int64_t m_, std::int64_t n, const RationalPoint& point, int sign,
                       Argument arg_n, Argument arg_m) {
             return PhaseSpec{family, m_, n, point, sign, arg_n, arg_m};
           }),
           py::arg("family"), py::arg("m"), py::arg("n"), py::arg("point"), py::arg("sign") = 1,
           py::arg("arg_n") = Argument::kPlain, py::arg("arg_m") = Argument::kPlain)
      .def_readwrite("family", &PhaseSpec::family)
      .def_readwrite("m", &PhaseSpec::m)
      .def_readwrite("n", &PhaseSpec::n)
      .def_readwrite("sign", &PhaseSpec::sign)
      .def("conjugate", &PhaseSpec::conjugate);

  py::class_<QuadratureOptions>(m, "QuadratureOptions")
      .def(py::init<>())
      .def_readwrite("max_cycles", &QuadratureOptions::max_cycles)
      .def_readwrite("nodes_per_panel", &QuadratureOptions::nodes_per_panel)
      .def_readwrite("cycles_per_panel", &QuadratureOptions::cycles_per_panel)
      .def_readwrite("tolerance", &QuadratureOptions::tolerance)
      .def_readwrite("max_refinements", &QuadratureOptions::max_refinements);
  py::class_<QuadratureResult>(m, "QuadratureResult")
      .def_readonly("value", &QuadratureResult::value)
      .def_readonly("refinement_change", &QuadratureResult::refinement_change)
      .def_readonly("accurate", &QuadratureResult::accurate)
      .def_readonly("evaluations", &QuadratureResult::evaluations);
  m.def("oscillatory_integral", &oscillatory_integral, py::arg("weight"), py::arg("spec"),
        py::arg("options") = QuadratureOptions{}, py::call_guard<py::gil_scoped_release>());
  m.def("stated_bound", &stated_bound, py::arg("weight"), py::arg("spec"), py::arg("P"));

  py::class_<LemmaCheck>(m, "LemmaCheck")
      .def_readonly("integral", &LemmaCheck::integral)
      .def_readonly("bound", &LemmaCheck::bound)
      .def_readonly("ratio", &LemmaCheck::ratio)
      .def_readonly("certificate", &LemmaCheck::certificate)
      .def_readonly("accurate", &LemmaCheck::accurate);
  m.def("lemma_bound_check", &lemma_bound_check, py::arg("spec"), py::arg("P"), py::arg("weight"),
        py::arg("options") = QuadratureOptions{}, py::call_guard<py::gil_scoped_release>());

  // ------------------------------------------------------------ mean square
  py::enum_<IntegralMethod>(m, "IntegralMethod")
      .value("EXACT_STEP", IntegralMethod::kExactStep)
      .value("QUADRATURE", IntegralMethod::kQuadrature);
  py::class_<MeanSquareResult>(m, "MeanSquareResult")
      .def(py::init<>())
      .def_readwrite("M", &MeanSquareResult::M)
      .def_readwrite("delta", &MeanSquareResult::delta)
      .def_readwrite("point", &MeanSquareResult::point)
      .def_readwrite("integral", &MeanSquareResult::integral)
      .def_readwrite("ratio", &MeanSquareResult::ratio);
  m.def("theorem_integral", &theorem_integral, py::arg("weight"), py::arg("point"), py::arg("table"),
        py::arg("method") = IntegralMethod::kExactStep, py::call_guard<py::gil_scoped_release>());

  py::class_<DiagonalOptions>(m, "DiagonalOptions")
      .def(py::init<>())
      .def_readwrite("n_max", &DiagonalOptions::n_max)
      .def_readwrite("cycle_budget_per_n", &DiagonalOptions::cycle_budget_per_n)
      .def_readwrite("phase", &DiagonalOptions::phase)
      .def_readwrite("quadrature", &DiagonalOptions::quadrature);
  py::class_<DiagonalResult>(m, "DiagonalResult")
      .def_readonly("value", &DiagonalResult::value)
      .def_readonly("small_n_part", &DiagonalResult::small_n_part)
      .def_readonly("large_n_part", &DiagonalResult::large_n_part)
      .def_readonly("allowance", &DiagonalResult::allowance)
      .def_readonly("flagged", &DiagonalResult::flagged)
      .def_readonly("terms", &DiagonalResult::terms)
      .def_readonly("accurate", &DiagonalResult::accurate);
  m.def("diagonal_term", &diagonal_term, py::arg("weight"), py::arg("k"), py::arg("table"),
        py::arg("options") = DiagonalOptions{}, py::call_guard<py::gil_scoped_release>());

  py::class_<OmegaStatistic>(m, "OmegaStatistic")
      .def_property_readonly("Ms", [](const OmegaStatistic& s) {
        std::vector<double> v;
        for (const auto& r : s.rows) v.push_back(r.M);
        return v;
      })
      .def_property_readonly("normalized", [](const OmegaStatistic& s) {
        std::vector<double> v;
        for (const auto& r : s.rows) v.push_back(r.normalized);
        return v;
      })
      .def_readonly("max", &OmegaStatistic::max)
      .def_readonly("rms", &OmegaStatistic::rms);
  m.def("omega_statistic",
        [](const std::vector<double>& Ms, double delta, const CoefficientTable& table) {
          return omega_statistic(Ms, delta, table);
        },
        py::arg("Ms"), py::arg("delta"), py::arg("table"));
  m.def("seeded_window_starts", &seeded_window_starts, py::arg("seed"), py::arg("count"), py::arg("lo"),
        py::arg("hi"));

  py::class_<ExponentFit>(m, "ExponentFit")
      .def_readonly("alpha", &ExponentFit::alpha)
      .def_readonly("beta", &ExponentFit::beta)
      .def_readonly("C", &ExponentFit::C)
      .def_readonly("residual_rms", &ExponentFit::residual_rms);
  m.def("exponent_fit",
        [](const std::vector<MeanSquareResult>& results) { return exponent_fit(results); }, py::arg("results"));

  // ------------------------------------------------------------ experiments
  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_static("parse", [](const std::string& text) { return parse_config(text); }, py::arg("text"))
      .def_static("load", [](const std::filesystem::path& p) { return load_config(p); }, py::arg("path"))
      .def("text", [](const ExperimentConfig& c) { return config_text(c); })
      .def("hash", &config_hash)
      .def("validate", &validate)
      .def_readwrite("table_path", &ExperimentConfig::table_path)
      .def_readwrite("out_dir", &ExperimentConfig::out_dir)
      .def_readwrite("seed", &ExperimentConfig::seed)
      .def_readwrite("threads", &ExperimentConfig::threads)
      .def_readwrite("json", &ExperimentConfig::json)
      .def_readwrite("Ms", &ExperimentConfig::Ms)
      .def_readwrite("ks", &ExperimentConfig::ks)
      .def_readwrite("diagonal", &ExperimentConfig::diagonal)
      .def_readwrite("omega_windows", &ExperimentConfig::omega_windows)
      .def_readwrite("omega_delta", &ExperimentConfig::omega_delta)
      .def_readwrite("omega_max_M", &ExperimentConfig::omega_max_M);

  py::class_<MeanSquareRow>(m, "MeanSquareRow")
      .def_readonly("result", &MeanSquareRow::result)
      .def_readonly("rise", &MeanSquareRow::rise)
      .def_readonly("diagonal", &MeanSquareRow::diagonal);
  py::class_<MeanSquareSweep>(m, "MeanSquareSweep")
      .def_readonly("rows", &MeanSquareSweep::rows)
      .def_readonly("fit", &MeanSquareSweep::fit)
      .def_readonly("diagonal_fit", &MeanSquareSweep::diagonal_fit);
  m.def("run_meansquare", &run_meansquare, py::arg("config"), py::arg("table"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<OmegaRun>(m, "OmegaRun")
      .def_readonly("statistic", &OmegaRun::statistic)
      .def_readonly("threshold", &OmegaRun::threshold)
      .def_readonly("passed", &OmegaRun::passed);
  m.def("run_omega", &run_omega, py::arg("config"), py::arg("table"));
}
