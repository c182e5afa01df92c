#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "volterra/driver.hpp"
#include "volterra/experiment.hpp"
#include "volterra/fraclevy.hpp"
#include "volterra/kernel.hpp"
#include "volterra/process.hpp"
#include "volterra/regularity.hpp"

namespace py = pybind11;
using namespace volterra;

namespace {

std::string csv_string(const auto& report) {
  std::ostringstream os;
  report.write_csv(os);
  return os.str();
}

py::dict condition_dict(const ConditionTrace& c) {
  py::dict d;
  d["residuals"] = c.residuals;
  d["pass"] = c.pass;
  d["failure_reason"] = c.failure_reason;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Volterra-process simulation with jump drivers, fractional paths and "
      "path-regularity estimators";
  m.attr("__version__") = kVersion;

  py::register_exception<QuadratureError>(m, "QuadratureError");
  py::register_exception<ConfigError>(m, "ConfigError");

  py::enum_<KernelKind>(m, "KernelKind")
      .value("power", KernelKind::power)
      .value("power_log", KernelKind::power_log)
      .value("user_defined", KernelKind::user_defined);

  py::class_<Kernel>(m, "Kernel")
      .def_static("power", &Kernel::power, py::arg("rho"))
      .def_static("power_log", &Kernel::power_log, py::arg("rho"),
                  py::arg("eta"))
      .def_static(
          "user_defined",
          [](double rho, Kernel::Fn2 eval) {
            return Kernel::user_defined(rho, std::move(eval));
          },
          py::arg("rho"), py::arg("eval"))
      .def_property_readonly("index_rho", &Kernel::index_rho)
      .def_property_readonly("kind", &Kernel::kind)
      .def("eval", &Kernel::eval, py::arg("t"), py::arg("r"))
      .def("d_dr", &Kernel::d_dr, py::arg("t"), py::arg("r"))
      .def("d_dt", &Kernel::d_dt, py::arg("t"), py::arg("r"))
      .def("d2_dtdr", &Kernel::d2_dtdr, py::arg("t"), py::arg("r"))
      .def("d2_dr2", &Kernel::d2_dr2, py::arg("t"), py::arg("r"));

  m.def(
      "check_smooth_variation",
      [](const Kernel& k, double t_lo, double t_hi,
         const std::vector<double>& h_schedule, double tol) {
        const auto rep = check_smooth_variation(k, t_lo, t_hi, h_schedule, tol);
        py::dict d;
        d["h_schedule"] = rep.h_schedule;
        d["cond_a"] = condition_dict(rep.cond_a);
        d["cond_b"] = condition_dict(rep.cond_b);
        d["cond_c"] = condition_dict(rep.cond_c);
        d["cond_d"] = condition_dict(rep.cond_d);
        d["ratio_residual"] = rep.ratio_residual;
        d["pass"] = rep.all_pass();
        d["csv"] = csv_string(rep);
        return d;
      },
      py::arg("kernel"), py::arg("t_lo"), py::arg("t_hi"),
      py::arg("h_schedule"), py::arg("tol"));

  m.def("g_delta", &g_delta, py::arg("kernel"), py::arg("t"), py::arg("v"),
        py::arg("delta"));
  m.def("f_delta", &f_delta, py::arg("kernel"), py::arg("t"), py::arg("v"),
        py::arg("delta"));

  py::enum_<JumpLawKind>(m, "JumpLawKind")
      .value("normal", JumpLawKind::normal)
      .value("uniform", JumpLawKind::uniform)
      .value("two_point", JumpLawKind::two_point);

  py::class_<JumpLaw>(m, "JumpLaw")
      .def(py::init<>())
      .def_readwrite("kind", &JumpLaw::kind)
      .def_readwrite("mu", &JumpLaw::mu)
      .def_readwrite("sigma", &JumpLaw::sigma)
      .def_readwrite("a", &JumpLaw::a)
      .def_readwrite("b", &JumpLaw::b)
      .def_readwrite("p", &JumpLaw::p)
      .def_readwrite("x1", &JumpLaw::x1)
      .def_readwrite("x2", &JumpLaw::x2)
      .def("mean", &JumpLaw::mean)
      .def("variance", &JumpLaw::variance);

  py::enum_<DriverKind>(m, "DriverKind")
      .value("compound_poisson", DriverKind::compound_poisson)
      .value("cp_with_drift", DriverKind::cp_with_drift)
      .value("cp_with_diffusion", DriverKind::cp_with_diffusion)
      .value("deterministic_jumps", DriverKind::deterministic_jumps);

  py::class_<DriverSpec>(m, "DriverSpec")
      .def(py::init<>())
      .def_readwrite("kind", &DriverSpec::kind)
      .def_readwrite("jump_intensity", &DriverSpec::jump_intensity)
      .def_readwrite("jump_law", &DriverSpec::jump_law)
      .def_readwrite("drift_rate", &DriverSpec::drift_rate)
      .def_readwrite("diffusion_vol", &DriverSpec::diffusion_vol)
      .def_readwrite("diffusion_grid_step", &DriverSpec::diffusion_grid_step)
      .def_readwrite("seed", &DriverSpec::seed)
      .def_readwrite("jump_times", &DriverSpec::jump_times)
      .def_readwrite("jump_sizes", &DriverSpec::jump_sizes)
      .def("validate", &DriverSpec::validate)
      .def("validate_fractional", &DriverSpec::validate_fractional);

  py::class_<CadlagPath>(m, "CadlagPath")
      .def_property_readonly("t_begin", &CadlagPath::t_begin)
      .def_property_readonly("t_end", &CadlagPath::t_end)
      .def_property_readonly("drift_rate", &CadlagPath::drift_rate)
      .def_property_readonly("jump_times",
                             [](const CadlagPath& p) {
                               return std::vector<double>(
                                   p.jump_times().begin(),
                                   p.jump_times().end());
                             })
      .def_property_readonly("jump_sizes",
                             [](const CadlagPath& p) {
                               return std::vector<double>(
                                   p.jump_sizes().begin(),
                                   p.jump_sizes().end());
                             })
      .def("value", &CadlagPath::value, py::arg("t"))
      .def("left_value", &CadlagPath::left_value, py::arg("t"))
      .def("jump_at", &CadlagPath::jump_at, py::arg("t"))
      .def("sup_norm", &CadlagPath::sup_norm, py::arg("lo"), py::arg("hi"))
      .def("to_json", &CadlagPath::to_json)
      .def("csv", [](const CadlagPath& p) { return csv_string(p); });

  m.def("simulate", &simulate, py::arg("spec"), py::arg("t_begin"),
        py::arg("t_end"));
  m.def("make_two_sided", &make_two_sided, py::arg("spec_pos"),
        py::arg("spec_neg"), py::arg("T_neg"), py::arg("T_pos"));
  m.def("sup_jump", &sup_jump, py::arg("path"), py::arg("lo"), py::arg("hi"));

  m.def(
      "eval_direct",
      [](const Kernel& k, const CadlagPath& x, double t) {
        return eval_direct(k, x, t);
      },
      py::arg("kernel"), py::arg("path"), py::arg("t"));
  m.def(
      "eval_by_parts",
      [](const Kernel& k, const CadlagPath& x, double t) {
        return eval_by_parts(k, x, t);
      },
      py::arg("kernel"), py::arg("path"), py::arg("t"));

  py::class_<IncrementDecomposition>(m, "IncrementDecomposition")
      .def_readonly("t", &IncrementDecomposition::t)
      .def_readonly("delta", &IncrementDecomposition::delta)
      .def_readonly("j1", &IncrementDecomposition::j1)
      .def_readonly("j2", &IncrementDecomposition::j2)
      .def_readonly("total", &IncrementDecomposition::total);

  m.def(
      "decompose_increment",
      [](const Kernel& k, const CadlagPath& x, double t, double delta) {
        return decompose_increment(k, x, t, delta);
      },
      py::arg("kernel"), py::arg("path"), py::arg("t"), py::arg("delta"));
  m.def(
      "gdelta_functional",
      [](const Kernel& k, const CadlagPath& x, double t, double delta) {
        return gdelta_functional(k, x, t, delta);
      },
      py::arg("kernel"), py::arg("path"), py::arg("t"), py::arg("delta"));
  m.def(
      "fdelta_functional",
      [](const Kernel& k, const CadlagPath& x, double t, double delta) {
        return fdelta_functional(k, x, t, delta);
      },
      py::arg("kernel"), py::arg("path"), py::arg("t"), py::arg("delta"));

  py::class_<FracLevyPath>(m, "FracLevyPath")
      .def_readonly("d", &FracLevyPath::d)
      .def_readonly("grid", &FracLevyPath::grid)
      .def_readonly("values", &FracLevyPath::values)
      .def_readonly("m1_values", &FracLevyPath::m1_values)
      .def_readonly("m2_values", &FracLevyPath::m2_values)
      .def_readonly("truncation_T", &FracLevyPath::truncation_T)
      .def_readonly("truncation_bound", &FracLevyPath::truncation_bound)
      .def("csv", [](const FracLevyPath& p) { return csv_string(p); });

  m.def(
      "eval_fraclevy",
      [](const CadlagPath& l, double d, const std::vector<double>& grid,
         double T, double second_moment) {
        return eval_fraclevy(l, d, grid, T, second_moment);
      },
      py::arg("path"), py::arg("d"), py::arg("grid"), py::arg("T"),
      py::arg("second_moment") = 0.0);
  m.def("truncation_tail_bound", &truncation_tail_bound,
        py::arg("second_moment"), py::arg("d"), py::arg("t"), py::arg("T"),
        py::arg("delta_max"));
  m.def("default_truncation_T", &default_truncation_T,
        py::arg("second_moment"), py::arg("d"), py::arg("t_max"),
        py::arg("delta_max"));
  m.def("tail_increment", &tail_increment, py::arg("path"), py::arg("d"),
        py::arg("t"), py::arg("a"), py::arg("delta"));

  py::class_<HolderFit>(m, "HolderFit")
      .def_readonly("degenerate", &HolderFit::degenerate)
      .def_readonly("slope", &HolderFit::slope)
      .def_readonly("r2", &HolderFit::r2)
      .def_readonly("h", &HolderFit::h)
      .def_readonly("modulus", &HolderFit::modulus)
      .def("csv", [](const HolderFit& f) { return csv_string(f); });

  m.def(
      "holder_exponent",
      [](const std::vector<double>& values, double time_span, int levels) {
        return holder_exponent(values, time_span, levels);
      },
      py::arg("values"), py::arg("time_span"), py::arg("dyadic_levels"));

  m.def(
      "pointwise_ratio_scan",
      [](const Kernel& k, const CadlagPath& x,
         const std::vector<double>& probes,
         const std::vector<double>& h_schedule) {
        PathEval m_eval = [&](double t) { return eval_direct(k, x, t); };
        const auto rep = pointwise_ratio_scan(k, x, m_eval, probes, h_schedule);
        py::list out;
        for (const auto& p : rep.probes) {
          py::dict d;
          d["s"] = p.s;
          d["ratios"] = p.ratios;
          d["raw_last"] = p.raw_last;
          d["richardson"] = p.richardson;
          d["jump_truth"] = p.jump_truth;
          out.append(d);
        }
        return out;
      },
      py::arg("kernel"), py::arg("path"), py::arg("probes"),
      py::arg("h_schedule"));

  m.def(
      "uniform_modulus_scan",
      [](const Kernel& k, const CadlagPath& x,
         const std::vector<double>& h_schedule, std::size_t pair_budget) {
        PathEval m_eval = [&](double t) { return eval_direct(k, x, t); };
        const auto rep = uniform_modulus_scan(k, x, m_eval, h_schedule,
                                              pair_budget);
        py::dict d;
        d["h_schedule"] = rep.h_schedule;
        d["sup_ratios"] = rep.sup_ratios;
        d["sup_jump"] = rep.sup_jump_truth;
        return d;
      },
      py::arg("kernel"), py::arg("path"), py::arg("h_schedule"),
      py::arg("pair_budget"));

  m.def(
      "run_experiment",
      [](const std::string& config_path) {
        const auto cfg = ExperimentConfig::from_json_file(config_path);
        const auto manifest = run_experiment(cfg);
        py::dict d;
        d["experiment"] = manifest.experiment;
        d["pass"] = manifest.pass;
        py::list checks;
        for (const auto& c : manifest.checks) {
          py::dict cd;
          cd["name"] = c.name;
          cd["measured"] = c.measured;
          cd["threshold"] = c.threshold;
          cd["comparison"] = c.comparison;
          cd["pass"] = c.pass;
          checks.append(cd);
        }
        d["checks"] = checks;
        return d;
      },
      py::arg("config_path"));

  m.def(
      "validate_config",
      [](const std::string& config_path) {
        const auto cfg = ExperimentConfig::from_json_file(config_path);
        return cfg.validate();
      },
      py::arg("config_path"));
}
