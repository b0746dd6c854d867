#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <optional>
#include <sstream>

#include "ddsl/errors.hpp"
#include "ddsl/harness.hpp"

namespace py = pybind11;
using namespace ddsl;

namespace {

py::array_t<double> to_array(const DensityField& f) {
  const auto& g = f.grid();
  py::array_t<double> a({g.nx(), g.nv()});
  std::memcpy(a.mutable_data(), f.values().data(), f.values().size() * sizeof(double));
  return a;
}

py::dict grid_dict(const PhaseGrid& g) {
  py::dict d;
  d["L"] = g.L();
  d["dx"] = g.dx();
  d["dv"] = g.dv();
  d["U"] = g.U();
  return d;
}

py::dict diagnostics_dict(const std::vector<DiagnosticsRecord>& rows) {
  const std::size_t n = rows.size();
  py::array_t<double> t(n), mass(n), l1(n), l2(n), mom(n), kin(n), pot(n), tot(n), U(n);
  py::array_t<bool> grew(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = rows[i];
    t.mutable_at(i) = r.t;
    mass.mutable_at(i) = r.mass;
    l1.mutable_at(i) = r.l1;
    l2.mutable_at(i) = r.l2;
    mom.mutable_at(i) = r.momentum;
    kin.mutable_at(i) = r.kinetic;
    pot.mutable_at(i) = r.potential;
    tot.mutable_at(i) = r.total;
    U.mutable_at(i) = r.U;
    grew.mutable_at(i) = r.grew;
  }
  py::dict d;
  d["t"] = t;
  d["mass"] = mass;
  d["l1"] = l1;
  d["l2"] = l2;
  d["momentum"] = mom;
  d["kinetic"] = kin;
  d["potential"] = pot;
  d["total"] = tot;
  d["U"] = U;
  d["grew"] = grew;
  return d;
}

DensityField from_array(py::array_t<double, py::array::c_style | py::array::forcecast> values,
                        double L, double dx, double dv, double U) {
  if (values.ndim() != 2) throw py::value_error("density must be a 2-D array (nx, nv)");
  const PhaseGrid g = make_grid(L, dx, dv, U);
  if (static_cast<std::size_t>(values.shape(0)) != g.nx() ||
      static_cast<std::size_t>(values.shape(1)) != g.nv()) {
    throw py::value_error("array shape does not match the grid");
  }
  return DensityField(g, std::vector<double>(values.data(), values.data() + values.size()));
}

py::array_t<double> path_array(const BrownianIncrements& inc) {
  py::array_t<double> a({inc.components(), inc.steps()});
  std::memcpy(a.mutable_data(), inc.table().data(), inc.table().size() * sizeof(double));
  return a;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Dynamic-domain semi-Lagrangian solver for stochastic Vlasov equations";

  static py::exception<ConfigError> config_error(m, "ConfigError", PyExc_ValueError);
  static py::exception<NumericalError> numerical_error(m, "NumericalError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      py::set_error(config_error, e.what());
    } catch (const NumericalError& e) {
      py::set_error(numerical_error, e.what());
    }
  });

  py::enum_<FieldCase>(m, "FieldCase").value("I", FieldCase::I).value("II", FieldCase::II);
  py::enum_<IntegratorKind>(m, "IntegratorKind")
      .value("SEM", IntegratorKind::SEM)
      .value("LTSM", IntegratorKind::LTSM)
      .value("SSM", IntegratorKind::SSM)
      .value("EM_BASELINE", IntegratorKind::EM_BASELINE);
  py::enum_<Reconstruction>(m, "Reconstruction")
      .value("LINEAR", Reconstruction::Linear)
      .value("SPLINE", Reconstruction::Spline);
  py::enum_<DomainPolicy>(m, "DomainPolicy")
      .value("ADAPTIVE", DomainPolicy::Adaptive)
      .value("FIXED", DomainPolicy::Fixed)
      .value("NONADAPTIVE", DomainPolicy::NonAdaptive);
  py::enum_<FieldKind>(m, "FieldKind")
      .value("CONSTANT", FieldKind::Constant)
      .value("COSINE", FieldKind::Cosine)
      .value("GRADIENT", FieldKind::Gradient);
  py::enum_<SigmaKind>(m, "SigmaKind")
      .value("CONSTANT", SigmaKind::Constant)
      .value("SINE", SigmaKind::Sine)
      .value("SHIFTED_COSINE", SigmaKind::ShiftedCosine);
  py::enum_<InitialKind>(m, "InitialKind")
      .value("LANDAU", InitialKind::Landau)
      .value("TWO_STREAM", InitialKind::TwoStream)
      .value("CUSTOM", InitialKind::Custom);

  py::class_<SigmaSpec>(m, "SigmaSpec")
      .def(py::init<>())
      .def(py::init([](SigmaKind k, double a) { return SigmaSpec{k, a}; }), py::arg("kind"),
           py::arg("amplitude"))
      .def_readwrite("kind", &SigmaSpec::kind)
      .def_readwrite("amplitude", &SigmaSpec::amplitude)
      .def("__eq__", &SigmaSpec::operator==)
      .def("__repr__", [](const SigmaSpec& s) {
        return "SigmaSpec(" + std::string(to_string(s.kind)) + ", " + std::to_string(s.amplitude) +
               ")";
      });

  py::class_<SimulationConfig>(m, "SimulationConfig")
      .def(py::init<>())
      .def_readwrite("field_case", &SimulationConfig::field_case)
      .def_readwrite("L", &SimulationConfig::L)
      .def_readwrite("T", &SimulationConfig::T)
      .def_readwrite("N", &SimulationConfig::N)
      .def_readwrite("dx", &SimulationConfig::dx)
      .def_readwrite("dv", &SimulationConfig::dv)
      .def_readwrite("U0", &SimulationConfig::U0)
      .def_readwrite("epsilon0", &SimulationConfig::epsilon0)
      .def_readwrite("integrator", &SimulationConfig::integrator)
      .def_readwrite("reconstruction", &SimulationConfig::reconstruction)
      .def_readwrite("domain", &SimulationConfig::domain)
      .def_readwrite("field_kind", &SimulationConfig::field_kind)
      .def_readwrite("field_amplitude", &SimulationConfig::field_amplitude)
      .def_readwrite("sigma", &SimulationConfig::sigma)
      .def_readwrite("initial", &SimulationConfig::initial)
      .def_readwrite("alpha", &SimulationConfig::alpha)
      .def_readwrite("custom_initial", &SimulationConfig::custom_initial)
      .def_readwrite("seed", &SimulationConfig::seed)
      .def_readwrite("snapshot_every", &SimulationConfig::snapshot_every)
      .def_readwrite("samples", &SimulationConfig::samples)
      .def_readwrite("levels", &SimulationConfig::levels)
      .def_readwrite("error_window", &SimulationConfig::error_window)
      .def_readwrite("node_budget", &SimulationConfig::node_budget)
      .def_readwrite("repetitions", &SimulationConfig::repetitions)
      .def_readwrite("threads", &SimulationConfig::threads)
      .def_property_readonly("tau", &SimulationConfig::tau)
      .def("validate", &SimulationConfig::validate)
      .def("__repr__", [](const SimulationConfig& c) { return config_text(c); });

  m.def(
      "parse_config",
      [](const std::string& text, const std::vector<std::string>& overrides) {
        std::istringstream in(text);
        return parse_config(in, overrides);
      },
      py::arg("text"), py::arg("overrides") = std::vector<std::string>{});
  m.def("load_config", &load_config, py::arg("path"),
        py::arg("overrides") = std::vector<std::string>{});
  m.def("config_text", &config_text);
  m.def("config_hash", &config_hash);

  m.def(
      "run",
      [](const SimulationConfig& cfg, std::optional<std::uint64_t> seed, bool snapshots) {
        RunResult r;
        {
          py::gil_scoped_release release;
          r = run(cfg, sample_increments(cfg, seed.value_or(cfg.seed)),
                  RunOptions{true, snapshots});
        }
        py::dict out;
        out["diagnostics"] = diagnostics_dict(r.diagnostics);
        out["final_field"] = to_array(r.final_field);
        out["grid"] = grid_dict(r.final_field.grid());
        py::list growth;
        for (const auto& e : r.growth_log) growth.append(py::make_tuple(e.step, e.Xi));
        out["growth_log"] = growth;
        py::list snaps;
        for (const auto& s : r.snapshots)
          snaps.append(py::make_tuple(s.t, to_array(s.field), grid_dict(s.field.grid())));
        out["snapshots"] = snaps;
        out["wall_seconds"] = r.wall_seconds;
        out["min_value"] = r.min_value;
        out["seed"] = r.seed;
        return out;
      },
      py::arg("cfg"), py::arg("seed") = py::none(), py::arg("snapshots") = false,
      "Run one path; returns diagnostics arrays, the final density and the growth log.");

  m.def(
      "initial_field",
      [](const SimulationConfig& cfg) {
        const auto f = initial_field(cfg);
        return py::make_tuple(to_array(f), grid_dict(f.grid()));
      },
      py::arg("cfg"));

  m.def(
      "monte_carlo",
      [](const SimulationConfig& cfg, std::size_t samples, unsigned threads) {
        MonteCarloResult r;
        {
          py::gil_scoped_release release;
          r = run_monte_carlo(cfg, samples, threads);
        }
        auto stat = [](const SampleStat& s) { return py::make_tuple(s.mean, s.se); };
        auto series = [](const std::vector<SampleStat>& v) {
          py::array_t<double> mean(v.size()), se(v.size());
          for (std::size_t i = 0; i < v.size(); ++i) {
            mean.mutable_at(i) = v[i].mean;
            se.mutable_at(i) = v[i].se;
          }
          return py::make_tuple(mean, se);
        };
        py::dict out;
        out["t"] = r.t;
        out["mass"] = series(r.mass);
        out["momentum"] = series(r.momentum);
        out["kinetic"] = series(r.kinetic);
        out["total"] = series(r.total);
        out["momentum_slope"] = stat(r.momentum_slope);
        out["kinetic_quadratic"] = stat(r.kinetic_quadratic);
        out["total_slope"] = stat(r.total_slope);
        out["min_value"] = r.min_value;
        out["samples"] = r.samples;
        return out;
      },
      py::arg("cfg"), py::arg("samples"), py::arg("threads") = 1);

  m.def(
      "solve_field",
      [](const std::vector<double>& rho, double L) {
        const auto f = solve_field(rho, L);
        return py::make_tuple(f.E, f.clamped);
      },
      py::arg("rho"), py::arg("L"), "Case II field from nodal density; returns (E, clamped).");

  m.def(
      "sample_path",
      [](std::size_t K, std::size_t N, double tau, std::uint64_t seed) {
        return path_array(sample_path(K, N, tau, seed));
      },
      py::arg("K"), py::arg("N"), py::arg("tau"), py::arg("seed"));
  m.def(
      "coarsen_path",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> table, double tau,
         std::size_t factor) {
        if (table.ndim() != 2) throw py::value_error("path must be a 2-D array (K, N)");
        const auto K = static_cast<std::size_t>(table.shape(0));
        const auto N = static_cast<std::size_t>(table.shape(1));
        BrownianIncrements inc(K, N, tau, 0,
                               std::vector<double>(table.data(), table.data() + table.size()));
        return path_array(coarsen(inc, factor));
      },
      py::arg("path"), py::arg("tau"), py::arg("factor"));

  m.def(
      "read_snapshot",
      [](const std::string& path) {
        const auto s = read_snapshot(path);
        return py::make_tuple(s.t, to_array(s.field), grid_dict(s.field.grid()));
      },
      py::arg("path"), "Returns (t, values[nx, nv], grid dict).");
  m.def(
      "write_snapshot",
      [](const std::string& path, py::array_t<double, py::array::c_style | py::array::forcecast> v,
         double L, double dx, double dv, double U, double t) {
        write_snapshot(path, from_array(v, L, dx, dv, U), t);
      },
      py::arg("path"), py::arg("values"), py::arg("L"), py::arg("dx"), py::arg("dv"),
      py::arg("U"), py::arg("t"));

  m.def("initial_density_landau", &initial_density_landau, py::arg("x"), py::arg("v"),
        py::arg("alpha"), py::arg("L"));
  m.def("initial_density_two_stream", &initial_density_two_stream, py::arg("x"), py::arg("v"),
        py::arg("alpha"), py::arg("L"));
}
