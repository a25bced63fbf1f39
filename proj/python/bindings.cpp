// Reports cross the boundary as JSON text; the Python package decodes them.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sqh/bounds.hpp"
#include "sqh/error.hpp"
#include "sqh/homology.hpp"
#include "sqh/models.hpp"
#include "sqh/scenario.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

sqh::RunOptions options(bool certified) {
  sqh::RunOptions o;
  o.simplex_cap = sqh::simplex_cap_from_env();
  if (certified) o.certified = true;
  return o;
}

std::string run_json(const std::string& scenario, bool certified) {
  const auto s = sqh::scenario_from_json(json::parse(scenario));
  py::gil_scoped_release release;
  return sqh::run_scenario(s, options(certified)).report.dump();
}

std::string builtin_json(const std::string& name, const std::vector<std::int64_t>& params, bool run, bool certified) {
  const auto s = sqh::builtin(name, params);
  if (!run) return sqh::to_json(s).dump();
  py::gil_scoped_release release;
  return sqh::run_scenario(s, options(certified)).report.dump();
}

std::string sweep_json(int n_max, std::size_t samples, std::uint64_t seed, unsigned jobs,
                       const std::vector<std::string>& fields) {
  sqh::SweepOptions o;
  o.n_max = n_max;
  o.samples = samples;
  o.seed = seed;
  o.jobs = jobs;
  o.run.crosscheck_cap = 50'000;
  if (!fields.empty()) {
    o.fields.clear();
    for (const auto& f : fields) o.fields.push_back(sqh::FieldSpec::parse(f));
  }
  py::gil_scoped_release release;
  return sqh::sweep(o).report.dump();
}

std::string betti_json(std::size_t vertex_count, const std::vector<std::vector<std::uint32_t>>& facets,
                       const std::vector<std::string>& fields) {
  std::vector<sqh::Simplex> f(facets.begin(), facets.end());
  const sqh::SimplicialComplex k(vertex_count, std::move(f));
  std::vector<sqh::FieldSpec> fs;
  for (const auto& name : fields) fs.push_back(sqh::FieldSpec::parse(name));
  return sqh::to_json(sqh::betti(sqh::chain_complex(k), fs)).dump();
}

std::string big(const sqh::BigInt& x) { return x.str(); }

}  // namespace

PYBIND11_MODULE(_sqh, m) {
  m.doc() = "Betti numbers of finite group quotients of spheres and their bounds";
  m.attr("engine_version") = sqh::kEngineVersion;

  static py::exception<sqh::Error> error(m, "SqhError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const sqh::Error& e) {
      py::set_error(error, e.what());
    }
  });

  m.def("run_scenario_json", &run_json, py::arg("scenario"), py::arg("certified") = false);
  m.def("builtin_json", &builtin_json, py::arg("name"), py::arg("params") = std::vector<std::int64_t>{},
        py::arg("run") = true, py::arg("certified") = false);
  m.def("builtin_names", &sqh::builtin_names);
  m.def("sweep_json", &sweep_json, py::arg("n_max") = 4, py::arg("samples") = 50, py::arg("seed") = 7,
        py::arg("jobs") = 1, py::arg("fields") = std::vector<std::string>{});
  m.def("betti_json", &betti_json, py::arg("vertex_count"), py::arg("facets"), py::arg("fields"));

  // Integer bounds are returned as decimal strings; they overflow 64 bits quickly.
  m.def("abelian_bound", [](int n) { return big(sqh::abelian_bound(n)); });
  m.def("cyclic_bound", [](int d, std::int64_t k) { return big(sqh::cyclic_bound(d, k)); });
  m.def("pgroup_bound", [](int d, std::int64_t k, int r) { return big(sqh::pgroup_bound(d, k, r)); });
  m.def("finite_bound", [](int d, std::int64_t k, std::uint64_t order, std::uint64_t p) {
    const auto b = sqh::finite_bound(d, k, order, p);
    return py::make_tuple(b.exponent, big(b.integer_form), b.real_form);
  });
  m.def("jordan_combined_bound", &sqh::jordan_combined_bound);
  m.def("sphere_constant", [](int k) {
    const auto c = sqh::sphere_constant(k);
    return py::make_tuple(c.base2, c.natural);
  });
}
