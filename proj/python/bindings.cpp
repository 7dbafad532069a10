// Python module galdef._core. Inputs and outputs are JSON text; the package
// wrapper converts to and from Python objects.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "galdef/cli.hpp"
#include "galdef/errors.hpp"
#include "galdef/ffkernel.hpp"
#include "galdef/modform.hpp"

namespace py = pybind11;
using namespace galdef;
using ff::u64;

namespace {

mf::NewformPtr form_from(const std::string& text) {
  return std::make_shared<const mf::Newform>(mf::ingest(Json::parse(text)));
}

mf::Gallery gallery_from(const mf::NewformPtr& f, const std::optional<std::string>& text) {
  return text ? mf::gallery_from_json(Json::parse(*text)) : cli::self_gallery(f);
}

ob::CheckOptions options(bool assume_irreducible, u64 seed) { return ob::CheckOptions{assume_irreducible, seed}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Obstruction checks for residual Galois representations of newforms";

  static py::exception<Error> error(m, "GaldefError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetObject(error.ptr(), py::make_tuple(std::string(to_string(e.kind())), e.field(), e.what()).ptr());
    } catch (const Json::exception& e) {
      PyErr_SetObject(error.ptr(), py::make_tuple("Schema", "", e.what()).ptr());
    }
  });

  m.def("check", [](const std::string& form, u64 ell, const std::optional<std::string>& gallery, std::set<u64> extra,
                    bool assume_irreducible, u64 seed) {
    const auto f = form_from(form);
    return cli::check_json(f, gallery_from(f, gallery), ell, extra, options(assume_irreducible, seed)).dump(2);
  }, py::arg("form"), py::arg("ell"), py::arg("gallery") = py::none(), py::arg("extra_primes") = std::set<u64>{},
     py::arg("assume_irreducible") = true, py::arg("seed") = ff::kDefaultSeed);

  m.def("scan", [](const std::string& form, u64 ell_max, const std::optional<std::string>& gallery, std::set<u64> extra,
                   bool assume_irreducible, u64 seed) {
    const auto f = form_from(form);
    return cli::scan_json(f, gallery_from(f, gallery), ell_max, extra, options(assume_irreducible, seed)).dump(2);
  }, py::arg("form"), py::arg("ell_max"), py::arg("gallery") = py::none(), py::arg("extra_primes") = std::set<u64>{},
     py::arg("assume_irreducible") = true, py::arg("seed") = ff::kDefaultSeed);

  m.def("levels", [](const std::string& form, u64 ell, u64 p_max, unsigned alpha_budget) {
    return cli::levels_json(*form_from(form), ell, p_max, alpha_budget).dump(2);
  }, py::arg("form"), py::arg("ell"), py::arg("p_max") = 100, py::arg("alpha_budget") = 1);

  m.def("congruences", [](const std::string& form, const std::string& gallery, u64 ell_max, u64 seed) {
    const auto f = form_from(form);
    return cli::congruences_json(*f, mf::gallery_from_json(Json::parse(gallery)), ell_max, seed).dump(2);
  }, py::arg("form"), py::arg("gallery"), py::arg("ell_max"), py::arg("seed") = ff::kDefaultSeed);

  m.def("h2bound", [](const std::string& form, u64 ell, u64 level) {
    return cli::h2bound_json(*form_from(form), ell, level).dump(2);
  }, py::arg("form"), py::arg("ell"), py::arg("level"));

  m.def("sturm_bound", &mf::sturm_bound, py::arg("level"), py::arg("weight"));

  m.def("factor_mod_p", [](const std::vector<long>& coeffs, u64 p) {
    std::vector<mpz_class> g(coeffs.begin(), coeffs.end());
    std::vector<std::pair<std::vector<u64>, int>> out;
    for (const auto& f : ff::factor_mod_p(g, p)) out.emplace_back(f.poly.coeffs(), f.multiplicity);
    return out;
  }, py::arg("coeffs"), py::arg("p"));
}
