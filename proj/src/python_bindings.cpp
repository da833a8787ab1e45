#include "hcm/charclasses.hpp"
#include "hcm/dercomplex.hpp"
#include "hcm/errors.hpp"
#include "hcm/gradedlie.hpp"
#include "hcm/quadmod.hpp"
#include "hcm/report.hpp"
#include "hcm/schurstab.hpp"
#include "hcm/spinvariants.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

namespace py = pybind11;

namespace {

py::object to_python(const hcm::Integer& x) { return py::module_::import("builtins").attr("int")(x.get_str()); }

py::object to_python(const hcm::Rational& x) {
    return py::module_::import("fractions").attr("Fraction")(x.get_str());
}

py::object parse_json(const std::string& text) { return py::module_::import("json").attr("loads")(text); }

py::tuple partition_tuple(const hcm::Partition& p) {
    py::tuple out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = p[i];
    return out;
}

hcm::RunConfig config_from(const py::dict& options) {
    hcm::RunConfig config;
    for (const auto& [key, value] : options) config.set(py::str(key).cast<std::string>(), py::str(value).cast<std::string>());
    return config;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact computations for omega-derivation Lie algebras and their invariants";
    m.attr("__version__") = hcm::kVersion;

    py::register_exception<hcm::ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<hcm::UnstableRangeError>(m, "UnstableRangeError", PyExc_RuntimeError);
    py::register_exception<hcm::DivergenceError>(m, "DivergenceError", PyExc_RuntimeError);

    m.def(
        "free_lie_dim",
        [](const std::vector<int>& degrees, std::size_t k) {
            std::vector<std::string> names;
            for (std::size_t i = 0; i < degrees.size(); ++i) names.push_back("x" + std::to_string(i + 1));
            const hcm::GeneratorSet gens(names, degrees);
            return hcm::lyndon_basis(gens, k).size();
        },
        py::arg("degrees"), py::arg("k"), "Dimension of the word-length-k part of the free graded Lie algebra.");
    m.def(
        "free_lie_dim_oracle",
        [](const std::vector<int>& degrees, std::size_t k) {
            std::vector<std::string> names;
            for (std::size_t i = 0; i < degrees.size(); ++i) names.push_back("x" + std::to_string(i + 1));
            return to_python(hcm::pbw_dim_oracle(hcm::GeneratorSet(names, degrees), k));
        },
        py::arg("degrees"), py::arg("k"), "The same dimension from the PBW identity.");
    m.def(
        "omega_derivation_dim",
        [](std::size_t g, int d, std::size_t k) { return hcm::g_basis(hcm::hyperbolic(g, d), k).size(); },
        py::arg("g"), py::arg("d"), py::arg("k"), "Dimension of the word-length-k omega-derivations of H_g.");
    m.def(
        "schur_dim",
        [](int k, int d, std::size_t n) {
            const auto functor = hcm::u_tilde(k, d);
            const auto it = functor.components.find({k, (k - 2) * (d - 1)});
            if (it == functor.components.end()) return to_python(hcm::Integer(0));
            return to_python(hcm::schur_dim(it->second, hcm::Integer(static_cast<unsigned long>(n))));
        },
        py::arg("k"), py::arg("d"), py::arg("n"), "Arity-k Schur functor dimension at rank n.");
    m.def(
        "lie_character",
        [](int k) {
            py::dict out;
            for (const auto& [cycle_type, value] : hcm::lie_rep(k).character) out[partition_tuple(cycle_type)] = to_python(value);
            return out;
        },
        py::arg("k"), "Character of the multilinear free Lie algebra on k letters, by cycle type.");

    m.def("stable_genus", &hcm::stable_genus, py::arg("d"), py::arg("max_degree"));
    m.def(
        "invariant_ce",
        [](int d, std::size_t g, int max_degree) {
            const auto dims = hcm::invariant_ce_complex(d, g, max_degree);
            py::dict out;
            out["chain_dims"] = dims.chain_dims;
            out["homology_dims"] = dims.homology_dims;
            return out;
        },
        py::arg("d"), py::arg("g"), py::arg("max_degree"), "Invariant CE chain and homology dims by degree.");
    m.def(
        "tensor_invariants",
        [](std::size_t g, int d, std::size_t slots) {
            const auto action = hcm::LieAlgebraAction::preserving(hcm::hyperbolic(g, d));
            return hcm::invariants_kernel({2 * g, slots, hcm::TensorKind::Tensor}, action).dim();
        },
        py::arg("g"), py::arg("d"), py::arg("slots"), "Dimension of the invariants in V tensored slots times.");
    m.def("matchings_count", [](std::size_t slots) { return hcm::matchings_span(slots).size(); }, py::arg("slots"));
    m.def(
        "gram_rank",
        [](std::size_t slots, std::size_t g, int d) { return hcm::gram_rank(hcm::matchings_span(slots), g, d); },
        py::arg("slots"), py::arg("g"), py::arg("d"));

    m.def("newton_class", [](int n) { return hcm::newton_class(n).to_string(); }, py::arg("n"));
    m.def("bernoulli", [](int k) { return to_python(hcm::bernoulli(k)); }, py::arg("k"));
    m.def("ltilde_lambda", [](int k) { return to_python(hcm::ltilde_lambda(k)); }, py::arg("k"));
    m.def(
        "ltilde_coeffs",
        [](int n, int d) {
            py::dict out;
            for (const auto& [p, c] : hcm::ltilde_coeffs(n, d)) out[partition_tuple(p)] = to_python(c);
            return out;
        },
        py::arg("n"), py::arg("d"));
    m.def(
        "kappa_borel_relation", [](int i, int d) { return parse_json(hcm::kappa_borel_relation(i, d).to_json()); },
        py::arg("i"), py::arg("d"));
    m.def(
        "kappa_generators",
        [](int d, int max_degree) {
            std::vector<std::pair<std::string, int>> out;
            for (const auto& g : hcm::grw_kappa_degrees(d, max_degree)) out.emplace_back(hcm::to_string(g.monomial), g.kappa_degree);
            return out;
        },
        py::arg("d"), py::arg("max_degree"));

    m.def(
        "stability_bound", [](int k, int ell) { return hcm::StabilityBound{k, ell}.value(); }, py::arg("k"),
        py::arg("ell") = 0, "Stabilization is an isomorphism for g above this value.");
    m.def(
        "run",
        [](const std::string& command, const py::dict& options) {
            return parse_json(hcm::run(command, config_from(options)).to_json());
        },
        py::arg("command"), py::arg("options") = py::dict(),
        "Runs a CLI command with options such as {'d': 3, 'g': '2..3'} and returns the table.");
}
