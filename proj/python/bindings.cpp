#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "strat/io.hpp"

namespace py = pybind11;
using namespace strat;

namespace {

FieldSpecPtr field_of(std::uint32_t p, const std::vector<std::uint32_t>& modulus) {
    if (modulus.empty()) return make_field(p, 1, {0, 1});
    return make_field(p, static_cast<std::uint32_t>(modulus.size() - 1), modulus);
}

FamilySpec family_of(std::uint32_t p, const std::vector<std::uint32_t>& modulus,
                     const std::vector<std::string>& points) {
    FamilySpec fam;
    fam.field = field_of(p, modulus);
    for (const auto& s : points) fam.points.push_back(parse_cli_element(s, fam.field));
    return fam;
}

std::string torsion_str(const TorsionClass& t) {
    switch (t.kind) {
        case TorsionKind::Zero: return "zero";
        case TorsionKind::IntegerTorsion: return "integer-torsion";
        case TorsionKind::Periodic: return "periodic(" + std::to_string(t.period) + ")";
        case TorsionKind::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "exact computations with relative stratified bundles over finite fields";

    py::register_exception<Error>(m, "StratError");

    m.def("binom_mod_p", &binom_mod_p, py::arg("h"), py::arg("k"), py::arg("p"));

    m.def(
        "p_adic_digits",
        [](std::int64_t a, std::int64_t b, std::uint32_t p, int h) {
            return p_adic_digits(a, b, p, h).digits;
        },
        py::arg("a"), py::arg("b"), py::arg("p"), py::arg("H"));

    m.def(
        "verify_relations",
        [](const std::string& module_json, std::int64_t cutoff) {
            RelationReport r = verify_relations(parse_module(from_bytes(module_json)), cutoff);
            std::vector<std::string> violations;
            for (const auto& v : r.violations)
                violations.push_back(v.rule + " " + v.var_i +
                                     (v.var_j.empty() ? "" : "/" + v.var_j) + " k=" +
                                     std::to_string(v.k) + " l=" + std::to_string(v.l));
            return py::make_tuple(r.pass, violations);
        },
        py::arg("module_json"), py::arg("cutoff"));

    m.def(
        "make_family",
        [](std::uint32_t p, const std::vector<std::uint32_t>& modulus,
           const std::vector<std::string>& points) {
            return to_bytes(emit_module(make_family(family_of(p, modulus, points))));
        },
        py::arg("p"), py::arg("modulus"), py::arg("points"));

    m.def(
        "family_profile",
        [](std::uint32_t p, const std::vector<std::uint32_t>& modulus,
           const std::vector<std::string>& points) {
            return gauge_degree_profile(family_of(p, modulus, points));
        },
        py::arg("p"), py::arg("modulus"), py::arg("points"));

    m.def(
        "restrict_fiber",
        [](const std::string& module_json, const std::map<std::string, std::string>& at) {
            StratifiedModule mod = parse_module(from_bytes(module_json));
            std::map<std::string, FieldElement> point;
            for (const auto& [var, val] : at)
                point.emplace(var, parse_cli_element(val, mod.ring()->spec()));
            return to_bytes(emit_module(restrict_fiber(mod, point)));
        },
        py::arg("module_json"), py::arg("at"));

    m.def(
        "trivialize",
        [](const std::string& module_json, std::int64_t deg_bound) -> py::object {
            auto cert = trivialize(parse_module(from_bytes(module_json)), deg_bound);
            if (!cert) return py::none();
            return py::str(to_bytes(emit_certificate(*cert)));
        },
        py::arg("module_json"), py::arg("deg_bound"));

    m.def("dual", [](const std::string& module_json) {
        return to_bytes(emit_module(dual(parse_module(from_bytes(module_json)))));
    });
    m.def("tensor", [](const std::string& a, const std::string& b) {
        return to_bytes(
            emit_module(tensor(parse_module(from_bytes(a)), parse_module(from_bytes(b)))));
    });
    m.def("direct_sum", [](const std::string& a, const std::string& b) {
        return to_bytes(emit_module(
            direct_sum(parse_module(from_bytes(a)), parse_module(from_bytes(b)))));
    });

    m.def(
        "invert_coordinate",
        [](const std::string& module_json, std::int64_t cutoff) {
            return to_bytes(
                emit_module(invert_coordinate(parse_module(from_bytes(module_json)), cutoff)));
        },
        py::arg("module_json"), py::arg("cutoff"));

    m.def(
        "exponent_digits",
        [](const std::string& log_json) -> py::object {
            auto rec = exponent_digits(parse_log_module(from_bytes(log_json)));
            if (!rec) return py::none();
            py::list out;
            for (const auto& e : rec->entries)
                out.append(py::make_tuple(e.digits.digits, e.multiplicity,
                                          torsion_str(e.classification)));
            return out;
        },
        py::arg("log_json"));

    m.def(
        "log_pole_order",
        [](const std::string& module_json, std::int64_t cutoff) {
            return log_pole_order(parse_module(from_bytes(module_json)), cutoff);
        },
        py::arg("module_json"), py::arg("cutoff"));
}
