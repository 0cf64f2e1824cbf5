#include "strat/io.hpp"

#include <charconv>

namespace strat {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(Errc::ParseError, msg); }

const Json& field_at(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) fail(std::string("missing key '") + key + "'");
    return j[key];
}

std::int64_t int_at(const Json& j, const char* key) {
    const Json& v = field_at(j, key);
    if (!v.is_number_integer()) fail(std::string("key '") + key + "' must be an integer");
    return v.get<std::int64_t>();
}

std::vector<std::uint32_t> parse_digits(const Json& j, const char* what) {
    if (!j.is_array()) fail(std::string(what) + " must be a digit list");
    std::vector<std::uint32_t> out;
    for (const auto& d : j) {
        if (!d.is_number_integer() || d.get<std::int64_t>() < 0)
            fail(std::string(what) + " digits must be non-negative integers");
        out.push_back(d.get<std::uint32_t>());
    }
    return out;
}

Json emit_digits(const std::vector<std::uint32_t>& digits) {
    Json out = Json::array();
    for (auto d : digits) out.push_back(d);
    return out;
}

Json emit_ring_vars(const PolyRingPtr& ring, const std::vector<std::string>& base_vars) {
    Json vars = Json::array();
    for (std::size_t i = 0; i < ring->nvars(); ++i) {
        const std::string& name = ring->vars()[i];
        bool is_base =
            std::find(base_vars.begin(), base_vars.end(), name) != base_vars.end();
        Json v;
        v["name"] = name;
        v["role"] = is_base ? "base" : "fiber";
        v["laurent"] = static_cast<bool>(ring->laurent()[i]);
        vars.push_back(std::move(v));
    }
    return vars;
}

struct RingDoc {
    PolyRingPtr ring;
    std::vector<std::string> base_vars, fiber_vars;
};

RingDoc parse_ring_vars(const Json& j, const FieldSpecPtr& spec) {
    if (!j.is_array()) fail("'vars' must be an array");
    RingDoc doc;
    std::vector<std::string> names;
    std::vector<bool> laurent;
    for (const auto& v : j) {
        const Json& name = field_at(v, "name");
        const Json& role = field_at(v, "role");
        const Json& lau = field_at(v, "laurent");
        if (!name.is_string() || !role.is_string() || !lau.is_boolean())
            fail("variable entries need string name/role and boolean laurent");
        names.push_back(name.get<std::string>());
        laurent.push_back(lau.get<bool>());
        if (role == "base")
            doc.base_vars.push_back(name.get<std::string>());
        else if (role == "fiber")
            doc.fiber_vars.push_back(name.get<std::string>());
        else
            fail("role must be 'base' or 'fiber'");
    }
    doc.ring = make_ring(spec, std::move(names), std::move(laurent));
    return doc;
}

Json emit_poly_mat(const PolyMat& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(emit_poly(m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

PolyMat parse_poly_mat(const Json& j, const PolyRingPtr& ring, std::size_t rank) {
    if (!j.is_array() || j.size() != rank) fail("matrix must have 'rank' rows");
    PolyMat out(ring, rank, rank);
    for (std::size_t i = 0; i < rank; ++i) {
        if (!j[i].is_array() || j[i].size() != rank) fail("matrix rows must have 'rank' entries");
        for (std::size_t c = 0; c < rank; ++c) out.at(i, c) = parse_poly(j[i][c], ring);
    }
    return out;
}

FMatrix parse_fmatrix(const Json& j, const FieldSpecPtr& spec, std::size_t rank) {
    if (!j.is_array() || j.size() != rank) fail("matrix must have 'rank' rows");
    FMatrix out(spec, rank, rank);
    for (std::size_t i = 0; i < rank; ++i) {
        if (!j[i].is_array() || j[i].size() != rank) fail("matrix rows must have 'rank' entries");
        for (std::size_t c = 0; c < rank; ++c) out.at(i, c) = parse_element(j[i][c], spec);
    }
    return out;
}

} // namespace

Json emit_field(const FieldSpecPtr& spec) {
    Json j;
    j["p"] = spec->p();
    j["m"] = spec->m();
    j["modulus"] = emit_digits(spec->modulus());
    return j;
}

FieldSpecPtr parse_field(const Json& j) {
    std::int64_t p = int_at(j, "p"), m = int_at(j, "m");
    if (p < 2 || m < 1) fail("field needs p >= 2, m >= 1");
    return make_field(static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(m),
                      parse_digits(field_at(j, "modulus"), "modulus"));
}

Json emit_element(const FieldElement& e) { return emit_digits(e.digits()); }

FieldElement parse_element(const Json& j, const FieldSpecPtr& spec) {
    return FieldElement(spec, parse_digits(j, "element"));
}

Json emit_poly(const Poly& f) {
    Json terms = Json::array();
    const auto& vars = f.ring()->vars();
    for (const auto& [e, c] : f.terms()) {
        Json exps;
        for (std::size_t i = 0; i < vars.size(); ++i)
            if (e[i] != 0) exps[vars[i]] = e[i];
        Json t;
        t["exps"] = exps.is_null() ? Json::object() : std::move(exps);
        t["coeff"] = emit_element(c);
        terms.push_back(std::move(t));
    }
    return terms;
}

Poly parse_poly(const Json& j, const PolyRingPtr& ring) {
    if (!j.is_array()) fail("polynomial must be a term list");
    Poly out(ring);
    for (const auto& t : j) {
        const Json& exps = field_at(t, "exps");
        if (!exps.is_object()) fail("'exps' must be an object");
        Exponents e(ring->nvars(), 0);
        for (const auto& [name, val] : exps.items()) {
            if (!val.is_number_integer()) fail("exponents must be integers");
            e[ring->index(name)] = val.get<std::int64_t>();
        }
        out.add_term(e, parse_element(field_at(t, "coeff"), ring->spec()));
    }
    return out;
}

Json emit_module(const StratifiedModule& m) {
    Json j;
    j["field"] = emit_field(m.ring()->spec());
    j["vars"] = emit_ring_vars(m.ring(), m.base_vars());
    j["rank"] = m.rank();
    Json mats = Json::array();
    for (const auto& [key, mat] : m.support()) {
        Json entry;
        entry["var"] = key.first;
        entry["order"] = key.second;
        entry["rows"] = emit_poly_mat(mat);
        mats.push_back(std::move(entry));
    }
    j["matrices"] = std::move(mats);
    if (m.truncated_at()) j["truncated_at"] = *m.truncated_at();
    return j;
}

StratifiedModule parse_module(const Json& j) {
    FieldSpecPtr spec = parse_field(field_at(j, "field"));
    RingDoc rd = parse_ring_vars(field_at(j, "vars"), spec);
    std::int64_t rank = int_at(j, "rank");
    if (rank < 0) fail("rank must be >= 0");
    const Json& mats = field_at(j, "matrices");
    if (!mats.is_array()) fail("'matrices' must be an array");
    std::map<SupportKey, PolyMat> support;
    for (const auto& entry : mats) {
        const Json& var = field_at(entry, "var");
        if (!var.is_string()) fail("'var' must be a string");
        std::int64_t order = int_at(entry, "order");
        if (order < 1) fail("'order' must be >= 1");
        auto key = SupportKey{var.get<std::string>(), order};
        if (support.count(key)) fail("duplicate matrix for (var, order)");
        support.emplace(key, parse_poly_mat(field_at(entry, "rows"), rd.ring,
                                            static_cast<std::size_t>(rank)));
    }
    StratifiedModule m(rd.ring, rd.base_vars, rd.fiber_vars,
                       static_cast<std::size_t>(rank), std::move(support));
    if (j.contains("truncated_at")) m.set_truncated_at(int_at(j, "truncated_at"));
    return m;
}

Json emit_family(const FamilySpec& f) {
    Json j;
    j["field"] = emit_field(f.field);
    Json pts = Json::array();
    for (const auto& a : f.points) pts.push_back(emit_element(a));
    j["points"] = std::move(pts);
    return j;
}

FamilySpec parse_family(const Json& j) {
    FamilySpec f;
    f.field = parse_field(field_at(j, "field"));
    const Json& pts = field_at(j, "points");
    if (!pts.is_array()) fail("'points' must be an array");
    for (const auto& a : pts) f.points.push_back(parse_element(a, f.field));
    return f;
}

Json emit_log_module(const LogModule& l) {
    Json j;
    j["field"] = emit_field(l.field());
    j["rank"] = l.rank();
    j["H"] = l.truncation();
    Json b = Json::array();
    for (const auto& m : l.b()) {
        Json rows = Json::array();
        for (std::size_t i = 0; i < m.rows(); ++i) {
            Json row = Json::array();
            for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(emit_element(m.at(i, c)));
            rows.push_back(std::move(row));
        }
        b.push_back(std::move(rows));
    }
    j["B"] = std::move(b);
    return j;
}

LogModule parse_log_module(const Json& j) {
    FieldSpecPtr spec = parse_field(field_at(j, "field"));
    std::int64_t rank = int_at(j, "rank"), h = int_at(j, "H");
    if (rank < 1 || h < 0) fail("log module needs rank >= 1 and H >= 0");
    const Json& b = field_at(j, "B");
    if (!b.is_array() || static_cast<std::int64_t>(b.size()) != h + 1)
        fail("'B' must list exactly H+1 matrices");
    std::vector<FMatrix> mats;
    for (const auto& m : b) mats.push_back(parse_fmatrix(m, spec, static_cast<std::size_t>(rank)));
    return LogModule(spec, std::move(mats));
}

Json emit_certificate(const TrivializationCertificate& c) {
    const auto& ring = c.gauge.mat().ring();
    Json j;
    j["field"] = emit_field(ring->spec());
    j["vars"] = emit_ring_vars(ring, {});
    j["gauge"] = emit_poly_mat(c.gauge.mat());
    j["checked_order_bound"] = c.checked_order_bound;
    j["minimal_degree"] = c.minimal_degree;
    return j;
}

TrivializationCertificate parse_certificate(const Json& j) {
    FieldSpecPtr spec = parse_field(field_at(j, "field"));
    RingDoc rd = parse_ring_vars(field_at(j, "vars"), spec);
    const Json& g = field_at(j, "gauge");
    if (!g.is_array()) fail("'gauge' must be an array of rows");
    PolyMat mat = parse_poly_mat(g, rd.ring, g.size());
    return TrivializationCertificate{GaugeMatrix(std::move(mat)),
                                     int_at(j, "checked_order_bound"),
                                     int_at(j, "minimal_degree")};
}

std::string to_bytes(const Json& j) { return j.dump(2) + "\n"; }

Json from_bytes(const std::string& s) {
    Json j = Json::parse(s, nullptr, false);
    if (j.is_discarded()) fail("invalid JSON");
    return j;
}

std::string format_cli_element(const FieldElement& e) {
    std::string out;
    const auto& d = e.digits();
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (i > 0) out += "+";
        out += std::to_string(d[i]);
        if (i == 1) out += "*T";
        if (i > 1) out += "*T^" + std::to_string(i);
    }
    return out;
}

FieldElement parse_cli_element(const std::string& s, const FieldSpecPtr& spec) {
    auto parse_int = [&](const std::string& tok) -> std::int64_t {
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || ptr != tok.data() + tok.size())
            fail("bad integer '" + tok + "' in element");
        return v;
    };
    auto parse_power = [&](const std::string& tok) -> std::int64_t {
        if (tok == "T") return 1;
        if (tok.rfind("T^", 0) == 0) return parse_int(tok.substr(2));
        fail("bad generator power '" + tok + "' in element");
    };

    FieldElement acc = FieldElement::zero(spec);
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t next = s.find('+', pos);
        std::string tok = s.substr(pos, next == std::string::npos ? next : next - pos);
        if (tok.empty()) fail("empty term in element '" + s + "'");
        std::int64_t coeff = 1, power = 0;
        std::size_t star = tok.find('*');
        if (star != std::string::npos) {
            coeff = parse_int(tok.substr(0, star));
            power = parse_power(tok.substr(star + 1));
        } else if (tok[0] == 'T') {
            power = parse_power(tok);
        } else {
            coeff = parse_int(tok);
        }
        if (power > 0 && spec->m() == 1) fail("generator term in a prime field element");
        FieldElement term = FieldElement::from_int(spec, coeff);
        if (power > 0) term = term * FieldElement::generator(spec).pow(power);
        acc = acc + term;
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return acc;
}

} // namespace strat
