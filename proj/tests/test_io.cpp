#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "strat/horizon.hpp"
#include "strat/io.hpp"

using namespace strat;

namespace {

FieldSpecPtr f4() { return make_field(2, 2, {1, 1, 1}); }

FamilySpec family_f4() {
    auto k = f4();
    return FamilySpec{k, {FieldElement::zero(k), FieldElement::one(k),
                          FieldElement::generator(k)}};
}

Poly random_poly(const PolyRingPtr& ring, std::mt19937_64& rng) {
    auto elems = all_elements(ring->spec());
    std::uniform_int_distribution<std::size_t> coeff(0, elems.size() - 1);
    std::uniform_int_distribution<std::int64_t> exp(0, 9);
    std::uniform_int_distribution<int> nterms(0, 6);
    Poly f(ring);
    int n = nterms(rng);
    for (int t = 0; t < n; ++t) {
        Exponents e(ring->nvars());
        for (auto& x : e) x = exp(rng);
        f = f + Poly::monomial(ring, e, elems[coeff(rng)]);
    }
    return f;
}

} // namespace

TEST_CASE("field round-trip") {
    auto k = f4();
    Json j = emit_field(k);
    CHECK(*parse_field(j) == *k);
    CHECK(to_bytes(j) == to_bytes(emit_field(parse_field(j))));
    CHECK_THROWS_AS(parse_field(from_bytes("{\"p\": 2}")), Error);
}

TEST_CASE("poly round-trip, canonical term order") {
    std::mt19937_64 rng(20260823);
    auto ring = make_ring(f4(), {"x", "y"});
    for (int i = 0; i < 30; ++i) {
        Poly f = random_poly(ring, rng);
        Json j = emit_poly(f);
        CHECK(parse_poly(j, ring) == f);
        CHECK(to_bytes(j) == to_bytes(emit_poly(parse_poly(j, ring))));
    }
}

TEST_CASE("module document round-trip is byte-identical") {
    StratifiedModule fam = make_family(family_f4());
    std::string bytes = to_bytes(emit_module(fam));
    StratifiedModule back = parse_module(from_bytes(bytes));
    CHECK(back == fam);
    CHECK(to_bytes(emit_module(back)) == bytes);
}

TEST_CASE("module document carries roles, laurent flags, and truncation") {
    auto ring = make_ring(f4(), {"t"}, {true});
    std::map<SupportKey, PolyMat> support;
    PolyMat a1(ring, 1, 1);
    a1.at(0, 0) = Poly::variable(ring, "t", -2);
    support.emplace(SupportKey{"t", 1}, a1);
    StratifiedModule m(ring, {}, {"t"}, 1, support);
    m.set_truncated_at(6);

    StratifiedModule back = parse_module(from_bytes(to_bytes(emit_module(m))));
    CHECK(back == m);
    CHECK(back.truncated_at() == 6);
    CHECK(back.ring()->laurent()[0]);
}

TEST_CASE("family and certificate round-trip") {
    FamilySpec fam = family_f4();
    Json j = emit_family(fam);
    FamilySpec back = parse_family(j);
    CHECK(back.points == fam.points);
    CHECK(to_bytes(emit_family(back)) == to_bytes(j));

    StratifiedModule fiber =
        restrict_fiber(make_family(fam), {{"y", FieldElement::one(f4())}});
    auto cert = trivialize(fiber, 4);
    REQUIRE(cert.has_value());
    std::string bytes = to_bytes(emit_certificate(*cert));
    TrivializationCertificate cback = parse_certificate(from_bytes(bytes));
    CHECK(cback.minimal_degree == cert->minimal_degree);
    CHECK(cback.checked_order_bound == cert->checked_order_bound);
    CHECK(cback.gauge.mat() == cert->gauge.mat());
    CHECK(to_bytes(emit_certificate(cback)) == bytes);
}

TEST_CASE("log module round-trip") {
    auto spec = make_field(3, 1, {0, 1});
    std::vector<FMatrix> b;
    for (std::int64_t d : {2, 1, 1}) {
        FMatrix m(spec, 1, 1);
        m.at(0, 0) = FieldElement::from_int(spec, d);
        b.push_back(std::move(m));
    }
    LogModule l(spec, b);
    std::string bytes = to_bytes(emit_log_module(l));
    LogModule back = parse_log_module(from_bytes(bytes));
    CHECK(back.rank() == 1);
    CHECK(back.truncation() == 2);
    CHECK(to_bytes(emit_log_module(back)) == bytes);
}

TEST_CASE("malformed documents raise ParseError") {
    CHECK_THROWS_AS(from_bytes("{"), Error);
    CHECK_THROWS_AS(parse_module(from_bytes("{}")), Error);
    CHECK_THROWS_AS(parse_module(from_bytes(
                        R"({"field":{"p":2,"m":1,"modulus":[0,1]},"vars":[],"rank":"x","matrices":[]})")),
                    Error);
}

TEST_CASE("cli element syntax") {
    auto k = f4();
    FieldElement t = FieldElement::generator(k);
    CHECK(parse_cli_element("0+1*T", k) == t);
    CHECK(parse_cli_element("T", k) == t);
    CHECK(parse_cli_element("1+1*T", k) == t + FieldElement::one(k));
    CHECK(parse_cli_element("1", k).is_one());
    CHECK(format_cli_element(t) == "0+1*T");

    for (const auto& e : all_elements(k))
        CHECK(parse_cli_element(format_cli_element(e), k) == e);

    auto k8 = make_field(2, 3, {1, 1, 0, 1});
    for (const auto& e : all_elements(k8))
        CHECK(parse_cli_element(format_cli_element(e), k8) == e);

    CHECK_THROWS_AS(parse_cli_element("", k), Error);
    CHECK_THROWS_AS(parse_cli_element("1+", k), Error);
    CHECK_THROWS_AS(parse_cli_element("q", k), Error);
    CHECK_THROWS_AS(parse_cli_element("T", make_field(2, 1, {0, 1})), Error);
}
