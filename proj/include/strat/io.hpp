#pragma once

// Canonical JSON document format for fields, polynomials, modules, families,
// log modules, and certificates, plus the command-line element syntax.
// Emission is deterministic; parse(emit(x)) is the identity and emit(parse(s))
// is byte-identical on canonical input.

#include <string>

#include "json.hpp"

#include "strat/exponents.hpp"
#include "strat/horizon.hpp"
#include "strat/stratmod.hpp"

namespace strat {

using Json = nlohmann::ordered_json;

Json emit_field(const FieldSpecPtr& spec);
FieldSpecPtr parse_field(const Json& j);

Json emit_element(const FieldElement& e);
FieldElement parse_element(const Json& j, const FieldSpecPtr& spec);

Json emit_poly(const Poly& f);
Poly parse_poly(const Json& j, const PolyRingPtr& ring);

Json emit_module(const StratifiedModule& m);
StratifiedModule parse_module(const Json& j);

Json emit_family(const FamilySpec& f);
FamilySpec parse_family(const Json& j);

Json emit_log_module(const LogModule& l);
LogModule parse_log_module(const Json& j);

// Certificate carries its own ring description so it parses standalone.
Json emit_certificate(const TrivializationCertificate& c);
TrivializationCertificate parse_certificate(const Json& j);

// Fixed-format dump with trailing newline; the only byte form ever written.
std::string to_bytes(const Json& j);
Json from_bytes(const std::string& s); // throws ParseError

// Field element in the "d0+d1*T+..." command-line syntax.
std::string format_cli_element(const FieldElement& e);
FieldElement parse_cli_element(const std::string& s, const FieldSpecPtr& spec);

} // namespace strat
