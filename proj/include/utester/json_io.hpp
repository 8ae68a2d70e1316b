#pragma once

// JSON literal formats.
//
// Matrix / state:  {"rows": r, "cols": c, "entries": [[re, im], ...]}
//                  entries row-major; a state is a column (cols = 1).
// Tester:          {"d": 2, "label": "...", "input": <state>,
//                   "projectors": [<state>, ...]}
// Basis:           {"d": 2, "name": "...", "elements": [<matrix>, ...]}
// ProtocolConfig:  {"protocol": "lm05" | "extended", "d", "D", "rounds",
//                   "control_fraction", "seed", "stream",
//                   "eve": {"kind", "resend", "set_policy", "fixed_set"},
//                   "tester_sets": [[<tester|name>, ...], [...]],   optional
//                   "encodings": [<basis|name>, <basis|name>]}      optional
//
// Missing tester_sets/encodings fall back to the built-in configuration for
// the protocol (and D).

#include "utester/bounds.hpp"
#include "utester/muub.hpp"
#include "utester/qkd.hpp"
#include "utester/qmath.hpp"
#include "utester/tester.hpp"

#include <json.hpp>

#include <string>

namespace utester {

using Json = nlohmann::ordered_json;

Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);
Json state_to_json(const ComplexVector& v);
ComplexVector state_from_json(const Json& j);

Json tester_to_json(const Tester& t);
Tester tester_from_json(const Json& j);
/// Tester name from the registry, or a path to a tester JSON file.
Tester load_tester(const std::string& name_or_path, std::size_t d = 2);

Json basis_to_json(const UnitaryBasis& b);
UnitaryBasis basis_from_json(const Json& j);
/// Named basis, or a path to a basis JSON file.
UnitaryBasis load_basis(const std::string& name_or_path, std::size_t d = 2);

Json muub_report_to_json(const MuubReport& r);
Json bound_to_json(const BoundEstimate& b);

ProtocolConfig protocol_config_from_json(const Json& j);
Json protocol_config_to_json(const ProtocolConfig& cfg);
Json protocol_stats_to_json(const ProtocolStats& s);

/// Round every floating-point leaf to 12 significant digits.
Json round_floats(const Json& j);

Json read_json_file(const std::string& path);

}  // namespace utester
