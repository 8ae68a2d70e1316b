#pragma once

// Self-verification suites run by the `verify` subcommand. Each check is a
// named pass/fail with an optional measured value; payloads are
// deterministic per seed.

#include "utester/json_io.hpp"
#include "utester/qmath.hpp"
#include "utester/tester.hpp"

#include <string>
#include <vector>

namespace utester {

struct Check {
  std::string name;
  bool pass = false;
  Json value;  // measured quantity, or null
};

struct SuiteResult {
  std::string suite;
  std::vector<Check> checks;

  bool passed() const;
  Json to_json() const;
};

/// "qmath", "tester", "ppovm", "bounds", "muub", "props".
std::vector<std::string> suite_names();
SuiteResult run_suite(const std::string& name, std::uint64_t seed);

/// Random ancilla-free tester with two unitaries that both act
/// deterministically on it. With probability 1/2 both map the input onto the
/// same projector.
struct DeterministicInstance {
  Tester tester;
  Unitary u1;
  Unitary u2;
};
DeterministicInstance random_deterministic_instance(std::size_t d, Rng& rng);

/// Random tester: Haar input and Haar measurement basis; bipartite testers
/// use dimension d^2 and d^2 outcomes.
Tester random_tester(std::size_t d, TesterKind kind, Rng& rng);

}  // namespace utester
