#pragma once

// Monte-Carlo simulation of two-way (bidirectional) QKD built on testers.
//
// lm05:     Bob sends the input of a tester drawn from two complete sets;
//           Alice encodes a bit with {I, i sigma_y} or, in control mode,
//           measures in a random basis and publishes the result.
// extended: Bob draws a tester from one of two sets with maximal entropic
//           bound; Alice encodes a D-ary digit with one of two MUUB
//           encodings and announces which one. Mismatched rounds are
//           discarded.
//
// Every round draws from its own stream cfg.rng.derive(round), in the fixed
// order Bob tester, Alice mode, Alice set/digit, Eve choices, then
// measurement outcomes.

#include "utester/muub.hpp"
#include "utester/qmath.hpp"
#include "utester/tester.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace utester {

enum class ProtocolKind { Lm05, Extended };
enum class EveKind { None, Qmm, InterceptResend };
/// Probe a QMM Eve sends to Alice: the first tester of set 0, or the input
/// of a uniformly drawn tester from either set.
enum class ResendPolicy { Fixed, RandomInput };
/// Tester set a QMM Eve uses in the extended protocol.
enum class SetPolicy { Fixed, Random };

struct EveStrategy {
  EveKind kind = EveKind::None;
  ResendPolicy resend = ResendPolicy::Fixed;
  SetPolicy set_policy = SetPolicy::Fixed;
  std::size_t fixed_set = 0;
};

struct ProtocolConfig {
  ProtocolKind protocol = ProtocolKind::Lm05;
  std::size_t d = 2;
  std::size_t D = 2;
  std::uint64_t rounds = 0;
  double control_fraction = 0.0;  // lm05 only
  EveStrategy eve;
  std::array<TesterSet, 2> tester_sets;
  /// lm05 uses encodings[0] only (bit i -> element i).
  std::array<UnitaryBasis, 2> encodings;
  RngHandle rng;
};

struct ProtocolStats {
  std::uint64_t rounds = 0;
  std::uint64_t sifted = 0;
  std::uint64_t decode_errors = 0;
  std::uint64_t control_rounds = 0;
  std::uint64_t control_comparisons = 0;
  std::uint64_t control_mismatches = 0;
  std::uint64_t eve_correct = 0;
  bool eve_present = false;

  double sift_fraction() const;
  double decode_error_rate() const;
  double control_mismatch_rate() const;
  double eve_accuracy() const;
  double sift_fraction_se() const;
  double decode_error_rate_se() const;
  double control_mismatch_rate_se() const;
  double eve_accuracy_se() const;

  friend bool operator==(const ProtocolStats&, const ProtocolStats&) = default;
};

/// One round of the per-round log. Fields that do not apply are -1.
struct RoundRecord {
  std::uint64_t round = 0;
  int bob_set = -1;
  int bob_tester = -1;
  bool control = false;
  int alice_set = -1;
  int alice_value = -1;  // digit, or control basis
  int alice_outcome = -1;  // control-mode measurement result
  int bob_outcome = -1;
  int bob_decoded = -1;
  bool sifted = false;
  int eve_guess = -1;
};

class InvalidConfig : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

ProtocolStats run_lm05(const ProtocolConfig& cfg, std::vector<RoundRecord>* trace = nullptr);
ProtocolStats run_extended(const ProtocolConfig& cfg, std::vector<RoundRecord>* trace = nullptr);
/// Dispatch on cfg.protocol.
ProtocolStats run_protocol(const ProtocolConfig& cfg, std::vector<RoundRecord>* trace = nullptr);

/// Sifted-key accuracy of an equivalent-tester Eve using one fixed set
/// against a uniform set choice: 1/2 + 1/(2D).
double analytic_eve_accuracy(std::size_t D);

/// Standard configurations: lm05 with Z/X sets and {I, i sigma_y}; extended
/// with D = 2 (Z and 0/1-X sets, rotation vs hadamard-pair) or D = 4 (Bell
/// testers, pauli vs pauli-unbiased).
ProtocolConfig lm05_config(std::uint64_t rounds, double control_fraction, EveStrategy eve,
                           RngHandle rng);
ProtocolConfig extended_config(std::size_t D, std::uint64_t rounds, EveStrategy eve, RngHandle rng);

void write_trace_csv(std::ostream& os, const std::vector<RoundRecord>& trace);

std::string to_string(EveKind k);
EveKind eve_kind_from_string(const std::string& s);

}  // namespace utester
