#include "utester/qkd.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace utester;

namespace {

EveStrategy eve(EveKind k, ResendPolicy r = ResendPolicy::Fixed) {
  EveStrategy e;
  e.kind = k;
  e.resend = r;
  return e;
}

// Exact control-mode mismatch rate against a QMM Eve, by enumeration over
// Bob's tester and Eve's resend state. Alice measures in the basis whose
// index matches Bob's set (only those rounds are compared).
double enumerated_qmm_mismatch(const std::vector<ComplexVector>& eve_inputs) {
  const std::vector<std::vector<ComplexVector>> bases{
      {gates::ket(2, 0), gates::ket(2, 1)}, {gates::plus(), gates::minus()}};
  double total = 0.0;
  std::size_t cases = 0;
  for (std::size_t s = 0; s < 2; ++s)
    for (std::size_t i = 0; i < 2; ++i)
      for (const auto& phi : eve_inputs) {
        total += 1.0 - std::norm(bases[s][i].dot(phi));
        ++cases;
      }
  return total / cases;
}

void expect_within_sigma(double observed, double expected, std::uint64_t n, double k, const char* what) {
  const double sigma = std::sqrt(expected * (1 - expected) / double(n));
  EXPECT_LE(std::abs(observed - expected), k * sigma) << what << ": " << observed << " vs " << expected;
}

}  // namespace

TEST(Qkd, AnalyticEveAccuracy) {
  EXPECT_DOUBLE_EQ(analytic_eve_accuracy(2), 0.75);
  EXPECT_DOUBLE_EQ(analytic_eve_accuracy(4), 0.625);
  EXPECT_THROW(analytic_eve_accuracy(1), std::invalid_argument);
}

TEST(Qkd, Lm05WithoutEveIsErrorFree) {
  const auto s = run_protocol(lm05_config(20000, 0.3, eve(EveKind::None), RngHandle{1, 0}));
  EXPECT_EQ(s.rounds, 20000u);
  EXPECT_EQ(s.decode_errors, 0u);
  EXPECT_EQ(s.control_mismatches, 0u);
  EXPECT_EQ(s.sifted + s.control_rounds, s.rounds);
  expect_within_sigma(s.sift_fraction(), 0.7, s.rounds, 4, "sift fraction");
  EXPECT_FALSE(s.eve_present);
}

TEST(Qkd, ExtendedWithoutEveIsErrorFree) {
  for (std::size_t D : {2u, 4u}) {
    const auto s = run_protocol(extended_config(D, 20000, eve(EveKind::None), RngHandle{2, 0}));
    EXPECT_EQ(s.decode_errors, 0u) << D;
    expect_within_sigma(s.sift_fraction(), 0.5, s.rounds, 4, "sift fraction");
  }
}

TEST(Qkd, Lm05QmmMismatchMatchesEnumeration) {
  const double fixed = enumerated_qmm_mismatch({gates::ket(2, 0)});
  const double random = enumerated_qmm_mismatch({gates::ket(2, 0), gates::ket(2, 1), gates::plus(), gates::minus()});
  EXPECT_NEAR(fixed, 0.5, 1e-12);
  EXPECT_NEAR(random, 0.5, 1e-12);

  const auto a = run_protocol(lm05_config(40000, 0.5, eve(EveKind::Qmm), RngHandle{3, 0}));
  expect_within_sigma(a.control_mismatch_rate(), fixed, a.control_comparisons, 4, "fixed resend");
  EXPECT_EQ(a.decode_errors, 0u);
  EXPECT_EQ(a.eve_correct, a.sifted);

  const auto b =
      run_protocol(lm05_config(40000, 0.5, eve(EveKind::Qmm, ResendPolicy::RandomInput), RngHandle{3, 0}));
  expect_within_sigma(b.control_mismatch_rate(), random, b.control_comparisons, 4, "random resend");
}

TEST(Qkd, Lm05InterceptResend) {
  // Eve picks the wrong basis half the time, after which each comparison is
  // a coin flip: 1/2 * 1/2.
  const auto s = run_protocol(lm05_config(40000, 0.5, eve(EveKind::InterceptResend), RngHandle{4, 0}));
  expect_within_sigma(s.decode_error_rate(), 0.25, s.sifted, 4, "decode errors");
  expect_within_sigma(s.control_mismatch_rate(), 0.25, s.control_comparisons, 4, "control mismatches");
}

TEST(Qkd, ExtendedQmmAccuracy) {
  for (std::size_t D : {2u, 4u}) {
    const auto s = run_protocol(extended_config(D, 24000, eve(EveKind::Qmm), RngHandle{5, 0}));
    ASSERT_GE(s.sifted, 10000u);
    expect_within_sigma(s.eve_accuracy(), analytic_eve_accuracy(D), s.sifted, 3, "eve accuracy");
  }
}

TEST(Qkd, ExtendedRejectsInterceptResend) {
  EXPECT_THROW(run_protocol(extended_config(2, 10, eve(EveKind::InterceptResend), RngHandle{})), InvalidConfig);
}

TEST(Qkd, ExtendedRejectsNonMuubEncodings) {
  auto cfg = extended_config(2, 10, eve(EveKind::None), RngHandle{});
  cfg.encodings[1] = cfg.encodings[0];
  EXPECT_THROW(run_protocol(cfg), HypothesisViolated);
}

TEST(Qkd, InvalidParameters) {
  EXPECT_THROW(extended_config(3, 10, eve(EveKind::None), RngHandle{}), InvalidConfig);
  EXPECT_THROW(run_protocol(lm05_config(10, 1.5, eve(EveKind::None), RngHandle{})), InvalidConfig);
}

TEST(Qkd, SameSeedSameStats) {
  const auto cfg = lm05_config(5000, 0.4, eve(EveKind::InterceptResend), RngHandle{6, 0});
  EXPECT_EQ(run_protocol(cfg), run_protocol(cfg));
  auto other = cfg;
  other.rng.seed = 7;
  EXPECT_FALSE(run_protocol(cfg) == run_protocol(other));
}

TEST(Qkd, TraceHasOneRowPerRound) {
  std::vector<RoundRecord> trace;
  const auto s = run_protocol(extended_config(4, 300, eve(EveKind::Qmm), RngHandle{8, 0}), &trace);
  ASSERT_EQ(trace.size(), 300u);
  std::size_t sifted = 0;
  for (const auto& r : trace) sifted += r.sifted;
  EXPECT_EQ(sifted, s.sifted);
  std::ostringstream os;
  write_trace_csv(os, trace);
  const auto text = os.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 301);
}

TEST(Qkd, EveKindNames) {
  for (auto k : {EveKind::None, EveKind::Qmm, EveKind::InterceptResend})
    EXPECT_EQ(eve_kind_from_string(to_string(k)), k);
  EXPECT_THROW(eve_kind_from_string("mallory"), std::invalid_argument);
}
