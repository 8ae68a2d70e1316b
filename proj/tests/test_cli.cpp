#include "utester/cli.hpp"
#include "utester/json_io.hpp"
#include "utester/verify.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace utester;

namespace {

CommandResult run(std::vector<std::string> args) {
  std::ostringstream log;
  return run_command(args, log);
}

}  // namespace

TEST(JsonIo, MatrixRoundTrip) {
  const ComplexMatrix m = gates::pauli_y() + gates::hadamard();
  EXPECT_LT(max_abs(matrix_from_json(matrix_to_json(m)) - m), 1e-15);
  EXPECT_THROW(matrix_from_json(Json{{"rows", 2}, {"cols", 2}, {"entries", Json::array()}}), std::exception);
}

TEST(JsonIo, TesterRoundTrip) {
  const Tester t = named_tester("bell:2", 2);
  const Tester u = tester_from_json(tester_to_json(t));
  EXPECT_EQ(u.dim(), t.dim());
  EXPECT_EQ(u.outcomes(), t.outcomes());
  EXPECT_LT((u.input().amplitudes() - t.input().amplitudes()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(JsonIo, BasisRoundTrip) {
  const auto b = build_named_basis("pauli-unbiased", 2);
  const auto c = basis_from_json(basis_to_json(b));
  ASSERT_EQ(c.size(), b.size());
  for (std::size_t k = 0; k < b.size(); ++k) EXPECT_LT(max_abs(c.elements[k].matrix() - b.elements[k].matrix()), 1e-15);
}

TEST(JsonIo, ProtocolConfigRoundTrip) {
  EveStrategy e;
  e.kind = EveKind::Qmm;
  e.set_policy = SetPolicy::Random;
  const auto cfg = extended_config(4, 123, e, RngHandle{9, 1});
  const auto back = protocol_config_from_json(protocol_config_to_json(cfg));
  EXPECT_EQ(back.D, 4u);
  EXPECT_EQ(back.rounds, 123u);
  EXPECT_EQ(back.eve.set_policy, SetPolicy::Random);
  EXPECT_EQ(run_protocol(back), run_protocol(cfg));
}

TEST(JsonIo, RejectsBadEvePolicy) {
  EXPECT_THROW(protocol_config_from_json(Json{{"protocol", "lm05"}, {"eve", {{"kind", "qmm"}, {"resend", "x"}}}}),
               InvalidConfig);
}

TEST(JsonIo, RoundFloatsIsStable) {
  const Json j{{"a", 0.1 + 0.2}, {"b", Json::array({1.0 / 3.0, 2})}};
  const Json r = round_floats(j);
  EXPECT_EQ(r["a"].get<double>(), 0.3);
  EXPECT_EQ(r["b"][1].get<int>(), 2);
  EXPECT_EQ(round_floats(r).dump(), r.dump());
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).exit_code, 2);
  EXPECT_EQ(run({"frobnicate"}).exit_code, 2);
  EXPECT_EQ(run({"bound", "--t1", "0Z"}).exit_code, 2);
  EXPECT_EQ(run({"qkd", "bb84"}).exit_code, 2);
  EXPECT_EQ(run({"verify", "--suite", "nope"}).exit_code, 2);
  const auto r = run({"bound", "--t1", "0Z", "--t2", "9Q"});
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_EQ(r.report.status, "error");
}

TEST(Cli, HelpExitsZero) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.message.find("muub-check"), std::string::npos);
}

TEST(Cli, MuubCheckVerdictSetsExitCode) {
  const auto yes = run({"muub-check", "rotation", "hadamard-pair", "--json-only"});
  EXPECT_EQ(yes.exit_code, 0);
  EXPECT_EQ(yes.report.payload["kappa"].get<double>(), 2.0);
  const auto no = run({"muub-check", "pauli", "pauli"});
  EXPECT_EQ(no.exit_code, 1);
  EXPECT_EQ(no.report.status, "fail");
}

TEST(Cli, BasisListAndDump) {
  const auto list = run({"basis", "list"});
  EXPECT_EQ(list.report.payload["bases"].size(), named_basis_list().size());
  const auto dump = run({"basis", "dump", "weyl", "--d", "3"});
  EXPECT_EQ(dump.exit_code, 0);
  EXPECT_EQ(dump.report.payload["elements"].size(), 9u);
}

TEST(Cli, BoundPayload) {
  const auto r = run({"bound", "--t1", "0Z", "--t2", "0X", "--starts", "4", "--seed", "3"});
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_NEAR(r.report.payload["value"].get<double>(), 1.0, 1e-4);
  EXPECT_EQ(r.report.payload["starts"].size(), 4u);
}

TEST(Cli, TesterFromFile) {
  const std::string path = ::testing::TempDir() + "utester_tester.json";
  std::ofstream(path) << tester_to_json(named_tester("+X")).dump();
  const auto r = run({"bound", "--t1", "0Z", "--t2", path, "--starts", "4"});
  ASSERT_EQ(r.exit_code, 0) << r.message;
  EXPECT_NEAR(r.report.payload["value"].get<double>(), 0.0, 1e-6);
  std::remove(path.c_str());
}

TEST(Cli, QkdWithConfigAndTrace) {
  const std::string cfg_path = ::testing::TempDir() + "utester_cfg.json";
  const std::string trace_path = ::testing::TempDir() + "utester_trace.csv";
  std::ofstream(cfg_path) << R"({"protocol": "extended", "D": 4, "rounds": 50, "eve": "qmm", "seed": 4})";
  const auto r = run({"qkd", "extended", "--config", cfg_path, "--rounds", "80", "--trace", trace_path});
  ASSERT_EQ(r.exit_code, 0) << r.message;
  EXPECT_EQ(r.report.payload["stats"]["rounds"].get<int>(), 80);
  EXPECT_EQ(r.report.payload["analytic_eve_accuracy"].get<double>(), 0.625);
  std::ifstream in(trace_path);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) ++n;
  EXPECT_EQ(n, 81);
  EXPECT_EQ(run({"qkd", "lm05", "--config", cfg_path}).exit_code, 2);
  std::remove(cfg_path.c_str());
  std::remove(trace_path.c_str());
}

TEST(Cli, QkdReproducible) {
  const std::vector<std::string> args{"qkd", "lm05", "--rounds", "2000", "--eve", "intercept",
                                      "--control-fraction", "0.5", "--seed", "11"};
  EXPECT_EQ(run(args).report.payload.dump(), run(args).report.payload.dump());
}

TEST(Cli, VerifySingleSuite) {
  const auto r = run({"verify", "--suite", "muub", "--seed", "1"});
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.report.payload["result"]["suite"], "muub");
}

TEST(Verify, AllSuitesPass) {
  for (const auto& name : suite_names()) {
    const auto r = run_suite(name, 7);
    for (const auto& c : r.checks) EXPECT_TRUE(c.pass) << name << ": " << c.name;
  }
}
