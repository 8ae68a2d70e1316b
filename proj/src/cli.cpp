#include "utester/cli.hpp"

#include "utester/bounds.hpp"
#include "utester/muub.hpp"
#include "utester/qkd.hpp"
#include "utester/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>

namespace utester {

namespace {

struct NullBuffer : std::streambuf {
  int overflow(int c) override { return c; }
};

struct Options {
  bool json_only = false;
  std::uint64_t seed = 0;

  // verify
  std::string suite = "all";

  // bound
  std::string t1, t2;
  std::size_t starts = 16;
  std::size_t iters = 2000;
  double tol = 1e-10;
  std::size_t d = 2;

  // muub-check
  std::string basis_a, basis_b;
  double kappa_tol = kKappaTol;

  // basis
  std::string basis_action, basis_name;

  // qkd
  std::string protocol;
  std::uint64_t rounds = 10000;
  double control_fraction = 0.0;
  std::string eve = "none";
  std::size_t D = 2;
  std::string config_path, trace_path;
};

Json run_verify(const Options& o, std::ostream& log, bool& pass) {
  std::vector<std::string> names;
  if (o.suite == "all") {
    names = suite_names();
  } else {
    const auto all = suite_names();
    if (std::find(all.begin(), all.end(), o.suite) == all.end()) {
      throw CLI::ValidationError("--suite", "unknown suite '" + o.suite + "'");
    }
    names = {o.suite};
  }
  Json suites = Json::object();
  pass = true;
  for (const auto& n : names) {
    const auto res = run_suite(n, o.seed);
    log << "suite " << n << ": " << (res.passed() ? "pass" : "FAIL") << " (" << res.checks.size()
        << " checks)\n";
    pass = pass && res.passed();
    suites[n] = res.to_json();
  }
  if (names.size() == 1) return Json{{"seed", o.seed}, {"result", suites[names.front()]}};
  return Json{{"seed", o.seed}, {"suites", std::move(suites)}};
}

Json run_bound(const Options& o, std::ostream& log) {
  const Tester t1 = load_tester(o.t1, o.d), t2 = load_tester(o.t2, o.d);
  SearchConfig cfg;
  cfg.starts = o.starts;
  cfg.max_iterations = o.iters;
  cfg.tolerance = o.tol;
  cfg.rng = RngHandle{o.seed, 0};
  const auto est = estimate_bound(t1, t2, cfg);
  log << "bound(" << o.t1 << ", " << o.t2 << ") <= " << est.value << " bits over " << o.starts
      << " starts\n";
  Json payload{{"t1", o.t1}, {"t2", o.t2}};
  const Json body = bound_to_json(est);
  for (const auto& [k, v] : body.items()) payload[k] = v;
  return payload;
}

Json run_muub_check(const Options& o, std::ostream& log, bool& pass) {
  const auto a = load_basis(o.basis_a, o.d), b = load_basis(o.basis_b, o.d);
  const auto report = are_muub(a, b, o.kappa_tol);
  pass = report.verdict;
  log << o.basis_a << " vs " << o.basis_b << ": " << (report.verdict ? "MUUB" : "not MUUB") << '\n';
  Json payload{{"a", o.basis_a},
               {"b", o.basis_b},
               {"a_orthogonal", is_orthogonal_unitary_basis(a)},
               {"b_orthogonal", is_orthogonal_unitary_basis(b)}};
  const Json body = muub_report_to_json(report);
  for (const auto& [k, v] : body.items()) payload[k] = v;
  return payload;
}

Json run_basis(const Options& o, std::ostream& log) {
  if (o.basis_action == "list") {
    Json names = Json::array();
    for (const auto& n : named_basis_list()) names.push_back(n);
    return Json{{"bases", std::move(names)}};
  }
  if (o.basis_name.empty()) throw CLI::ValidationError("basis dump", "a basis name is required");
  const auto b = build_named_basis(o.basis_name, o.d);
  log << "basis " << b.name << ": " << b.size() << " elements, d = " << b.d << '\n';
  Json payload = basis_to_json(b);
  payload["orthogonal"] = is_orthogonal_unitary_basis(b);
  return payload;
}

Json run_qkd(const Options& o, const CLI::App& sub, std::ostream& log) {
  ProtocolConfig cfg;
  if (!o.config_path.empty()) {
    cfg = protocol_config_from_json(read_json_file(o.config_path));
    if (o.protocol == "lm05" && cfg.protocol != ProtocolKind::Lm05) {
      throw InvalidConfig("config protocol differs from the subcommand");
    }
    if (o.protocol == "extended" && cfg.protocol != ProtocolKind::Extended) {
      throw InvalidConfig("config protocol differs from the subcommand");
    }
    if (sub.count("--rounds")) cfg.rounds = o.rounds;
    if (sub.count("--control-fraction")) cfg.control_fraction = o.control_fraction;
    if (sub.count("--eve")) cfg.eve.kind = eve_kind_from_string(o.eve);
    if (sub.count("--seed")) cfg.rng.seed = o.seed;
  } else {
    EveStrategy eve;
    eve.kind = eve_kind_from_string(o.eve);
    cfg = o.protocol == "lm05"
              ? lm05_config(o.rounds, o.control_fraction, eve, RngHandle{o.seed, 0})
              : extended_config(o.D, o.rounds, eve, RngHandle{o.seed, 0});
  }

  std::vector<RoundRecord> trace;
  const auto stats = run_protocol(cfg, o.trace_path.empty() ? nullptr : &trace);
  if (!o.trace_path.empty()) {
    std::ofstream out(o.trace_path);
    if (!out) throw std::invalid_argument("cannot write trace file " + o.trace_path);
    write_trace_csv(out, trace);
  }
  log << o.protocol << ": " << stats.rounds << " rounds, " << stats.sifted << " sifted, decode error "
      << stats.decode_error_rate() << '\n';

  Json payload{{"protocol", o.protocol},
               {"D", cfg.D},
               {"eve", to_string(cfg.eve.kind)},
               {"seed", cfg.rng.seed},
               {"stats", protocol_stats_to_json(stats)}};
  if (cfg.protocol == ProtocolKind::Extended && cfg.eve.kind == EveKind::Qmm) {
    payload["analytic_eve_accuracy"] = analytic_eve_accuracy(cfg.D);
  }
  return payload;
}

}  // namespace

Json CommandReport::to_json() const {
  return Json{{"command", command}, {"status", status}, {"payload", payload}, {"elapsed_ms", elapsed_ms}};
}

CommandResult run_command(const std::vector<std::string>& argv, std::ostream& log_sink) {
  Options o;
  CLI::App app{"Unitary tester toolkit: entropic bounds, MUUB checks and two-way QKD simulation",
               "utester"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_flag("--json-only", o.json_only, "Suppress the human-readable log on stderr");
    sub->add_option("--seed", o.seed, "RNG seed");
  };

  auto* verify = app.add_subcommand("verify", "Run self-verification suites");
  verify->add_option("--suite", o.suite, "qmath|tester|ppovm|bounds|muub|props|all");
  add_common(verify);

  auto* bound = app.add_subcommand("bound", "Estimate the entropic bound of a tester pair");
  bound->add_option("--t1", o.t1, "First tester (name or JSON path)")->required();
  bound->add_option("--t2", o.t2, "Second tester (name or JSON path)")->required();
  bound->add_option("--starts", o.starts, "Number of random starts")->check(CLI::PositiveNumber);
  bound->add_option("--iters", o.iters, "Nelder-Mead iterations per start");
  bound->add_option("--tol", o.tol, "Convergence tolerance in bits")->check(CLI::PositiveNumber);
  bound->add_option("--d", o.d, "Dimension for bell:k testers");
  add_common(bound);

  auto* muub = app.add_subcommand("muub-check", "Check two unitary bases for mutual unbiasedness");
  muub->add_option("a", o.basis_a, "First basis (name or JSON path)")->required();
  muub->add_option("b", o.basis_b, "Second basis (name or JSON path)")->required();
  muub->add_option("--d", o.d, "Dimension for named bases");
  muub->add_option("--tol", o.kappa_tol, "Overlap tolerance");
  add_common(muub);

  auto* basis = app.add_subcommand("basis", "List or dump named unitary bases");
  basis->add_option("action", o.basis_action, "list|dump")
      ->required()
      ->check(CLI::IsMember({"list", "dump"}));
  basis->add_option("name", o.basis_name, "Basis name for dump");
  basis->add_option("--d", o.d, "Dimension");
  add_common(basis);

  auto* qkd = app.add_subcommand("qkd", "Simulate a two-way QKD protocol");
  qkd->add_option("protocol", o.protocol, "lm05|extended")
      ->required()
      ->check(CLI::IsMember({"lm05", "extended"}));
  qkd->add_option("--rounds", o.rounds, "Number of rounds");
  qkd->add_option("--control-fraction", o.control_fraction, "Control-mode probability (lm05)")
      ->check(CLI::Range(0.0, 1.0));
  qkd->add_option("--eve", o.eve, "none|qmm|intercept")->check(CLI::IsMember({"none", "qmm", "intercept"}));
  qkd->add_option("--D", o.D, "Extended protocol alphabet size (2 or 4)");
  qkd->add_option("--config", o.config_path, "ProtocolConfig JSON file");
  qkd->add_option("--trace", o.trace_path, "Write a per-round CSV log here");
  add_common(qkd);

  CommandResult result;
  try {
    std::vector<std::string> reversed(argv.rbegin(), argv.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    result.exit_code = 0;
    result.message = app.help();
    return result;
  } catch (const CLI::ParseError& e) {
    result.exit_code = 2;
    result.message = std::string(e.what()) + "\n\n" + app.help();
    return result;
  }

  NullBuffer null_buffer;
  std::ostream null_stream(&null_buffer);
  std::ostream& log = o.json_only ? null_stream : log_sink;

  const auto* sub = app.get_subcommands().front();
  result.report.command = sub->get_name();
  const auto t0 = std::chrono::steady_clock::now();
  try {
    bool pass = true;
    Json payload;
    if (sub == verify) {
      payload = run_verify(o, log, pass);
    } else if (sub == bound) {
      payload = run_bound(o, log);
    } else if (sub == muub) {
      payload = run_muub_check(o, log, pass);
    } else if (sub == basis) {
      payload = run_basis(o, log);
    } else {
      payload = run_qkd(o, *qkd, log);
    }
    result.report.payload = round_floats(payload);
    result.report.status = pass ? "pass" : "fail";
    result.exit_code = pass ? 0 : 1;
  } catch (const CLI::Error& e) {
    result.report.status = "error";
    result.report.payload = Json{{"error", e.what()}};
    result.message = std::string(e.what()) + "\n\n" + sub->help();
    result.exit_code = 2;
  } catch (const std::exception& e) {
    result.report.status = "error";
    result.report.payload = Json{{"error", e.what()}};
    result.message = e.what();
    result.exit_code = 2;
  }
  result.report.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace utester
