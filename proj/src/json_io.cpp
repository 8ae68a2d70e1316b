#include "utester/json_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

namespace utester {

namespace {

std::size_t dim_field(const Json& j, const char* key, std::size_t fallback) {
  return j.contains(key) ? j.at(key).get<std::size_t>() : fallback;
}

}  // namespace

Json matrix_to_json(const ComplexMatrix& m) {
  Json entries = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index k = 0; k < m.cols(); ++k) entries.push_back({m(i, k).real(), m(i, k).imag()});
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

ComplexMatrix matrix_from_json(const Json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& entries = j.at("entries");
  if (rows < 0 || cols < 0 || entries.size() != static_cast<std::size_t>(rows * cols)) {
    throw std::invalid_argument("matrix literal: entry count differs from rows x cols");
  }
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index k = 0; k < cols; ++k) {
      const auto& e = entries.at(static_cast<std::size_t>(i * cols + k));
      if (!e.is_array() || e.size() != 2) {
        throw std::invalid_argument("matrix literal: entries must be [re, im] pairs");
      }
      m(i, k) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  if (!m.allFinite()) throw std::invalid_argument("matrix literal: non-finite entry");
  return m;
}

Json state_to_json(const ComplexVector& v) { return matrix_to_json(ComplexMatrix(v)); }

ComplexVector state_from_json(const Json& j) {
  const ComplexMatrix m = matrix_from_json(j);
  if (m.cols() != 1) throw std::invalid_argument("state literal: cols must be 1");
  return m.col(0);
}

Json tester_to_json(const Tester& t) {
  Json projectors = Json::array();
  for (const auto& p : t.projectors()) projectors.push_back(state_to_json(p.amplitudes()));
  return Json{{"d", t.dim()},
              {"label", t.label()},
              {"input", state_to_json(t.input().amplitudes())},
              {"projectors", std::move(projectors)}};
}

Tester tester_from_json(const Json& j) {
  if (j.is_string()) return named_tester(j.get<std::string>());
  std::vector<PureState> projectors;
  for (const auto& p : j.at("projectors")) projectors.emplace_back(state_from_json(p));
  return Tester(PureState(state_from_json(j.at("input"))), std::move(projectors),
                j.at("d").get<std::size_t>(), j.value("label", std::string{}));
}

Tester load_tester(const std::string& name_or_path, std::size_t d) {
  if (std::filesystem::exists(name_or_path)) return tester_from_json(read_json_file(name_or_path));
  return named_tester(name_or_path, d);
}

Json basis_to_json(const UnitaryBasis& b) {
  Json elements = Json::array();
  for (const auto& u : b.elements) elements.push_back(matrix_to_json(u.matrix()));
  return Json{{"d", b.d}, {"name", b.name}, {"elements", std::move(elements)}};
}

UnitaryBasis basis_from_json(const Json& j) {
  if (j.is_string()) return build_named_basis(j.get<std::string>(), 2);
  UnitaryBasis b{j.at("d").get<std::size_t>(), {}, j.value("name", std::string{})};
  for (const auto& e : j.at("elements")) b.elements.emplace_back(matrix_from_json(e));
  for (const auto& u : b.elements)
    if (u.dim() != b.d) throw DimensionMismatch("basis literal: element dimension differs from d");
  return b;
}

UnitaryBasis load_basis(const std::string& name_or_path, std::size_t d) {
  if (std::filesystem::exists(name_or_path)) return basis_from_json(read_json_file(name_or_path));
  return build_named_basis(name_or_path, d);
}

Json muub_report_to_json(const MuubReport& r) {
  Json out;
  out["overlaps"] = r.overlaps;
  out["kappa"] = r.kappa ? Json(*r.kappa) : Json("not constant");
  out["expected_kappa"] = r.expected_kappa;
  out["verdict"] = r.verdict;
  return out;
}

Json bound_to_json(const BoundEstimate& b) {
  Json starts = Json::array();
  for (const auto& s : b.starts) starts.push_back({{"start", s.start_value}, {"final", s.final_value}});
  return Json{{"value", b.value}, {"minimizer", matrix_to_json(b.minimizer.matrix())},
              {"starts", std::move(starts)}};
}

ProtocolConfig protocol_config_from_json(const Json& j) {
  const std::string protocol = j.value("protocol", std::string("lm05"));
  const auto rounds = j.value("rounds", std::uint64_t{0});
  RngHandle rng{j.value("seed", std::uint64_t{0}), j.value("stream", std::uint64_t{0})};

  EveStrategy eve;
  if (j.contains("eve")) {
    const auto& e = j.at("eve");
    if (e.is_string()) {
      eve.kind = eve_kind_from_string(e.get<std::string>());
    } else {
      eve.kind = eve_kind_from_string(e.value("kind", std::string("none")));
      const std::string resend = e.value("resend", std::string("fixed"));
      if (resend != "fixed" && resend != "random") throw InvalidConfig("eve.resend: fixed|random");
      eve.resend = resend == "random" ? ResendPolicy::RandomInput : ResendPolicy::Fixed;
      const std::string sp = e.value("set_policy", std::string("fixed"));
      if (sp != "fixed" && sp != "random") throw InvalidConfig("eve.set_policy: fixed|random");
      eve.set_policy = sp == "random" ? SetPolicy::Random : SetPolicy::Fixed;
      eve.fixed_set = e.value("fixed_set", std::size_t{0});
    }
  }

  ProtocolConfig cfg;
  if (protocol == "lm05") {
    cfg = lm05_config(rounds, j.value("control_fraction", 0.0), eve, rng);
  } else if (protocol == "extended") {
    const std::size_t D = j.value("D", std::size_t{2});
    if (j.contains("tester_sets") && j.contains("encodings")) {
      cfg.protocol = ProtocolKind::Extended;
      cfg.rounds = rounds;
      cfg.eve = eve;
      cfg.rng = rng;
      cfg.D = D;
    } else {
      cfg = extended_config(D, rounds, eve, rng);
    }
    cfg.control_fraction = j.value("control_fraction", 0.0);
  } else {
    throw InvalidConfig("unknown protocol: " + protocol);
  }
  cfg.d = dim_field(j, "d", cfg.d);
  cfg.D = dim_field(j, "D", cfg.D);

  if (j.contains("tester_sets")) {
    const auto& sets = j.at("tester_sets");
    if (!sets.is_array() || sets.size() != 2) throw InvalidConfig("tester_sets must hold two sets");
    for (std::size_t s = 0; s < 2; ++s) {
      TesterSet ts{{}, cfg.d};
      for (const auto& t : sets[s]) {
        ts.testers.push_back(t.is_string() ? named_tester(t.get<std::string>(), cfg.d)
                                           : tester_from_json(t));
      }
      cfg.tester_sets[s] = std::move(ts);
    }
  }
  if (j.contains("encodings")) {
    const auto& enc = j.at("encodings");
    if (!enc.is_array() || enc.size() != 2) throw InvalidConfig("encodings must hold two bases");
    for (std::size_t s = 0; s < 2; ++s) {
      cfg.encodings[s] = enc[s].is_string() ? build_named_basis(enc[s].get<std::string>(), cfg.d)
                                            : basis_from_json(enc[s]);
    }
  }
  return cfg;
}

Json protocol_config_to_json(const ProtocolConfig& cfg) {
  Json sets = Json::array();
  for (const auto& s : cfg.tester_sets) {
    Json arr = Json::array();
    for (const auto& t : s.testers) arr.push_back(tester_to_json(t));
    sets.push_back(std::move(arr));
  }
  return Json{
      {"protocol", cfg.protocol == ProtocolKind::Lm05 ? "lm05" : "extended"},
      {"d", cfg.d},
      {"D", cfg.D},
      {"rounds", cfg.rounds},
      {"control_fraction", cfg.control_fraction},
      {"seed", cfg.rng.seed},
      {"stream", cfg.rng.stream},
      {"eve",
       {{"kind", to_string(cfg.eve.kind)},
        {"resend", cfg.eve.resend == ResendPolicy::RandomInput ? "random" : "fixed"},
        {"set_policy", cfg.eve.set_policy == SetPolicy::Random ? "random" : "fixed"},
        {"fixed_set", cfg.eve.fixed_set}}},
      {"tester_sets", std::move(sets)},
      {"encodings", {basis_to_json(cfg.encodings[0]), basis_to_json(cfg.encodings[1])}}};
}

Json protocol_stats_to_json(const ProtocolStats& s) {
  Json out{{"rounds", s.rounds},
           {"sifted", s.sifted},
           {"sift_fraction", s.sift_fraction()},
           {"sift_fraction_se", s.sift_fraction_se()},
           {"decode_errors", s.decode_errors},
           {"decode_error_rate", s.decode_error_rate()},
           {"decode_error_rate_se", s.decode_error_rate_se()},
           {"control_rounds", s.control_rounds},
           {"control_comparisons", s.control_comparisons},
           {"control_mismatches", s.control_mismatches},
           {"control_mismatch_rate", s.control_mismatch_rate()},
           {"control_mismatch_rate_se", s.control_mismatch_rate_se()}};
  if (s.eve_present) {
    out["eve_correct"] = s.eve_correct;
    out["eve_accuracy"] = s.eve_accuracy();
    out["eve_accuracy_se"] = s.eve_accuracy_se();
  } else {
    out["eve_accuracy"] = nullptr;
  }
  return out;
}

Json round_floats(const Json& j) {
  if (j.is_number_float()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", j.get<double>());
    return Json(std::strtod(buf, nullptr));
  }
  if (j.is_array()) {
    Json out = Json::array();
    for (const auto& e : j) out.push_back(round_floats(e));
    return out;
  }
  if (j.is_object()) {
    Json out = Json::object();
    for (const auto& [k, v] : j.items()) out[k] = round_floats(v);
    return out;
  }
  return j;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument("invalid JSON in " + path + ": " + e.what());
  }
}

}  // namespace utester
