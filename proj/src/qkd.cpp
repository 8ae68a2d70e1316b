#include "utester/qkd.hpp"

#include <algorithm>
#include <cmath>

namespace utester {

namespace {

double rate(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double binomial_se(double p, std::uint64_t n) {
  return n == 0 ? 0.0 : std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

std::size_t sample(const Distribution& dist, Rng& rng) {
  const double x = rng.uniform() * dist.total();
  double acc = 0.0;
  for (std::size_t k = 0; k < dist.p.size(); ++k) {
    acc += dist.p[k];
    if (x < acc) return k;
  }
  return dist.p.size() - 1;
}

// table[i] = deterministic outcome of the tester on encoding i.
struct DecodeTable {
  std::vector<std::size_t> outcome_of;

  int decode(std::size_t outcome) const {
    const auto it = std::find(outcome_of.begin(), outcome_of.end(), outcome);
    return it == outcome_of.end() ? -1 : static_cast<int>(it - outcome_of.begin());
  }
};

DecodeTable build_table(const Tester& t, const UnitaryBasis& enc) {
  DecodeTable table;
  for (const auto& u : enc.elements) {
    const auto k = deterministic_outcome(t, u);
    if (!k) throw InvalidConfig("tester " + t.label() + " is not deterministic on encoding set");
    if (std::find(table.outcome_of.begin(), table.outcome_of.end(), *k) != table.outcome_of.end()) {
      throw InvalidConfig("tester " + t.label() + " cannot distinguish the encodings");
    }
    table.outcome_of.push_back(*k);
  }
  return table;
}

// tables[set][tester] against encodings[enc_index[set]].
using Tables = std::array<std::vector<DecodeTable>, 2>;

Tables build_tables(const ProtocolConfig& cfg, std::array<std::size_t, 2> enc_index) {
  Tables tables;
  for (std::size_t s = 0; s < 2; ++s)
    for (const auto& t : cfg.tester_sets[s].testers)
      tables[s].push_back(build_table(t, cfg.encodings[enc_index[s]]));
  return tables;
}

void validate_common(const ProtocolConfig& cfg) {
  for (const auto& s : cfg.tester_sets) {
    if (s.testers.empty()) throw InvalidConfig("tester sets must be nonempty");
    if (!is_complete_set(s)) throw InvalidConfig("tester sets must be complete");
    for (const auto& t : s.testers)
      if (t.dim() != cfg.d) throw InvalidConfig("tester dimension differs from d");
  }
  if (!(cfg.control_fraction >= 0.0 && cfg.control_fraction <= 1.0)) {
    throw InvalidConfig("control fraction must lie in [0, 1]");
  }
  if (cfg.eve.fixed_set > 1) throw InvalidConfig("eve fixed_set must be 0 or 1");
}

ComplexVector apply(const Tester& t, const Unitary& u, const ComplexVector& state) {
  return t.embed(u) * state;
}

}  // namespace

double ProtocolStats::sift_fraction() const { return rate(sifted, rounds); }
double ProtocolStats::decode_error_rate() const { return rate(decode_errors, sifted); }
double ProtocolStats::control_mismatch_rate() const {
  return rate(control_mismatches, control_comparisons);
}
double ProtocolStats::eve_accuracy() const { return rate(eve_correct, sifted); }
double ProtocolStats::sift_fraction_se() const { return binomial_se(sift_fraction(), rounds); }
double ProtocolStats::decode_error_rate_se() const {
  return binomial_se(decode_error_rate(), sifted);
}
double ProtocolStats::control_mismatch_rate_se() const {
  return binomial_se(control_mismatch_rate(), control_comparisons);
}
double ProtocolStats::eve_accuracy_se() const { return binomial_se(eve_accuracy(), sifted); }

ProtocolStats run_lm05(const ProtocolConfig& cfg, std::vector<RoundRecord>* trace) {
  if (cfg.d != 2) throw InvalidConfig("lm05 requires d = 2");
  validate_common(cfg);
  const UnitaryBasis& enc = cfg.encodings[0];
  if (enc.size() != 2 || enc.d != 2) throw InvalidConfig("lm05 requires a two-element encoding");
  const Tables tables = build_tables(cfg, {0, 0});

  // All testers of both sets, for the random-input QMM policy.
  std::vector<std::pair<std::size_t, std::size_t>> all_testers;
  for (std::size_t s = 0; s < 2; ++s)
    for (std::size_t k = 0; k < cfg.tester_sets[s].testers.size(); ++k) all_testers.emplace_back(s, k);

  ProtocolStats stats;
  stats.eve_present = cfg.eve.kind != EveKind::None;
  if (trace) trace->clear();

  for (std::uint64_t r = 0; r < cfg.rounds; ++r) {
    Rng rng(cfg.rng.derive(r));
    RoundRecord rec;
    rec.round = r;

    const std::size_t bob_set = rng.uniform_index(2);
    const std::size_t bob_idx = rng.uniform_index(cfg.tester_sets[bob_set].testers.size());
    const Tester& bob = cfg.tester_sets[bob_set].testers[bob_idx];
    rec.bob_set = static_cast<int>(bob_set);
    rec.bob_tester = static_cast<int>(bob_idx);

    const bool control = rng.bernoulli(cfg.control_fraction);
    rec.control = control;
    // Control-mode basis, or the encoded bit.
    const std::size_t alice_value = rng.uniform_index(2);
    rec.alice_value = static_cast<int>(alice_value);

    // Eve's forward-path choices.
    std::size_t eve_set = 0, eve_idx = 0;
    if (cfg.eve.kind == EveKind::Qmm) {
      if (cfg.eve.resend == ResendPolicy::RandomInput) {
        std::tie(eve_set, eve_idx) = all_testers[rng.uniform_index(all_testers.size())];
      }
    } else if (cfg.eve.kind == EveKind::InterceptResend) {
      eve_set = rng.uniform_index(2);
    }
    const auto& eve_meas = cfg.tester_sets[eve_set].testers.front().projectors();

    ComplexVector at_alice = bob.input().amplitudes();
    std::size_t eve_forward_outcome = 0;
    if (cfg.eve.kind == EveKind::Qmm) {
      at_alice = cfg.tester_sets[eve_set].testers[eve_idx].input().amplitudes();
    } else if (cfg.eve.kind == EveKind::InterceptResend) {
      eve_forward_outcome = sample(measure(eve_meas, at_alice), rng);
      at_alice = eve_meas[eve_forward_outcome].amplitudes();
    }

    if (control) {
      ++stats.control_rounds;
      const auto& alice_meas = cfg.tester_sets[alice_value].testers.front().projectors();
      const std::size_t outcome = sample(measure(alice_meas, at_alice), rng);
      rec.alice_outcome = static_cast<int>(outcome);
      if (alice_value == bob_set) {
        ++stats.control_comparisons;
        const auto& ref = measure(alice_meas, bob.input().amplitudes()).p;
        const auto expected =
            static_cast<std::size_t>(std::max_element(ref.begin(), ref.end()) - ref.begin());
        if (outcome != expected) ++stats.control_mismatches;
      }
      if (trace) trace->push_back(rec);
      continue;
    }

    ++stats.sifted;
    rec.sifted = true;
    const Unitary& u = enc.elements[alice_value];
    const ComplexVector returned = apply(bob, u, at_alice);

    ComplexVector at_bob = returned;
    int eve_guess = -1;
    if (cfg.eve.kind == EveKind::Qmm) {
      const Tester& eve = cfg.tester_sets[eve_set].testers[eve_idx];
      const std::size_t o = sample(measure(eve.projectors(), returned), rng);
      eve_guess = tables[eve_set][eve_idx].decode(o);
      const Unitary& replay = enc.elements[static_cast<std::size_t>(std::max(eve_guess, 0))];
      at_bob = apply(bob, replay, bob.input().amplitudes());
    } else if (cfg.eve.kind == EveKind::InterceptResend) {
      const std::size_t o = sample(measure(eve_meas, returned), rng);
      const Tester probe(PureState(eve_meas[eve_forward_outcome].amplitudes()), eve_meas, 2);
      eve_guess = build_table(probe, enc).decode(o);
      at_bob = eve_meas[o].amplitudes();
    }

    const std::size_t bob_outcome = sample(measure(bob.projectors(), at_bob), rng);
    const int decoded = tables[bob_set][bob_idx].decode(bob_outcome);
    if (decoded != static_cast<int>(alice_value)) ++stats.decode_errors;
    if (eve_guess == static_cast<int>(alice_value)) ++stats.eve_correct;

    rec.bob_outcome = static_cast<int>(bob_outcome);
    rec.bob_decoded = decoded;
    rec.eve_guess = eve_guess;
    if (trace) trace->push_back(rec);
  }
  stats.rounds = cfg.rounds;
  return stats;
}

ProtocolStats run_extended(const ProtocolConfig& cfg, std::vector<RoundRecord>* trace) {
  validate_common(cfg);
  if (cfg.eve.kind == EveKind::InterceptResend) {
    throw InvalidConfig("extended protocol supports eve kinds none and qmm only");
  }
  const auto report = verify_prop_maximal(cfg.tester_sets[0], cfg.tester_sets[1],
                                          cfg.encodings[0], cfg.encodings[1]);
  if (!report.hypothesis) {
    std::string why = "extended protocol: tester/encoding sets fail the maximal-bound hypothesis";
    for (const auto& n : report.notes) why += "; " + n;
    throw HypothesisViolated(why);
  }
  if (!report.muub.verdict) throw HypothesisViolated("extended protocol: encodings are not MUUB");
  const std::size_t D = cfg.encodings[0].size();
  if (D != cfg.D) throw InvalidConfig("D differs from the encoding set size");
  const Tables tables = build_tables(cfg, {0, 1});

  ProtocolStats stats;
  stats.eve_present = cfg.eve.kind != EveKind::None;
  if (trace) trace->clear();

  for (std::uint64_t r = 0; r < cfg.rounds; ++r) {
    Rng rng(cfg.rng.derive(r));
    RoundRecord rec;
    rec.round = r;

    const std::size_t bob_set = rng.uniform_index(2);
    const std::size_t bob_idx = rng.uniform_index(cfg.tester_sets[bob_set].testers.size());
    const Tester& bob = cfg.tester_sets[bob_set].testers[bob_idx];
    const std::size_t alice_set = rng.uniform_index(2);
    const std::size_t digit = rng.uniform_index(D);
    rec.bob_set = static_cast<int>(bob_set);
    rec.bob_tester = static_cast<int>(bob_idx);
    rec.alice_set = static_cast<int>(alice_set);
    rec.alice_value = static_cast<int>(digit);

    std::size_t eve_set = 0, eve_idx = 0, fallback = 0;
    if (cfg.eve.kind == EveKind::Qmm) {
      eve_set = cfg.eve.set_policy == SetPolicy::Random ? rng.uniform_index(2) : cfg.eve.fixed_set;
      eve_idx = rng.uniform_index(cfg.tester_sets[eve_set].testers.size());
      fallback = rng.uniform_index(D);
    }

    const Unitary& u = cfg.encodings[alice_set].elements[digit];
    ComplexVector at_bob;
    int eve_guess = -1;
    if (cfg.eve.kind == EveKind::Qmm) {
      const Tester& eve = cfg.tester_sets[eve_set].testers[eve_idx];
      const ComplexVector returned = apply(eve, u, eve.input().amplitudes());
      const std::size_t o = sample(measure(eve.projectors(), returned), rng);
      const int own = tables[eve_set][eve_idx].decode(o);
      const Unitary& replay = cfg.encodings[eve_set].elements[static_cast<std::size_t>(std::max(own, 0))];
      at_bob = apply(bob, replay, bob.input().amplitudes());
      eve_guess = eve_set == alice_set ? own : static_cast<int>(fallback);
    } else {
      at_bob = apply(bob, u, bob.input().amplitudes());
    }

    const bool sifted = bob_set == alice_set;
    rec.sifted = sifted;
    if (sifted) {
      ++stats.sifted;
      const std::size_t bob_outcome = sample(measure(bob.projectors(), at_bob), rng);
      const int decoded = tables[bob_set][bob_idx].decode(bob_outcome);
      if (decoded != static_cast<int>(digit)) ++stats.decode_errors;
      if (eve_guess == static_cast<int>(digit)) ++stats.eve_correct;
      rec.bob_outcome = static_cast<int>(bob_outcome);
      rec.bob_decoded = decoded;
      rec.eve_guess = eve_guess;
    }
    if (trace) trace->push_back(rec);
  }
  stats.rounds = cfg.rounds;
  return stats;
}

ProtocolStats run_protocol(const ProtocolConfig& cfg, std::vector<RoundRecord>* trace) {
  return cfg.protocol == ProtocolKind::Lm05 ? run_lm05(cfg, trace) : run_extended(cfg, trace);
}

double analytic_eve_accuracy(std::size_t D) {
  if (D < 2) throw std::invalid_argument("analytic_eve_accuracy: D must be >= 2");
  return 0.5 + 0.5 / static_cast<double>(D);
}

ProtocolConfig lm05_config(std::uint64_t rounds, double control_fraction, EveStrategy eve,
                           RngHandle rng) {
  ProtocolConfig cfg;
  cfg.protocol = ProtocolKind::Lm05;
  cfg.d = 2;
  cfg.D = 2;
  cfg.rounds = rounds;
  cfg.control_fraction = control_fraction;
  cfg.eve = eve;
  cfg.tester_sets = {z_tester_set(), x_tester_set()};
  cfg.encodings = {build_named_basis("rotation", 2), build_named_basis("rotation", 2)};
  cfg.rng = rng;
  return cfg;
}

ProtocolConfig extended_config(std::size_t D, std::uint64_t rounds, EveStrategy eve, RngHandle rng) {
  ProtocolConfig cfg;
  cfg.protocol = ProtocolKind::Extended;
  cfg.d = 2;
  cfg.D = D;
  cfg.rounds = rounds;
  cfg.eve = eve;
  cfg.rng = rng;
  if (D == 2) {
    cfg.tester_sets = {z_tester_set(), zero_one_x_tester_set()};
    cfg.encodings = {build_named_basis("rotation", 2), build_named_basis("hadamard-pair", 2)};
  } else if (D == 4) {
    cfg.tester_sets = {bell_tester_set(2, bell_basis(2)),
                       bell_tester_set(2, rotated_bell_basis(pauli_unbiasing_unitary()))};
    cfg.encodings = {build_named_basis("pauli", 2), build_named_basis("pauli-unbiased", 2)};
  } else {
    throw InvalidConfig("built-in extended configurations exist for D = 2 and D = 4");
  }
  return cfg;
}

void write_trace_csv(std::ostream& os, const std::vector<RoundRecord>& trace) {
  os << "round,bob_set,bob_tester,control,alice_set,alice_value,alice_outcome,bob_outcome,"
        "bob_decoded,sifted,eve_guess\n";
  for (const auto& r : trace) {
    os << r.round << ',' << r.bob_set << ',' << r.bob_tester << ',' << (r.control ? 1 : 0) << ','
       << r.alice_set << ',' << r.alice_value << ',' << r.alice_outcome << ',' << r.bob_outcome
       << ',' << r.bob_decoded << ',' << (r.sifted ? 1 : 0) << ',' << r.eve_guess << '\n';
  }
}

std::string to_string(EveKind k) {
  switch (k) {
    case EveKind::None: return "none";
    case EveKind::Qmm: return "qmm";
    case EveKind::InterceptResend: return "intercept";
  }
  return "none";
}

EveKind eve_kind_from_string(const std::string& s) {
  if (s == "none") return EveKind::None;
  if (s == "qmm") return EveKind::Qmm;
  if (s == "intercept") return EveKind::InterceptResend;
  throw InvalidConfig("unknown eve kind: " + s);
}

}  // namespace utester
