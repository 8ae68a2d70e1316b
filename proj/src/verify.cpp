#include "utester/verify.hpp"

#include "utester/bounds.hpp"
#include "utester/muub.hpp"
#include "utester/ppovm.hpp"

#include <cmath>
#include <numbers>

namespace utester {

namespace {

// Unitary whose first column is psi (up to phase).
ComplexMatrix completion(const ComplexVector& psi, Rng& rng) {
  const auto d = psi.size();
  ComplexMatrix m(d, d);
  m.col(0) = psi;
  if (d > 1) m.rightCols(d - 1) = haar_random_unitary(static_cast<std::size_t>(d), rng).matrix().rightCols(d - 1);
  Eigen::HouseholderQR<ComplexMatrix> qr(m);
  return qr.householderQ();
}

// Unitary mapping psi to phase * chi_m, random elsewhere.
Unitary map_onto(const Tester& t, std::size_t m, Rng& rng) {
  const auto d = static_cast<Eigen::Index>(t.dim());
  ComplexMatrix target(d, d);
  target.col(0) = t.projectors()[m].amplitudes();
  Eigen::Index col = 1;
  for (std::size_t k = 0; k < t.outcomes(); ++k)
    if (k != m) target.col(col++) = t.projectors()[k].amplitudes();
  // Random unitary mixing on the complement, random phase on the image.
  ComplexMatrix mix = ComplexMatrix::Identity(d, d);
  if (d > 1) {
    mix.bottomRightCorner(d - 1, d - 1) = haar_random_unitary(static_cast<std::size_t>(d - 1), rng).matrix();
  }
  mix(0, 0) = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
  const ComplexMatrix source = completion(t.input().amplitudes(), rng);
  return Unitary(target * mix * source.adjoint(), 1e-8);
}

void add(SuiteResult& r, std::string name, bool pass, Json value = nullptr) {
  r.checks.push_back({std::move(name), pass, std::move(value)});
}

bool near(const ComplexMatrix& a, const ComplexMatrix& b, double tol = 1e-12) {
  return a.rows() == b.rows() && a.cols() == b.cols() && max_abs(a - b) <= tol;
}

ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = 0; k < cols; ++k) {
      const double re = rng.normal();
      const double im = rng.normal();
      m(i, k) = Complex(re, im);
    }
  return m;
}

SuiteResult suite_qmath(std::uint64_t seed) {
  SuiteResult r{"qmath", {}};
  Rng rng(RngHandle{seed, 1});
  add(r, "tensor(I2,I2)=I4", near(tensor(gates::identity(2), gates::identity(2)), gates::identity(4)));
  add(r, "tensor(|0>,|1>)=e1", near(tensor(gates::ket(2, 0), gates::ket(2, 1)), gates::ket(4, 1)));
  add(r, "partial_trace_ancilla(I4)=2I2",
      near(partial_trace_ancilla(gates::identity(4), 2), 2.0 * gates::identity(2)));
  const ComplexVector mes = max_entangled(2).amplitudes();
  add(r, "partial_trace_ancilla(MES)=I2",
      near(partial_trace_ancilla(mes * mes.adjoint(), 2), gates::identity(2)));
  add(r, "partial_transpose_first(MES)=SWAP",
      near(partial_transpose_first(mes * mes.adjoint(), 2), swap_operator(2)));
  add(r, "vectorize(I2)=|00>+|11>", near(vectorize(gates::identity(2)), mes));

  double worst_trace = 0.0, worst_vec = 0.0, worst_swap = 0.0;
  for (int k = 0; k < 10; ++k) {
    const std::size_t d = 2 + static_cast<std::size_t>(k % 2);
    const ComplexMatrix m = random_matrix(d * d, d * d, rng);
    worst_trace = std::max(worst_trace, std::abs(partial_trace_ancilla(m, d).trace() - m.trace()));
    const Unitary a = haar_random_unitary(d, rng), b = haar_random_unitary(d, rng);
    const double lhs = std::norm(vectorize(a).dot(vectorize(b)));
    worst_vec = std::max(worst_vec, std::abs(lhs - hs_overlap(a, b)));
    const ComplexMatrix s = swap_operator(d);
    worst_swap = std::max(worst_swap, max_abs(s * tensor(a.matrix(), b.matrix()) * s -
                                              tensor(b.matrix(), a.matrix())));
  }
  add(r, "partial trace preserves trace", worst_trace <= 1e-12, worst_trace);
  add(r, "|<<a|b>>|^2 = |Tr(a^dagger b)|^2", worst_vec <= 1e-10, worst_vec);
  add(r, "S(A x B)S = B x A", worst_swap <= 1e-12, worst_swap);

  double worst_unitarity = 0.0, moment = 0.0;
  const std::size_t samples = 10000;
  for (std::size_t k = 0; k < samples; ++k) {
    const Unitary u = haar_random_unitary(2, rng);
    worst_unitarity = std::max(
        worst_unitarity, max_abs(u.matrix().adjoint() * u.matrix() - gates::identity(2)));
    moment += std::norm(u.matrix().trace());
  }
  moment /= static_cast<double>(samples);
  add(r, "haar unitarity", worst_unitarity < 1e-12, worst_unitarity);
  add(r, "haar E|Tr u|^2 = 1 (d=2)", std::abs(moment - 1.0) <= 0.05, moment);
  add(r, "haar determinism",
      near(haar_random_unitary(3, RngHandle{seed, 9}).matrix(),
           haar_random_unitary(3, RngHandle{seed, 9}).matrix(), 0.0));
  return r;
}

SuiteResult suite_tester(std::uint64_t seed) {
  SuiteResult r{"tester", {}};
  const Unitary id = Unitary::identity(2), h(gates::hadamard());
  const auto t0z = named_tester("0Z"), t0x = named_tester("0X"), tpx = named_tester("+X");
  add(r, "H(T_0Z, I) = 0", tester_entropy(t0z, id) <= kEntropyZeroTol);
  add(r, "H(T_0X, H) = 0", tester_entropy(t0x, h) <= kEntropyZeroTol);
  add(r, "H(T_0Z, H) = 1", std::abs(tester_entropy(t0z, h) - 1.0) <= 1e-12, tester_entropy(t0z, h));
  add(r, "{T_0Z, T_1Z} complete", is_complete_set(z_tester_set()));
  add(r, "{T_0Z} incomplete", !is_complete_set(TesterSet{{t0z}, 2}));
  add(r, "{T_0Z, T_+X} incomplete", !is_complete_set(TesterSet{{t0z, tpx}, 2}));
  const Unitary half_turn((gates::identity(2) - Complex(0, 1) * gates::pauli_y()) / std::numbers::sqrt2);
  add(r, "T_0Z ~ T_+X at (I - i sigma_y)/sqrt2", are_equivalent(t0z, tpx, half_turn));
  add(r, "T_0Z !~ T_0X at I", !are_equivalent(t0z, t0x, id));

  Rng rng(RngHandle{seed, 2});
  std::size_t agree = 0;
  const std::size_t n = 100;
  for (std::size_t k = 0; k < n; ++k) {
    const auto inst = random_deterministic_instance(2 + k % 2, rng);
    const bool dist = can_distinguish(inst.tester, inst.u1, inst.u2);
    const bool eig = is_eigenoperator((inst.u2.adjoint() * inst.u1).matrix(), inst.tester.input(), 1e-8);
    if (dist == !eig) ++agree;
  }
  add(r, "distinguishability iff not eigenoperator (100 random)", agree == n, static_cast<double>(agree));
  return r;
}

SuiteResult suite_ppovm(std::uint64_t seed) {
  SuiteResult r{"ppovm", {}};
  Rng rng(RngHandle{seed, 3});
  for (std::size_t k = 0; k < 100; ++k) {
    const std::size_t d = k < 50 ? 2 : 3;
    const auto kind = k % 2 == 0 ? TesterKind::AncillaFree : TesterKind::Bipartite;
    const Tester t = random_tester(d, kind, rng);
    const Unitary u = haar_random_unitary(d, rng);
    const auto direct = outcome_distribution(t, u).p;
    const auto via = probability_via_choi(tester_elements(t), choi_operator(u)).p;
    double dev = 0.0;
    for (std::size_t i = 0; i < direct.size(); ++i) dev = std::max(dev, std::abs(direct[i] - via[i]));
    add(r,
        "p_direct = Tr[T_k E] #" + std::to_string(k) + " (d=" + std::to_string(d) + ", " +
            (kind == TesterKind::AncillaFree ? "ancilla-free" : "bipartite") + ")",
        dev <= 1e-9, dev);
  }
  return r;
}

SuiteResult suite_bounds(std::uint64_t seed) {
  SuiteResult r{"bounds", {}};
  const auto t0z = named_tester("0Z"), t0x = named_tester("0X"), tpx = named_tester("+X"),
             tpz = named_tester("+Z");
  const double s1 = entropy_sum(t0z, tpx, Unitary(gates::pauli_y()));
  const double s2 = entropy_sum(t0z, t0x, Unitary(gates::hadamard()));
  add(r, "entropy_sum(0Z, +X, sigma_y) = 0", s1 <= 1e-6, s1);
  add(r, "entropy_sum(0Z, 0X, H) = 1", std::abs(s2 - 1.0) <= 1e-6, s2);
  add(r, "mub_overlap_bound(Z, X) = 1", std::abs(mub_overlap_bound(z_basis(), x_basis()) - 1.0) <= 1e-12);

  SearchConfig cfg;
  cfg.starts = 32;
  cfg.rng = RngHandle{seed, 4};
  const double b1 = estimate_bound(t0z, t0x, cfg).value;
  const double b2 = estimate_bound(t0z, tpx, cfg).value;
  const double b3 = estimate_bound(t0z, tpz, cfg).value;
  add(r, "bound(0Z, 0X) = 1", std::abs(b1 - 1.0) <= 1e-4, b1);
  add(r, "bound(0Z, +X) = 0", b2 <= 1e-6, b2);
  add(r, "bound(0Z, +Z) = 1 (grid oracle)", b3 > 1e-3 && std::abs(b3 - 1.0) <= 1e-3, b3);
  return r;
}

SuiteResult suite_muub(std::uint64_t) {
  SuiteResult r{"muub", {}};
  const auto pauli = build_named_basis("pauli", 2);
  add(r, "pauli is orthogonal", is_orthogonal_unitary_basis(pauli));
  add(r, "rotation is orthogonal", is_orthogonal_unitary_basis(build_named_basis("rotation", 2)));
  add(r, "{I, H} is not orthogonal",
      !is_orthogonal_unitary_basis(UnitaryBasis{2, {Unitary::identity(2), Unitary(gates::hadamard())}, ""}));
  add(r, "weyl(3) is orthogonal", is_orthogonal_unitary_basis(build_named_basis("weyl", 3)));

  const auto rot = are_muub(build_named_basis("rotation", 2), build_named_basis("hadamard-pair", 2));
  add(r, "rotation vs hadamard-pair: kappa = 2", rot.verdict, rot.kappa ? Json(*rot.kappa) : Json());
  const auto pu = are_muub(pauli, build_named_basis("pauli-unbiased", 2));
  add(r, "pauli vs pauli-unbiased: kappa = 1", pu.verdict, pu.kappa ? Json(*pu.kappa) : Json());
  add(r, "pauli vs pauli: not MUUB", !are_muub(pauli, pauli).verdict);
  return r;
}

SuiteResult suite_props(std::uint64_t seed) {
  SuiteResult r{"props", {}};
  const auto rot = build_named_basis("rotation", 2);
  const auto span = rotation_family(16);

  auto trivial_ok = [](const TrivialPropReport& rep) { return rep.hypothesis && rep.s1 && rep.s2; };
  add(r, "trivial: Z/X sets on {I, i sigma_y}",
      trivial_ok(verify_prop_trivial(z_tester_set(), x_tester_set(), rot.elements, span)));
  const std::vector<Unitary> bad{Unitary::identity(2), Unitary(gates::pauli_z())};
  add(r, "trivial: {I, sigma_z} fails hypothesis",
      !verify_prop_trivial(z_tester_set(), x_tester_set(), bad, span).hypothesis);

  Rng rng(RngHandle{seed, 5});
  std::size_t ok = 0;
  const std::size_t copies = 10;
  for (std::size_t k = 0; k < copies; ++k) {
    const Unitary w = haar_random_unitary(2, rng);
    std::vector<Unitary> us, samples;
    for (const auto& u : rot.elements) us.push_back(w * u * w.adjoint());
    for (const auto& u : span) samples.push_back(w * u * w.adjoint());
    if (trivial_ok(verify_prop_trivial(rotate(z_tester_set(), w), rotate(x_tester_set(), w), us, samples))) ++ok;
  }
  add(r, "trivial: Haar-conjugated copies", ok == copies, static_cast<double>(ok));

  const auto m2 = verify_prop_maximal(z_tester_set(), zero_one_x_tester_set(), rot,
                                      build_named_basis("hadamard-pair", 2));
  add(r, "maximal: D=2 fixture", m2.hypothesis && m2.range_ok && m2.muub.verdict);
  const auto m4 = verify_prop_maximal(
      bell_tester_set(2, bell_basis(2)), bell_tester_set(2, rotated_bell_basis(pauli_unbiasing_unitary())),
      build_named_basis("pauli", 2), build_named_basis("pauli-unbiased", 2));
  add(r, "maximal: D=4 fixture", m4.hypothesis && m4.range_ok && m4.muub.verdict);
  add(r, "maximal: U = U2 fails hypothesis",
      !verify_prop_maximal(z_tester_set(), zero_one_x_tester_set(), rot, rot).hypothesis);
  return r;
}

}  // namespace

bool SuiteResult::passed() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

Json SuiteResult::to_json() const {
  Json arr = Json::array();
  std::size_t failed = 0;
  for (const auto& c : checks) {
    Json e{{"name", c.name}, {"pass", c.pass}};
    if (!c.value.is_null()) e["value"] = c.value;
    arr.push_back(std::move(e));
    if (!c.pass) ++failed;
  }
  return Json{{"suite", suite},
              {"passed", checks.size() - failed},
              {"failed", failed},
              {"checks", std::move(arr)}};
}

std::vector<std::string> suite_names() {
  return {"qmath", "tester", "ppovm", "bounds", "muub", "props"};
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed) {
  if (name == "qmath") return suite_qmath(seed);
  if (name == "tester") return suite_tester(seed);
  if (name == "ppovm") return suite_ppovm(seed);
  if (name == "bounds") return suite_bounds(seed);
  if (name == "muub") return suite_muub(seed);
  if (name == "props") return suite_props(seed);
  throw std::invalid_argument("unknown suite: " + name);
}

Tester random_tester(std::size_t d, TesterKind kind, Rng& rng) {
  const std::size_t n = kind == TesterKind::AncillaFree ? d : d * d;
  PureState input = haar_random_state(n, rng);
  const Unitary basis = haar_random_unitary(n, rng);
  std::vector<PureState> projectors;
  for (std::size_t k = 0; k < n; ++k) projectors.emplace_back(basis.matrix().col(k));
  return Tester(std::move(input), std::move(projectors), d, "random");
}

DeterministicInstance random_deterministic_instance(std::size_t d, Rng& rng) {
  Tester t = random_tester(d, TesterKind::AncillaFree, rng);
  const std::size_t m1 = rng.uniform_index(d);
  const std::size_t m2 = rng.bernoulli(0.5) ? m1 : (m1 + 1 + rng.uniform_index(d - 1)) % d;
  Unitary u1 = map_onto(t, m1, rng);
  Unitary u2 = map_onto(t, m2, rng);
  return {std::move(t), std::move(u1), std::move(u2)};
}

}  // namespace utester
