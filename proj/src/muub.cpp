#include "utester/muub.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace utester {

double hs_overlap(const Unitary& u, const Unitary& v) {
  if (u.dim() != v.dim()) throw DimensionMismatch("hs_overlap: dimensions differ");
  return std::norm((u.matrix().adjoint() * v.matrix()).trace());
}

bool is_orthogonal_unitary_basis(const UnitaryBasis& b, double tol) {
  const std::size_t n = b.size();
  if (n == 0 || (n != b.d && n != b.d * b.d)) return false;
  for (const auto& u : b.elements)
    if (u.dim() != b.d) return false;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (hs_overlap(b.elements[i], b.elements[j]) > tol) return false;
  return true;
}

MuubReport are_muub(const UnitaryBasis& a, const UnitaryBasis& b, double tol) {
  if (a.d != b.d) throw DimensionMismatch("are_muub: bases act on different dimensions");
  if (a.size() != b.size()) throw DimensionMismatch("are_muub: bases differ in size");

  MuubReport r;
  const std::size_t n = a.size();
  r.overlaps.assign(n, std::vector<double>(n, 0.0));
  double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double o = hs_overlap(a.elements[i], b.elements[j]);
      r.overlaps[i][j] = o;
      lo = std::min(lo, o);
      hi = std::max(hi, o);
      sum += o;
    }
  if (n > 0 && hi - lo <= tol) r.kappa = sum / static_cast<double>(n * n);

  if (n == a.d * a.d) {
    r.expected_kappa = 1.0;
  } else if (n == a.d) {
    r.expected_kappa = static_cast<double>(a.d);
  } else {
    return r;  // kappa undefined for intermediate subspace sizes
  }
  r.verdict = r.kappa.has_value() && std::abs(*r.kappa - r.expected_kappa) <= tol &&
              std::abs(hi - r.expected_kappa) <= tol && std::abs(lo - r.expected_kappa) <= tol;
  return r;
}

ComplexMatrix pauli_unbiasing_unitary() {
  const Complex half_i(0.0, 0.5);
  return 0.5 * gates::identity(2) + half_i * (gates::pauli_x() + gates::pauli_y() + gates::pauli_z());
}

UnitaryBasis build_named_basis(const std::string& name, std::size_t d) {
  UnitaryBasis b{d, {}, name};
  auto need_qubit = [&] {
    if (d != 2) throw std::invalid_argument("basis '" + name + "' is only defined for d = 2");
  };
  const ComplexMatrix i_sigma_y = Complex(0, 1) * gates::pauli_y();
  if (name == "pauli") {
    need_qubit();
    for (const auto& m : {gates::identity(2), gates::pauli_x(), gates::pauli_y(), gates::pauli_z()})
      b.elements.emplace_back(m);
  } else if (name == "rotation") {
    need_qubit();
    b.elements.emplace_back(gates::identity(2));
    b.elements.emplace_back(i_sigma_y);
  } else if (name == "hadamard-pair") {
    need_qubit();
    b.elements.emplace_back((gates::identity(2) - i_sigma_y) / std::numbers::sqrt2);
    b.elements.emplace_back((gates::identity(2) + i_sigma_y) / std::numbers::sqrt2);
  } else if (name == "weyl") {
    if (d == 0) throw std::invalid_argument("basis 'weyl' requires d >= 1");
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t c = 0; c < d; ++c) b.elements.emplace_back(gates::weyl(d, a, c));
  } else if (name == "pauli-unbiased") {
    need_qubit();
    const ComplexMatrix v = pauli_unbiasing_unitary();
    for (const auto& m : {gates::identity(2), gates::pauli_x(), gates::pauli_y(), gates::pauli_z()})
      b.elements.emplace_back(m * v);
  } else {
    throw std::invalid_argument("unknown basis name: " + name);
  }
  return b;
}

std::vector<std::string> named_basis_list() {
  return {"pauli", "rotation", "hadamard-pair", "weyl", "pauli-unbiased"};
}

std::vector<Unitary> rotation_family(std::size_t points) {
  std::vector<Unitary> out;
  out.reserve(points);
  const ComplexMatrix i_sigma_y = Complex(0, 1) * gates::pauli_y();
  for (std::size_t k = 0; k < points; ++k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(points);
    out.emplace_back(std::cos(theta) * gates::identity(2) + std::sin(theta) * i_sigma_y);
  }
  return out;
}

UnitaryBasis rotate(const UnitaryBasis& b, const Unitary& w) {
  UnitaryBasis out{b.d, {}, b.name};
  for (const auto& u : b.elements) out.elements.push_back(w * u * w.adjoint());
  return out;
}

double tester_space_overlap(const Unitary& u, const Unitary& v, std::size_t input_dim) {
  const std::size_t d = u.dim();
  const double ov = hs_overlap(u, v);
  if (input_dim == d) return ov;
  if (input_dim == d * d) return static_cast<double>(d * d) * ov;
  throw DimensionMismatch("tester_space_overlap: input dimension must be d or d^2");
}

bool cross_overlap_range_holds(const UnitaryBasis& u, const UnitaryBasis& u2,
                               std::size_t input_dim, double tol, double* max_value) {
  const double bound = static_cast<double>(u.size());
  double worst = 0.0;
  bool ok = true;
  for (const auto& a : u.elements)
    for (const auto& b : u2.elements) {
      const double o = tester_space_overlap(a, b, input_dim);
      worst = std::max(worst, o);
      if (o < -tol || o > bound + tol) ok = false;
    }
  if (max_value) *max_value = worst;
  return ok;
}

TrivialPropReport verify_prop_trivial(const TesterSet& s1, const TesterSet& s2,
                                      const std::vector<Unitary>& us,
                                      const std::vector<Unitary>& span_samples) {
  TrivialPropReport r;
  r.sets_complete = is_complete_set(s1) && is_complete_set(s2);
  if (!r.sets_complete) r.notes.emplace_back("tester sets are not both complete");

  r.entropies_zero = true;
  for (const auto& u : us)
    for (const auto& t1 : s1.testers)
      for (const auto& t2 : s2.testers) {
        const double h1 = tester_entropy(t1, u), h2 = tester_entropy(t2, u);
        r.max_entropy_sum = std::max(r.max_entropy_sum, h1 + h2);
        if (h1 > kEntropyZeroTol || h2 > kEntropyZeroTol) r.entropies_zero = false;
      }
  if (!r.entropies_zero) r.notes.emplace_back("some cross-set entropy sum is nonzero");

  r.no_eigenoperators = true;
  for (std::size_t m = 0; m < us.size(); ++m)
    for (std::size_t n = 0; n < us.size(); ++n) {
      if (m == n) continue;
      const Unitary rel = us[m].adjoint() * us[n];
      for (const auto* set : {&s1, &s2})
        for (const auto& t : set->testers)
          if (is_eigenoperator(t.embed(rel), t.input())) {
            r.no_eigenoperators = false;
            r.notes.push_back("U_" + std::to_string(m) + "^dagger U_" + std::to_string(n) +
                              " is an eigenoperator of input of " + t.label());
          }
    }
  r.hypothesis = r.sets_complete && r.entropies_zero && r.no_eigenoperators;

  r.s1 = true;
  for (std::size_t m = 0; m < us.size(); ++m)
    for (std::size_t n = m + 1; n < us.size(); ++n) {
      const double o = hs_overlap(us[m], us[n]);
      r.max_cross_overlap = std::max(r.max_cross_overlap, o);
      if (o > kDefaultTol) r.s1 = false;
    }

  r.s2 = true;
  for (const auto& w : span_samples)
    for (const auto& t1 : s1.testers)
      for (const auto& t2 : s2.testers)
        if (!are_equivalent(t1, t2, w)) r.s2 = false;

  // Span membership of the samples, via least squares on the vectorizations.
  r.samples_in_span = true;
  if (!us.empty()) {
    const std::size_t d = us.front().dim();
    ComplexMatrix basis(d * d, us.size());
    for (std::size_t k = 0; k < us.size(); ++k) basis.col(k) = vectorize(us[k]);
    const auto qr = basis.colPivHouseholderQr();
    for (const auto& w : span_samples) {
      const ComplexVector target = vectorize(w);
      const ComplexVector coeffs = qr.solve(target);
      if ((basis * coeffs - target).norm() > 1e-9) r.samples_in_span = false;
    }
  }
  if (!r.samples_in_span) r.notes.emplace_back("some span sample lies outside span(U)");
  return r;
}

MaximalPropReport verify_prop_maximal(const TesterSet& s1, const TesterSet& s2,
                                      const UnitaryBasis& u, const UnitaryBasis& u2) {
  MaximalPropReport r;
  bool ok = true;
  auto fail = [&](std::string why) {
    ok = false;
    r.notes.push_back(std::move(why));
  };

  if (s1.testers.empty() || s2.testers.empty()) fail("empty tester set");
  if (!is_complete_set(s1) || !is_complete_set(s2)) fail("tester sets are not both complete");
  if (!is_orthogonal_unitary_basis(u) || !is_orthogonal_unitary_basis(u2)) {
    fail("unitary sets are not both orthogonal bases");
  }
  if (u.size() != u2.size()) fail("bases differ in size");

  std::size_t outcomes = 0;
  if (ok) {
    outcomes = s1.testers.front().outcomes();
    const double uniform = std::log2(static_cast<double>(outcomes));
    // Each set must be deterministic on its own basis and uniform on the other.
    auto check = [&](const TesterSet& s, const UnitaryBasis& own, const UnitaryBasis& other,
                     const std::string& tag) {
      for (const auto& t : s.testers) {
        if (t.outcomes() != outcomes) fail(tag + ": testers differ in outcome count");
        for (const auto& e : own.elements)
          if (tester_entropy(t, e) > kSaturationTol) {
            fail(tag + ": " + t.label() + " not deterministic on its own basis");
            return;
          }
        for (const auto& e : other.elements)
          if (std::abs(tester_entropy(t, e) - uniform) > kSaturationTol) {
            fail(tag + ": " + t.label() + " not uniform on the other basis");
            return;
          }
      }
    };
    check(s1, u, u2, "set 1");
    check(s2, u2, u, "set 2");
  }
  r.hypothesis = ok;

  if (!s1.testers.empty() && u.size() == u2.size() && u.d == u2.d) {
    r.range_ok = cross_overlap_range_holds(u, u2, s1.testers.front().input().dim(), 1e-9,
                                           &r.max_range_value);
    r.muub = are_muub(u, u2);
  }
  return r;
}

MuubSearchResult search_muub_partner(const UnitaryBasis& b, const SearchConfig& cfg) {
  const std::size_t d = b.d;
  if (b.size() != d * d || !is_orthogonal_unitary_basis(b)) {
    throw std::invalid_argument("search_muub_partner: expects a full orthogonal unitary basis");
  }
  // Cross overlaps |Tr(B_i^dagger B_j V)|^2 depend only on the products B_i^dagger B_j.
  std::vector<ComplexMatrix> products;
  products.reserve(b.size() * b.size());
  for (const auto& bi : b.elements)
    for (const auto& bj : b.elements) products.push_back(bi.matrix().adjoint() * bj.matrix());

  auto objective = [&](const Unitary& v) {
    double acc = 0.0;
    for (const auto& p : products) {
      const double dev = std::norm((p * v.matrix()).trace()) - 1.0;
      acc += dev * dev;
    }
    return acc / static_cast<double>(products.size());
  };
  auto found = minimize_over_unitaries(d, objective, cfg);

  MuubSearchResult out;
  out.residual = found.value;
  out.partner = UnitaryBasis{d, {}, b.name + "-partner"};
  for (const auto& e : b.elements) out.partner.elements.push_back(e * found.minimizer);
  return out;
}

}  // namespace utester
