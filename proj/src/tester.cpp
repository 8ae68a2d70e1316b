#include "utester/tester.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace utester {

namespace {

bool same_projectors(const std::vector<PureState>& a, const std::vector<PureState>& b,
                     double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k].dim() != b[k].dim()) return false;
    // Equal up to a global phase.
    const double overlap = std::norm(a[k].amplitudes().dot(b[k].amplitudes()));
    if (std::abs(overlap - 1.0) > tol) return false;
  }
  return true;
}

}  // namespace

Tester::Tester(PureState input, std::vector<PureState> projectors, std::size_t d,
               std::string label)
    : input_(std::move(input)), projectors_(std::move(projectors)), d_(d),
      label_(std::move(label)) {
  if (d_ == 0) throw std::invalid_argument("tester: d must be >= 1");
  if (!input_.is_normalized()) throw std::invalid_argument("tester: input must be normalized");
  if (input_.dim() == d_) {
    kind_ = TesterKind::AncillaFree;
  } else if (input_.dim() == d_ * d_) {
    kind_ = TesterKind::Bipartite;
  } else {
    throw DimensionMismatch("tester: input dimension must be d or d^2");
  }
  const std::size_t n = projectors_.size();
  if (n != d_ && n != d_ * d_) throw std::invalid_argument("tester: projector count must be d or d^2");
  if (kind_ == TesterKind::AncillaFree && n != d_) {
    throw std::invalid_argument("tester: ancilla-free testers take exactly d projectors");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (projectors_[i].dim() != input_.dim()) {
      throw DimensionMismatch("tester: projector dimension differs from input dimension");
    }
    for (std::size_t j = i; j < n; ++j) {
      const Complex g = projectors_[i].amplitudes().dot(projectors_[j].amplitudes());
      const double expect = i == j ? 1.0 : 0.0;
      if (std::abs(g - expect) > kDefaultTol) {
        throw std::invalid_argument("tester: projectors are not orthonormal");
      }
    }
  }
}

ComplexMatrix Tester::embed(const Unitary& u) const {
  if (u.dim() != d_) throw DimensionMismatch("tester: unitary dimension differs from tester d");
  return kind_ == TesterKind::AncillaFree ? u.matrix() : embed_system(u.matrix(), d_);
}

double Distribution::total() const { return std::accumulate(p.begin(), p.end(), 0.0); }

Distribution measure(const std::vector<PureState>& projectors, const ComplexVector& state) {
  Distribution out;
  out.p.reserve(projectors.size());
  for (const auto& chi : projectors) {
    if (static_cast<Eigen::Index>(chi.dim()) != state.size()) {
      throw DimensionMismatch("measure: state dimension differs from projector dimension");
    }
    out.p.push_back(std::norm(chi.amplitudes().dot(state)));
  }
  const double total = out.total();
  if (total < 1.0 - kLeakTol) {
    throw LeakyMeasurement("leaky measurement: outcome probabilities sum to " +
                           std::to_string(total));
  }
  out.leaky = total < 1.0 - kDefaultTol;
  return out;
}

Distribution outcome_distribution(const Tester& t, const Unitary& u) {
  return measure(t.projectors(), t.embed(u) * t.input().amplitudes());
}

double shannon_entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p) {
    if (x >= -1e-12 && x <= 0.0) continue;
    h -= x * std::log2(x);
  }
  return h;
}

double shannon_entropy(const Distribution& p) { return shannon_entropy(p.p); }

double tester_entropy(const Tester& t, const Unitary& u) {
  return shannon_entropy(outcome_distribution(t, u));
}

bool is_complete_set(const TesterSet& s, double tol) {
  if (s.testers.empty()) return false;
  const auto& first = s.testers.front();
  const std::size_t n = first.input().dim();
  ComplexMatrix resolution = ComplexMatrix::Zero(n, n);
  for (std::size_t i = 0; i < s.testers.size(); ++i) {
    const auto& ti = s.testers[i];
    if (ti.input().dim() != n || ti.dim() != first.dim()) return false;
    if (!same_projectors(ti.projectors(), first.projectors(), tol)) return false;
    for (std::size_t j = i + 1; j < s.testers.size(); ++j) {
      if (std::abs(ti.input().amplitudes().dot(s.testers[j].input().amplitudes())) > tol) {
        return false;
      }
    }
    resolution += ti.input().projector();
  }
  return max_abs(resolution - ComplexMatrix::Identity(n, n)) <= tol;
}

std::optional<std::vector<std::size_t>> equivalence_bijection(const Tester& t1, const Tester& t2,
                                                              const Unitary& u, double tol) {
  if (t1.dim() != t2.dim()) throw DimensionMismatch("are_equivalent: testers differ in d");
  const auto p1 = outcome_distribution(t1, u).p;
  const auto p2 = outcome_distribution(t2, u).p;
  if (p1.size() != p2.size()) return std::nullopt;

  auto order = [](const std::vector<double>& p) {
    std::vector<std::size_t> idx(p.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return p[a] < p[b]; });
    return idx;
  };
  const auto o1 = order(p1), o2 = order(p2);
  std::vector<std::size_t> sigma(p1.size());
  for (std::size_t r = 0; r < p1.size(); ++r) {
    if (std::abs(p1[o1[r]] - p2[o2[r]]) > tol) return std::nullopt;
    sigma[o1[r]] = o2[r];
  }
  return sigma;
}

bool are_equivalent(const Tester& t1, const Tester& t2, const Unitary& u, double tol) {
  return equivalence_bijection(t1, t2, u, tol).has_value();
}

bool is_eigenoperator(const ComplexMatrix& op, const PureState& state, double tol) {
  const auto& v = state.amplitudes();
  if (op.rows() != op.cols() || op.rows() != v.size()) {
    throw DimensionMismatch("is_eigenoperator: operator and state dimensions differ");
  }
  const ComplexVector w = op * v;
  const Complex lambda = v.dot(w) / v.squaredNorm();
  return (w - lambda * v).norm() <= tol * std::max(1.0, v.norm());
}

std::size_t schmidt_rank(const PureState& s, std::size_t d) {
  if (s.dim() != d * d) throw DimensionMismatch("schmidt_rank: state is not on C^d (x) C^d");
  ComplexMatrix m(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) m(i, k) = s.amplitudes()(i * d + k);
  const Eigen::VectorXd sv = Eigen::JacobiSVD<ComplexMatrix>(m).singularValues();
  return static_cast<std::size_t>((sv.array() > 1e-9).count());
}

std::optional<std::size_t> deterministic_outcome(const Tester& t, const Unitary& u) {
  const auto dist = outcome_distribution(t, u);
  if (shannon_entropy(dist) > kEntropyZeroTol) return std::nullopt;
  return static_cast<std::size_t>(std::max_element(dist.p.begin(), dist.p.end()) - dist.p.begin());
}

bool can_distinguish(const Tester& t, const Unitary& u1, const Unitary& u2) {
  if (t.kind() == TesterKind::Bipartite && schmidt_rank(t.input(), t.dim()) > 1) {
    throw std::invalid_argument(
        "can_distinguish: only ancilla-free or separable-input testers are supported");
  }
  const auto k1 = deterministic_outcome(t, u1);
  const auto k2 = deterministic_outcome(t, u2);
  if (!k1 || !k2) {
    throw HypothesisViolated("can_distinguish: both unitaries must give zero tester entropy");
  }
  return *k1 != *k2;
}

std::vector<PureState> z_basis() { return {PureState::basis(2, 0), PureState::basis(2, 1)}; }

std::vector<PureState> x_basis() { return {PureState(gates::plus()), PureState(gates::minus())}; }

std::vector<PureState> bell_basis(std::size_t d) {
  const ComplexVector psi = max_entangled(d).amplitudes() / std::sqrt(static_cast<double>(d));
  std::vector<PureState> out;
  out.reserve(d * d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) out.emplace_back(embed_system(gates::weyl(d, a, b), d) * psi);
  return out;
}

std::vector<PureState> rotated_bell_basis(const ComplexMatrix& rotation) {
  const auto d = static_cast<std::size_t>(rotation.rows());
  const ComplexMatrix w = embed_system(Unitary(rotation).matrix(), d);
  std::vector<PureState> out;
  for (const auto& b : bell_basis(d)) out.emplace_back(w * b.amplitudes());
  return out;
}

Tester named_tester(const std::string& name, std::size_t d) {
  if (name.rfind("bell:", 0) == 0) {
    std::size_t k = 0;
    try {
      k = std::stoul(name.substr(5));
    } catch (const std::exception&) {
      throw std::invalid_argument("unknown tester name: " + name);
    }
    auto basis = bell_basis(d);
    if (k >= basis.size()) throw std::invalid_argument("bell tester index out of range: " + name);
    PureState input = basis[k];
    return Tester(std::move(input), std::move(basis), d, name);
  }
  if (name.size() != 2 || (name[1] != 'Z' && name[1] != 'X')) {
    throw std::invalid_argument("unknown tester name: " + name);
  }
  if (d != 2) throw std::invalid_argument("named qubit testers require d = 2");
  ComplexVector input;
  switch (name[0]) {
    case '0': input = gates::ket(2, 0); break;
    case '1': input = gates::ket(2, 1); break;
    case '+': input = gates::plus(); break;
    case '-': input = gates::minus(); break;
    default: throw std::invalid_argument("unknown tester name: " + name);
  }
  return Tester(PureState(input), name[1] == 'Z' ? z_basis() : x_basis(), 2, name);
}

std::vector<std::string> named_tester_list() {
  return {"0Z", "1Z", "+X", "-X", "0X", "1X", "+Z", "-Z", "bell:k"};
}

TesterSet z_tester_set() { return {{named_tester("0Z"), named_tester("1Z")}, 2}; }
TesterSet x_tester_set() { return {{named_tester("+X"), named_tester("-X")}, 2}; }
TesterSet zero_one_x_tester_set() { return {{named_tester("0X"), named_tester("1X")}, 2}; }
TesterSet plus_minus_z_tester_set() { return {{named_tester("+Z"), named_tester("-Z")}, 2}; }

TesterSet bell_tester_set(std::size_t d, const std::vector<PureState>& measurement) {
  TesterSet s{{}, d};
  const auto inputs = bell_basis(d);
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    s.testers.emplace_back(inputs[k], measurement, d, "bell:" + std::to_string(k));
  }
  return s;
}

Tester rotate(const Tester& t, const Unitary& w) {
  const ComplexMatrix op = t.embed(w);
  std::vector<PureState> projectors;
  projectors.reserve(t.outcomes());
  for (const auto& chi : t.projectors()) projectors.emplace_back(op * chi.amplitudes());
  return Tester(PureState(op * t.input().amplitudes()), std::move(projectors), t.dim(), t.label());
}

TesterSet rotate(const TesterSet& s, const Unitary& w) {
  TesterSet out{{}, s.d};
  for (const auto& t : s.testers) out.testers.push_back(rotate(t, w));
  return out;
}

}  // namespace utester
