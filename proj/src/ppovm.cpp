#include "utester/ppovm.hpp"

#include <algorithm>
#include <cmath>

namespace utester {

ChoiOperator choi_operator(const Unitary& u) {
  const std::size_t d = u.dim();
  const ComplexVector psi = max_entangled(d).amplitudes();
  const ComplexVector image = embed_system(u.matrix(), d) * psi;
  return {d, image * image.adjoint()};
}

TesterElementSet tester_elements(const Tester& t) {
  const std::size_t d = t.dim();
  const std::size_t anc = t.kind() == TesterKind::AncillaFree ? 1 : d;

  TesterElementSet out;
  out.d = d;
  out.ancilla_dim = anc;
  out.probe = t.input().projector();

  // S rho^t S on (ancilla, reference).
  const ComplexMatrix swap = swap_operator(d, anc);
  const ComplexMatrix probe_t = partial_transpose_first(out.probe, d, anc);
  const ComplexMatrix swapped = swap * probe_t * swap.adjoint();
  const ComplexMatrix right = tensor(gates::identity(d), swapped);

  out.elements.reserve(t.outcomes());
  for (const auto& chi : t.projectors()) {
    const ComplexMatrix left = tensor(chi.projector(), gates::identity(d));
    out.elements.push_back(partial_trace(left * right, {d, anc, d}, 1));
  }
  return out;
}

ComplexMatrix tester_normalization(const TesterElementSet& ts) {
  const ComplexMatrix reduced = partial_trace(ts.probe, {ts.d, ts.ancilla_dim}, 1);
  return tensor(gates::identity(ts.d), ComplexMatrix(reduced.transpose()));
}

Distribution probability_via_choi(const TesterElementSet& ts, const ChoiOperator& e) {
  if (e.d != ts.d || e.matrix.rows() != static_cast<Eigen::Index>(ts.d * ts.d)) {
    throw DimensionMismatch("probability_via_choi: tester and Choi operator dimensions differ");
  }
  Distribution out;
  out.p.reserve(ts.elements.size());
  for (const auto& tk : ts.elements) {
    if (tk.rows() != e.matrix.rows()) {
      throw DimensionMismatch("probability_via_choi: element dimension differs");
    }
    const double p = (tk * e.matrix).trace().real();
    out.p.push_back(std::clamp(p, 0.0, 1.0));
  }
  out.leaky = out.total() < 1.0 - kDefaultTol;
  return out;
}

double min_eigenvalue(const ComplexMatrix& h) {
  const Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace utester
