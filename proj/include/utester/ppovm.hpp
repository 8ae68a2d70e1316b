#pragma once

// Process-POVM (quantum tester) form of a unitary tester.
//
// Choi operator of u on (output, reference):
//     E = (u (x) I)|Psi><Psi|(u (x) I)^dagger,   |Psi> = sum_i |i>|i>.
// Note (u (x) I)|Psi> = S |u>> with S the swap, so E = S |u>><<u| S.
//
// Tester elements on (output, reference), with the probe rho on
// (system, ancilla):
//     T_k = Tr_anc[(P_k (x) I_ref)(I_out (x) S rho^t S)]
// where rho^t transposes the system factor and the product lives on
// (output, ancilla, reference). Then p_k = Tr[T_k E].

#include "utester/qmath.hpp"
#include "utester/tester.hpp"

#include <vector>

namespace utester {

struct ChoiOperator {
  std::size_t d = 0;
  ComplexMatrix matrix;  // d^2 x d^2
};

struct TesterElementSet {
  std::size_t d = 0;
  /// Each d^2 x d^2 on (output, reference).
  std::vector<ComplexMatrix> elements;
  /// Probe density operator on (system, ancilla).
  ComplexMatrix probe;
  std::size_t ancilla_dim = 1;
};

ChoiOperator choi_operator(const Unitary& u);

/// T_k for every projector of t. Ancilla-free testers use a 1-dimensional
/// ancilla.
TesterElementSet tester_elements(const Tester& t);

/// I_out (x) [Tr_anc(rho)]^t, the normalization every valid element set sums to.
ComplexMatrix tester_normalization(const TesterElementSet& ts);

/// p_k = Re Tr[T_k E], clamped to [0, 1].
Distribution probability_via_choi(const TesterElementSet& ts, const ChoiOperator& e);

/// Smallest eigenvalue of a Hermitian matrix (PSD checks).
double min_eigenvalue(const ComplexMatrix& h);

}  // namespace utester
