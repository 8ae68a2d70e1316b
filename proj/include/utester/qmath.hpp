#pragma once

// Dense complex linear algebra for small quantum systems.
//
// Tensor factors are ordered (system, ancilla) everywhere. A bipartite index
// (i, k) maps to the flat index i * dim_ancilla + k.
//
// The vectorization of a d x d operator u is
//     |u>> = sum_i sum_j <j|u|i> |i>|j>,
// so the amplitude at flat index i * d + j equals u(j, i). With this choice
// <<a|b>> = Tr(a^dagger b).

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace utester {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Default max-norm tolerance for unitarity and orthonormality checks.
inline constexpr double kDefaultTol = 1e-9;

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A d x d matrix with ||U^dagger U - I||_max <= tol, checked at construction.
class Unitary {
 public:
  explicit Unitary(ComplexMatrix m, double tol = kDefaultTol);

  static Unitary identity(std::size_t d);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }
  Unitary adjoint() const;

  friend Unitary operator*(const Unitary& a, const Unitary& b);

 private:
  struct Unchecked {};
  Unitary(ComplexMatrix m, Unchecked) : m_(std::move(m)) {}

  ComplexMatrix m_;
};

/// Unit vector in C^n. The unnormalized maximally entangled state is the one
/// sanctioned exception and must be requested explicitly.
class PureState {
 public:
  explicit PureState(ComplexVector v, double tol = kDefaultTol);

  static PureState unnormalized(ComplexVector v);
  static PureState basis(std::size_t dim, std::size_t index);

  std::size_t dim() const { return static_cast<std::size_t>(v_.size()); }
  const ComplexVector& amplitudes() const { return v_; }
  bool is_normalized() const { return normalized_; }
  ComplexMatrix projector() const { return v_ * v_.adjoint(); }

 private:
  PureState(ComplexVector v, bool normalized) : v_(std::move(v)), normalized_(normalized) {}

  ComplexVector v_;
  bool normalized_ = true;
};

/// Seed plus stream id. Identical handles produce identical draw sequences.
struct RngHandle {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  /// Child handle for a sub-task (start index, round index, ...).
  RngHandle derive(std::uint64_t index) const;
};

/// Platform-independent generator built on mt19937_64 with hand-rolled
/// uniform/normal transforms, so draws are reproducible across standard
/// library implementations.
class Rng {
 public:
  explicit Rng(RngHandle h);

  double uniform();                       // [0, 1)
  std::size_t uniform_index(std::size_t n);  // {0, ..., n-1}
  bool bernoulli(double p) { return uniform() < p; }
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector tensor(const ComplexVector& a, const ComplexVector& b);

/// Trace out one factor of an operator on H_1 (x) ... (x) H_n.
ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                            std::size_t factor);
/// Trace over the second (ancilla) factor of an operator on C^d (x) C^d.
ComplexMatrix partial_trace_ancilla(const ComplexMatrix& m, std::size_t d);

/// Transpose of the first factor of an operator on C^d1 (x) C^d2.
ComplexMatrix partial_transpose_first(const ComplexMatrix& m, std::size_t d1, std::size_t d2);
ComplexMatrix partial_transpose_first(const ComplexMatrix& m, std::size_t d);

/// Map C^d1 (x) C^d2 -> C^d2 (x) C^d1, |a>|b> -> |b>|a>.
ComplexMatrix swap_operator(std::size_t d1, std::size_t d2);
ComplexMatrix swap_operator(std::size_t d);

/// Unnormalized |u>> of dimension d^2. Accepts any square matrix.
ComplexVector vectorize(const ComplexMatrix& u);
ComplexVector vectorize(const Unitary& u);
ComplexMatrix devectorize(const ComplexVector& v);

/// Unnormalized sum_i |i>|i> (norm sqrt(d)).
PureState max_entangled(std::size_t d);

/// Haar-distributed unitary from a complex Ginibre matrix via QR with the
/// diagonal phases of R absorbed into Q.
Unitary haar_random_unitary(std::size_t d, RngHandle rng);
Unitary haar_random_unitary(std::size_t d, Rng& rng);

/// Haar-random unit vector (first column of a Haar unitary).
PureState haar_random_state(std::size_t d, Rng& rng);

/// u (x) I_d, the action of a tested unitary on a bipartite probe.
ComplexMatrix embed_system(const ComplexMatrix& u, std::size_t ancilla_dim);

double max_abs(const ComplexMatrix& m);

namespace gates {
ComplexMatrix identity(std::size_t d);
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
/// H = (I - i sigma_y) / sqrt(2): real Hadamard variant, |0> -> |+>, |1> -> -|->.
ComplexMatrix hadamard();
/// Shift X|j> = |j+1 mod d> and clock Z|j> = w^j |j>, w = exp(2 pi i / d).
ComplexMatrix shift(std::size_t d);
ComplexMatrix clock(std::size_t d);
/// X^a Z^b.
ComplexMatrix weyl(std::size_t d, std::size_t a, std::size_t b);
ComplexVector ket(std::size_t dim, std::size_t index);
ComplexVector plus();
ComplexVector minus();
}  // namespace gates

}  // namespace utester
