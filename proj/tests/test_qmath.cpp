#include "utester/qmath.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace utester;

namespace {

const Complex I1{0.0, 1.0};

ComplexMatrix random_matrix(std::size_t r, std::size_t c, Rng& rng) {
  ComplexMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = Complex(rng.normal(), rng.normal());
  return m;
}

}  // namespace

TEST(Qmath, UnitaryRejectsNonUnitary) {
  ComplexMatrix m = ComplexMatrix::Identity(2, 2);
  m(0, 1) = 0.1;
  EXPECT_THROW(Unitary{m}, std::invalid_argument);
  EXPECT_NO_THROW(Unitary{gates::hadamard()});
}

TEST(Qmath, PureStateRequiresUnitNorm) {
  ComplexVector v(2);
  v << 1.0, 1.0;
  EXPECT_THROW(PureState{v}, std::invalid_argument);
  EXPECT_FALSE(PureState::unnormalized(v).is_normalized());
  EXPECT_TRUE(PureState(v / std::sqrt(2.0)).is_normalized());
}

TEST(Qmath, TensorMatchesIndexFormula) {
  const ComplexMatrix a = gates::pauli_x(), b = gates::pauli_z();
  const ComplexMatrix t = tensor(a, b);
  ASSERT_EQ(t.rows(), 4);
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k)
      for (int j = 0; j < 2; ++j)
        for (int l = 0; l < 2; ++l) EXPECT_EQ(t(i * 2 + k, j * 2 + l), a(i, j) * b(k, l));
}

TEST(Qmath, PartialTraceOfProductState) {
  Rng rng(RngHandle{1, 0});
  const ComplexMatrix a = random_matrix(2, 2, rng), b = random_matrix(3, 3, rng);
  const ComplexMatrix ab = tensor(a, b);
  EXPECT_LT(max_abs(partial_trace(ab, {2, 3}, 1) - a * b.trace()), 1e-12);
  EXPECT_LT(max_abs(partial_trace(ab, {2, 3}, 0) - b * a.trace()), 1e-12);
}

TEST(Qmath, PartialTraceMiddleFactorBySum) {
  Rng rng(RngHandle{2, 0});
  const ComplexMatrix m = random_matrix(12, 12, rng);
  const ComplexMatrix r = partial_trace(m, {2, 3, 2}, 1);
  ASSERT_EQ(r.rows(), 4);
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k)
      for (int j = 0; j < 2; ++j)
        for (int l = 0; l < 2; ++l) {
          Complex s = 0.0;
          for (int x = 0; x < 3; ++x) s += m(i * 6 + x * 2 + k, j * 6 + x * 2 + l);
          EXPECT_NEAR(std::abs(r(i * 2 + k, j * 2 + l) - s), 0.0, 1e-12);
        }
}

TEST(Qmath, PartialTransposeFirstFactor) {
  Rng rng(RngHandle{3, 0});
  const ComplexMatrix a = random_matrix(2, 2, rng), b = random_matrix(3, 3, rng);
  const ComplexMatrix pt = partial_transpose_first(tensor(a, b), 2, 3);
  EXPECT_LT(max_abs(pt - tensor(ComplexMatrix(a.transpose()), b)), 1e-12);
}

TEST(Qmath, SwapExchangesFactors) {
  Rng rng(RngHandle{4, 0});
  const ComplexMatrix a = random_matrix(2, 2, rng), b = random_matrix(3, 3, rng);
  const ComplexMatrix s = swap_operator(2, 3);
  EXPECT_LT(max_abs(s * tensor(a, b) * s.adjoint() - tensor(b, a)), 1e-12);
  EXPECT_LT(max_abs(swap_operator(3) * swap_operator(3) - ComplexMatrix::Identity(9, 9)), 1e-15);
}

TEST(Qmath, VectorizeInnerProductIsHilbertSchmidt) {
  Rng rng(RngHandle{5, 0});
  const ComplexMatrix a = random_matrix(3, 3, rng), b = random_matrix(3, 3, rng);
  EXPECT_NEAR(std::abs(vectorize(a).dot(vectorize(b)) - (a.adjoint() * b).trace()), 0.0, 1e-12);
  EXPECT_LT(max_abs(devectorize(vectorize(a)) - a), 1e-15);
  // amplitude at i*d + j is u(j, i)
  EXPECT_EQ(vectorize(a)(1 * 3 + 2), a(2, 1));
}

TEST(Qmath, MaxEntangledIsVectorizedIdentity) {
  const auto psi = max_entangled(3);
  EXPECT_FALSE(psi.is_normalized());
  EXPECT_LT((psi.amplitudes() - vectorize(gates::identity(3))).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Qmath, HaarSamplesAreUnitaryAndReproducible) {
  const RngHandle h{42, 7};
  const Unitary u = haar_random_unitary(4, h), v = haar_random_unitary(4, h);
  EXPECT_EQ(u.matrix(), v.matrix());
  EXPECT_LT(max_abs(u.matrix().adjoint() * u.matrix() - ComplexMatrix::Identity(4, 4)), 1e-12);
  EXPECT_NE(haar_random_unitary(4, h.derive(1)).matrix(), u.matrix());
}

TEST(Qmath, HaarSecondMoment) {
  // E|U_00|^2 = 1/d and E|U_00|^4 = 2/(d(d+1)).
  Rng rng(RngHandle{9, 0});
  const std::size_t d = 3, n = 20000;
  double m2 = 0.0, m4 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double p = std::norm(haar_random_unitary(d, rng).matrix()(0, 0));
    m2 += p;
    m4 += p * p;
  }
  EXPECT_NEAR(m2 / n, 1.0 / 3.0, 0.01);
  EXPECT_NEAR(m4 / n, 2.0 / 12.0, 0.01);
}

TEST(Qmath, RngStreamsAreDeterministic) {
  Rng a(RngHandle{5, 1}), b(RngHandle{5, 1}), c(RngHandle{5, 2});
  bool differs = false;
  for (int k = 0; k < 100; ++k) {
    const double x = a.uniform();
    EXPECT_EQ(x, b.uniform());
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
    differs = differs || x != c.uniform();
  }
  EXPECT_TRUE(differs);
  for (int k = 0; k < 1000; ++k) EXPECT_LT(a.uniform_index(7), 7u);
}

TEST(Qmath, PauliAlgebra) {
  const ComplexMatrix x = gates::pauli_x(), y = gates::pauli_y(), z = gates::pauli_z();
  EXPECT_LT(max_abs(x * y - I1 * z), 1e-15);
  EXPECT_LT(max_abs(x * x - gates::identity(2)), 1e-15);
  // H = (I - i sigma_y)/sqrt2 maps |0> to |+>
  EXPECT_LT((gates::hadamard() * gates::ket(2, 0) - gates::plus()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Qmath, WeylRelations) {
  for (std::size_t d : {2u, 3u, 5u}) {
    const ComplexMatrix x = gates::shift(d), z = gates::clock(d);
    const Complex w = std::exp(2.0 * std::numbers::pi * I1 / static_cast<double>(d));
    EXPECT_LT(max_abs(z * x - w * x * z), 1e-12) << d;
    // X^d = Z^d = I
    ComplexMatrix xp = gates::identity(d), zp = gates::identity(d);
    for (std::size_t k = 0; k < d; ++k) {
      xp = xp * x;
      zp = zp * z;
    }
    EXPECT_LT(max_abs(xp - gates::identity(d)), 1e-12);
    EXPECT_LT(max_abs(zp - gates::identity(d)), 1e-12);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) {
        const Complex tr = gates::weyl(d, a, b).trace();
        EXPECT_NEAR(std::abs(tr), a == 0 && b == 0 ? double(d) : 0.0, 1e-12);
      }
  }
}

TEST(Qmath, EmbedSystem) {
  const ComplexMatrix e = embed_system(gates::pauli_x(), 3);
  EXPECT_LT(max_abs(e - tensor(gates::pauli_x(), gates::identity(3))), 1e-15);
}

TEST(Qmath, DimensionMismatchThrows) {
  EXPECT_THROW(partial_trace(ComplexMatrix::Identity(5, 5), {2, 3}, 0), DimensionMismatch);
}
