#include "utester/bounds.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace utester;

namespace {

double h2(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

// U|0> has Bloch vector n with n_z = cos(theta); U|+> has a Bloch vector
// orthogonal to n, whose z-component sweeps sin(theta) cos(alpha).
double bloch_grid_zero_plus_z(int steps) {
  double best = 1e9;
  for (int i = 0; i <= steps; ++i) {
    const double th = std::numbers::pi * i / steps;
    for (int j = 0; j <= steps; ++j) {
      const double al = std::numbers::pi * j / steps;
      best = std::min(best, h2((1 + std::cos(th)) / 2) + h2((1 + std::sin(th) * std::cos(al)) / 2));
    }
  }
  return best;
}

SearchConfig config(std::size_t starts, std::uint64_t seed) {
  SearchConfig cfg;
  cfg.starts = starts;
  cfg.rng = RngHandle{seed, 0};
  return cfg;
}

}  // namespace

TEST(Bounds, EntropySumFixtures) {
  const auto t0z = named_tester("0Z"), t0x = named_tester("0X"), tpx = named_tester("+X");
  EXPECT_NEAR(entropy_sum(t0z, tpx, Unitary(gates::pauli_y())), 0.0, 1e-6);
  EXPECT_NEAR(entropy_sum(t0z, t0x, Unitary(gates::hadamard())), 1.0, 1e-6);
}

TEST(Bounds, MubOverlapBound) {
  EXPECT_NEAR(mub_overlap_bound(z_basis(), x_basis()), 1.0, 1e-12);
  EXPECT_NEAR(mub_overlap_bound(z_basis(), z_basis()), 0.0, 1e-12);
  // basis tilted by pi/3 on the Bloch sphere: max overlap cos^2(pi/6) = 3/4
  const double t = std::numbers::pi / 6;
  ComplexVector a(2), b(2);
  a << std::cos(t), std::sin(t);
  b << -std::sin(t), std::cos(t);
  EXPECT_NEAR(mub_overlap_bound(z_basis(), {PureState(a), PureState(b)}), -std::log2(0.75), 1e-12);
}

TEST(Bounds, GellMannBasisIsOrthonormal) {
  for (std::size_t d : {2u, 3u, 4u}) {
    const auto g = gell_mann_basis(d);
    ASSERT_EQ(g.size(), d * d - 1);
    for (std::size_t i = 0; i < g.size(); ++i) {
      EXPECT_LT(max_abs(g[i] - g[i].adjoint()), 1e-15);
      EXPECT_NEAR(std::abs(g[i].trace()), 0.0, 1e-15);
      for (std::size_t j = 0; j < g.size(); ++j)
        EXPECT_NEAR(std::abs((g[i] * g[j]).trace()), i == j ? 2.0 : 0.0, 1e-12);
    }
  }
}

TEST(Bounds, ExpIHermitian) {
  const ComplexMatrix u = exp_i_hermitian(gates::pauli_y() * (std::numbers::pi / 4));
  // exp(i pi/4 sigma_y) = (I + i sigma_y)/sqrt2
  EXPECT_LT(max_abs(u - (gates::identity(2) + Complex(0, 1) * gates::pauli_y()) / std::numbers::sqrt2), 1e-12);
}

TEST(Bounds, NelderMeadRosenbrock) {
  auto f = [](const std::vector<double>& x) {
    return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
  };
  const auto r = nelder_mead(f, {-1.2, 1.0}, 0.5, 5000, 1e-14);
  EXPECT_NEAR(r.x[0], 1.0, 1e-4);
  EXPECT_NEAR(r.x[1], 1.0, 1e-4);
}

TEST(Bounds, ZeroZeroXIsOne) {
  const auto b = estimate_bound(named_tester("0Z"), named_tester("0X"), config(32, 1));
  EXPECT_NEAR(b.value, 1.0, 1e-4);
  EXPECT_NEAR(entropy_sum(named_tester("0Z"), named_tester("0X"), b.minimizer), b.value, 1e-12);
}

TEST(Bounds, ZeroPlusXIsZero) {
  EXPECT_NEAR(estimate_bound(named_tester("0Z"), named_tester("+X"), config(32, 2)).value, 0.0, 1e-6);
}

TEST(Bounds, ZeroPlusZMatchesBlochGrid) {
  const double oracle = bloch_grid_zero_plus_z(400);
  const double v = estimate_bound(named_tester("0Z"), named_tester("+Z"), config(32, 3)).value;
  EXPECT_GT(v, 1e-3);
  EXPECT_NEAR(v, oracle, 1e-3);
}

TEST(Bounds, SearchIsDeterministicPerSeed) {
  const auto a = estimate_bound(named_tester("0Z"), named_tester("+Z"), config(4, 9));
  const auto b = estimate_bound(named_tester("0Z"), named_tester("+Z"), config(4, 9));
  EXPECT_EQ(a.value, b.value);
  ASSERT_EQ(a.starts.size(), 4u);
  for (const auto& s : a.starts) EXPECT_LE(s.final_value, s.start_value + 1e-12);
}

TEST(Bounds, BoundNeverBelowMubOverlapBound) {
  // Testers sharing an input: the bound is the Maassen-Uffink value for
  // ancilla-free MUB measurements (here both equal 1).
  const auto b = estimate_bound(named_tester("0Z"), named_tester("0X"), config(8, 4));
  EXPECT_GE(b.value, mub_overlap_bound(z_basis(), x_basis()) - 1e-6);
}
