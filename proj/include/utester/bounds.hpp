#pragma once

// Entropic bounds for pairs of testers.
//
// The bound c of a tester pair is the infimum over all unitaries u of
// H(T1, u) + H(T2, u). estimate_bound searches SU(d) with multi-start
// Nelder-Mead over exp(i sum_k theta_k G_k) (generalized Gell-Mann G_k) and
// reports the best value found. The result is an upper bound on c.

#include "utester/qmath.hpp"
#include "utester/tester.hpp"

#include <functional>
#include <vector>

namespace utester {

struct SearchConfig {
  std::size_t starts = 16;
  std::size_t max_iterations = 2000;
  /// Simplex value spread (bits) at which a local run is considered converged.
  double tolerance = 1e-10;
  RngHandle rng{};
};

struct StartTrace {
  double start_value = 0.0;
  double final_value = 0.0;
};

struct BoundEstimate {
  double value = 0.0;
  Unitary minimizer = Unitary::identity(1);
  std::vector<StartTrace> starts;
};

double entropy_sum(const Tester& t1, const Tester& t2, const Unitary& u);

BoundEstimate estimate_bound(const Tester& t1, const Tester& t2, const SearchConfig& cfg);

/// -log2 max_ij |<chi_i|zeta_j>|^2.
double mub_overlap_bound(const std::vector<PureState>& meas1, const std::vector<PureState>& meas2);

/// d^2 - 1 traceless Hermitian generators, normalized Tr(G_a G_b) = 2 delta_ab.
std::vector<ComplexMatrix> gell_mann_basis(std::size_t d);

/// exp(i H) for Hermitian H.
ComplexMatrix exp_i_hermitian(const ComplexMatrix& h);

struct UnitarySearchResult {
  double value = 0.0;
  Unitary minimizer = Unitary::identity(1);
  std::vector<StartTrace> starts;
};

/// Multi-start minimization of an arbitrary objective over U(d) modulo
/// global phase. Start s draws its Haar seed point from cfg.rng.derive(s), so
/// the best value is nonincreasing in cfg.starts and deterministic per seed.
UnitarySearchResult minimize_over_unitaries(std::size_t d,
                                            const std::function<double(const Unitary&)>& objective,
                                            const SearchConfig& cfg);

/// Nelder-Mead on R^n with restarts on convergence until no further gain.
struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t evaluations = 0;
};

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, double step, std::size_t max_iterations,
                             double tolerance);

}  // namespace utester
