#pragma once

// Orthogonal unitary bases and mutually unbiased unitary bases (MUUB).
//
// Two D-element orthogonal unitary bases {P_i}, {Q_j} of a common subspace of
// M(d, C) are mutually unbiased when |Tr(P_i^dagger Q_j)|^2 = kappa for all
// i, j, with kappa = 1 for D = d^2 and kappa = d for D = d.
//
// Also hosts executable checks of the two structural results on complete
// tester sets: trivial bounds force an orthogonal unitary basis with
// equivalent testers on its span; maximal bounds force a MUUB pair.

#include "utester/bounds.hpp"
#include "utester/qmath.hpp"
#include "utester/tester.hpp"

#include <optional>
#include <string>
#include <vector>

namespace utester {

/// Overlaps must match kappa to this absolute tolerance.
inline constexpr double kKappaTol = 1e-6;
/// Bit tolerance for the deterministic/uniform hypothesis of the maximal check.
inline constexpr double kSaturationTol = 1e-6;

struct UnitaryBasis {
  std::size_t d = 0;
  std::vector<Unitary> elements;
  std::string name;

  std::size_t size() const { return elements.size(); }
};

struct MuubReport {
  /// overlaps[i][j] = |Tr(a_i^dagger b_j)|^2
  std::vector<std::vector<double>> overlaps;
  /// Common overlap value, or nullopt if the overlaps are not constant.
  std::optional<double> kappa;
  double expected_kappa = 0.0;
  bool verdict = false;
};

double hs_overlap(const Unitary& u, const Unitary& v);

bool is_orthogonal_unitary_basis(const UnitaryBasis& b, double tol = kDefaultTol);

MuubReport are_muub(const UnitaryBasis& a, const UnitaryBasis& b, double tol = kKappaTol);

/// "pauli", "rotation", "hadamard-pair", "weyl", "pauli-unbiased".
UnitaryBasis build_named_basis(const std::string& name, std::size_t d);
std::vector<std::string> named_basis_list();

/// V = I/2 + (i/2)(sigma_x + sigma_y + sigma_z), with |Tr(P V)| = 1 for every Pauli P.
ComplexMatrix pauli_unbiasing_unitary();

/// cos(theta) I + sin(theta) i sigma_y on an evenly spaced theta grid over
/// [0, 2 pi): unitary elements of span{I, i sigma_y}.
std::vector<Unitary> rotation_family(std::size_t points);

/// Conjugate every element by w.
UnitaryBasis rotate(const UnitaryBasis& b, const Unitary& w);

/// |Tr_in(U_m^dagger U'_n)|^2 with the trace over the tester input space,
/// i.e. u or u (x) I_d depending on input_dim.
double tester_space_overlap(const Unitary& u, const Unitary& v, std::size_t input_dim);

struct TrivialPropReport {
  bool sets_complete = false;
  bool entropies_zero = false;
  bool no_eigenoperators = false;
  bool hypothesis = false;
  bool s1 = false;  // unitaries pairwise Hilbert-Schmidt orthogonal
  bool s2 = false;  // all cross-set tester pairs equivalent on every span sample
  bool samples_in_span = false;
  double max_entropy_sum = 0.0;
  double max_cross_overlap = 0.0;
  std::vector<std::string> notes;
};

TrivialPropReport verify_prop_trivial(const TesterSet& s1, const TesterSet& s2,
                                      const std::vector<Unitary>& us,
                                      const std::vector<Unitary>& span_samples);

struct MaximalPropReport {
  bool hypothesis = false;
  bool range_ok = false;     // 0 <= |Tr(U_m^dagger U'_n)|^2 <= D on all pairs
  double max_range_value = 0.0;
  MuubReport muub;
  std::vector<std::string> notes;
};

MaximalPropReport verify_prop_maximal(const TesterSet& s1, const TesterSet& s2,
                                      const UnitaryBasis& u, const UnitaryBasis& u2);

/// 0 <= tester_space_overlap(u_m, u2_n) <= D on every cross pair, D = basis size.
bool cross_overlap_range_holds(const UnitaryBasis& u, const UnitaryBasis& u2,
                               std::size_t input_dim, double tol, double* max_value = nullptr);

struct MuubSearchResult {
  UnitaryBasis partner;
  /// mean over all overlaps of (overlap - kappa)^2 at the best point
  double residual = 0.0;
};

/// For a full (D = d^2) orthogonal unitary basis B, search for V with
/// {B_k V} mutually unbiased to B, by minimizing the mean squared deviation
/// of the cross overlaps from kappa = 1 over U(d).
MuubSearchResult search_muub_partner(const UnitaryBasis& b, const SearchConfig& cfg);

}  // namespace utester
