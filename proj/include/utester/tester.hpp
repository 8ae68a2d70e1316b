#pragma once

// Unitary testers: a pure input state plus an orthonormal projective
// measurement, used to probe an unknown unitary u.
//
// Ancilla-free testers live in dimension d and u acts directly. Bipartite
// testers live in dimension d^2 = (system, ancilla) and u acts as u (x) I_d.

#include "utester/qmath.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace utester {

/// Probability mass leaked outside the projector span beyond this is an error.
inline constexpr double kLeakTol = 1e-6;
/// Entropies at or below this many bits count as zero.
inline constexpr double kEntropyZeroTol = 1e-9;

class LeakyMeasurement : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class HypothesisViolated : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class TesterKind { AncillaFree, Bipartite };

class Tester {
 public:
  /// Throws if the projectors are not orthonormal or dimensions do not fit.
  Tester(PureState input, std::vector<PureState> projectors, std::size_t d, std::string label = {});

  const PureState& input() const { return input_; }
  const std::vector<PureState>& projectors() const { return projectors_; }
  std::size_t dim() const { return d_; }
  /// Number of outcomes.
  std::size_t outcomes() const { return projectors_.size(); }
  const std::string& label() const { return label_; }
  TesterKind kind() const { return kind_; }

  /// The operator the probe actually sees: u or u (x) I_d.
  ComplexMatrix embed(const Unitary& u) const;

 private:
  PureState input_;
  std::vector<PureState> projectors_;
  std::size_t d_;
  std::string label_;
  TesterKind kind_;
};

struct Distribution {
  std::vector<double> p;
  /// Set when sum(p) falls short of 1 by more than 1e-9 (but within kLeakTol).
  bool leaky = false;

  double total() const;
};

/// A collection of testers meant to share one measurement.
struct TesterSet {
  std::vector<Tester> testers;
  std::size_t d = 0;
};

/// p_k = |<chi_k| U |psi>|^2. Throws LeakyMeasurement if the transformed
/// input escapes the projector span.
Distribution outcome_distribution(const Tester& t, const Unitary& u);

/// Outcome probabilities of measuring an arbitrary (unnormalized allowed)
/// state against the tester's projectors.
Distribution measure(const std::vector<PureState>& projectors, const ComplexVector& state);

/// Shannon entropy in bits; probabilities in [-1e-12, 0) are clamped to 0.
double shannon_entropy(const Distribution& p);
double shannon_entropy(const std::vector<double>& p);

double tester_entropy(const Tester& t, const Unitary& u);

/// Definition of a complete set: orthonormal inputs resolving the identity on
/// the input space, all members sharing one projector list.
bool is_complete_set(const TesterSet& s, double tol = kDefaultTol);

/// True iff the two distributions coincide as multisets within tol.
bool are_equivalent(const Tester& t1, const Tester& t2, const Unitary& u, double tol = kDefaultTol);

/// Strict diagnostic form of are_equivalent: the permutation sigma with
/// p1[i] == p2[sigma[i]], if one exists.
std::optional<std::vector<std::size_t>> equivalence_bijection(const Tester& t1, const Tester& t2,
                                                              const Unitary& u,
                                                              double tol = kDefaultTol);

/// op |psi> = lambda |psi> for some complex lambda, within tol.
bool is_eigenoperator(const ComplexMatrix& op, const PureState& state, double tol = kDefaultTol);

/// Whether the tester tells u1 from u2, given both produce deterministic
/// outcomes. Throws HypothesisViolated otherwise, and rejects bipartite
/// testers with entangled inputs.
bool can_distinguish(const Tester& t, const Unitary& u1, const Unitary& u2);

/// Index of the deterministic outcome, or nullopt if the entropy is nonzero.
std::optional<std::size_t> deterministic_outcome(const Tester& t, const Unitary& u);

/// Schmidt rank of a bipartite state on C^d (x) C^d, at 1e-9 cutoff.
std::size_t schmidt_rank(const PureState& s, std::size_t d);

// Registry of named testers.

/// Z or X measurement basis for a qubit.
std::vector<PureState> z_basis();
std::vector<PureState> x_basis();
/// Weyl-Bell basis |beta_k> = (X^a Z^b (x) I)|Psi>/sqrt(d), k = a*d + b.
std::vector<PureState> bell_basis(std::size_t d);
/// Bell basis with `rotation (x) I` applied to every element.
std::vector<PureState> rotated_bell_basis(const ComplexMatrix& rotation);

/// "0Z","1Z","+X","-X","0X","1X","+Z","-Z" (qubit), and "bell:k" with
/// k in [0, d^2). Throws std::invalid_argument for unknown names.
Tester named_tester(const std::string& name, std::size_t d = 2);
std::vector<std::string> named_tester_list();

/// {T_0Z, T_1Z}, {T_+X, T_-X}, {T_0X, T_1X}, {T_+Z, T_-Z}.
TesterSet z_tester_set();
TesterSet x_tester_set();
TesterSet zero_one_x_tester_set();
TesterSet plus_minus_z_tester_set();
/// All Weyl-Bell inputs with a common measurement basis.
TesterSet bell_tester_set(std::size_t d, const std::vector<PureState>& measurement);

/// Conjugate every input and projector by w (inputs |psi> -> W|psi>, W = w or
/// w (x) I).
Tester rotate(const Tester& t, const Unitary& w);
TesterSet rotate(const TesterSet& s, const Unitary& w);

}  // namespace utester
