#include "utester/qmath.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace utester {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void require_square(const ComplexMatrix& m, std::size_t n, const char* what) {
  if (static_cast<std::size_t>(m.rows()) != n || static_cast<std::size_t>(m.cols()) != n) {
    throw DimensionMismatch(std::string(what) + ": expected " + std::to_string(n) + "x" +
                            std::to_string(n) + ", got " + std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()));
  }
}

}  // namespace

Unitary::Unitary(ComplexMatrix m, double tol) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) {
    throw DimensionMismatch("unitary must be a nonempty square matrix");
  }
  if (!m_.allFinite()) throw std::invalid_argument("unitary has non-finite entries");
  const ComplexMatrix defect =
      m_.adjoint() * m_ - ComplexMatrix::Identity(m_.rows(), m_.cols());
  if (max_abs(defect) > tol) {
    throw std::invalid_argument("matrix is not unitary (defect " +
                                std::to_string(max_abs(defect)) + ")");
  }
}

Unitary Unitary::identity(std::size_t d) {
  return Unitary(gates::identity(d), Unchecked{});
}

Unitary Unitary::adjoint() const { return Unitary(m_.adjoint(), Unchecked{}); }

Unitary operator*(const Unitary& a, const Unitary& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("unitary product: dimension mismatch");
  return Unitary(a.m_ * b.m_, Unitary::Unchecked{});
}

PureState::PureState(ComplexVector v, double tol) : v_(std::move(v)) {
  if (v_.size() == 0) throw DimensionMismatch("state must be nonempty");
  if (!v_.allFinite()) throw std::invalid_argument("state has non-finite amplitudes");
  if (std::abs(v_.squaredNorm() - 1.0) > tol) {
    throw std::invalid_argument("state is not normalized (norm^2 = " +
                                std::to_string(v_.squaredNorm()) + ")");
  }
}

PureState PureState::unnormalized(ComplexVector v) { return PureState(std::move(v), false); }

PureState PureState::basis(std::size_t dim, std::size_t index) {
  return PureState(gates::ket(dim, index), true);
}

RngHandle RngHandle::derive(std::uint64_t index) const {
  return RngHandle{seed, splitmix64(stream ^ splitmix64(index + 0x632be59bd9b4e019ULL))};
}

Rng::Rng(RngHandle h) {
  std::seed_seq seq{static_cast<std::uint32_t>(h.seed), static_cast<std::uint32_t>(h.seed >> 32),
                    static_cast<std::uint32_t>(h.stream),
                    static_cast<std::uint32_t>(h.stream >> 32)};
  engine_.seed(seq);
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::size_t Rng::uniform_index(std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: empty range");
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return static_cast<std::size_t>(x % bound);
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller; 1 - uniform() lies in (0, 1].
  const double r = std::sqrt(-2.0 * std::log(1.0 - uniform()));
  const double t = 2.0 * std::numbers::pi * uniform();
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexVector tensor(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                            std::size_t factor) {
  if (factor >= dims.size()) throw std::invalid_argument("partial_trace: factor out of range");
  std::size_t total = 1;
  for (auto d : dims) total *= d;
  require_square(m, total, "partial_trace");

  std::size_t outer = 1, inner = 1;
  for (std::size_t f = 0; f < factor; ++f) outer *= dims[f];
  for (std::size_t f = factor + 1; f < dims.size(); ++f) inner *= dims[f];
  const std::size_t traced = dims[factor];

  // flat = (o * traced + t) * inner + n
  const std::size_t out_dim = outer * inner;
  ComplexMatrix out = ComplexMatrix::Zero(out_dim, out_dim);
  for (std::size_t o1 = 0; o1 < outer; ++o1)
    for (std::size_t n1 = 0; n1 < inner; ++n1)
      for (std::size_t o2 = 0; o2 < outer; ++o2)
        for (std::size_t n2 = 0; n2 < inner; ++n2) {
          Complex acc = 0.0;
          for (std::size_t t = 0; t < traced; ++t) {
            acc += m((o1 * traced + t) * inner + n1, (o2 * traced + t) * inner + n2);
          }
          out(o1 * inner + n1, o2 * inner + n2) = acc;
        }
  return out;
}

ComplexMatrix partial_trace_ancilla(const ComplexMatrix& m, std::size_t d) {
  return partial_trace(m, {d, d}, 1);
}

ComplexMatrix partial_transpose_first(const ComplexMatrix& m, std::size_t d1, std::size_t d2) {
  require_square(m, d1 * d2, "partial_transpose_first");
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < d1; ++i)
    for (std::size_t j = 0; j < d1; ++j)
      out.block(i * d2, j * d2, d2, d2) = m.block(j * d2, i * d2, d2, d2);
  return out;
}

ComplexMatrix partial_transpose_first(const ComplexMatrix& m, std::size_t d) {
  return partial_transpose_first(m, d, d);
}

ComplexMatrix swap_operator(std::size_t d1, std::size_t d2) {
  if (d1 == 0 || d2 == 0) throw std::invalid_argument("swap_operator: dimensions must be >= 1");
  ComplexMatrix s = ComplexMatrix::Zero(d1 * d2, d1 * d2);
  for (std::size_t a = 0; a < d1; ++a)
    for (std::size_t b = 0; b < d2; ++b) s(b * d1 + a, a * d2 + b) = 1.0;
  return s;
}

ComplexMatrix swap_operator(std::size_t d) { return swap_operator(d, d); }

ComplexVector vectorize(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) throw DimensionMismatch("vectorize: matrix must be square");
  const Eigen::Index d = u.rows();
  ComplexVector v(d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) v(i * d + j) = u(j, i);
  return v;
}

ComplexVector vectorize(const Unitary& u) { return vectorize(u.matrix()); }

ComplexMatrix devectorize(const ComplexVector& v) {
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (d * d != v.size()) throw DimensionMismatch("devectorize: length is not a perfect square");
  ComplexMatrix u(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) u(j, i) = v(i * d + j);
  return u;
}

PureState max_entangled(std::size_t d) {
  return PureState::unnormalized(vectorize(gates::identity(d)));
}

Unitary haar_random_unitary(std::size_t d, Rng& rng) {
  if (d == 0) throw std::invalid_argument("haar_random_unitary: d must be >= 1");
  ComplexMatrix z(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      z(i, j) = Complex(re, im) / std::numbers::sqrt2;
    }
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (std::size_t k = 0; k < d; ++k) {
    const Complex rkk = r(k, k);
    const double mag = std::abs(rkk);
    q.col(k) *= mag > 0.0 ? rkk / mag : Complex(1.0);
  }
  return Unitary(std::move(q));
}

Unitary haar_random_unitary(std::size_t d, RngHandle h) {
  Rng rng(h);
  return haar_random_unitary(d, rng);
}

PureState haar_random_state(std::size_t d, Rng& rng) {
  ComplexVector v(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double re = rng.normal();
    const double im = rng.normal();
    v(i) = Complex(re, im);
  }
  v.normalize();
  return PureState(std::move(v));
}

ComplexMatrix embed_system(const ComplexMatrix& u, std::size_t ancilla_dim) {
  return tensor(u, gates::identity(ancilla_dim));
}

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

namespace gates {

ComplexMatrix identity(std::size_t d) { return ComplexMatrix::Identity(d, d); }

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

ComplexMatrix hadamard() {
  ComplexMatrix m(2, 2);
  m << 1, -1, 1, 1;
  return m / std::numbers::sqrt2;
}

ComplexMatrix shift(std::size_t d) {
  ComplexMatrix x = ComplexMatrix::Zero(d, d);
  for (std::size_t j = 0; j < d; ++j) x((j + 1) % d, j) = 1.0;
  return x;
}

ComplexMatrix clock(std::size_t d) {
  ComplexMatrix z = ComplexMatrix::Zero(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    z(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(d));
  }
  return z;
}

ComplexMatrix weyl(std::size_t d, std::size_t a, std::size_t b) {
  ComplexMatrix out = identity(d);
  const ComplexMatrix x = shift(d), z = clock(d);
  for (std::size_t i = 0; i < a; ++i) out = out * x;
  for (std::size_t i = 0; i < b; ++i) out = out * z;
  return out;
}

ComplexVector ket(std::size_t dim, std::size_t index) {
  if (index >= dim) throw std::out_of_range("ket: index out of range");
  ComplexVector v = ComplexVector::Zero(dim);
  v(index) = 1.0;
  return v;
}

ComplexVector plus() { return (ket(2, 0) + ket(2, 1)) / std::numbers::sqrt2; }
ComplexVector minus() { return (ket(2, 0) - ket(2, 1)) / std::numbers::sqrt2; }

}  // namespace gates

}  // namespace utester
