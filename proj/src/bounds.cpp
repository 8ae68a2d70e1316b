#include "utester/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace utester {

double entropy_sum(const Tester& t1, const Tester& t2, const Unitary& u) {
  if (t1.dim() != t2.dim()) throw DimensionMismatch("entropy_sum: testers differ in d");
  return tester_entropy(t1, u) + tester_entropy(t2, u);
}

double mub_overlap_bound(const std::vector<PureState>& meas1,
                         const std::vector<PureState>& meas2) {
  double best = 0.0;
  for (const auto& a : meas1) {
    for (const auto& b : meas2) {
      if (a.dim() != b.dim()) throw DimensionMismatch("mub_overlap_bound: dimensions differ");
      best = std::max(best, std::norm(a.amplitudes().dot(b.amplitudes())));
    }
  }
  if (best <= 0.0) throw std::invalid_argument("mub_overlap_bound: measurements are empty");
  return std::max(0.0, -std::log2(best));
}

std::vector<ComplexMatrix> gell_mann_basis(std::size_t d) {
  std::vector<ComplexMatrix> out;
  out.reserve(d * d - 1);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = j + 1; k < d; ++k) {
      ComplexMatrix sym = ComplexMatrix::Zero(d, d);
      sym(j, k) = sym(k, j) = 1.0;
      out.push_back(sym);
      ComplexMatrix anti = ComplexMatrix::Zero(d, d);
      anti(j, k) = Complex(0, -1);
      anti(k, j) = Complex(0, 1);
      out.push_back(anti);
    }
  }
  for (std::size_t l = 1; l < d; ++l) {
    ComplexMatrix diag = ComplexMatrix::Zero(d, d);
    const double scale = std::sqrt(2.0 / static_cast<double>(l * (l + 1)));
    for (std::size_t j = 0; j < l; ++j) diag(j, j) = scale;
    diag(l, l) = -scale * static_cast<double>(l);
    out.push_back(diag);
  }
  return out;
}

ComplexMatrix exp_i_hermitian(const ComplexMatrix& h) {
  const Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  const ComplexVector phases =
      es.eigenvalues().unaryExpr([](double x) { return std::polar(1.0, x); }).cast<Complex>();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, double step, std::size_t max_iterations,
                             double tolerance) {
  const std::size_t n = x0.size();
  NelderMeadResult res;
  res.x = std::move(x0);
  res.value = f(res.x);
  res.evaluations = 1;
  if (n == 0) return res;

  std::size_t iterations = 0;
  // Restart from the incumbent with a fresh simplex until a restart stops
  // paying off; this escapes the usual premature collapse.
  for (int restart = 0; restart < 8 && iterations < max_iterations; ++restart) {
    std::vector<std::vector<double>> pts(n + 1, res.x);
    std::vector<double> vals(n + 1, res.value);
    for (std::size_t i = 0; i < n; ++i) {
      pts[i + 1][i] += step;
      vals[i + 1] = f(pts[i + 1]);
      ++res.evaluations;
    }
    const double entry_value = res.value;

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), trial(n), trial2(n);
    auto point_along = [&](double coeff, std::vector<double>& out) {
      for (std::size_t k = 0; k < n; ++k) {
        out[k] = centroid[k] + coeff * (pts[order[n]][k] - centroid[k]);
      }
      ++res.evaluations;
      return f(out);
    };

    for (; iterations < max_iterations; ++iterations) {
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
      const std::size_t best = order[0], worst = order[n], second = order[n - 1];

      double diameter = 0.0;
      for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t k = 0; k < n; ++k)
          diameter = std::max(diameter, std::abs(pts[order[i]][k] - pts[best][k]));
      if (vals[worst] - vals[best] <= tolerance && diameter <= 1e-9) break;
      if (diameter <= 1e-12) break;

      std::fill(centroid.begin(), centroid.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) centroid[k] += pts[order[i]][k] / static_cast<double>(n);

      const double fr = point_along(-1.0, trial);
      if (fr < vals[best]) {
        const double fe = point_along(-2.0, trial2);
        if (fe < fr) {
          pts[worst] = trial2;
          vals[worst] = fe;
        } else {
          pts[worst] = trial;
          vals[worst] = fr;
        }
      } else if (fr < vals[second]) {
        pts[worst] = trial;
        vals[worst] = fr;
      } else {
        const bool outside = fr < vals[worst];
        const double fc = point_along(outside ? -0.5 : 0.5, trial2);
        if (fc < (outside ? fr : vals[worst])) {
          pts[worst] = trial2;
          vals[worst] = fc;
        } else {
          for (std::size_t i = 1; i <= n; ++i) {
            auto& p = pts[order[i]];
            for (std::size_t k = 0; k < n; ++k) p[k] = pts[best][k] + 0.5 * (p[k] - pts[best][k]);
            vals[order[i]] = f(p);
            ++res.evaluations;
          }
        }
      }
    }

    const auto it = std::min_element(vals.begin(), vals.end());
    if (*it < res.value) {
      res.value = *it;
      res.x = pts[static_cast<std::size_t>(it - vals.begin())];
    }
    if (entry_value - res.value <= tolerance && restart > 0) break;
    step *= 0.5;
  }
  return res;
}

UnitarySearchResult minimize_over_unitaries(std::size_t d,
                                            const std::function<double(const Unitary&)>& objective,
                                            const SearchConfig& cfg) {
  if (cfg.starts == 0) throw std::invalid_argument("search: starts must be >= 1");
  if (!(cfg.tolerance > 0.0)) throw std::invalid_argument("search: tolerance must be > 0");

  const auto generators = gell_mann_basis(d);
  UnitarySearchResult out;
  out.value = std::numeric_limits<double>::infinity();

  for (std::size_t s = 0; s < cfg.starts; ++s) {
    const Unitary seed_point = haar_random_unitary(d, cfg.rng.derive(s));
    auto to_unitary = [&](const std::vector<double>& theta) {
      ComplexMatrix h = ComplexMatrix::Zero(d, d);
      for (std::size_t k = 0; k < theta.size(); ++k) h += theta[k] * generators[k];
      return Unitary(exp_i_hermitian(h) * seed_point.matrix(), 1e-8);
    };
    auto f = [&](const std::vector<double>& theta) { return objective(to_unitary(theta)); };

    const std::vector<double> origin(generators.size(), 0.0);
    const double start_value = f(origin);
    const auto local = nelder_mead(f, origin, 0.5, cfg.max_iterations, cfg.tolerance);
    out.starts.push_back({start_value, local.value});
    if (local.value < out.value) {
      out.value = local.value;
      out.minimizer = to_unitary(local.x);
    }
  }
  return out;
}

BoundEstimate estimate_bound(const Tester& t1, const Tester& t2, const SearchConfig& cfg) {
  if (t1.dim() != t2.dim()) throw DimensionMismatch("estimate_bound: testers differ in d");
  auto result = minimize_over_unitaries(
      t1.dim(), [&](const Unitary& u) { return entropy_sum(t1, t2, u); }, cfg);
  return {std::max(0.0, result.value), std::move(result.minimizer), std::move(result.starts)};
}

}  // namespace utester
