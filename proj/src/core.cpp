#include "gw/core.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "gw/errors.hpp"

namespace gw {

namespace {

void check_plan_shape(const GwProblem& p, const Coupling& pi, const char* op) {
  if (pi.rows() != p.n() || pi.cols() != p.m()) {
    throw ShapeError(std::string(op) + ": coupling is " + std::to_string(pi.rows()) + "x" +
                     std::to_string(pi.cols()) + ", problem expects " + std::to_string(p.n()) +
                     "x" + std::to_string(p.m()));
  }
}

// Euclidean projection of one vector onto {v >= 0, sum v = mass} by sorting
// and thresholding; exact in finitely many steps.
void project_to_scaled_simplex(std::vector<double>& v, double mass) {
  std::vector<double> sorted = v;
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double prefix = 0.0;
  double theta = 0.0;
  // The largest j with sorted[j] above the running threshold fixes the
  // support; mass > 0 guarantees j = 0 qualifies.
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    prefix += sorted[j];
    const double candidate = (prefix - mass) / static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0.0) theta = candidate;
  }
  for (double& x : v) x = std::max(x - theta, 0.0);
}

}  // namespace

Marginal::Marginal(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw ParameterError("Marginal: empty weight vector");
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w > 0.0)) throw ParameterError("Marginal: weights must be strictly positive");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw ParameterError("Marginal: weights sum to " + std::to_string(sum) + ", expected 1");
  }
}

Marginal Marginal::uniform(std::size_t n) {
  if (n == 0) throw ParameterError("Marginal: size must be positive");
  return Marginal(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Coupling::Coupling(DenseMatrix plan) : plan_(std::move(plan)) {
  if (plan_.size() == 0) throw ParameterError("Coupling: empty plan");
  for (double v : plan_.entries()) {
    if (!(v >= 0.0)) throw ParameterError("Coupling: entries must be nonnegative and finite");
  }
}

Coupling Coupling::outer_product(const Marginal& mu, const Marginal& nu) {
  DenseMatrix plan(mu.size(), nu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < nu.size(); ++j) plan(i, j) = mu[i] * nu[j];
  }
  return Coupling(std::move(plan));
}

Coupling Coupling::uniform(std::size_t n, std::size_t m) {
  const double fill = 1.0 / static_cast<double>(n * m);
  return Coupling(DenseMatrix(n, m, fill));
}

bool Coupling::strictly_positive() const {
  for (double v : plan_.entries()) {
    if (!(v > 0.0)) return false;
  }
  return true;
}

GwProblem::GwProblem(DenseMatrix d_x, DenseMatrix d_y, Marginal mu, Marginal nu)
    : d_x_(std::move(d_x)), d_y_(std::move(d_y)), mu_(std::move(mu)), nu_(std::move(nu)) {
  if (d_x_.rows() != d_x_.cols() || d_y_.rows() != d_y_.cols()) {
    throw ShapeError("GwProblem: structure matrices must be square");
  }
  if (d_x_.rows() != mu_.size() || d_y_.rows() != nu_.size()) {
    throw ShapeError("GwProblem: matrix sizes do not match marginal lengths");
  }
  for (const DenseMatrix* d : {&d_x_, &d_y_}) {
    if (asymmetry(*d) > 1e-10 * std::max(1.0, max_abs(*d))) {
      throw ParameterError("GwProblem: structure matrix asymmetric beyond tolerance");
    }
    for (double v : d->entries()) {
      if (!(v >= 0.0)) throw ParameterError("GwProblem: structure entries must be nonnegative");
    }
  }
}

double gw_constant_term(const GwProblem& p) {
  double acc = 0.0;
  for (std::size_t i = 0; i < p.n(); ++i) {
    for (std::size_t j = 0; j < p.n(); ++j) {
      const double d = p.d_x()(i, j);
      acc += d * d * p.mu()[i] * p.mu()[j];
    }
  }
  for (std::size_t k = 0; k < p.m(); ++k) {
    for (std::size_t l = 0; l < p.m(); ++l) {
      const double d = p.d_y()(k, l);
      acc += d * d * p.nu()[k] * p.nu()[l];
    }
  }
  return acc;
}

double quadratic_term(const GwProblem& p, const Coupling& pi) {
  check_plan_shape(p, pi, "quadratic_term");
  const DenseMatrix g = gemm(gemm(p.d_x(), pi.plan()), p.d_y());
  double trace = 0.0;
  for (std::size_t i = 0; i < g.rows(); ++i) {
    for (std::size_t j = 0; j < g.cols(); ++j) trace += g(i, j) * pi.plan()(i, j);
  }
  return -trace;
}

double gw_objective(const GwProblem& p, const Coupling& pi) {
  return gw_constant_term(p) + 2.0 * quadratic_term(p, pi);
}

DenseMatrix grad_bilinear(const GwProblem& p, const Coupling& w) {
  check_plan_shape(p, w, "grad_bilinear");
  return scaled(gemm(gemm(p.d_x(), w.plan()), p.d_y()), -1.0);
}

double bregman_div(BregmanGeometry geom, const Coupling& x, const Coupling& y) {
  if (!x.plan().same_shape(y.plan())) throw ShapeError("bregman_div: shapes differ");
  if (geom == BregmanGeometry::Quadratic) {
    const double d = frobenius_norm(subtract(x.plan(), y.plan()));
    return 0.5 * d * d;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < x.plan().size(); ++i) {
    const double xi = x.plan().entries()[i];
    const double yi = y.plan().entries()[i];
    if (xi > 0.0) {
      if (yi <= 0.0) {
        throw DomainError("bregman_div: KL undefined, zero reference where mass is positive");
      }
      acc += xi * std::log(xi / yi) - xi + yi;
    } else {
      acc += yi;
    }
  }
  return acc;
}

Coupling scale_rows_to_mu(const Coupling& pi, const Marginal& mu) {
  if (pi.rows() != mu.size()) throw ShapeError("scale_rows_to_mu: row count != marginal length");
  const std::vector<double> sums = row_sums(pi.plan());
  DenseMatrix out(pi.rows(), pi.cols());
  for (std::size_t i = 0; i < pi.rows(); ++i) {
    if (!(sums[i] > 0.0)) {
      throw DegenerateMassError("scale_rows_to_mu: row " + std::to_string(i) + " has zero mass");
    }
    const double s = mu[i] / sums[i];
    for (std::size_t j = 0; j < pi.cols(); ++j) out(i, j) = pi.plan()(i, j) * s;
  }
  return Coupling(std::move(out));
}

Coupling scale_cols_to_nu(const Coupling& pi, const Marginal& nu) {
  if (pi.cols() != nu.size()) throw ShapeError("scale_cols_to_nu: col count != marginal length");
  const std::vector<double> sums = col_sums(pi.plan());
  std::vector<double> factors(pi.cols());
  for (std::size_t j = 0; j < pi.cols(); ++j) {
    if (!(sums[j] > 0.0)) {
      throw DegenerateMassError("scale_cols_to_nu: column " + std::to_string(j) +
                                " has zero mass");
    }
    factors[j] = nu[j] / sums[j];
  }
  DenseMatrix out(pi.rows(), pi.cols());
  for (std::size_t i = 0; i < pi.rows(); ++i) {
    for (std::size_t j = 0; j < pi.cols(); ++j) out(i, j) = pi.plan()(i, j) * factors[j];
  }
  return Coupling(std::move(out));
}

Coupling euclid_project_c1(const DenseMatrix& pi, const Marginal& mu) {
  if (pi.rows() != mu.size()) throw ShapeError("euclid_project_c1: row count != marginal length");
  DenseMatrix out(pi.rows(), pi.cols());
  std::vector<double> row(pi.cols());
  for (std::size_t i = 0; i < pi.rows(); ++i) {
    for (std::size_t j = 0; j < pi.cols(); ++j) row[j] = pi(i, j);
    project_to_scaled_simplex(row, mu[i]);
    for (std::size_t j = 0; j < pi.cols(); ++j) out(i, j) = row[j];
  }
  return Coupling(std::move(out));
}

Coupling euclid_project_c2(const DenseMatrix& pi, const Marginal& nu) {
  if (pi.cols() != nu.size()) throw ShapeError("euclid_project_c2: col count != marginal length");
  DenseMatrix out(pi.rows(), pi.cols());
  std::vector<double> col(pi.rows());
  for (std::size_t j = 0; j < pi.cols(); ++j) {
    for (std::size_t i = 0; i < pi.rows(); ++i) col[i] = pi(i, j);
    project_to_scaled_simplex(col, nu[j]);
    for (std::size_t i = 0; i < pi.rows(); ++i) out(i, j) = col[i];
  }
  return Coupling(std::move(out));
}

Coupling project_intersection(const DenseMatrix& pi, const Marginal& mu, const Marginal& nu,
                              double tol, std::size_t max_sweeps) {
  if (pi.rows() != mu.size() || pi.cols() != nu.size()) {
    throw ShapeError("project_intersection: plan shape does not match marginals");
  }
  DenseMatrix x = pi;
  DenseMatrix p_corr(pi.rows(), pi.cols(), 0.0);
  DenseMatrix q_corr(pi.rows(), pi.cols(), 0.0);
  double change = 0.0;
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    const DenseMatrix y = euclid_project_c1(add(x, p_corr), mu).plan();
    p_corr = subtract(add(x, p_corr), y);
    const DenseMatrix x_next = euclid_project_c2(add(y, q_corr), nu).plan();
    q_corr = subtract(add(y, q_corr), x_next);
    change = frobenius_norm(subtract(x_next, x));
    x = x_next;
    if (change < tol) return Coupling(std::move(x));
  }
  throw ConvergenceError("project_intersection: Dykstra did not converge after " +
                             std::to_string(max_sweeps) +
                             " sweeps, last change " + std::to_string(change),
                         change);
}

double infeasibility_error(const Coupling& pi, const Marginal& mu, const Marginal& nu) {
  if (pi.rows() != mu.size() || pi.cols() != nu.size()) {
    throw ShapeError("infeasibility_error: plan shape does not match marginals");
  }
  const std::vector<double> rows = row_sums(pi.plan());
  const std::vector<double> cols = col_sums(pi.plan());
  double row_err = 0.0, col_err = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double d = rows[i] - mu[i];
    row_err += d * d;
  }
  for (std::size_t j = 0; j < cols.size(); ++j) {
    const double d = cols[j] - nu[j];
    col_err += d * d;
  }
  return std::sqrt(col_err) + std::sqrt(row_err);
}

}  // namespace gw
