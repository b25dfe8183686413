#pragma once

#include <cstddef>
#include <vector>

#include "gw/linalg.hpp"

namespace gw {

/// Strictly positive probability weights summing to one.
class Marginal {
 public:
  explicit Marginal(std::vector<double> weights);
  static Marginal uniform(std::size_t n);

  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const noexcept { return weights_; }

 private:
  std::vector<double> weights_;
};

/// Nonnegative transport plan. Feasibility w.r.t. the marginals is not part
/// of the type: alternating solvers hold plans that satisfy only one marginal
/// constraint at a time.
class Coupling {
 public:
  explicit Coupling(DenseMatrix plan);
  static Coupling outer_product(const Marginal& mu, const Marginal& nu);
  static Coupling uniform(std::size_t n, std::size_t m);

  const DenseMatrix& plan() const noexcept { return plan_; }
  std::size_t rows() const noexcept { return plan_.rows(); }
  std::size_t cols() const noexcept { return plan_.cols(); }
  bool strictly_positive() const;

 private:
  DenseMatrix plan_;
};

/// Pair of symmetric nonnegative structure matrices with their marginals.
class GwProblem {
 public:
  GwProblem(DenseMatrix d_x, DenseMatrix d_y, Marginal mu, Marginal nu);

  const DenseMatrix& d_x() const noexcept { return d_x_; }
  const DenseMatrix& d_y() const noexcept { return d_y_; }
  const Marginal& mu() const noexcept { return mu_; }
  const Marginal& nu() const noexcept { return nu_; }
  std::size_t n() const noexcept { return mu_.size(); }
  std::size_t m() const noexcept { return nu_.size(); }

 private:
  DenseMatrix d_x_;
  DenseMatrix d_y_;
  Marginal mu_;
  Marginal nu_;
};

enum class BregmanGeometry { KL, Quadratic };

/// Sum of squared structure entries weighted by the marginal outer products;
/// the plan-independent part of the objective.
double gw_constant_term(const GwProblem& p);

/// -Tr(D_X pi D_Y pi^T). The full objective equals
/// gw_constant_term(p) + 2 * quadratic_term(p, pi).
double quadratic_term(const GwProblem& p, const Coupling& pi);

/// Full distortion objective (equals the exhaustive quadruple sum).
double gw_objective(const GwProblem& p, const Coupling& pi);

/// Gradient of the bilinear surrogate -Tr(D_X pi D_Y w^T) in pi: -D_X w D_Y.
DenseMatrix grad_bilinear(const GwProblem& p, const Coupling& w);

/// Bregman divergence D_h(x, y). KL uses the generalized (unnormalized) form
/// sum x log(x/y) - x + y with 0 log 0 = 0; Quadratic is 0.5 ||x-y||^2.
double bregman_div(BregmanGeometry geom, const Coupling& x, const Coupling& y);

/// diag(mu ./ pi 1) pi: KL projection onto the row-marginal polytope.
Coupling scale_rows_to_mu(const Coupling& pi, const Marginal& mu);

/// pi diag(nu ./ pi^T 1): KL projection onto the column-marginal polytope.
Coupling scale_cols_to_nu(const Coupling& pi, const Marginal& nu);

/// Row-wise Euclidean projection onto {v >= 0, sum v = mu_i} (sort-threshold).
Coupling euclid_project_c1(const DenseMatrix& pi, const Marginal& mu);

/// Column analogue of euclid_project_c1.
Coupling euclid_project_c2(const DenseMatrix& pi, const Marginal& nu);

/// Euclidean projection onto the transportation polytope via Dykstra's
/// alternating projections. Throws ConvergenceError if the iterate change
/// stays above tol after max_sweeps sweeps.
Coupling project_intersection(const DenseMatrix& pi, const Marginal& mu, const Marginal& nu,
                              double tol = 1e-10, std::size_t max_sweeps = 10000);

/// ||pi^T 1 - nu|| + ||pi 1 - mu|| (Euclidean norms).
double infeasibility_error(const Coupling& pi, const Marginal& mu, const Marginal& nu);

}  // namespace gw
