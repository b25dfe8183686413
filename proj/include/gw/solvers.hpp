#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "gw/core.hpp"

namespace gw {

enum class Method { KlBapg, QuadBapg, Bpg, BpgS, Ebpg };

enum class InitPlan { OuterProduct, Uniform, Custom };

/// Bregman geometry the method's proximal term lives in.
BregmanGeometry geometry_of(Method method);

struct SolverConfig {
  Method method = Method::KlBapg;
  /// Step / penalty parameter; plays the role of the entropic regularization
  /// strength for Ebpg.
  double rho = 0.1;
  std::size_t max_iter = 2000;
  double rel_tol = 1e-6;
  /// Sweep budget and marginal tolerance of the inner Sinkhorn loop
  /// (Bpg and Ebpg; BpgS always runs exactly one sweep).
  std::size_t inner_max_iter = 1000;
  double inner_tol = 1e-9;
  InitPlan init = InitPlan::OuterProduct;
  std::optional<Coupling> custom_init;
  /// Keep every (pi, w) pair in the report (needed by the decrease checks).
  bool record_iterates = false;

  void validate() const;  // throws ParameterError on bad values
};

struct TraceRecord {
  std::size_t iter = 0;
  /// Full distortion objective at pi, constant term included.
  double objective = 0.0;
  /// Penalized potential at (pi, w); for Ebpg the entropic objective,
  /// for Bpg/BpgS the bilinear value at (pi, pi).
  double potential = 0.0;
  double infeasibility = 0.0;
  double step_rel_change = 0.0;
  /// D_h(pi^{k+1}, w^k) - D_h(w^k, pi^{k+1}); zero for single-plan methods.
  double asym_error_increment = 0.0;
};

struct IteratePair {
  Coupling pi;
  Coupling w;
};

struct SolveReport {
  Coupling pi;
  Coupling w;
  /// Entrywise mean of pi and w, the point whose distance to the critical
  /// set shrinks like 1/rho.
  Coupling averaged;
  std::vector<TraceRecord> trace;
  bool converged = false;
  std::size_t iterations = 0;
  /// True if any exponent clamp engaged during the run.
  bool saturated = false;
  /// Populated only when SolverConfig::record_iterates is set; holds the
  /// initial pair followed by one pair per iteration.
  std::vector<IteratePair> iterates;
};

/// One alternating KL step: pi half-step scaled to the row marginal, then the
/// w half-step scaled to the column marginal. pi_next is exactly row-feasible
/// and w_next exactly column-feasible.
std::pair<Coupling, Coupling> kl_bapg_step(const GwProblem& p, const Coupling& w, double rho,
                                           bool* saturated = nullptr);

/// Quadratic-geometry analogue: Euclidean projected gradient half-steps on
/// the bilinear surrogate.
std::pair<Coupling, Coupling> quad_bapg_step(const GwProblem& p, const Coupling& w, double rho);

/// One outer proximal iteration: kernel pi .* exp(2 D_X pi D_Y / rho), then
/// Sinkhorn scaling onto the transportation polytope. Runs at most
/// inner_max_iter row+column sweeps, stopping early at inner_tol; with a
/// one-sweep budget the tolerance requirement is waived (that case is the
/// single-sweep variant by definition), otherwise missing inner_tol throws
/// InnerConvergenceError.
Coupling bpg_step(const GwProblem& p, const Coupling& pi, double rho,
                  std::size_t inner_max_iter, double inner_tol, bool* saturated = nullptr);

/// One outer mirror iteration on the entropic objective: Sinkhorn on the
/// Gibbs kernel exp(2 D_X pi D_Y / epsilon) (no Hadamard with the previous
/// plan).
Coupling ebpg_step(const GwProblem& p, const Coupling& pi, double epsilon,
                   std::size_t inner_max_iter, double inner_tol, bool* saturated = nullptr);

/// Penalized potential f(pi, w) + rho D_h(pi, w); the indicator parts vanish
/// along iterates, which satisfy their respective marginal constraint.
double potential_value(const GwProblem& p, BregmanGeometry geom, double rho, const Coupling& pi,
                       const Coupling& w);

/// gw_objective + epsilon * sum pi (log pi - 1), with 0 log 0 = 0.
double entropic_objective(const GwProblem& p, double epsilon, const Coupling& pi);

/// Run the configured method from its initial plan until the relative change
/// of pi drops below rel_tol or max_iter is reached.
SolveReport solve(const GwProblem& p, const SolverConfig& cfg);

/// Alternating row/column scaling of a positive kernel toward (mu, nu).
/// Returns once the marginal error is at most tol or after max_sweeps full
/// sweeps; the final marginal error is written to *final_err if given.
DenseMatrix sinkhorn_scale(DenseMatrix kernel, const Marginal& mu, const Marginal& nu,
                           std::size_t max_sweeps, double tol, double* final_err = nullptr);

}  // namespace gw
