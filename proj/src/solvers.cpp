#include "gw/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gw/errors.hpp"

namespace gw {

namespace {

// exp(e_ij / rho) with the exponents shifted by their maximum when it is
// positive. The shift multiplies the matrix by a constant, which the
// subsequent marginal scaling removes, so the scaled iterate is unchanged
// while overflow becomes impossible.
DenseMatrix stabilized_exp(const DenseMatrix& exponents, double rho, bool* saturated) {
  const double top = max_entry(exponents);
  const DenseMatrix shifted =
      top > 0.0 ? subtract(exponents, DenseMatrix(exponents.rows(), exponents.cols(), top))
                : exponents;
  bool clamped = false;
  DenseMatrix result = exp_map(shifted, rho, &clamped);
  if (clamped && saturated != nullptr) *saturated = true;
  return result;
}

Coupling initial_plan(const GwProblem& p, const SolverConfig& cfg) {
  switch (cfg.init) {
    case InitPlan::OuterProduct:
      return Coupling::outer_product(p.mu(), p.nu());
    case InitPlan::Uniform:
      return Coupling::uniform(p.n(), p.m());
    case InitPlan::Custom:
      if (!cfg.custom_init.has_value()) {
        throw InitError("solve: init=Custom requires custom_init");
      }
      if (cfg.custom_init->rows() != p.n() || cfg.custom_init->cols() != p.m()) {
        throw InitError("solve: custom_init shape does not match problem");
      }
      return *cfg.custom_init;
  }
  throw ParameterError("solve: unknown init kind");
}

double rel_change(const Coupling& next, const Coupling& prev) {
  const double denom = frobenius_norm(prev.plan());
  if (denom == 0.0) return 0.0;
  return frobenius_norm(subtract(next.plan(), prev.plan())) / denom;
}

}  // namespace

BregmanGeometry geometry_of(Method method) {
  return method == Method::QuadBapg ? BregmanGeometry::Quadratic : BregmanGeometry::KL;
}

void SolverConfig::validate() const {
  if (!(rho > 0.0)) throw ParameterError("SolverConfig: rho must be positive");
  if (max_iter < 1) throw ParameterError("SolverConfig: max_iter must be at least 1");
  if (!(rel_tol > 0.0)) throw ParameterError("SolverConfig: rel_tol must be positive");
  if (inner_max_iter < 1) throw ParameterError("SolverConfig: inner_max_iter must be at least 1");
  if (!(inner_tol > 0.0)) throw ParameterError("SolverConfig: inner_tol must be positive");
  if (init == InitPlan::Custom && !custom_init.has_value()) {
    throw ParameterError("SolverConfig: init=Custom requires custom_init");
  }
}

std::pair<Coupling, Coupling> kl_bapg_step(const GwProblem& p, const Coupling& w, double rho,
                                           bool* saturated) {
  if (!(rho > 0.0)) throw ParameterError("kl_bapg_step: rho must be positive");
  const DenseMatrix g_w = gemm(gemm(p.d_x(), w.plan()), p.d_y());
  const Coupling pi_half(hadamard(w.plan(), stabilized_exp(g_w, rho, saturated)));
  Coupling pi_next = scale_rows_to_mu(pi_half, p.mu());

  const DenseMatrix g_pi = gemm(gemm(p.d_x(), pi_next.plan()), p.d_y());
  const Coupling w_half(hadamard(pi_next.plan(), stabilized_exp(g_pi, rho, saturated)));
  Coupling w_next = scale_cols_to_nu(w_half, p.nu());
  return {std::move(pi_next), std::move(w_next)};
}

std::pair<Coupling, Coupling> quad_bapg_step(const GwProblem& p, const Coupling& w, double rho) {
  if (!(rho > 0.0)) throw ParameterError("quad_bapg_step: rho must be positive");
  const DenseMatrix g_w = gemm(gemm(p.d_x(), w.plan()), p.d_y());
  Coupling pi_next = euclid_project_c1(add(w.plan(), scaled(g_w, 1.0 / rho)), p.mu());
  const DenseMatrix g_pi = gemm(gemm(p.d_x(), pi_next.plan()), p.d_y());
  Coupling w_next = euclid_project_c2(add(pi_next.plan(), scaled(g_pi, 1.0 / rho)), p.nu());
  return {std::move(pi_next), std::move(w_next)};
}

DenseMatrix sinkhorn_scale(DenseMatrix kernel, const Marginal& mu, const Marginal& nu,
                           std::size_t max_sweeps, double tol, double* final_err) {
  Coupling plan(std::move(kernel));
  double err = infeasibility_error(plan, mu, nu);
  for (std::size_t sweep = 0; sweep < max_sweeps && err > tol; ++sweep) {
    plan = scale_rows_to_mu(plan, mu);
    plan = scale_cols_to_nu(plan, nu);
    err = infeasibility_error(plan, mu, nu);
  }
  if (final_err != nullptr) *final_err = err;
  return plan.plan();
}

Coupling bpg_step(const GwProblem& p, const Coupling& pi, double rho,
                  std::size_t inner_max_iter, double inner_tol, bool* saturated) {
  if (!(rho > 0.0)) throw ParameterError("bpg_step: rho must be positive");
  if (inner_max_iter < 1) throw ParameterError("bpg_step: inner_max_iter must be at least 1");
  const DenseMatrix grad = scaled(gemm(gemm(p.d_x(), pi.plan()), p.d_y()), 2.0);
  const DenseMatrix kernel = hadamard(pi.plan(), stabilized_exp(grad, rho, saturated));
  double err = 0.0;
  DenseMatrix next = sinkhorn_scale(kernel, p.mu(), p.nu(), inner_max_iter, inner_tol, &err);
  if (inner_max_iter > 1 && err > inner_tol) {
    throw InnerConvergenceError("bpg_step: Sinkhorn marginal error " + std::to_string(err) +
                                    " above tolerance after " +
                                    std::to_string(inner_max_iter) + " sweeps",
                                err);
  }
  return Coupling(std::move(next));
}

Coupling ebpg_step(const GwProblem& p, const Coupling& pi, double epsilon,
                   std::size_t inner_max_iter, double inner_tol, bool* saturated) {
  if (!(epsilon > 0.0)) throw ParameterError("ebpg_step: epsilon must be positive");
  const DenseMatrix grad = scaled(gemm(gemm(p.d_x(), pi.plan()), p.d_y()), 2.0);
  const DenseMatrix kernel = stabilized_exp(grad, epsilon, saturated);
  double err = 0.0;
  DenseMatrix next = sinkhorn_scale(kernel, p.mu(), p.nu(), inner_max_iter, inner_tol, &err);
  if (inner_max_iter > 1 && err > inner_tol) {
    throw InnerConvergenceError("ebpg_step: Sinkhorn marginal error " + std::to_string(err) +
                                    " above tolerance after " +
                                    std::to_string(inner_max_iter) + " sweeps",
                                err);
  }
  return Coupling(std::move(next));
}

double potential_value(const GwProblem& p, BregmanGeometry geom, double rho, const Coupling& pi,
                       const Coupling& w) {
  const DenseMatrix g = gemm(gemm(p.d_x(), pi.plan()), p.d_y());
  double bilinear = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) bilinear += g.entries()[i] * w.plan().entries()[i];
  return -bilinear + rho * bregman_div(geom, pi, w);
}

double entropic_objective(const GwProblem& p, double epsilon, const Coupling& pi) {
  double entropy_term = 0.0;
  for (double v : pi.plan().entries()) {
    if (v > 0.0) entropy_term += v * (std::log(v) - 1.0);
  }
  return gw_objective(p, pi) + epsilon * entropy_term;
}

SolveReport solve(const GwProblem& p, const SolverConfig& cfg) {
  cfg.validate();
  Coupling pi = initial_plan(p, cfg);
  if (geometry_of(cfg.method) == BregmanGeometry::KL && !pi.strictly_positive()) {
    throw InitError("solve: KL-geometry methods need a strictly positive initial plan");
  }

  const bool alternating = cfg.method == Method::KlBapg || cfg.method == Method::QuadBapg;
  Coupling w = pi;

  SolveReport report{pi, w, pi, {}, false, 0, false, {}};
  report.trace.reserve(std::min<std::size_t>(cfg.max_iter, 4096));
  if (cfg.record_iterates) report.iterates.push_back({pi, w});

  for (std::size_t k = 1; k <= cfg.max_iter; ++k) {
    const Coupling pi_prev = pi;
    const Coupling w_prev = w;
    switch (cfg.method) {
      case Method::KlBapg: {
        auto [pn, wn] = kl_bapg_step(p, w, cfg.rho, &report.saturated);
        pi = std::move(pn);
        w = std::move(wn);
        break;
      }
      case Method::QuadBapg: {
        auto [pn, wn] = quad_bapg_step(p, w, cfg.rho);
        pi = std::move(pn);
        w = std::move(wn);
        break;
      }
      case Method::Bpg:
        pi = bpg_step(p, pi, cfg.rho, cfg.inner_max_iter, cfg.inner_tol, &report.saturated);
        w = pi;
        break;
      case Method::BpgS:
        pi = bpg_step(p, pi, cfg.rho, 1, cfg.inner_tol, &report.saturated);
        w = pi;
        break;
      case Method::Ebpg:
        pi = ebpg_step(p, pi, cfg.rho, cfg.inner_max_iter, cfg.inner_tol, &report.saturated);
        w = pi;
        break;
    }

    TraceRecord rec;
    rec.iter = k;
    rec.objective = gw_objective(p, pi);
    if (alternating) {
      rec.potential = potential_value(p, geometry_of(cfg.method), cfg.rho, pi, w);
      rec.asym_error_increment = bregman_div(geometry_of(cfg.method), pi, w_prev) -
                                 bregman_div(geometry_of(cfg.method), w_prev, pi);
    } else if (cfg.method == Method::Ebpg) {
      rec.potential = entropic_objective(p, cfg.rho, pi);
      rec.asym_error_increment = 0.0;
    } else {
      rec.potential = potential_value(p, BregmanGeometry::KL, cfg.rho, pi, pi);
      rec.asym_error_increment = 0.0;
    }
    rec.infeasibility = infeasibility_error(pi, p.mu(), p.nu());
    rec.step_rel_change = rel_change(pi, pi_prev);
    report.trace.push_back(rec);
    if (cfg.record_iterates) report.iterates.push_back({pi, w});
    report.iterations = k;

    if (rec.step_rel_change <= cfg.rel_tol) {
      report.converged = true;
      break;
    }
  }

  report.pi = pi;
  report.w = alternating ? w : pi;
  report.averaged = Coupling(scaled(add(report.pi.plan(), report.w.plan()), 0.5));
  return report;
}

}  // namespace gw
