#include "leobf/ball_solver.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace leobf {

void ReducedQuadratic::eigendecompose() {
  const std::size_t nb = blocks.size();
  eigvecs.resize(nb);
  eigvals.resize(nb);
  varpi.resize(nb);
  for (std::size_t i = 0; i < nb; ++i) {
    if (shared_spectrum && i > 0) {
      eigvecs[i] = eigvecs[0];
      eigvals[i] = eigvals[0];
    } else {
      Eigen::SelfAdjointEigenSolver<MatC> es(blocks[i].theta);
      if (es.info() != Eigen::Success) throw InternalError("eigendecomposition failed");
      eigvecs[i] = es.eigenvectors();
      eigvals[i] = es.eigenvalues();
    }
    varpi[i] = eigvecs[i].adjoint() * blocks[i].xi;
  }
}

double ReducedQuadratic::max_eigenvalue() const {
  double m = 0.0;
  for (const auto& ev : eigvals) m = std::max(m, ev.size() ? ev.maxCoeff() : 0.0);
  return m;
}

double h_of_lambda(const ReducedQuadratic& quad, double lambda, const LineSearchOptions& opts) {
  double m = 0.0;
  for (const auto& ev : quad.eigvals) m = std::max(m, ev.size() ? ev.maxCoeff() : 0.0);
  const double floor = opts.eig_floor_rel * m;
  double acc = 0.0;
  for (std::size_t i = 0; i < quad.varpi.size(); ++i) {
    const VecD& ev = quad.eigvals[i];
    const VecC& vp = quad.varpi[i];
    for (Eigen::Index n = 0; n < ev.size(); ++n) {
      const double d = std::max(ev(n), floor) + lambda;
      acc += std::norm(vp(n)) / (d * d);
    }
  }
  return acc - quad.budget;
}

namespace {

std::vector<VecC> recover(const ReducedQuadratic& quad, double lambda, double floor) {
  std::vector<VecC> w(quad.blocks.size());
  for (std::size_t i = 0; i < quad.blocks.size(); ++i) {
    const VecD& ev = quad.eigvals[i];
    VecC scaled(ev.size());
    for (Eigen::Index n = 0; n < ev.size(); ++n)
      scaled(n) = quad.varpi[i](n) / (std::max(ev(n), floor) + lambda);
    w[i] = quad.eigvecs[i] * scaled;
  }
  return w;
}

}  // namespace

BallSolution solve_ball_constrained(const ReducedQuadratic& quad, const LineSearchOptions& opts) {
  if (!(quad.budget > 0.0)) throw ConfigError("ball solver: power budget must be positive");
  if (quad.eigvals.size() != quad.blocks.size())
    throw InternalError("ball solver: call eigendecompose() first");

  const double omega_max = quad.max_eigenvalue();
  if (!std::isfinite(omega_max)) throw InternalError("ball solver: non-finite eigenvalues");
  const double h_tol = opts.h_tol_rel * quad.budget;

  BallSolution sol;
  if (omega_max <= 0.0) {
    // Theta = 0: minimize -2 Re{xi^H w} over the ball.
    double xi_sq = 0.0;
    for (const auto& blk : quad.blocks) xi_sq += blk.xi.squaredNorm();
    if (xi_sq == 0.0) {
      sol.lambda = 0.0;
      sol.w.assign(quad.blocks.size(), VecC());
      for (std::size_t i = 0; i < quad.blocks.size(); ++i)
        sol.w[i] = VecC::Zero(quad.blocks[i].xi.size());
      sol.h_residual = -quad.budget;
      return sol;
    }
    const double xi_norm = std::sqrt(xi_sq);
    sol.lambda = xi_norm / std::sqrt(quad.budget);
    sol.w.resize(quad.blocks.size());
    for (std::size_t i = 0; i < quad.blocks.size(); ++i)
      sol.w[i] = quad.blocks[i].xi * (std::sqrt(quad.budget) / xi_norm);
    sol.h_residual = 0.0;
    return sol;
  }

  const double floor = opts.eig_floor_rel * omega_max;
  const double h0 = h_of_lambda(quad, 0.0, opts);
  if (h0 <= 0.0) {
    // Unconstrained minimizer already feasible; floored spectrum picks the
    // minimum-norm solution on singular blocks.
    sol.lambda = 0.0;
    sol.w = recover(quad, 0.0, floor);
    sol.h_residual = h0;
    return sol;
  }

  // Bracket: double from omega_max * 1e-6 until h goes negative. h(lambda)
  // < 0 is guaranteed for lambda > ||xi|| / sqrt(P), so this terminates.
  double lo = 0.0;
  double hi = omega_max * 1e-6;
  while (h_of_lambda(quad, hi, opts) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw InternalError("ball solver: bracketing diverged");
  }

  double lambda = hi;
  double h = h_of_lambda(quad, lambda, opts);
  for (int it = 0; it < opts.max_bisect && std::abs(h) >= h_tol; ++it) {
    lambda = 0.5 * (lo + hi);
    h = h_of_lambda(quad, lambda, opts);
    if (h > 0.0)
      lo = lambda;
    else
      hi = lambda;
  }
  sol.lambda = lambda;
  sol.h_residual = h;
  sol.w = recover(quad, lambda, floor);
  return sol;
}

}  // namespace leobf
