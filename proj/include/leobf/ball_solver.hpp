#pragma once

#include <vector>

#include "leobf/types.hpp"

namespace leobf {

/// One user block of the reduced per-satellite problem:
/// w^H Theta w - 2 Re{xi^H w}.
struct BlockQuadratic {
  MatC theta;  // N x N Hermitian PSD
  VecC xi;
};

/// Block-diagonal quadratic minimized over the power ball ||w||^2 <= budget.
struct ReducedQuadratic {
  std::vector<BlockQuadratic> blocks;
  double budget = 0.0;

  // Spectral factors Theta = V diag(omega) V^H and varpi = V^H xi, filled by
  // eigendecompose(). Blocks flagged shared reuse the factors of block 0.
  std::vector<MatC> eigvecs;
  std::vector<VecD> eigvals;
  std::vector<VecC> varpi;
  bool shared_spectrum = false;

  void eigendecompose();
  double max_eigenvalue() const;
};

struct BallSolution {
  std::vector<VecC> w;  // per block
  double lambda = 0.0;
  double h_residual = 0.0;  // h(lambda) at the returned multiplier
};

struct LineSearchOptions {
  double h_tol_rel = 1e-10;  // stop when |h| < h_tol_rel * budget
  int max_bisect = 200;
  double eig_floor_rel = 1e-12;  // floor on omega at lambda = 0
};

/// Spectral form of the power mismatch, sum |varpi_n|^2/(omega_n+lambda)^2 - P.
double h_of_lambda(const ReducedQuadratic& quad, double lambda,
                   const LineSearchOptions& opts = {});

/// Exact minimizer of the block quadratic over the ball: lambda = 0 when the
/// unconstrained solution is feasible, otherwise the unique root of h.
BallSolution solve_ball_constrained(const ReducedQuadratic& quad,
                                    const LineSearchOptions& opts = {});

}  // namespace leobf
