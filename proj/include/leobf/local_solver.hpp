#pragma once

#include <vector>

#include "leobf/ball_solver.hpp"
#include "leobf/rates.hpp"
#include "leobf/state.hpp"

namespace leobf {

/// Closed-form elimination operators of the consensus variables, one column
/// per (u, l) pair in the shared gain-table layout. The optimal local copy
/// for fixed beamformers is
///   g_{-s,u,l} = gamma_dir(:,col) * (b^T(theta_{s,u}) w_{s,l}) * delta_{s,l}
///                + zeta(:,col),
/// embedded in full S-row tables whose row s (and every row outside the
/// scheduler support of UT l) is exactly zero. The scalar tables carry the
/// reduced-quadratic coefficients: Theta_{s,l} = sum_u k_theta(u,l) *
/// conj(b_{s,u}) b_{s,u}^T and xi_{s,l} = sum_u xi_coeff(u,l) * conj(b_{s,u}).
struct Elimination {
  MatC gamma_dir;  // S x U*U
  MatC zeta;       // S x U*U
  MatC gbar;       // S x U*U, consensus aggregate sum_j (g~ - z/rho)
  MatD k_theta;    // U x U, entry (u, l)
  MatC xi_coeff;   // U x U, entry (u, l)
};

Elimination eliminate_operators(const ConsensusState& state, const StatisticalCsi& csi,
                                const SchedulingMask& mask);

/// Optimal consensus variables for fixed beamformers (full table; row s holds
/// the beamformer-determined own entries, zero where unscheduled).
/// `w_row[l]` is satellite s's beamformer for UT l (ignored when unscheduled).
MatC eliminate_g(const ConsensusState& state, const StatisticalCsi& csi,
                 const SchedulingMask& mask, const std::vector<VecC>& w_row);

/// Reduced per-satellite quadratic over the served users, in served order.
ReducedQuadratic assemble_reduced(const ConsensusState& state, const StatisticalCsi& csi,
                                  const SchedulingMask& mask, double power_budget);

/// Augmented-Lagrangian value of the local problem at a given gains table
/// (own-row entries already encode the beamformers).
double local_objective(const ConsensusState& state, const StatisticalCsi& csi, const MatC& gains);

struct LocalSolve {
  std::vector<VecC> w_row;  // length U; zero vectors where unscheduled
  MatC g;                   // updated local table g^{(s)}
  double lambda = 0.0;
};

/// Quasi-closed-form solve of the local problem: eliminate the consensus
/// variables, eigendecompose the reduced blocks, line-search the power
/// multiplier, then recover beamformers and the full local table.
LocalSolve solve_local(const ConsensusState& state, const StatisticalCsi& csi,
                       const SchedulingMask& mask, double power_budget,
                       const LineSearchOptions& opts = {});

struct GenericOracleResult {
  std::vector<VecC> w_row;
  MatC g;
  double objective = 0.0;
  int iterations = 0;
  std::vector<double> objective_trace;
};

/// Reference solver for the same local problem: alternates exact dense
/// solves of the consensus subproblems with exact full-size ball-constrained
/// beamformer solves (no block-diagonal shortcut). Jointly convex, so it
/// reaches the global optimum; used as the correctness and speed yardstick.
GenericOracleResult generic_local_oracle(const ConsensusState& state, const StatisticalCsi& csi,
                                         const SchedulingMask& mask, double power_budget,
                                         double tol = 1e-12, int max_iters = 500);

}  // namespace leobf
