#pragma once

#include <functional>
#include <vector>

#include "leobf/ball_solver.hpp"
#include "leobf/local_solver.hpp"
#include "leobf/rates.hpp"
#include "leobf/state.hpp"

namespace leobf::oracle {

/// Reference implementations kept deliberately independent of the production
/// code paths: naive-loop assembly, dense factorizations, first-order
/// methods. They exist to cross-check the closed-form machinery.

/// Largest eigenvalue of a Hermitian PSD matrix by power iteration.
double operator_norm(const MatC& a, int iters = 100);

/// Projected gradient for min w^H A w - 2 Re{xi^H w} s.t. ||w||^2 <= budget,
/// fixed step 1/L. Returns the iterate after `steps` steps from w = 0.
VecC projected_gradient_ball(const MatC& a, const VecC& xi, double budget, int steps);

double ball_objective(const MatC& a, const VecC& xi, const VecC& w);

/// Stacks a ReducedQuadratic into one dense system (block diagonal).
void stack_blocks(const ReducedQuadratic& quad, MatC& a, VecC& xi);

/// h(lambda) through the explicit shifted inverse instead of the spectrum.
double h_inverse_form(const ReducedQuadratic& quad, double lambda);

/// Dense solve of one consensus subproblem (pair u, l) on its scheduler
/// support, assembled with naive loops and solved by full-pivot LU.
/// `own` is the fixed own-entry gain b^T delta w of the owning satellite.
VecC dense_consensus_solve(const ConsensusState& st, const StatisticalCsi& csi,
                           const SchedulingMask& mask, int u, int l, Complex own,
                           std::vector<int>* support_out = nullptr);

/// Naive-loop assembly of the full coupled beamformer quadratic of the
/// centralized step: variables stacked per satellite, served users in order.
/// Returns the stacked Hermitian matrix and linear term, plus segment offsets.
struct JointQuadratic {
  MatC a;
  VecC xi;
  std::vector<int> sat_offset;  // start of each satellite's segment
  std::vector<int> sat_dim;
};
JointQuadratic build_joint_quadratic(const WmmseAux& aux, const StatisticalCsi& csi,
                                     const SchedulingMask& mask);

/// Projected gradient on the joint problem with per-satellite ball
/// projections. Returns the final stacked iterate.
VecC projected_gradient_joint(const JointQuadratic& jq, const VecD& budgets, int steps);

double joint_objective(const JointQuadratic& jq, const VecC& w);

/// Central finite-difference gradient (with respect to the complex vector
/// seen as re/im pairs) of a scalar function of one beamformer block.
VecC fd_gradient(const std::function<double(const VecC&)>& f, const VecC& w, double step);

}  // namespace leobf::oracle
