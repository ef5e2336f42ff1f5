#pragma once

#include <vector>

#include "leobf/local_solver.hpp"
#include "leobf/report.hpp"
#include "leobf/state.hpp"

namespace leobf {

struct DecentralizedOptions {
  double rho_g = 1.0;
  enum class Schedule { kFlattened, kNested } schedule = Schedule::kFlattened;
  int max_outer = 500;      // flattened rounds, or nested outer iterations
  double tol = 1e-6;        // relative change of satellite 0's local objective
  double inner_tol = 1e-4;  // nested mode: consensus residual target
  int max_inner = 50;       // nested mode: rounds per outer iteration
  bool adapt_rho = false;   // residual-balancing penalty adaptation
  LineSearchOptions line_search;
};

struct DecentralizedResult {
  BeamformerSet bf;
  SolveReport report;
  OverheadLedger ledger;
};

struct OverheadRow {
  int sat = 0;
  int degree = 0;
  int served = 0;
  long long formula_per_iter = 0;  // |G_s| |U_s| S U
  long long counted_per_iter = 0;
  long long counted_total = 0;
};

/// One synchronous C-ADMM round: every satellite solves its local problem
/// against the pre-round snapshots, updates its duals, then all messages
/// commit at a barrier (Jacobi schedule, worker-count independent).
/// Returns the post-commit consensus residual max_{edges} ||g^(s)-g^(j)||_inf.
double consensus_round(std::vector<ConsensusState>& states, const IslTopology& topo,
                       const StatisticalCsi& csi, const SchedulingMask& mask, const VecD& p,
                       BeamformerSet& bf, OverheadLedger& ledger,
                       const LineSearchOptions& ls = {});

DecentralizedResult run_decentralized(const StatisticalCsi& csi, const SchedulingMask& mask,
                                      const VecD& p, const IslTopology& topo,
                                      const DecentralizedOptions& opts = {});

/// Per-satellite overhead table; throws InternalError if the closed-form
/// per-iteration count disagrees with what the engine actually transmitted.
std::vector<OverheadRow> overhead_report(const OverheadLedger& ledger, const IslTopology& topo,
                                         const SchedulingMask& mask);

}  // namespace leobf
