#pragma once

#include "leobf/ball_solver.hpp"
#include "leobf/rates.hpp"
#include "leobf/report.hpp"

namespace leobf {

struct CentralizedOptions {
  double tol = 1e-4;      // outer: relative objective reduction
  int max_outer = 50;
  double bcd_tol = 1e-8;  // beamformer subproblem: relative sweep improvement
  int max_sweeps = 200;
  LineSearchOptions line_search;
};

/// Beamformer step of the outer loop: block-coordinate descent over
/// satellites, each block solved exactly as a ball-constrained quadratic.
/// The power constraint holds after every block update.
BeamformerSet solve_beamformers_centralized(const WmmseAux& aux, const StatisticalCsi& csi,
                                            const SchedulingMask& mask,
                                            const BeamformerSet& w_init, double tol,
                                            int max_sweeps = 200,
                                            const LineSearchOptions& ls = {});

/// Full centralized weighted-MMSE loop starting from MRT beamformers.
std::pair<BeamformerSet, SolveReport> run_centralized(const StatisticalCsi& csi,
                                                      const SchedulingMask& mask, const VecD& p,
                                                      const CentralizedOptions& opts = {});

/// Single-satellite-serving benchmark: reduce the mask to the strongest link
/// per UT, then optimize each satellite independently (no cooperation). The
/// reported rates still account for the cross-satellite interference.
std::pair<BeamformerSet, SolveReport> run_sss(const StatisticalCsi& csi,
                                              const SchedulingMask& mask, const VecD& p,
                                              const CentralizedOptions& opts = {});

}  // namespace leobf
