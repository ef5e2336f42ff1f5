#include "leobf/consensus.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "leobf/baselines.hpp"
#include "leobf/parallel.hpp"

namespace leobf {

namespace {

// Scalars in one message: the structurally non-zero entries of the table,
// i.e. entry (i, (u,l)) is transmitted iff UT l is scheduled at satellite i.
long long message_scalars(const SchedulingMask& mask) {
  long long served_total = 0;
  for (const auto& set : mask.served) served_total += static_cast<long long>(set.size());
  return served_total * mask.num_uts();
}

double pairwise_residual(const std::vector<ConsensusState>& states, const IslTopology& topo) {
  double r = 0.0;
  for (auto [i, j] : topo.edges)
    r = std::max(r, (states[i].g_local - states[j].g_local).cwiseAbs().maxCoeff());
  return r;
}

}  // namespace

double consensus_round(std::vector<ConsensusState>& states, const IslTopology& topo,
                       const StatisticalCsi& csi, const SchedulingMask& mask, const VecD& p,
                       BeamformerSet& bf, OverheadLedger& ledger, const LineSearchOptions& ls) {
  const int n = topo.n_sats;
  std::vector<LocalSolve> solves(n);

  // Local solves against pre-round snapshots, in parallel.
  parallel_for(n, [&](int s) {
    try {
      solves[s] = solve_local(states[s], csi, mask, p(s), ls);
    } catch (const std::exception& e) {
      throw InternalError("consensus round: local solve failed at satellite " +
                          std::to_string(s) + ": " + e.what());
    }
  });

  // Dual ascent against the same pre-round snapshots.
  parallel_for(n, [&](int s) {
    ConsensusState& st = states[s];
    const MatC& g_new = solves[s].g;
    st.self_dual += st.rho_g * (g_new - st.self_snapshot);
    st.self_dual.row(s).setZero();
    for (auto& [j, z] : st.duals) {
      z += st.rho_g * (g_new - st.snapshots.at(j));
      z.row(s).setZero();
    }
  });

  // Barrier: commit local tables and beamformers, then exchange snapshots.
  for (int s = 0; s < n; ++s) {
    states[s].g_local = solves[s].g;
    bf.w[s] = solves[s].w_row;
  }
  std::vector<long long> counts(n);
  const long long per_message = message_scalars(mask);
  for (int s = 0; s < n; ++s) {
    states[s].self_snapshot = states[s].g_local;
    for (int j : topo.neighbors[s]) states[s].snapshots.at(j) = states[j].g_local;
    counts[s] = per_message * topo.degree(s);
  }
  ledger.add_round(counts);

  return pairwise_residual(states, topo);
}

DecentralizedResult run_decentralized(const StatisticalCsi& csi, const SchedulingMask& mask,
                                      const VecD& p, const IslTopology& topo,
                                      const DecentralizedOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  mask.validate();
  if (topo.n_sats != csi.S) throw ConfigError("topology size != satellite count");
  if (!(opts.rho_g > 0.0)) throw ConfigError("rho_g must be positive");

  DecentralizedResult out;
  out.bf = mrt_beamformers(csi, mask, p);
  out.ledger.reset(csi.S);

  std::vector<ConsensusState> states;
  states.reserve(csi.S);
  for (int s = 0; s < csi.S; ++s) {
    ConsensusState st = ConsensusState::init(s, csi.S, csi.U, opts.rho_g, topo.neighbors[s]);
    for (int l : mask.served[s])
      for (int u = 0; u < csi.U; ++u)
        st.g_local(s, gain_col(u, l, csi.U)) = transpose_dot(csi.b_at(s, u), out.bf.w[s][l]);
    st.self_snapshot = st.g_local;
    states.push_back(std::move(st));
  }

  SolveReport& report = out.report;
  {
    const MatC gains0 = compute_beam_gains(csi, mask, out.bf).flat;
    report.sum_rate_trace.push_back(sum_rate(gains0, csi));
  }

  const auto outer_update = [&](int s) {
    states[s].mu = update_mu(states[s].g_local, csi);
    WmmseAux aux{states[s].mu, states[s].nu};
    states[s].nu = update_nu(aux, states[s].g_local, csi);
  };

  double prev_obj = std::numeric_limits<double>::infinity();
  double residual = std::numeric_limits<double>::infinity();
  for (int it = 0; it < opts.max_outer; ++it) {
    parallel_for(csi.S, outer_update);

    if (opts.schedule == DecentralizedOptions::Schedule::kFlattened) {
      residual = consensus_round(states, topo, csi, mask, p, out.bf, out.ledger, opts.line_search);
    } else {
      for (int inner = 0; inner < opts.max_inner; ++inner) {
        residual =
            consensus_round(states, topo, csi, mask, p, out.bf, out.ledger, opts.line_search);
        if (residual < opts.inner_tol) break;
      }
    }

    if (opts.adapt_rho && residual > 0.0) {
      // Residual balancing: grow the penalty while consensus lags the
      // beamformer scale. Applied synchronously, so determinism holds.
      const double scale = std::sqrt(p.maxCoeff());
      if (residual > 1e-2 * scale)
        for (auto& st : states) st.rho_g = std::min(st.rho_g * 1.05, 1e6 * opts.rho_g);
    }

    const double obj =
        wmmse_objective(WmmseAux{states[0].mu, states[0].nu}, states[0].g_local, csi);
    report.objective_trace.push_back(obj);
    report.residual_trace.push_back(residual);
    {
      const MatC gains = compute_beam_gains(csi, mask, out.bf).flat;
      report.sum_rate_trace.push_back(sum_rate(gains, csi));
    }
    report.iterations = it + 1;

    if (it >= 2 && std::abs(prev_obj - obj) <= opts.tol * std::max(1e-12, std::abs(prev_obj))) {
      report.converged = true;
      break;
    }
    prev_obj = obj;
  }

  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

std::vector<OverheadRow> overhead_report(const OverheadLedger& ledger, const IslTopology& topo,
                                         const SchedulingMask& mask) {
  if (ledger.rounds < 1) throw InternalError("overhead_report: no rounds recorded");
  std::vector<OverheadRow> rows;
  for (int s = 0; s < topo.n_sats; ++s) {
    OverheadRow row;
    row.sat = s;
    row.degree = topo.degree(s);
    row.served = static_cast<int>(mask.served[s].size());
    row.formula_per_iter = static_cast<long long>(row.degree) * row.served * mask.num_sats() *
                           mask.num_uts();
    row.counted_per_iter = ledger.cumulative[s] / ledger.rounds;
    row.counted_total = ledger.cumulative[s];
    if (row.counted_per_iter * ledger.rounds != ledger.cumulative[s] ||
        row.formula_per_iter != row.counted_per_iter)
      throw InternalError("overhead_report: formula and counted message volume disagree at satellite " +
                          std::to_string(s));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace leobf
