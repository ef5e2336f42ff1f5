#include "leobf/centralized.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "leobf/baselines.hpp"
#include "leobf/scheduling.hpp"

namespace leobf {

namespace {

// Refresh the gain-table rows owned by satellite s after its block update.
void refresh_rows(MatC& gains, const StatisticalCsi& csi, const SchedulingMask& mask,
                  const BeamformerSet& bf, int s) {
  for (int l : mask.served[s])
    for (int u = 0; u < csi.U; ++u)
      gains(s, gain_col(u, l, csi.U)) = transpose_dot(csi.b_at(s, u), bf.w[s][l]);
}

// Per-satellite block of the coupled quadratic at the current gains. The
// quadratic coefficient is shared by all served users of the block.
ReducedQuadratic satellite_block(const WmmseAux& aux, const StatisticalCsi& csi,
                                 const SchedulingMask& mask, const MatC& gains, int s,
                                 double budget) {
  MatC theta = MatC::Zero(csi.N, csi.N);
  std::vector<double> a(csi.U);
  std::vector<MatD> t(csi.U);
  for (int u = 0; u < csi.U; ++u) {
    a[u] = aux.nu(u) * std::norm(aux.mu(u));
    t[u] = csi.t_matrix(u);
    const VecC bc = csi.b_at(s, u).conjugate();
    theta.noalias() += (a[u] * t[u](s, s)) * (bc * bc.adjoint());
  }

  ReducedQuadratic quad;
  quad.budget = budget;
  quad.shared_spectrum = true;
  for (int l : mask.served[s]) {
    BlockQuadratic blk;
    blk.theta = theta;
    blk.xi = VecC::Zero(csi.N);
    for (int u = 0; u < csi.U; ++u) {
      Complex cross(0.0, 0.0);
      const auto gul = gains.col(gain_col(u, l, csi.U));
      for (int i = 0; i < csi.S; ++i)
        if (i != s) cross += t[u](s, i) * gul(i);
      Complex coeff = -a[u] * cross;
      if (l == u) coeff += aux.nu(u) * std::conj(aux.mu(u)) * csi.alpha_bar(s, u);
      blk.xi += coeff * csi.b_at(s, u).conjugate();
    }
    quad.blocks.push_back(std::move(blk));
  }
  return quad;
}

void bcd_sweeps(const WmmseAux& aux, const StatisticalCsi& csi, const SchedulingMask& mask,
                BeamformerSet& bf, MatC& gains, double tol, int max_sweeps,
                const LineSearchOptions& ls) {
  const auto block_value = [](const ReducedQuadratic& quad, const std::vector<VecC>& ws) {
    double v = 0.0;
    for (std::size_t i = 0; i < quad.blocks.size(); ++i)
      v += (ws[i].adjoint() * quad.blocks[i].theta * ws[i]).value().real() -
           2.0 * quad.blocks[i].xi.dot(ws[i]).real();
    return v;
  };
  double prev = wmmse_objective(aux, gains, csi);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    for (int s = 0; s < csi.S; ++s) {
      if (mask.served[s].empty()) continue;
      ReducedQuadratic quad = satellite_block(aux, csi, mask, gains, s, bf.power_budget(s));
      quad.eigendecompose();
      const BallSolution sol = solve_ball_constrained(quad, ls);
      const auto& served = mask.served[s];
      // The incumbent is feasible, so an exact block minimizer can never be
      // worse; guard against the line-search finishing tolerance by keeping
      // whichever beamformer set scores better on the block quadratic.
      std::vector<VecC> incumbent(served.size());
      for (std::size_t i = 0; i < served.size(); ++i) incumbent[i] = bf.w[s][served[i]];
      if (block_value(quad, sol.w) <= block_value(quad, incumbent))
        for (std::size_t i = 0; i < served.size(); ++i) bf.w[s][served[i]] = sol.w[i];
      refresh_rows(gains, csi, mask, bf, s);
    }
    const double obj = wmmse_objective(aux, gains, csi);
    if (prev - obj <= tol * std::max(1.0, std::abs(prev))) break;
    prev = obj;
  }
}

}  // namespace

BeamformerSet solve_beamformers_centralized(const WmmseAux& aux, const StatisticalCsi& csi,
                                            const SchedulingMask& mask,
                                            const BeamformerSet& w_init, double tol,
                                            int max_sweeps, const LineSearchOptions& ls) {
  BeamformerSet bf = w_init;
  MatC gains = compute_beam_gains(csi, mask, bf).flat;
  bcd_sweeps(aux, csi, mask, bf, gains, tol, max_sweeps, ls);
  return bf;
}

std::pair<BeamformerSet, SolveReport> run_centralized(const StatisticalCsi& csi,
                                                      const SchedulingMask& mask, const VecD& p,
                                                      const CentralizedOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  mask.validate();
  BeamformerSet bf = mrt_beamformers(csi, mask, p);
  MatC gains = compute_beam_gains(csi, mask, bf).flat;

  SolveReport report;
  report.sum_rate_trace.push_back(sum_rate(gains, csi));
  double prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it < opts.max_outer; ++it) {
    WmmseAux aux;
    aux.mu = update_mu(gains, csi);
    aux.nu = update_nu(aux, gains, csi);
    const double obj = wmmse_objective(aux, gains, csi);
    report.objective_trace.push_back(obj);
    if (it > 0 && prev - obj <= opts.tol * std::max(1e-12, std::abs(prev))) {
      report.converged = true;
      break;
    }
    prev = obj;
    bcd_sweeps(aux, csi, mask, bf, gains, opts.bcd_tol, opts.max_sweeps, opts.line_search);
    report.sum_rate_trace.push_back(sum_rate(gains, csi));
    report.iterations = it + 1;
  }
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(bf), std::move(report)};
}

std::pair<BeamformerSet, SolveReport> run_sss(const StatisticalCsi& csi,
                                              const SchedulingMask& mask, const VecD& p,
                                              const CentralizedOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const SchedulingMask reduced = sss_assign(mask, csi);
  BeamformerSet bf = BeamformerSet::zeros(csi.S, csi.U, csi.N, p);

  SolveReport report;
  {
    const MatC gains0 =
        compute_beam_gains(csi, reduced, mrt_beamformers(csi, reduced, p)).flat;
    report.sum_rate_trace.push_back(sum_rate(gains0, csi));
  }
  for (int s = 0; s < csi.S; ++s) {
    const auto& served = reduced.served[s];
    if (served.empty()) continue;
    // Single-satellite view: this satellite's CSI row only.
    StatisticalCsi slice;
    slice.S = 1;
    slice.U = csi.U;
    slice.N = csi.N;
    slice.gamma = csi.gamma.row(s);
    slice.kappa = csi.kappa.row(s);
    slice.alpha_bar = csi.alpha_bar.row(s);
    slice.beta = csi.beta.row(s);
    slice.noise_power = csi.noise_power;
    slice.b.resize(csi.U);
    for (int u = 0; u < csi.U; ++u) slice.b_at(0, u) = csi.b_at(s, u);
    std::vector<std::vector<int>> served_slice{served};
    const SchedulingMask mask_slice =
        SchedulingMask::from_served(csi.U, std::move(served_slice), reduced.u_max);
    VecD p_slice(1);
    p_slice(0) = p(s);
    auto [bf_slice, rep] = run_centralized(slice, mask_slice, p_slice, opts);
    for (int u : served) bf.w[s][u] = bf_slice.w[0][u];
    report.iterations = std::max(report.iterations, rep.iterations);
  }
  const MatC gains = compute_beam_gains(csi, reduced, bf).flat;
  report.sum_rate_trace.push_back(sum_rate(gains, csi));
  report.converged = true;
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(bf), std::move(report)};
}

}  // namespace leobf
