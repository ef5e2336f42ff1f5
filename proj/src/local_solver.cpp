#include "leobf/local_solver.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <Eigen/QR>

namespace leobf {

namespace {

// Scheduler support of pair column l as seen from satellite `sat`:
// the consensus entries live only on {i != sat : l in U_i}.
std::vector<int> support_without(const SchedulingMask& mask, int l, int sat) {
  std::vector<int> m;
  for (int i = 0; i < mask.num_sats(); ++i)
    if (i != sat && mask.is_served(i, l)) m.push_back(i);
  return m;
}

MatD submatrix(const MatD& t, const std::vector<int>& rows, const std::vector<int>& cols) {
  MatD out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = t(rows[i], cols[j]);
  return out;
}

VecD subcolumn(const MatD& t, const std::vector<int>& rows, int col) {
  VecD out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out(i) = t(rows[i], col);
  return out;
}

VecC gather(const MatC& table, const std::vector<int>& rows, Eigen::Index col) {
  VecC out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out(i) = table(rows[i], col);
  return out;
}

VecC solve_spd_complex(const Eigen::LLT<MatD>& llt, const VecC& rhs) {
  VecC out(rhs.size());
  out.real() = llt.solve(rhs.real().eval());
  out.imag() = llt.solve(rhs.imag().eval());
  return out;
}

Complex own_gain(const StatisticalCsi& csi, const SchedulingMask& mask, int sat, int u, int l,
                 const std::vector<VecC>& w_row) {
  if (!mask.is_served(sat, l)) return Complex(0.0, 0.0);
  return transpose_dot(csi.b_at(sat, u), w_row[l]);
}

MatC recover_table(const Elimination& ops, const ConsensusState& state, const StatisticalCsi& csi,
                   const SchedulingMask& mask, const std::vector<VecC>& w_row) {
  MatC g = MatC::Zero(csi.S, static_cast<Eigen::Index>(csi.U) * csi.U);
  for (int u = 0; u < csi.U; ++u)
    for (int l = 0; l < csi.U; ++l) {
      const Eigen::Index col = gain_col(u, l, csi.U);
      const Complex t = own_gain(csi, mask, state.sat, u, l, w_row);
      g.col(col) = ops.gamma_dir.col(col) * t + ops.zeta.col(col);
      g(state.sat, col) = t;
    }
  return g;
}

}  // namespace

Elimination eliminate_operators(const ConsensusState& state, const StatisticalCsi& csi,
                                const SchedulingMask& mask) {
  const int S = csi.S;
  const int U = csi.U;
  const int sat = state.sat;
  if (state.S != S || state.U != U) throw InternalError("eliminate_operators: state/csi shape mismatch");
  const double rho = state.rho_g;
  const int deg = state.degree();
  const double ridge = rho * (deg + 1) / 2.0;  // keeps every Q positive definite

  Elimination ops;
  const Eigen::Index cols = static_cast<Eigen::Index>(U) * U;
  ops.gamma_dir = MatC::Zero(S, cols);
  ops.zeta = MatC::Zero(S, cols);
  ops.k_theta = MatD::Zero(U, U);
  ops.xi_coeff = MatC::Zero(U, U);

  ops.gbar = state.self_snapshot - state.self_dual / rho;
  for (const auto& [j, snap] : state.snapshots) ops.gbar += snap - state.duals.at(j) / rho;
  ops.gbar.row(sat).setZero();

  for (int l = 0; l < U; ++l) {
    const std::vector<int> m_set = support_without(mask, l, sat);
    const int m = static_cast<int>(m_set.size());
    for (int u = 0; u < U; ++u) {
      const Eigen::Index col = gain_col(u, l, U);
      const double a = state.nu(u) * std::norm(state.mu(u));
      const Complex c_scalar = state.nu(u) * std::conj(state.mu(u));
      const MatD t_u = csi.t_matrix(u);

      VecD gamma_m;        // real direction, -a * Q^{-1} T[M, sat]
      VecC zeta_m;         // Q^{-1} (c 1[l=u] + rho/2 * gbar)
      VecC gbar_m;
      if (m > 0) {
        MatD q = a * submatrix(t_u, m_set, m_set);
        q.diagonal().array() += ridge;
        const Eigen::LLT<MatD> llt(q);
        if (llt.info() != Eigen::Success) throw InternalError("eliminate_operators: singular Q");
        const VecD t_ms = subcolumn(t_u, m_set, sat);
        gamma_m = llt.solve((-a * t_ms).eval());
        gbar_m = gather(ops.gbar, m_set, col);
        VecC rhs = (0.5 * rho) * gbar_m;
        if (l == u) rhs += c_scalar * subcolumn(csi.alpha_bar, m_set, u);
        zeta_m = solve_spd_complex(llt, rhs);
        for (int i = 0; i < m; ++i) {
          ops.gamma_dir(m_set[i], col) = gamma_m(i);
          ops.zeta(m_set[i], col) = zeta_m(i);
        }
      } else {
        gamma_m.resize(0);
        zeta_m.resize(0);
        gbar_m.resize(0);
      }

      // Reduced-quadratic coefficients; omega = e_sat + embedded gamma (real).
      // k = a * omega^T T omega + ridge * ||gamma||^2
      double om_t_om = t_u(sat, sat);
      if (m > 0) {
        const VecD t_ms = subcolumn(t_u, m_set, sat);
        om_t_om += 2.0 * gamma_m.dot(t_ms) + gamma_m.dot(submatrix(t_u, m_set, m_set) * gamma_m);
      }
      ops.k_theta(u, l) = a * om_t_om + ridge * (m > 0 ? gamma_m.squaredNorm() : 0.0);

      // xi scalar: omega^H c 1[l=u] - a omega^H T eta + rho/2 gamma^H gbar - ridge gamma^H zeta
      Complex xi(0.0, 0.0);
      if (l == u) {
        double om_alpha = csi.alpha_bar(sat, u);
        if (m > 0) om_alpha += gamma_m.dot(subcolumn(csi.alpha_bar, m_set, u));
        xi += c_scalar * om_alpha;
      }
      if (m > 0) {
        // omega^T T eta with eta supported on M: (T omega)_M dot zeta
        VecD t_omega(m);
        for (int i = 0; i < m; ++i) {
          double acc = t_u(m_set[i], sat);
          for (int k = 0; k < m; ++k) acc += t_u(m_set[i], m_set[k]) * gamma_m(k);
          t_omega(i) = acc;
        }
        for (int i = 0; i < m; ++i) xi -= a * t_omega(i) * zeta_m(i);
        for (int i = 0; i < m; ++i)
          xi += gamma_m(i) * (0.5 * rho * gbar_m(i) - ridge * zeta_m(i));
      }
      ops.xi_coeff(u, l) = xi;
    }
  }
  return ops;
}

MatC eliminate_g(const ConsensusState& state, const StatisticalCsi& csi,
                 const SchedulingMask& mask, const std::vector<VecC>& w_row) {
  const Elimination ops = eliminate_operators(state, csi, mask);
  return recover_table(ops, state, csi, mask, w_row);
}

namespace {

ReducedQuadratic assemble_from_ops(const Elimination& ops, const ConsensusState& state,
                                   const StatisticalCsi& csi, const SchedulingMask& mask,
                                   double power_budget) {
  ReducedQuadratic quad;
  quad.budget = power_budget;
  for (int l : mask.served[state.sat]) {
    BlockQuadratic blk;
    blk.theta = MatC::Zero(csi.N, csi.N);
    blk.xi = VecC::Zero(csi.N);
    for (int u = 0; u < csi.U; ++u) {
      const VecC bc = csi.b_at(state.sat, u).conjugate();
      blk.theta.noalias() += ops.k_theta(u, l) * (bc * bc.adjoint());
      blk.xi += ops.xi_coeff(u, l) * bc;
    }
    quad.blocks.push_back(std::move(blk));
  }
  return quad;
}

}  // namespace

ReducedQuadratic assemble_reduced(const ConsensusState& state, const StatisticalCsi& csi,
                                  const SchedulingMask& mask, double power_budget) {
  const Elimination ops = eliminate_operators(state, csi, mask);
  return assemble_from_ops(ops, state, csi, mask, power_budget);
}

double local_objective(const ConsensusState& state, const StatisticalCsi& csi, const MatC& gains) {
  WmmseAux aux{state.mu, state.nu};
  double acc = 0.0;
  for (int u = 0; u < csi.U; ++u) acc += state.nu(u) * upsilon_u(aux, gains, csi, u);

  const auto penalty = [&](const MatC& snap, const MatC& dual) {
    double p = 0.0;
    for (Eigen::Index col = 0; col < gains.cols(); ++col)
      for (int i = 0; i < csi.S; ++i) {
        if (i == state.sat) continue;
        const Complex d = gains(i, col) - snap(i, col);
        p += (std::conj(dual(i, col)) * d).real() + 0.5 * state.rho_g * std::norm(d);
      }
    return p;
  };
  acc += penalty(state.self_snapshot, state.self_dual);
  for (const auto& [j, snap] : state.snapshots) acc += penalty(snap, state.duals.at(j));
  return acc;
}

LocalSolve solve_local(const ConsensusState& state, const StatisticalCsi& csi,
                       const SchedulingMask& mask, double power_budget,
                       const LineSearchOptions& opts) {
  const Elimination ops = eliminate_operators(state, csi, mask);
  ReducedQuadratic quad = assemble_from_ops(ops, state, csi, mask, power_budget);
  quad.eigendecompose();
  const BallSolution sol = solve_ball_constrained(quad, opts);

  LocalSolve out;
  out.lambda = sol.lambda;
  out.w_row.assign(csi.U, VecC::Zero(csi.N));
  const auto& served = mask.served[state.sat];
  for (std::size_t i = 0; i < served.size(); ++i) out.w_row[served[i]] = sol.w[i];
  out.g = recover_table(ops, state, csi, mask, out.w_row);
  return out;
}

GenericOracleResult generic_local_oracle(const ConsensusState& state, const StatisticalCsi& csi,
                                         const SchedulingMask& mask, double power_budget,
                                         double tol, int max_iters) {
  const int S = csi.S;
  const int U = csi.U;
  const int sat = state.sat;
  const double rho = state.rho_g;
  const int deg = state.degree();
  const double ridge = rho * (deg + 1) / 2.0;
  const auto& served = mask.served[sat];
  const int n_served = static_cast<int>(served.size());

  MatC gbar = state.self_snapshot - state.self_dual / rho;
  for (const auto& [j, snap] : state.snapshots) gbar += snap - state.duals.at(j) / rho;
  gbar.row(sat).setZero();

  std::vector<VecC> w_row(U, VecC::Zero(csi.N));
  MatC g = MatC::Zero(S, static_cast<Eigen::Index>(U) * U);

  GenericOracleResult out;
  double prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iters; ++it) {
    // Exact consensus-variable minimization: dense solve per (u, l) pair.
    for (int l = 0; l < U; ++l) {
      const std::vector<int> m_set = support_without(mask, l, sat);
      const int m = static_cast<int>(m_set.size());
      for (int u = 0; u < U; ++u) {
        const Eigen::Index col = gain_col(u, l, U);
        const Complex t = own_gain(csi, mask, sat, u, l, w_row);
        g(sat, col) = t;
        if (m == 0) continue;
        const double a = state.nu(u) * std::norm(state.mu(u));
        const MatD t_u = csi.t_matrix(u);
        MatD q = a * submatrix(t_u, m_set, m_set);
        q.diagonal().array() += ridge;
        VecC f = (0.5 * rho) * gather(gbar, m_set, col);
        f -= (a * t) * subcolumn(t_u, m_set, sat);
        if (l == u)
          f += state.nu(u) * std::conj(state.mu(u)) * subcolumn(csi.alpha_bar, m_set, u);
        const Eigen::FullPivLU<MatD> lu(q);
        VecC sol(m);
        sol.real() = lu.solve(f.real().eval());
        sol.imag() = lu.solve(f.imag().eval());
        for (int i = 0; i < m; ++i) g(m_set[i], col) = sol(i);
      }
    }

    // Exact beamformer minimization at fixed consensus variables: one
    // full-size ball-constrained solve on the stacked system.
    if (n_served > 0) {
      const Eigen::Index dim = static_cast<Eigen::Index>(n_served) * csi.N;
      MatC big = MatC::Zero(dim, dim);
      VecC xi = VecC::Zero(dim);
      for (int bi = 0; bi < n_served; ++bi) {
        const int l = served[bi];
        MatC theta = MatC::Zero(csi.N, csi.N);
        VecC xi_l = VecC::Zero(csi.N);
        for (int u = 0; u < U; ++u) {
          const double a = state.nu(u) * std::norm(state.mu(u));
          const MatD t_u = csi.t_matrix(u);
          const VecC bc = csi.b_at(sat, u).conjugate();
          theta.noalias() += (a * t_u(sat, sat)) * (bc * bc.adjoint());
          Complex cross(0.0, 0.0);
          for (int i = 0; i < S; ++i)
            if (i != sat) cross += t_u(sat, i) * g(i, gain_col(u, l, U));
          Complex coeff = -a * cross;
          if (l == u) coeff += state.nu(u) * std::conj(state.mu(u)) * csi.alpha_bar(sat, u);
          xi_l += coeff * bc;
        }
        big.block(bi * csi.N, bi * csi.N, csi.N, csi.N) = theta;
        xi.segment(bi * csi.N, csi.N) = xi_l;
      }

      VecC w_stack;
      const Eigen::CompleteOrthogonalDecomposition<MatC> cod(big);
      const VecC w0 = cod.solve(xi);
      const bool consistent = (big * w0 - xi).norm() <= 1e-10 * std::max(1.0, xi.norm());
      if (consistent && w0.squaredNorm() <= power_budget) {
        w_stack = w0;
      } else {
        double hi = xi.norm() / std::sqrt(power_budget) * (1.0 + 1e-9) + 1e-300;
        double lo = 0.0;
        const auto solve_at = [&](double lam) {
          MatC shifted = big;
          shifted.diagonal().array() += lam;
          return VecC(shifted.ldlt().solve(xi));
        };
        VecC w_hi = solve_at(hi);
        for (int bit = 0; bit < 300; ++bit) {
          const double mid = 0.5 * (lo + hi);
          const VecC w_mid = solve_at(mid);
          if (w_mid.squaredNorm() > power_budget)
            lo = mid;
          else {
            hi = mid;
            w_hi = w_mid;
          }
          if (std::abs(w_hi.squaredNorm() - power_budget) < 1e-12 * power_budget) break;
        }
        w_stack = w_hi;
      }
      for (int bi = 0; bi < n_served; ++bi) w_row[served[bi]] = w_stack.segment(bi * csi.N, csi.N);
      for (int l : served)
        for (int u = 0; u < U; ++u)
          g(sat, gain_col(u, l, U)) = transpose_dot(csi.b_at(sat, u), w_row[l]);
    }

    const double obj = local_objective(state, csi, g);
    out.iterations = it + 1;
    out.objective_trace.push_back(obj);
    if (std::abs(prev - obj) <= tol * std::max(1.0, std::abs(obj))) {
      prev = obj;
      break;
    }
    prev = obj;
  }
  out.w_row = std::move(w_row);
  out.g = std::move(g);
  out.objective = prev;
  return out;
}

}  // namespace leobf
