#include "leobf/oracles.hpp"

#include <cmath>

#include <Eigen/LU>

namespace leobf::oracle {

double operator_norm(const MatC& a, int iters) {
  if (a.rows() == 0) return 0.0;
  VecC v = VecC::Ones(a.rows());
  v.normalize();
  double lam = 0.0;
  for (int i = 0; i < iters; ++i) {
    VecC av = a * v;
    lam = av.norm();
    if (lam == 0.0) return 0.0;
    v = av / lam;
  }
  return lam;
}

double ball_objective(const MatC& a, const VecC& xi, const VecC& w) {
  return (w.adjoint() * a * w).value().real() - 2.0 * xi.dot(w).real();
}

VecC projected_gradient_ball(const MatC& a, const VecC& xi, double budget, int steps) {
  const double lip = std::max(operator_norm(a), 1e-12);
  const double step = 1.0 / lip;
  const double radius = std::sqrt(budget);
  VecC w = VecC::Zero(a.rows());
  for (int k = 0; k < steps; ++k) {
    w -= step * (a * w - xi);
    const double n = w.norm();
    if (n > radius) w *= radius / n;
  }
  return w;
}

void stack_blocks(const ReducedQuadratic& quad, MatC& a, VecC& xi) {
  Eigen::Index dim = 0;
  for (const auto& blk : quad.blocks) dim += blk.xi.size();
  a = MatC::Zero(dim, dim);
  xi = VecC::Zero(dim);
  Eigen::Index off = 0;
  for (const auto& blk : quad.blocks) {
    const Eigen::Index n = blk.xi.size();
    a.block(off, off, n, n) = blk.theta;
    xi.segment(off, n) = blk.xi;
    off += n;
  }
}

double h_inverse_form(const ReducedQuadratic& quad, double lambda) {
  MatC a;
  VecC xi;
  stack_blocks(quad, a, xi);
  a.diagonal().array() += lambda;
  const VecC w = Eigen::FullPivLU<MatC>(a).solve(xi);
  return w.squaredNorm() - quad.budget;
}

VecC dense_consensus_solve(const ConsensusState& st, const StatisticalCsi& csi,
                           const SchedulingMask& mask, int u, int l, Complex own,
                           std::vector<int>* support_out) {
  std::vector<int> support;
  for (int i = 0; i < csi.S; ++i)
    if (i != st.sat && mask.is_served(i, l)) support.push_back(i);
  if (support_out) *support_out = support;
  const int m = static_cast<int>(support.size());
  if (m == 0) return VecC();

  const double a_u = st.nu(u) * std::norm(st.mu(u));
  const double ridge = st.rho_g * (st.degree() + 1) / 2.0;
  const MatD t = csi.t_matrix(u);

  MatC q = MatC::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k)
      q(i, k) = a_u * t(support[i], support[k]) + (i == k ? ridge : 0.0);

  const Eigen::Index col = gain_col(u, l, csi.U);
  VecC f = VecC::Zero(m);
  for (int i = 0; i < m; ++i) {
    Complex gbar = st.self_snapshot(support[i], col) - st.self_dual(support[i], col) / st.rho_g;
    for (const auto& [j, snap] : st.snapshots)
      gbar += snap(support[i], col) - st.duals.at(j)(support[i], col) / st.rho_g;
    f(i) = 0.5 * st.rho_g * gbar - a_u * own * t(support[i], st.sat);
    if (l == u) f(i) += st.nu(u) * std::conj(st.mu(u)) * csi.alpha_bar(support[i], u);
  }
  return Eigen::FullPivLU<MatC>(q).solve(f);
}

JointQuadratic build_joint_quadratic(const WmmseAux& aux, const StatisticalCsi& csi,
                                     const SchedulingMask& mask) {
  JointQuadratic jq;
  jq.sat_offset.resize(csi.S);
  jq.sat_dim.resize(csi.S);
  int dim = 0;
  for (int s = 0; s < csi.S; ++s) {
    jq.sat_offset[s] = dim;
    jq.sat_dim[s] = static_cast<int>(mask.served[s].size()) * csi.N;
    dim += jq.sat_dim[s];
  }
  jq.a = MatC::Zero(dim, dim);
  jq.xi = VecC::Zero(dim);

  const auto block_of = [&](int s, int l) {
    const auto& served = mask.served[s];
    for (std::size_t i = 0; i < served.size(); ++i)
      if (served[i] == l) return jq.sat_offset[s] + static_cast<int>(i) * csi.N;
    return -1;
  };

  for (int u = 0; u < csi.U; ++u) {
    const double a_u = aux.nu(u) * std::norm(aux.mu(u));
    const MatD t = csi.t_matrix(u);
    for (int l = 0; l < csi.U; ++l) {
      for (int s = 0; s < csi.S; ++s) {
        const int row = block_of(s, l);
        if (row < 0) continue;
        for (int i = 0; i < csi.S; ++i) {
          const int colb = block_of(i, l);
          if (colb < 0) continue;
          jq.a.block(row, colb, csi.N, csi.N) +=
              (a_u * t(s, i)) * (csi.b_at(s, u).conjugate() * csi.b_at(i, u).transpose());
        }
      }
    }
    // linear term from the useful-signal pair (u, u)
    for (int s = 0; s < csi.S; ++s) {
      const int row = block_of(s, u);
      if (row < 0) continue;
      jq.xi.segment(row, csi.N) +=
          aux.nu(u) * std::conj(aux.mu(u)) * csi.alpha_bar(s, u) * csi.b_at(s, u).conjugate();
    }
  }
  return jq;
}

double joint_objective(const JointQuadratic& jq, const VecC& w) {
  return (w.adjoint() * jq.a * w).value().real() - 2.0 * jq.xi.dot(w).real();
}

VecC projected_gradient_joint(const JointQuadratic& jq, const VecD& budgets, int steps) {
  const double lip = std::max(operator_norm(jq.a), 1e-12);
  const double step = 1.0 / lip;
  VecC w = VecC::Zero(jq.a.rows());
  const int n_sats = static_cast<int>(jq.sat_offset.size());
  for (int k = 0; k < steps; ++k) {
    w -= step * (jq.a * w - jq.xi);
    for (int s = 0; s < n_sats; ++s) {
      if (jq.sat_dim[s] == 0) continue;
      auto seg = w.segment(jq.sat_offset[s], jq.sat_dim[s]);
      const double n = seg.norm();
      const double radius = std::sqrt(budgets(s));
      if (n > radius) seg *= radius / n;
    }
  }
  return w;
}

VecC fd_gradient(const std::function<double(const VecC&)>& f, const VecC& w, double step) {
  // Wirtinger gradient 2*df/dw* assembled from central differences on the
  // real and imaginary parts; matches A w - xi scaled by 2 for quadratics.
  VecC g(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    VecC wp = w, wm = w;
    wp(i) += step;
    wm(i) -= step;
    const double dre = (f(wp) - f(wm)) / (2.0 * step);
    wp = w;
    wm = w;
    wp(i) += Complex(0.0, step);
    wm(i) -= Complex(0.0, step);
    const double dim = (f(wp) - f(wm)) / (2.0 * step);
    g(i) = Complex(dre, dim);
  }
  return g;
}

}  // namespace leobf::oracle
