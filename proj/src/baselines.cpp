#include "leobf/baselines.hpp"

#include <cmath>
#include <iostream>

#include <Eigen/QR>

namespace leobf {

BeamformerSet mrt_beamformers(const StatisticalCsi& csi, const SchedulingMask& mask, const VecD& p) {
  mask.validate();
  BeamformerSet bf = BeamformerSet::zeros(csi.S, csi.U, csi.N, p);
  for (int s = 0; s < csi.S; ++s) {
    const auto& served = mask.served[s];
    if (served.empty()) continue;
    const double per_user = p(s) / static_cast<double>(served.size());
    for (int u : served) {
      const VecC dir = csi.b_at(s, u).conjugate();
      bf.w[s][u] = dir * (std::sqrt(per_user) / dir.norm());
    }
  }
  return bf;
}

BeamformerSet zf_beamformers(const StatisticalCsi& csi, const SchedulingMask& mask, const VecD& p) {
  mask.validate();
  BeamformerSet bf = BeamformerSet::zeros(csi.S, csi.U, csi.N, p);
  for (int s = 0; s < csi.S; ++s) {
    const auto& served = mask.served[s];
    if (served.empty()) continue;
    const double per_user = p(s) / static_cast<double>(served.size());
    for (int u : served) {
      VecC dir = csi.b_at(s, u).conjugate();
      const int others = static_cast<int>(served.size()) - 1;
      if (others > 0) {
        // Null b^T_j w = 0, i.e. orthogonality to conj(b_j) in the Hermitian
        // inner product.
        MatC c(csi.N, others);
        int k = 0;
        for (int j : served)
          if (j != u) c.col(k++) = csi.b_at(s, j).conjugate();
        const Eigen::CompleteOrthogonalDecomposition<MatC> cod(c);
        dir -= c * cod.solve(dir);
      }
      const double norm = dir.norm();
      if (norm <= 1e-12 * csi.b_at(s, u).norm()) {
        std::cerr << "zf_beamformers: degenerate beam for satellite " << s << ", UT " << u
                  << " (empty null-space projection); assigning zero power\n";
        bf.w[s][u].setZero();
        continue;
      }
      bf.w[s][u] = dir * (std::sqrt(per_user) / norm);
    }
  }
  return bf;
}

}  // namespace leobf
