#include "leobf/scheduling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace leobf {

std::vector<int> SchedulingMask::owners(int u) const {
  std::vector<int> out;
  for (int s = 0; s < num_sats(); ++s)
    if (delta(s, u) != 0) out.push_back(s);
  return out;
}

void SchedulingMask::validate() const {
  if (static_cast<int>(served.size()) != num_sats())
    throw InternalError("mask: served list count != S");
  for (int s = 0; s < num_sats(); ++s) {
    if (static_cast<int>(served[s].size()) > u_max) throw InternalError("mask: |U_s| exceeds U_max");
    int ones = 0;
    for (int u = 0; u < num_uts(); ++u) ones += delta(s, u) != 0;
    if (ones != static_cast<int>(served[s].size()))
      throw InternalError("mask: delta inconsistent with served sets");
    for (int u : served[s])
      if (u < 0 || u >= num_uts() || delta(s, u) == 0)
        throw InternalError("mask: served entry not flagged in delta");
  }
}

SchedulingMask SchedulingMask::from_served(int n_uts, std::vector<std::vector<int>> served, int u_max) {
  SchedulingMask mask;
  const int n_sats = static_cast<int>(served.size());
  mask.delta = MatI::Zero(n_sats, n_uts);
  for (int s = 0; s < n_sats; ++s) {
    std::sort(served[s].begin(), served[s].end());
    for (int u : served[s]) mask.delta(s, u) = 1;
  }
  mask.served = std::move(served);
  mask.u_max = u_max;
  mask.validate();
  return mask;
}

namespace {

double normalized_correlation(const VecC& a, const VecC& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::abs(a.dot(b)) / (na * nb);  // |a^H b| / (||a|| ||b||)
}

}  // namespace

SchedulingMask schedule_cs(const StatisticalCsi& csi, int u_max) {
  if (u_max < 1) throw ConfigError("scheduler.u_max must be >= 1");
  std::vector<std::vector<int>> served(csi.S);
  const int take = std::min(u_max, csi.U);
  for (int s = 0; s < csi.S; ++s) {
    std::vector<bool> in_set(csi.U, false);
    // Seed: largest mean power (closest UT under free-space loss).
    int seed = 0;
    for (int u = 1; u < csi.U; ++u)
      if (csi.gamma(s, u) > csi.gamma(s, seed)) seed = u;
    served[s].push_back(seed);
    in_set[seed] = true;
    while (static_cast<int>(served[s].size()) < take) {
      int best = -1;
      double best_score = std::numeric_limits<double>::infinity();
      for (int c = 0; c < csi.U; ++c) {
        if (in_set[c]) continue;
        double score = 0.0;
        for (int j : served[s])
          score = std::max(score, normalized_correlation(csi.b_at(s, c), csi.b_at(s, j)));
        if (score < best_score) {
          best_score = score;
          best = c;
        }
      }
      served[s].push_back(best);
      in_set[best] = true;
    }
  }
  return SchedulingMask::from_served(csi.U, std::move(served), u_max);
}

SchedulingMask schedule_rs(int n_sats, int n_uts, int u_max, Rng& rng) {
  if (u_max > n_uts) throw ConfigError("scheduler.u_max exceeds the UT count");
  if (u_max < 1) throw ConfigError("scheduler.u_max must be >= 1");
  std::vector<std::vector<int>> served(n_sats);
  for (int s = 0; s < n_sats; ++s) {
    std::vector<int> pool(n_uts);
    for (int u = 0; u < n_uts; ++u) pool[u] = u;
    for (int k = 0; k < u_max; ++k) {  // partial Fisher-Yates
      const int j = k + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n_uts - k)));
      std::swap(pool[k], pool[j]);
    }
    served[s].assign(pool.begin(), pool.begin() + u_max);
  }
  return SchedulingMask::from_served(n_uts, std::move(served), u_max);
}

SchedulingMask sss_assign(const SchedulingMask& mask, const StatisticalCsi& csi) {
  mask.validate();
  std::vector<std::vector<int>> served(mask.num_sats());
  for (int u = 0; u < mask.num_uts(); ++u) {
    const auto owners = mask.owners(u);
    if (owners.empty()) continue;
    int keep = owners.front();
    for (int s : owners)
      if (csi.gamma(s, u) > csi.gamma(keep, u)) keep = s;  // strict: ties keep smallest index
    served[keep].push_back(u);
  }
  return SchedulingMask::from_served(mask.num_uts(), std::move(served), mask.u_max);
}

}  // namespace leobf
