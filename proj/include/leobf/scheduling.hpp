#pragma once

#include <vector>

#include "leobf/channel.hpp"
#include "leobf/rng.hpp"
#include "leobf/types.hpp"

namespace leobf {

struct SchedulingMask {
  MatI delta;                            // S x U, entries 0/1
  std::vector<std::vector<int>> served;  // U_s, ascending UT indices
  int u_max = 0;

  int num_sats() const { return static_cast<int>(delta.rows()); }
  int num_uts() const { return static_cast<int>(delta.cols()); }
  bool is_served(int s, int u) const { return delta(s, u) != 0; }

  /// Satellites serving UT u, ascending.
  std::vector<int> owners(int u) const;

  void validate() const;  // served/delta consistency and the U_max cap

  static SchedulingMask from_served(int n_uts, std::vector<std::vector<int>> served, int u_max);
};

/// Correlation-based scheduling: per satellite, seed with the largest-gamma
/// UT, then greedily add the candidate minimizing the maximum normalized
/// response correlation against the selected set. Ties by ascending index.
SchedulingMask schedule_cs(const StatisticalCsi& csi, int u_max);

/// Random scheduling: uniform u_max-subset per satellite.
SchedulingMask schedule_rs(int n_sats, int n_uts, int u_max, Rng& rng);

/// Single-satellite serving: keep only the strongest link of each multiply
/// scheduled UT (ties by ascending satellite index).
SchedulingMask sss_assign(const SchedulingMask& mask, const StatisticalCsi& csi);

}  // namespace leobf
