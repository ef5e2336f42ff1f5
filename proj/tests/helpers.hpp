#pragma once

#include "leobf/experiment.hpp"
#include "leobf/synthetic.hpp"

namespace leobf::test {

/// Physical scene at a reduced scale (real Walker geometry + FSPL CSI).
inline DropContext scene(int n_sats, int n_uts, int n_h, int n_v, int u_max, std::uint64_t seed,
                         int drop = 0) {
  ExperimentConfig cfg;
  cfg.geometry.serving_count = n_sats;
  cfg.geometry.ut_count = n_uts;
  cfg.channel.array.n_h = n_h;
  cfg.channel.array.n_v = n_v;
  cfg.u_max = u_max;
  cfg.seed = seed;
  return build_drop(cfg, drop);
}

inline DropContext table1_scene(std::uint64_t seed, int drop) {
  ExperimentConfig cfg;
  cfg.seed = seed;
  return build_drop(cfg, drop);
}

}  // namespace leobf::test
