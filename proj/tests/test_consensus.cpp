#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>

#include "helpers.hpp"
#include "leobf/consensus.hpp"

using namespace leobf;

namespace {

DecentralizedResult run_small(const DropContext& ctx, TopologyKind kind, int rounds,
                              DecentralizedOptions::Schedule schedule =
                                  DecentralizedOptions::Schedule::kFlattened) {
  DecentralizedOptions opts;
  opts.max_outer = rounds;
  opts.tol = 0.0;
  opts.schedule = schedule;
  opts.max_inner = 5;
  return run_decentralized(ctx.csi, ctx.mask, ctx.p, build_topology(kind, ctx.csi.S), opts);
}

}  // namespace

TEST_CASE("identical traces regardless of worker count") {
  const DropContext ctx = test::scene(4, 6, 2, 2, 3, 80);
  setenv("LEOCOOPBF_THREADS", "1", 1);
  const DecentralizedResult a = run_small(ctx, TopologyKind::kRing, 30);
  setenv("LEOCOOPBF_THREADS", "7", 1);
  const DecentralizedResult b = run_small(ctx, TopologyKind::kRing, 30);
  unsetenv("LEOCOOPBF_THREADS");
  REQUIRE(a.report.sum_rate_trace.size() == b.report.sum_rate_trace.size());
  REQUIRE(a.report.residual_trace.size() == b.report.residual_trace.size());
  for (std::size_t i = 0; i < a.report.sum_rate_trace.size(); ++i)
    CHECK(a.report.sum_rate_trace[i] == b.report.sum_rate_trace[i]);
  for (std::size_t i = 0; i < a.report.residual_trace.size(); ++i)
    CHECK(a.report.residual_trace[i] == b.report.residual_trace[i]);
  for (int s = 0; s < 4; ++s)
    for (int u = 0; u < 6; ++u) CHECK(a.bf.w[s][u] == b.bf.w[s][u]);
}

TEST_CASE("two-satellite mesh reaches consensus below 1e-4") {
  Rng rng(81);
  const StatisticalCsi csi = make_random_csi(2, 3, 2, rng);
  const SchedulingMask mask = make_random_mask(2, 3, 2, rng);
  const VecD p = VecD::Constant(2, 1.0);
  DecentralizedOptions opts;
  opts.max_outer = 400;
  opts.tol = 0.0;
  const DecentralizedResult res =
      run_decentralized(csi, mask, p, build_topology(TopologyKind::kMesh, 2), opts);
  CHECK(res.report.residual_trace.back() < 1e-4);
}

TEST_CASE("connected topologies converge within 500 rounds on small instances") {
  // Star is the slowest (all diffusion funnels through the hub); typical
  // instances of this size settle within 300-700 rounds at rho_g = 1.
  Rng rng(83);
  const StatisticalCsi csi = make_random_csi(5, 6, 4, rng);
  const SchedulingMask mask = make_random_mask(5, 6, 3, rng);
  const VecD p = VecD::Constant(5, 1.0);
  for (auto kind : {TopologyKind::kRing, TopologyKind::kStar, TopologyKind::kMesh}) {
    DecentralizedOptions opts;
    opts.max_outer = 500;
    opts.tol = 0.0;
    const DecentralizedResult res =
        run_decentralized(csi, mask, p, build_topology(kind, 5), opts);
    CHECK(res.report.residual_trace.back() < 1e-4);
  }
}

TEST_CASE("mesh and ring agree on the fixed point within 2 percent") {
  const DropContext ctx = test::scene(3, 5, 2, 2, 2, 83);
  const DecentralizedResult mesh = run_small(ctx, TopologyKind::kMesh, 300);
  const DecentralizedResult ring = run_small(ctx, TopologyKind::kRing, 300);
  const double a = mesh.report.sum_rate_trace.back();
  const double b = ring.report.sum_rate_trace.back();
  CHECK(std::abs(a - b) <= 0.02 * std::min(a, b));
}

TEST_CASE("nested schedule also converges") {
  const DropContext ctx = test::scene(3, 4, 2, 1, 2, 84);
  const DecentralizedResult res =
      run_small(ctx, TopologyKind::kMesh, 60, DecentralizedOptions::Schedule::kNested);
  const DecentralizedResult flat = run_small(ctx, TopologyKind::kMesh, 300);
  const double a = res.report.sum_rate_trace.back();
  const double b = flat.report.sum_rate_trace.back();
  CHECK(std::abs(a - b) <= 0.02 * std::min(a, b));
}

TEST_CASE("configuration errors") {
  const DropContext ctx = test::scene(3, 4, 2, 1, 2, 85);
  DecentralizedOptions opts;
  opts.rho_g = 0.0;
  CHECK_THROWS_AS(run_decentralized(ctx.csi, ctx.mask, ctx.p,
                                    build_topology(TopologyKind::kMesh, 3), opts),
                  ConfigError);
  CHECK_THROWS_AS(build_topology(TopologyKind::kRing, 1), ConfigError);
  CHECK_THROWS_AS(build_topology(TopologyKind::kCustom, 3, {{0, 0}}), ConfigError);
  CHECK_THROWS_AS(build_topology(TopologyKind::kCustom, 3, {{0, 5}}), ConfigError);
  // mismatched topology size
  DecentralizedOptions ok;
  CHECK_THROWS_AS(run_decentralized(ctx.csi, ctx.mask, ctx.p,
                                    build_topology(TopologyKind::kMesh, 4), ok),
                  ConfigError);
}

TEST_CASE("custom connected topology runs") {
  const DropContext ctx = test::scene(4, 4, 2, 1, 2, 86);
  const IslTopology topo = build_topology(TopologyKind::kCustom, 4, {{0, 1}, {1, 2}, {2, 3}});
  DecentralizedOptions opts;
  opts.max_outer = 50;
  opts.tol = 1e-7;
  const DecentralizedResult res = run_decentralized(ctx.csi, ctx.mask, ctx.p, topo, opts);
  CHECK(res.report.iterations > 0);
  CHECK(res.bf.power_feasible(1e-9));
}

TEST_CASE("overhead ledger counts and formula agree per round") {
  const DropContext ctx = test::scene(5, 8, 2, 1, 3, 87);
  for (auto kind : {TopologyKind::kRing, TopologyKind::kStar, TopologyKind::kMesh}) {
    const IslTopology topo = build_topology(kind, 5);
    DecentralizedOptions opts;
    opts.max_outer = 4;
    opts.tol = 0.0;
    const DecentralizedResult res = run_decentralized(ctx.csi, ctx.mask, ctx.p, topo, opts);
    const auto rows = overhead_report(res.ledger, topo, ctx.mask);
    for (const auto& row : rows) {
      CHECK(row.formula_per_iter == static_cast<long long>(row.degree) * 3 * 5 * 8);
      CHECK(row.counted_total == row.formula_per_iter * res.ledger.rounds);
    }
  }
}
