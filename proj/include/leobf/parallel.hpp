#pragma once

#include <functional>

namespace leobf {

/// Worker count: LEOCOOPBF_THREADS if set (>=1), else hardware concurrency.
int worker_count();

/// Runs fn(i) for i in [0, n). Work is partitioned statically; each index is
/// processed exactly once and results must be written to caller-owned slots,
/// so the outcome is independent of the worker count.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace leobf
