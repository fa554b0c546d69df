#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "ipiag/types.hpp"

namespace ipiag {

/// One block-gradient delivery: `worker` refreshes its stored G_w with the
/// gradient evaluated at iterate x_{source_iter}.
struct Refresh {
  int worker = 0;
  Index source_iter = 0;

  friend bool operator==(const Refresh&, const Refresh&) = default;
};

/// Deterministic record of the master/worker exchange: which workers return
/// at each iteration k and at which past iterate their gradients were taken.
///
/// Staleness of worker w at iteration k is k - (source of the G_w in the
/// master's table after the refreshes of iteration k). Before iteration 0
/// every block holds a gradient taken at x_0.
class DelaySchedule {
 public:
  DelaySchedule(int num_workers, int declared_tau);

  /// Appends iteration k = num_iterations(). Rejects unknown or repeated
  /// workers and reads from the future (source > k) or before x_0.
  void add_iteration(std::span<const Refresh> refreshes);

  int num_workers() const { return num_workers_; }
  int declared_tau() const { return declared_tau_; }
  Index num_iterations() const { return static_cast<Index>(offsets_.size()) - 1; }
  std::span<const Refresh> refreshes(Index k) const;

  friend bool operator==(const DelaySchedule&, const DelaySchedule&) = default;

 private:
  int num_workers_;
  int declared_tau_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Refresh> refreshes_;
};

/// Every worker returns at every iteration with a fresh gradient; tau = 0.
DelaySchedule schedule_synchronous(int num_workers, Index num_iterations);

/// Exactly one worker returns per iteration, evaluated at the current iterate.
/// The worker is drawn uniformly with SplitMix64(seed) unless the staleness
/// bound would otherwise become unreachable; then the worker with the
/// earliest deadline is forced. Requires tau >= num_workers - 1 (with a
/// single return per iteration some block is always num_workers - 1 stale).
DelaySchedule schedule_uniform_single(int num_workers, int tau, Index num_iterations,
                                      std::uint64_t seed);

/// Per-worker staleness after the refreshes of iteration k, for all k.
/// Row-major, num_iterations x num_workers.
std::vector<int> staleness_profile(const DelaySchedule& schedule);

/// Max staleness over all iterations and workers, including blocks that
/// aged between refreshes. Throws ScheduleInvariantError above declared_tau.
int max_observed_staleness(const DelaySchedule& schedule);

/// JSON lines, one record per iteration: {"k":..,"refreshed":[..],"source_iter":[..]}.
void write_schedule_jsonl(std::ostream& out, const DelaySchedule& schedule);
DelaySchedule read_schedule_jsonl(std::istream& in, int num_workers, int declared_tau);

}  // namespace ipiag
