#include "ipiag/async_sim.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>

#include <json.hpp>

#include "ipiag/random.hpp"

namespace ipiag {

DelaySchedule::DelaySchedule(int num_workers, int declared_tau)
    : num_workers_(num_workers), declared_tau_(declared_tau) {
  require(num_workers >= 1, "schedule: num_workers must be >= 1");
  require(declared_tau >= 0, "schedule: tau must be >= 0");
}

void DelaySchedule::add_iteration(std::span<const Refresh> refreshes) {
  const Index k = num_iterations();
  std::vector<bool> seen(static_cast<std::size_t>(num_workers_), false);
  for (const Refresh& r : refreshes) {
    require(r.worker >= 0 && r.worker < num_workers_,
            "schedule: worker id out of range at k=" + std::to_string(k));
    require(!seen[static_cast<std::size_t>(r.worker)],
            "schedule: worker refreshed twice at k=" + std::to_string(k));
    seen[static_cast<std::size_t>(r.worker)] = true;
    if (r.source_iter > k || r.source_iter < 0) {
      throw ScheduleInvariantError("schedule: source iterate " + std::to_string(r.source_iter) +
                                   " is not available at k=" + std::to_string(k));
    }
  }
  refreshes_.insert(refreshes_.end(), refreshes.begin(), refreshes.end());
  offsets_.push_back(refreshes_.size());
}

std::span<const Refresh> DelaySchedule::refreshes(Index k) const {
  require(k >= 0 && k < num_iterations(), "schedule: iteration out of range");
  const auto first = offsets_[static_cast<std::size_t>(k)];
  const auto last = offsets_[static_cast<std::size_t>(k) + 1];
  return {refreshes_.data() + first, last - first};
}

DelaySchedule schedule_synchronous(int num_workers, Index num_iterations) {
  require(num_iterations >= 0, "schedule: num_iterations must be >= 0");
  DelaySchedule schedule(num_workers, 0);
  std::vector<Refresh> all(static_cast<std::size_t>(num_workers));
  for (Index k = 0; k < num_iterations; ++k) {
    for (int w = 0; w < num_workers; ++w) all[static_cast<std::size_t>(w)] = {w, k};
    schedule.add_iteration(all);
  }
  return schedule;
}

DelaySchedule schedule_uniform_single(int num_workers, int tau, Index num_iterations,
                                      std::uint64_t seed) {
  require(num_iterations >= 0, "schedule: num_iterations must be >= 0");
  require(num_workers >= 1, "schedule: num_workers must be >= 1");
  require(tau >= num_workers - 1,
          "schedule: uniform_single needs tau >= num_workers - 1 to keep staleness bounded");
  DelaySchedule schedule(num_workers, tau);
  SplitMix64 rng(seed);
  const auto W = static_cast<std::size_t>(num_workers);
  std::vector<Index> source(W, 0);
  std::vector<int> order(W);

  for (Index k = 0; k < num_iterations; ++k) {
    // Worker w must return by iteration source[w] + tau + 1. With one return
    // per iteration the deadlines stay reachable iff, sorted ascending, the
    // i-th (0-based) deadline is >= k + i. If some deadline is tight, only
    // the earliest-deadline worker can go now.
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return source[static_cast<std::size_t>(a)] < source[static_cast<std::size_t>(b)];
    });
    bool tight = false;
    for (std::size_t i = 0; i < W; ++i) {
      const Index deadline = source[static_cast<std::size_t>(order[i])] + tau + 1;
      if (deadline <= k + static_cast<Index>(i)) {
        tight = true;
        break;
      }
    }
    // Draw unconditionally so the stream position depends only on k.
    const auto drawn = static_cast<int>(rng.below(W));
    const int chosen = tight ? order[0] : drawn;
    source[static_cast<std::size_t>(chosen)] = k;
    const Refresh r{chosen, k};
    schedule.add_iteration(std::span<const Refresh>(&r, 1));
  }
  return schedule;
}

std::vector<int> staleness_profile(const DelaySchedule& schedule) {
  const auto W = static_cast<std::size_t>(schedule.num_workers());
  const Index K = schedule.num_iterations();
  std::vector<int> out(static_cast<std::size_t>(K) * W);
  std::vector<Index> source(W, 0);
  for (Index k = 0; k < K; ++k) {
    for (const Refresh& r : schedule.refreshes(k)) source[static_cast<std::size_t>(r.worker)] = r.source_iter;
    for (std::size_t w = 0; w < W; ++w) {
      out[static_cast<std::size_t>(k) * W + w] = static_cast<int>(k - source[w]);
    }
  }
  return out;
}

int max_observed_staleness(const DelaySchedule& schedule) {
  const auto W = static_cast<std::size_t>(schedule.num_workers());
  const auto profile = staleness_profile(schedule);
  int worst = 0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (profile[i] > schedule.declared_tau()) {
      throw ScheduleInvariantError("schedule: worker " + std::to_string(i % W) + " has staleness " +
                                   std::to_string(profile[i]) + " at k=" + std::to_string(i / W) +
                                   ", above declared tau=" +
                                   std::to_string(schedule.declared_tau()));
    }
    worst = std::max(worst, profile[i]);
  }
  return worst;
}

void write_schedule_jsonl(std::ostream& out, const DelaySchedule& schedule) {
  for (Index k = 0; k < schedule.num_iterations(); ++k) {
    nlohmann::json rec;
    rec["k"] = k;
    rec["refreshed"] = nlohmann::json::array();
    rec["source_iter"] = nlohmann::json::array();
    for (const Refresh& r : schedule.refreshes(k)) {
      rec["refreshed"].push_back(r.worker);
      rec["source_iter"].push_back(r.source_iter);
    }
    out << rec.dump() << '\n';
  }
}

DelaySchedule read_schedule_jsonl(std::istream& in, int num_workers, int declared_tau) {
  DelaySchedule schedule(num_workers, declared_tau);
  std::string line;
  std::vector<Refresh> buf;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto rec = nlohmann::json::parse(line);
    const Index k = rec.at("k").get<Index>();
    require(k == schedule.num_iterations(), "schedule jsonl: records must be in order of k");
    const auto& workers = rec.at("refreshed");
    const auto& sources = rec.at("source_iter");
    require(workers.size() == sources.size(), "schedule jsonl: refreshed/source_iter length mismatch");
    buf.clear();
    for (std::size_t i = 0; i < workers.size(); ++i) {
      buf.push_back({workers[i].get<int>(), sources[i].get<Index>()});
    }
    schedule.add_iteration(buf);
  }
  return schedule;
}

}  // namespace ipiag
