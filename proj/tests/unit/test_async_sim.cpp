#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "ipiag/async_sim.hpp"

using namespace ipiag;

TEST_CASE("synchronous schedule") {
  const DelaySchedule s = schedule_synchronous(1, 3);
  REQUIRE(s.num_iterations() == 3);
  for (Index k = 0; k < 3; ++k) {
    REQUIRE(s.refreshes(k).size() == 1);
    CHECK(s.refreshes(k)[0].worker == 0);
    CHECK(s.refreshes(k)[0].source_iter == k);
  }
  CHECK(max_observed_staleness(schedule_synchronous(5, 200)) == 0);
  CHECK(schedule_synchronous(3, 0).num_iterations() == 0);
}

TEST_CASE("uniform_single keeps staleness within tau") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const DelaySchedule s = schedule_uniform_single(4, 4, 10000, seed);
    const int worst = max_observed_staleness(s);
    CHECK(worst >= 1);
    CHECK(worst <= 4);
    for (Index k = 0; k < s.num_iterations(); ++k) {
      REQUIRE(s.refreshes(k).size() == 1);
      CHECK(s.refreshes(k)[0].source_iter == k);
    }
  }
  // tau = W - 1 leaves no slack: the schedule must be a rotation after warm-up
  CHECK(max_observed_staleness(schedule_uniform_single(5, 4, 2000, 3)) == 4);
}

TEST_CASE("uniform_single is deterministic per seed") {
  CHECK(schedule_uniform_single(4, 4, 1000, 11) == schedule_uniform_single(4, 4, 1000, 11));
  CHECK_FALSE(schedule_uniform_single(4, 4, 1000, 11) == schedule_uniform_single(4, 4, 1000, 12));
}

TEST_CASE("uniform_single with one worker refreshes it every iteration") {
  const DelaySchedule u = schedule_uniform_single(1, 0, 20, 5);
  const DelaySchedule s = schedule_synchronous(1, 20);
  for (Index k = 0; k < 20; ++k) {
    CHECK(u.refreshes(k)[0].worker == s.refreshes(k)[0].worker);
    CHECK(u.refreshes(k)[0].source_iter == s.refreshes(k)[0].source_iter);
  }
}

TEST_CASE("uniform_single picks workers roughly uniformly") {
  const DelaySchedule s = schedule_uniform_single(4, 12, 40000, 99);
  std::vector<int> counts(4, 0);
  for (Index k = 0; k < s.num_iterations(); ++k) ++counts[static_cast<std::size_t>(s.refreshes(k)[0].worker)];
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);
}

TEST_CASE("uniform_single rejects unreachable bounds") {
  CHECK_THROWS_AS(schedule_uniform_single(4, 2, 10, 0), InputError);
  CHECK_THROWS_AS(schedule_uniform_single(0, 2, 10, 0), InputError);
}

TEST_CASE("hand-built four-worker schedule") {
  // At k = 4 the table holds G_1(x_2), G_2(x_1), G_3(x_2), G_4(x_0).
  DelaySchedule s(4, 4);
  const std::vector<Refresh> none;
  s.add_iteration(none);                               // k = 0
  s.add_iteration(std::vector<Refresh>{{1, 1}});       // k = 1
  s.add_iteration(std::vector<Refresh>{{0, 2}, {2, 2}});  // k = 2
  s.add_iteration(none);                               // k = 3
  s.add_iteration(none);                               // k = 4
  CHECK(max_observed_staleness(s) == 4);
  const auto profile = staleness_profile(s);
  CHECK(std::vector<int>(profile.begin() + 16, profile.end()) == std::vector<int>{2, 3, 2, 4});

  s.add_iteration(none);  // worker 4 now 5 stale
  CHECK_THROWS_AS(max_observed_staleness(s), ScheduleInvariantError);
}

TEST_CASE("schedules reject malformed refreshes") {
  DelaySchedule s(2, 3);
  CHECK_THROWS_AS(s.add_iteration(std::vector<Refresh>{{0, 1}}), ScheduleInvariantError);
  CHECK_THROWS_AS(s.add_iteration(std::vector<Refresh>{{0, -1}}), ScheduleInvariantError);
  CHECK_THROWS_AS(s.add_iteration(std::vector<Refresh>{{2, 0}}), InputError);
  CHECK_THROWS_AS(s.add_iteration(std::vector<Refresh>{{1, 0}, {1, 0}}), InputError);
  CHECK(s.num_iterations() == 0);
  CHECK_THROWS_AS(DelaySchedule(0, 1), InputError);
  CHECK_THROWS_AS(DelaySchedule(1, -1), InputError);
}

TEST_CASE("schedule JSON lines round trip") {
  const DelaySchedule s = schedule_uniform_single(3, 5, 300, 4);
  std::stringstream io;
  write_schedule_jsonl(io, s);
  const std::string first_line = io.str().substr(0, io.str().find('\n'));
  CHECK(first_line.find("\"refreshed\"") != std::string::npos);
  CHECK(first_line.find("\"source_iter\"") != std::string::npos);
  CHECK(read_schedule_jsonl(io, 3, 5) == s);

  std::stringstream bad("{\"k\":1,\"refreshed\":[0],\"source_iter\":[0]}\n");
  CHECK_THROWS_AS(read_schedule_jsonl(bad, 3, 5), InputError);
}
