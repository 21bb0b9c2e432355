/* Copyright 2026 The dcsa Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */

#include <gtest/gtest.h>

#include <array>
#include <random>

#include "dcsa/parsa.hpp"
#include "oracles.hpp"

namespace dcsa {
namespace {

using testing::brute_suffix_array;

ParallelOptions relaxed(const char* schedule = "accel") {
  ParallelOptions o;
  o.schedule = ParallelSchedule::parse(schedule);
  o.slack = SlackPolicy::relaxed;
  return o;
}

TEST(NextV, Examples) {
  EXPECT_EQ(next_v(3, 1000000), 4);
  EXPECT_EQ(next_v(4, 1000000), 6);
  EXPECT_EQ(next_v(100, 50), 50);
  EXPECT_EQ(next_v(16, 1000000), 32);
  EXPECT_EQ(next_v(5, 2), 3);
}

TEST(ParallelSchedule, ParseAndName) {
  EXPECT_EQ(ParallelSchedule::parse("accel").name(), "accel");
  EXPECT_EQ(ParallelSchedule::parse("fixed:5").name(), "fixed:5");
  EXPECT_EQ(ParallelSchedule::accel().initial(1000), 3);
  EXPECT_EQ(ParallelSchedule::accel().next(4, 1000000), 6);
  EXPECT_EQ(ParallelSchedule::fixed(5).next(5, 1000000), 5);
  EXPECT_THROW(ParallelSchedule::parse("fixed:1"), std::invalid_argument);
  EXPECT_THROW(ParallelSchedule::parse("slow"), std::invalid_argument);
}

TEST(BspSuffixArray, WorkedExample) {
  const Text t = testing::bytes("acbaacedbbea");
  const SuffixArray want{11, 3, 0, 4, 2, 8, 9, 1, 5, 7, 10, 6};
  for (int p : {1, 2, 3, 4}) {
    for (const char* s : {"accel", "fixed:3", "fixed:4"}) {
      EXPECT_EQ(bsp_suffix_array(t, bsp::Config{p}, relaxed(s)).sa, want) << p << ' ' << s;
    }
  }
}

TEST(BspSuffixArray, SingleProcessorDelegates) {
  const Text t = testing::periodic_text(500, 3);
  const auto run = bsp_suffix_array(t, bsp::Config{1});
  EXPECT_EQ(run.sa, brute_suffix_array(t));
  EXPECT_EQ(run.metrics.total.S(), 1u);
  EXPECT_EQ(run.metrics.round_count(), 0u);
}

TEST(BspSuffixArray, RandomTextsMatchOracle) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 120; ++trial) {
    const int p = 2 + static_cast<int>(rng() % 7);
    const index_t n = p + static_cast<index_t>(rng() % 400);
    const index_t sigma = std::array<index_t, 4>{2, 4, 16, n}[rng() % 4];
    const Text t = testing::random_text(rng, n, sigma);
    const char* s = std::array<const char*, 3>{"accel", "fixed:3", "fixed:5"}[rng() % 3];
    ASSERT_EQ(bsp_suffix_array(t, bsp::Config{p}, relaxed(s)).sa, brute_suffix_array(t))
        << "n=" << n << " p=" << p << " sigma=" << sigma << ' ' << s;
  }
}

TEST(BspSuffixArray, PeriodicTexts) {
  for (index_t period : {1, 2, 5}) {
    for (int p : {2, 4, 8}) {
      const Text t = testing::periodic_text(700, period);
      EXPECT_EQ(bsp_suffix_array(t, bsp::Config{p}, relaxed()).sa, brute_suffix_array(t))
          << period << ' ' << p;
    }
  }
}

TEST(BspSuffixArray, DuplicateAcrossBlockBoundary) {
  // Symbols 0..62 once each and 15 twice; after sorting, the two 15s sit
  // at positions 15 and 16, the boundary between processors 0 and 1.
  std::vector<index_t> s(63);
  std::iota(s.begin(), s.end(), index_t{0});
  s.push_back(15);
  std::mt19937_64 rng(42);
  std::shuffle(s.begin(), s.end(), rng);
  const Text t(s);
  const auto run = bsp_suffix_array(t, bsp::Config{4}, relaxed());
  EXPECT_EQ(run.sa, brute_suffix_array(t));

  std::vector<index_t> distinct(64);
  std::iota(distinct.begin(), distinct.end(), index_t{0});
  std::shuffle(distinct.begin(), distinct.end(), rng);
  const auto base = bsp_suffix_array(Text(distinct), bsp::Config{4}, relaxed());
  EXPECT_EQ(base.sa, brute_suffix_array(Text(distinct)));
  // the distinctness check is the whole first round
  ASSERT_EQ(base.metrics.round_count(), 1u);
  EXPECT_LT(base.metrics.total.S(), run.metrics.total.S());
}

TEST(BspSuffixArray, MediumTextAgreesWithSequential) {
  std::mt19937_64 rng(43);
  const Text t = testing::random_text(rng, 30000, 4);
  const auto want = dc_suffix_array(t, VSchedule::fixed(3));
  for (int p : {2, 4, 8}) {
    const auto run = bsp_suffix_array(t, bsp::Config{p}, relaxed());
    EXPECT_EQ(run.sa, want) << p;
    EXPECT_GE(run.metrics.round_count(), 1u);
  }
}

TEST(BspSuffixArray, Errors) {
  const Text t = testing::bytes("acbaacedbbea");
  EXPECT_THROW(bsp_suffix_array(t, bsp::Config{2}), SlackError);
  EXPECT_THROW(bsp_suffix_array(t, bsp::Config{13}, relaxed()), std::invalid_argument);
  EXPECT_TRUE(sa_slack_ok(512, 4));
  EXPECT_FALSE(sa_slack_ok(511, 4));
  EXPECT_TRUE(sa_slack_ok(262144, 16));
}

TEST(BspSuffixArray, RelaxedSlackWarns) {
  const auto run = bsp_suffix_array(testing::bytes("acbaacedbbea"), bsp::Config{2}, relaxed());
  EXPECT_FALSE(run.warnings.empty());
}

TEST(BspSuffixArray, IndependentOfExecutionOrder) {
  std::mt19937_64 rng(44);
  const Text t = testing::random_text(rng, 5000, 3);
  const auto base = bsp_suffix_array(t, bsp::Config{6}, relaxed());
  for (auto e : {bsp::Execution::shuffled, bsp::Execution::parallel}) {
    ParallelOptions o = relaxed();
    o.machine.execution = e;
    o.machine.seed = 17;
    const auto other = bsp_suffix_array(t, bsp::Config{6}, o);
    EXPECT_EQ(other.sa, base.sa);
    EXPECT_EQ(other.metrics.to_json(), base.metrics.to_json());
  }
}

TEST(RoundMetrics, JsonAndTotals) {
  const Text t = testing::periodic_text(4000, 2);
  const auto run = bsp_suffix_array(t, bsp::Config{4}, relaxed());
  const auto& m = run.metrics;
  const auto j = m.to_json();
  ASSERT_EQ(j["rounds"].size(), m.round_count());
  ASSERT_GE(m.round_count(), 1u);
  EXPECT_EQ(j["rounds"][0]["v"], 3);
  EXPECT_EQ(j["rounds"][0]["d"], 2);
  EXPECT_EQ(j["rounds"][0]["n"], 4000);
  EXPECT_EQ(j["total"]["S"], m.total.S());
  std::uint64_t steps = 0, w = 0;
  for (const auto& r : m.rounds) {
    steps += r.supersteps;
    w += r.w;
  }
  if (m.handoff) {
    steps += m.handoff->supersteps;
    w += m.handoff->w;
    EXPECT_FALSE(j["handoff"].is_null());
  }
  EXPECT_EQ(steps, m.total.S());
  EXPECT_EQ(w, m.total.W());
  // each level shrinks the problem
  for (std::size_t k = 1; k < m.rounds.size(); ++k) {
    EXPECT_LT(m.rounds[k].n, m.rounds[k - 1].n);
  }
}

}  // namespace
}  // namespace dcsa
