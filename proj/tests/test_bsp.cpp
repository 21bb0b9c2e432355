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

#include <random>

#include "dcsa/bsp.hpp"

namespace dcsa::bsp {
namespace {

TEST(BlockRanges, Examples) {
  EXPECT_EQ(block_ranges(10, 3), (std::vector<Range>{{0, 4}, {4, 8}, {8, 10}}));
  EXPECT_EQ(block_ranges(12, 4), (std::vector<Range>{{0, 3}, {3, 6}, {6, 9}, {9, 12}}));
  EXPECT_EQ(block_ranges(5, 8), (std::vector<Range>{{0, 1}, {1, 2}, {2, 3}, {3, 4},
                                                     {4, 5}, {5, 5}, {5, 5}, {5, 5}}));
  EXPECT_EQ(block_ranges(0, 2), (std::vector<Range>{{0, 0}, {0, 0}}));
}

TEST(BlockRanges, PartitionAndOwner) {
  for (std::int64_t n = 0; n <= 60; ++n) {
    for (int p = 1; p <= 9; ++p) {
      const auto r = block_ranges(n, p);
      std::int64_t at = 0;
      for (int pi = 0; pi < p; ++pi) {
        EXPECT_EQ(r[static_cast<std::size_t>(pi)].lo, at);
        EXPECT_LE(r[static_cast<std::size_t>(pi)].size(), (n + p - 1) / p);
        at = r[static_cast<std::size_t>(pi)].hi;
        for (std::int64_t i = r[static_cast<std::size_t>(pi)].lo; i < at; ++i) {
          EXPECT_EQ(block_owner(i, n, p), pi);
        }
      }
      EXPECT_EQ(at, n);
    }
  }
}

// Every processor charges 5 units and sends 3 words to its ring successor
// in the first superstep; the second superstep only consumes them.
std::vector<LocalStep> ring_program() {
  return {
      [](Context& ctx, std::vector<Word>&) {
        ctx.charge(5);
        ctx.send((ctx.pid() + 1) % ctx.nprocs(), 0, {1, 2, 3});
      },
      [](Context& ctx, std::vector<Word>& local) {
        ctx.charge(5);
        for (const auto& m : ctx.inbox()) local.insert(local.end(), m.words.begin(), m.words.end());
      },
  };
}

TEST(Machine, LedgerOfRingProgram) {
  MachineOptions opts;
  opts.charge_words = false;
  const Config cfg{4, 2.0, 100.0};
  const auto run = run_bsp(ring_program(), cfg, DistArray<Word>::block({}, 4), opts);
  EXPECT_EQ(run.ledger.S(), 2u);
  EXPECT_EQ(run.ledger.W(), 10u);
  EXPECT_EQ(run.ledger.H(), 6u);
  EXPECT_DOUBLE_EQ(ledger_cost(run.ledger, 2.0, 100.0), 222.0);
  for (const auto& part : run.output.parts) EXPECT_EQ(part, (std::vector<Word>{1, 2, 3}));
}

TEST(Machine, WordsChargedAsWorkByDefault) {
  const auto run = run_bsp(ring_program(), Config{4}, DistArray<Word>::block({}, 4));
  EXPECT_EQ(run.ledger.W(), 5u + 3u + 3u + 5u);
  EXPECT_EQ(run.ledger.H(), 6u);
}

TEST(Machine, EmptyProgram) {
  const auto run = run_bsp({}, Config{3}, DistArray<Word>::block({}, 3));
  EXPECT_EQ(run.ledger.S(), 0u);
  EXPECT_EQ(run.ledger.W(), 0u);
  EXPECT_EQ(run.ledger.H(), 0u);
  EXPECT_DOUBLE_EQ(ledger_cost(run.ledger, 5.0, 7.0), 0.0);
}

TEST(LedgerCost, Arithmetic) {
  CostLedger l;
  SuperstepCost s;
  s.w = 0;
  s.h = 1;
  l.record(s);
  EXPECT_DOUBLE_EQ(ledger_cost(l, 3.0, 5.0), 8.0);
}

TEST(Machine, BroadcastRelation) {
  for (int p : {2, 3, 8}) {
    Machine m(Config{p});
    m.superstep([&](Context& ctx) {
      if (ctx.pid() != 0) return;
      for (int q = 1; q < p; ++q) ctx.send(q, 0, {7});
    });
    const auto& s = m.ledger().supersteps()[0];
    EXPECT_EQ(s.h, static_cast<std::uint64_t>((p - 1) + 1));
    EXPECT_EQ(s.h_out, static_cast<std::uint64_t>(p - 1));
    EXPECT_EQ(s.h_in, 1u);
  }
}

TEST(Machine, SelfMessagesAreLocal) {
  Machine m(Config{2});
  m.superstep([](Context& ctx) { ctx.send(ctx.pid(), 0, {1, 2, 3, 4}); });
  const auto& s = m.ledger().supersteps()[0];
  EXPECT_EQ(s.h, 0u);
  EXPECT_EQ(s.local_words, 8u);
  EXPECT_EQ(s.w, 4u);
  m.superstep([](Context& ctx) {
    ASSERT_EQ(ctx.inbox().size(), 1u);
    EXPECT_EQ(ctx.inbox()[0].source, ctx.pid());
  });
}

TEST(Machine, MessagesInvisibleUntilNextSuperstep) {
  // Canary: whoever runs later in a superstep must still see nothing that
  // was sent in the same superstep.
  for (Execution e : {Execution::serial, Execution::shuffled, Execution::parallel}) {
    MachineOptions opts;
    opts.execution = e;
    opts.seed = 5;
    Machine m(Config{6}, opts);
    std::vector<int> seen(6, -1);
    m.superstep([&](Context& ctx) {
      seen[static_cast<std::size_t>(ctx.pid())] = static_cast<int>(ctx.inbox().size());
      for (int q = 0; q < ctx.nprocs(); ++q) ctx.send(q, 99, {ctx.pid()});
    });
    for (int s : seen) EXPECT_EQ(s, 0);
    m.superstep([&](Context& ctx) {
      seen[static_cast<std::size_t>(ctx.pid())] = static_cast<int>(ctx.inbox().size());
      // delivered in source order
      for (std::size_t k = 0; k < ctx.inbox().size(); ++k) {
        EXPECT_EQ(ctx.inbox()[k].source, static_cast<int>(k));
      }
    });
    for (int s : seen) EXPECT_EQ(s, 6);
  }
}

TEST(Machine, WordConservation) {
  std::mt19937_64 rng(21);
  Machine m(Config{7});
  for (int step = 0; step < 20; ++step) {
    const std::uint64_t seed = rng();
    std::uint64_t delivered = 0;
    for (int q = 0; q < 7; ++q) {
      for (const auto& msg : m.pending(q)) {
        if (msg.source != q) delivered += msg.words.size();
      }
    }
    if (step > 0) {
      const auto& prev = m.ledger().supersteps().back();
      EXPECT_EQ(prev.words_sent, prev.words_received);
      EXPECT_EQ(prev.words_received, delivered);
    }
    m.superstep([&](Context& ctx) {
      std::mt19937_64 local(seed + static_cast<std::uint64_t>(ctx.pid()));
      const int k = static_cast<int>(local() % 5);
      for (int j = 0; j < k; ++j) {
        ctx.send(static_cast<int>(local() % 7), j, std::vector<Word>(local() % 9, 1));
      }
    });
  }
}

TEST(Machine, DeterministicAcrossExecutionOrders) {
  // Each processor folds its inbox into a running value and scatters it.
  auto run = [](Execution e, std::uint64_t seed) {
    MachineOptions opts;
    opts.execution = e;
    opts.seed = seed;
    std::vector<LocalStep> program(6, [](Context& ctx, std::vector<Word>& local) {
      auto h = static_cast<std::uint64_t>(local.empty() ? ctx.pid() : local.back());
      for (const auto& m : ctx.inbox()) {
        for (Word w : m.words) h = h * 31 + static_cast<std::uint64_t>(w + m.source);
      }
      const auto acc = static_cast<Word>(h >> 2);
      local.push_back(acc);
      ctx.charge(static_cast<std::uint64_t>(acc & 15));
      for (int q = 0; q < ctx.nprocs(); ++q) {
        ctx.send(q, 0, std::vector<Word>(static_cast<std::size_t>((acc + q) & 3), acc % 1000));
      }
    });
    std::vector<Word> init(40);
    std::iota(init.begin(), init.end(), 0);
    return run_bsp(program, Config{5}, DistArray<Word>::block(init, 5), opts);
  };
  const auto base = run(Execution::serial, 0);
  for (auto [e, seed] : {std::pair{Execution::shuffled, 1ULL}, {Execution::shuffled, 99ULL},
                         {Execution::parallel, 0ULL}}) {
    const auto other = run(e, seed);
    EXPECT_EQ(other.output.parts, base.output.parts);
    EXPECT_EQ(other.ledger.to_json(5), base.ledger.to_json(5));
  }
}

TEST(Machine, RejectsBadDestinationAndConfig) {
  Machine m(Config{2});
  EXPECT_THROW(m.superstep([](Context& ctx) { ctx.send(2, 0, {1}); }), BspError);
  EXPECT_THROW(Machine(Config{0}), std::invalid_argument);
  EXPECT_THROW(Machine(Config{2, -1.0}), std::invalid_argument);
  EXPECT_THROW(run_bsp({}, Config{2}, DistArray<Word>::block({}, 3)), std::invalid_argument);
}

TEST(Ledger, JsonShapeAndFilter) {
  Machine m(Config{2});
  m.set_label(1);
  m.superstep([](Context& ctx) { ctx.charge(3); });
  m.set_label(2);
  m.superstep([](Context& ctx) { ctx.send(1 - ctx.pid(), 0, {1}); });
  const auto j = m.ledger().to_json(2);
  EXPECT_EQ(j["p"], 2);
  EXPECT_EQ(j["S"], 2);
  EXPECT_EQ(j["W"], 5);
  EXPECT_EQ(j["H"], 2);
  ASSERT_EQ(j["supersteps"].size(), 2u);
  EXPECT_EQ(j["supersteps"][0]["w"], 3);
  const auto only2 = m.ledger().filter([](int label) { return label == 2; });
  EXPECT_EQ(only2.S(), 1u);
  EXPECT_EQ(only2.W(), 2u);
}

}  // namespace
}  // namespace dcsa::bsp
