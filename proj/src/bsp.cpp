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

#include "dcsa/bsp.hpp"

#include <algorithm>
#include <exception>
#include <numeric>
#include <random>

namespace dcsa::bsp {

void Config::validate() const {
  if (p < 1) throw std::invalid_argument("BSP config: p must be >= 1");
  if (g < 0) throw std::invalid_argument("BSP config: g must be >= 0");
  if (latency < 0) throw std::invalid_argument("BSP config: latency must be >= 0");
}

std::uint64_t CostLedger::W() const {
  std::uint64_t sum = 0;
  for (const auto& s : steps_) sum += s.w;
  return sum;
}

std::uint64_t CostLedger::H() const {
  std::uint64_t sum = 0;
  for (const auto& s : steps_) sum += s.h;
  return sum;
}

CostLedger CostLedger::filter(const std::function<bool(int)>& keep) const {
  CostLedger out;
  for (const auto& s : steps_) {
    if (keep(s.label)) out.record(s);
  }
  return out;
}

nlohmann::json CostLedger::to_json(int p) const {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : steps_) steps.push_back({{"w", s.w}, {"h", s.h}});
  return {{"p", p}, {"supersteps", steps}, {"W", W()}, {"H", H()}, {"S", S()}};
}

double ledger_cost(const CostLedger& ledger, double g, double latency) {
  return static_cast<double>(ledger.W()) + static_cast<double>(ledger.H()) * g +
         static_cast<double>(ledger.S()) * latency;
}

std::vector<Range> block_ranges(std::int64_t n, int p) {
  std::vector<Range> out;
  out.reserve(static_cast<std::size_t>(p));
  for (int pi = 0; pi < p; ++pi) out.push_back(block_range(n, p, pi));
  return out;
}

Range block_range(std::int64_t n, int p, int pi) {
  const std::int64_t b = (n + p - 1) / p;
  const std::int64_t lo = std::min(n, b * pi);
  const std::int64_t hi = pi == p - 1 ? n : std::min(n, b * (pi + 1));
  return {lo, hi};
}

int block_owner(std::int64_t i, std::int64_t n, int p) {
  const std::int64_t b = (n + p - 1) / p;
  return static_cast<int>(std::min<std::int64_t>(i / b, p - 1));
}

void Context::send(int dest, int tag, std::vector<Word> words) {
  if (dest < 0 || dest >= nprocs_) {
    throw BspError("processor " + std::to_string(pid_) +
                   " sent to invalid processor " + std::to_string(dest));
  }
  outbox_.push_back({dest, Message{pid_, tag, std::move(words)}});
}

Machine::Machine(Config cfg, MachineOptions opts)
    : cfg_(cfg), opts_(opts) {
  cfg_.validate();
  inbox_.resize(static_cast<std::size_t>(cfg_.p));
}

std::span<const Message> Machine::pending(int pid) const {
  return inbox_[static_cast<std::size_t>(pid)];
}

void Machine::superstep(const std::function<void(Context&)>& body) {
  const int p = cfg_.p;
  std::vector<Context> ctx;
  ctx.reserve(static_cast<std::size_t>(p));
  for (int pi = 0; pi < p; ++pi) {
    ctx.push_back(Context(pi, p, inbox_[static_cast<std::size_t>(pi)]));
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(p));

  auto run_one = [&](int pi) {
    try {
      body(ctx[static_cast<std::size_t>(pi)]);
    } catch (...) {
      errors[static_cast<std::size_t>(pi)] = std::current_exception();
    }
  };

  switch (opts_.execution) {
    case Execution::serial:
      for (int pi = 0; pi < p; ++pi) run_one(pi);
      break;
    case Execution::shuffled: {
      std::vector<int> order(static_cast<std::size_t>(p));
      std::iota(order.begin(), order.end(), 0);
      std::mt19937_64 rng(opts_.seed ^ (0x9e3779b97f4a7c15ULL * (step_ + 1)));
      std::shuffle(order.begin(), order.end(), rng);
      for (int pi : order) run_one(pi);
      break;
    }
    case Execution::parallel:
#pragma omp parallel for schedule(dynamic, 1)
      for (int pi = 0; pi < p; ++pi) run_one(pi);
      break;
  }
  ++step_;

  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  // Barrier: deliver in (source, send order), account the h-relation.
  SuperstepCost cost;
  cost.label = label_;
  std::vector<std::uint64_t> out(static_cast<std::size_t>(p), 0);
  std::vector<std::uint64_t> in(static_cast<std::size_t>(p), 0);
  std::vector<std::uint64_t> work(static_cast<std::size_t>(p), 0);
  std::vector<std::vector<Message>> next(static_cast<std::size_t>(p));
  for (int pi = 0; pi < p; ++pi) {
    auto& c = ctx[static_cast<std::size_t>(pi)];
    work[static_cast<std::size_t>(pi)] += c.work_;
    for (auto& o : c.outbox_) {
      const auto words = static_cast<std::uint64_t>(o.msg.words.size());
      if (o.dest == pi) {
        cost.local_words += words;
        if (opts_.charge_words) work[static_cast<std::size_t>(pi)] += words;
      } else {
        out[static_cast<std::size_t>(pi)] += words;
        in[static_cast<std::size_t>(o.dest)] += words;
        cost.words_sent += words;
        cost.words_received += words;
      }
      next[static_cast<std::size_t>(o.dest)].push_back(std::move(o.msg));
    }
  }
  if (opts_.charge_words) {
    for (int pi = 0; pi < p; ++pi) {
      work[static_cast<std::size_t>(pi)] +=
          out[static_cast<std::size_t>(pi)] + in[static_cast<std::size_t>(pi)];
    }
  }
  cost.w = *std::max_element(work.begin(), work.end());
  cost.h_out = *std::max_element(out.begin(), out.end());
  cost.h_in = *std::max_element(in.begin(), in.end());
  cost.h = cost.h_out + cost.h_in;
  ledger_.record(cost);
  inbox_ = std::move(next);
}

BspRun run_bsp(std::span<const LocalStep> program, const Config& cfg,
               DistArray<Word> input, MachineOptions opts) {
  cfg.validate();
  if (static_cast<int>(input.parts.size()) != cfg.p) {
    throw std::invalid_argument("run_bsp: input has " +
                                std::to_string(input.parts.size()) +
                                " parts for p=" + std::to_string(cfg.p));
  }
  Machine m(cfg, opts);
  auto& local = input.parts;
  for (const auto& step : program) {
    m.superstep([&](Context& ctx) {
      step(ctx, local[static_cast<std::size_t>(ctx.pid())]);
    });
  }
  BspRun run;
  run.ledger = m.ledger();
  std::int64_t at = 0;
  for (auto& part : local) {
    const auto len = static_cast<std::int64_t>(part.size());
    run.output.ranges.push_back({at, at + len});
    at += len;
  }
  run.output.n = at;
  run.output.parts = std::move(local);
  return run;
}

}  // namespace dcsa::bsp
