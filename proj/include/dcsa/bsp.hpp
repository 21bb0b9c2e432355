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

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace dcsa::bsp {

using Word = std::int64_t;

struct Config {
  int p = 1;
  double g = 1.0;        // cost units per word communicated
  double latency = 100.0;  // cost units per barrier

  void validate() const;
};

class BspError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

//----------------------------------------------------------------------
// Cost accounting
//----------------------------------------------------------------------

/// One barrier.  w and h follow the usual definitions:
///   w = max_i work_i,   h = max_i out_i + max_i in_i.
/// Words a processor addresses to itself are local moves; they are not
/// part of h and are reported in local_words.
struct SuperstepCost {
  std::uint64_t w = 0;
  std::uint64_t h = 0;
  std::uint64_t h_out = 0;
  std::uint64_t h_in = 0;
  std::uint64_t words_sent = 0;      // all processors, excluding local moves
  std::uint64_t words_received = 0;  // all processors, excluding local moves
  std::uint64_t local_words = 0;
  int label = 0;  // caller-defined phase tag
};

class CostLedger {
 public:
  void record(const SuperstepCost& s) { steps_.push_back(s); }

  std::span<const SuperstepCost> supersteps() const { return steps_; }
  std::uint64_t S() const { return steps_.size(); }
  std::uint64_t W() const;
  std::uint64_t H() const;

  /// Supersteps whose label satisfies `keep`.
  CostLedger filter(const std::function<bool(int)>& keep) const;

  /// {"p":..,"supersteps":[{"w":..,"h":..}..],"W":..,"H":..,"S":..}
  nlohmann::json to_json(int p) const;

 private:
  std::vector<SuperstepCost> steps_;
};

/// W + H*g + S*L
double ledger_cost(const CostLedger& ledger, double g, double latency);

//----------------------------------------------------------------------
// Block distribution
//----------------------------------------------------------------------

struct Range {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  std::int64_t size() const { return hi - lo; }
  bool contains(std::int64_t i) const { return lo <= i && i < hi; }
  friend bool operator==(const Range&, const Range&) = default;
};

/// I_pi = [b*pi, b*(pi+1)) clipped to [0, n), b = ceil(n/p).
std::vector<Range> block_ranges(std::int64_t n, int p);
Range block_range(std::int64_t n, int p, int pi);
/// Processor holding global index i under block_ranges(n, p).
int block_owner(std::int64_t i, std::int64_t n, int p);

template <class T>
struct DistArray {
  std::int64_t n = 0;
  std::vector<Range> ranges;
  std::vector<std::vector<T>> parts;

  static DistArray block(std::span<const T> data, int p) {
    DistArray a;
    a.n = static_cast<std::int64_t>(data.size());
    a.ranges = block_ranges(a.n, p);
    for (const Range& r : a.ranges) {
      a.parts.emplace_back(data.begin() + r.lo, data.begin() + r.hi);
    }
    return a;
  }

  std::vector<T> gather() const {
    std::vector<T> out;
    for (const auto& part : parts) out.insert(out.end(), part.begin(), part.end());
    return out;
  }
};

//----------------------------------------------------------------------
// Machine
//----------------------------------------------------------------------

struct Message {
  int source = 0;
  int tag = 0;
  std::vector<Word> words;
};

enum class Execution {
  serial,    // processor-id order
  shuffled,  // seeded random order per superstep
  parallel,  // OpenMP, one iteration per virtual processor
};

class Machine;

/// A processor's view of one superstep.  Only messages delivered at the
/// previous barrier are visible; anything sent now arrives next superstep.
class Context {
 public:
  int pid() const { return pid_; }
  int nprocs() const { return nprocs_; }

  std::span<const Message> inbox() const { return inbox_; }

  void send(int dest, int tag, std::vector<Word> words);
  void charge(std::uint64_t units) { work_ += units; }

 private:
  friend class Machine;
  Context(int pid, int nprocs, std::span<const Message> inbox)
      : pid_(pid), nprocs_(nprocs), inbox_(inbox) {}

  struct Outgoing {
    int dest;
    Message msg;
  };

  int pid_;
  int nprocs_;
  std::span<const Message> inbox_;
  std::vector<Outgoing> outbox_;
  std::uint64_t work_ = 0;
};

struct MachineOptions {
  Execution execution = Execution::serial;
  std::uint64_t seed = 0;
  /// Charge one work unit per word sent or received.
  bool charge_words = true;
};

class Machine {
 public:
  explicit Machine(Config cfg, MachineOptions opts = {});

  int nprocs() const { return cfg_.p; }
  const Config& config() const { return cfg_; }
  const CostLedger& ledger() const { return ledger_; }

  /// Label attached to the supersteps that follow.
  void set_label(int label) { label_ = label; }
  int label() const { return label_; }

  /// Runs body(ctx) once per processor, then the barrier.  Exceptions
  /// from a processor abort the superstep and are rethrown (lowest pid
  /// first) after every processor has finished.
  void superstep(const std::function<void(Context&)>& body);

  /// Messages waiting for `pid` in the next superstep.
  std::span<const Message> pending(int pid) const;

 private:
  Config cfg_;
  MachineOptions opts_;
  CostLedger ledger_;
  std::vector<std::vector<Message>> inbox_;
  std::uint64_t step_ = 0;
  int label_ = 0;
};

//----------------------------------------------------------------------
// run_bsp: the functional form.  Each superstep function sees its
// processor's local vector and inbox; the vectors after the last superstep
// form the output.
//----------------------------------------------------------------------

using LocalStep = std::function<void(Context&, std::vector<Word>& local)>;

struct BspRun {
  DistArray<Word> output;
  CostLedger ledger;
};

BspRun run_bsp(std::span<const LocalStep> program, const Config& cfg,
               DistArray<Word> input, MachineOptions opts = {});

}  // namespace dcsa::bsp
