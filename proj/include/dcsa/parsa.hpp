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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dcsa/bsp.hpp"
#include "dcsa/parsort.hpp"
#include "dcsa/seqsa.hpp"
#include "dcsa/text.hpp"

namespace dcsa {

/// min(ceil(v^{5/4}), xlen), never below 3.  Unlike VSchedule there is no
/// v^2/|D| cap.
index_t next_v(index_t v, index_t xlen);

/// Period rule of the distributed builder.  "accel" starts at 3 and
/// applies next_v; "fixed:V" keeps V at every level (capped by the level
/// length).
class ParallelSchedule {
 public:
  static ParallelSchedule accel() { return ParallelSchedule(true, 3); }
  static ParallelSchedule fixed(index_t v);
  static ParallelSchedule parse(std::string_view spec);

  index_t initial(index_t n) const;
  index_t next(index_t v, index_t xlen) const;
  std::string name() const;
  /// The matching sequential schedule, used when p == 1.
  VSchedule sequential() const;

 private:
  ParallelSchedule(bool accelerated, index_t v0)
      : accelerated_(accelerated), v0_(v0) {}

  bool accelerated_;
  index_t v0_;
};

struct ParallelOptions {
  ParallelSchedule schedule = ParallelSchedule::accel();
  SlackPolicy slack = SlackPolicy::enforce;
  bsp::MachineOptions machine;
};

/// One recursion level run on all processors.
struct RoundInfo {
  index_t v = 0;
  index_t d = 0;  // cover size
  index_t n = 0;
  std::uint64_t supersteps = 0;
  std::uint64_t w = 0;
  std::uint64_t h = 0;
};

/// The final level, solved on processor 0.
struct HandoffInfo {
  index_t n = 0;
  std::uint64_t supersteps = 0;
  std::uint64_t w = 0;
  std::uint64_t h = 0;
};

struct RoundMetrics {
  int p = 1;
  std::vector<RoundInfo> rounds;
  std::optional<HandoffInfo> handoff;
  bsp::CostLedger total;

  std::size_t round_count() const { return rounds.size(); }
  /// {"rounds":[{"v","d","n","supersteps","w","h"}..], "handoff":{..}|null,
  ///  "total": ledger JSON}
  nlohmann::json to_json() const;
};

struct ParallelRun {
  SuffixArray sa;
  RoundMetrics metrics;
  std::vector<std::string> warnings;
};

/// Whether n >= p^{9/2}.
bool sa_slack_ok(index_t n, int p);

/// Distributed difference-cover construction on a simulated machine.  The
/// text is block-distributed and every processor but the last also starts
/// with the v - 1 characters after its block.  Each level sorts its
/// sample rows, recurses on their ranks (or hands a short enough string to
/// processor 0), sorts the non-sample classes, groups all suffixes by
/// their first v characters and merges each group.
///
/// With p == 1 the sequential builder runs in a single superstep.  Throws
/// std::invalid_argument when 1 < p and n < p, SlackError when n < p^{9/2}
/// under the enforce policy.  A level with v - |D| >= p non-sample classes
/// reuses designated processors round-robin and records a warning.
ParallelRun bsp_suffix_array(const Text& t, const bsp::Config& cfg,
                             const ParallelOptions& options = {});

}  // namespace dcsa
