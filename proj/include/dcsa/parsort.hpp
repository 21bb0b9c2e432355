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

#include <string>
#include <vector>

#include "dcsa/bsp.hpp"
#include "dcsa/radix.hpp"
#include "dcsa/text.hpp"

namespace dcsa {

/// What to do when a problem is smaller than the slackness the cost
/// bounds assume.
enum class SlackPolicy {
  enforce,  // reject
  relaxed,  // proceed and record a warning
};

class SlackError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

SlackPolicy parse_slack(const std::string& name);
std::string to_string(SlackPolicy policy);

/// One processor's rows: keys holds ids.size() rows of the set's width.
struct RowPart {
  std::vector<index_t> keys;
  std::vector<index_t> ids;
};

/// Fixed-width rows spread over p processors.  Every row carries a unique
/// non-negative id that breaks ties between equal rows.
struct DistRows {
  std::size_t width = 0;
  index_t bound = 0;  // keys lie in [-1, bound)
  std::vector<RowPart> parts;

  std::size_t rows() const;
  /// Block distribution of `table` over p processors, ids = row index.
  static DistRows block(const radix::RowTable& table, int p);
  /// All rows in processor order.
  radix::RowTable gather_table() const;
  std::vector<index_t> gather_ids() const;
};

struct StringSortOptions {
  SlackPolicy slack = SlackPolicy::enforce;
  int designated = 0;  // processor that sorts the primary samples
};

/// Sorts the rows lexicographically, ties by id, on `m`.  The result is
/// block-distributed with ceil(m/p) rows per processor (the last may hold
/// fewer).  Runs a fixed number of supersteps: one when p == 1, five
/// otherwise.  Throws SlackError when m < p^3 under the enforce policy
/// and std::invalid_argument for malformed input.
DistRows bsp_string_sort(bsp::Machine& m, const DistRows& input,
                         const StringSortOptions& options = {},
                         std::vector<std::string>* warnings = nullptr);

struct StringSortRun {
  DistRows rows;
  bsp::CostLedger ledger;
  std::vector<std::string> warnings;
};

StringSortRun bsp_string_sort(const DistRows& input, const bsp::Config& cfg,
                              SlackPolicy slack,
                              const bsp::MachineOptions& machine = {});

/// Whether m rows satisfy m >= p^3.
bool sort_slack_ok(std::size_t m, int p);

}  // namespace dcsa
