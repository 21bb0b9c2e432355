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

// Regular-sampling sort engine shared by the string sorter and the
// distributed merge.  Several independent jobs run in the same
// supersteps; each job owns a contiguous processor range, a designated
// processor and a message tag block.

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "dcsa/bsp.hpp"

namespace dcsa::detail {

using bsp::Word;

/// Fixed-stride records stored back to back.
struct Records {
  std::size_t stride = 1;
  std::vector<Word> data;

  std::size_t size() const { return data.size() / stride; }
  bool empty() const { return data.empty(); }
  const Word* at(std::size_t i) const { return data.data() + i * stride; }
  Word* at(std::size_t i) { return data.data() + i * stride; }
  void push(const Word* rec) { data.insert(data.end(), rec, rec + stride); }
  void clear() { data.clear(); }
};

/// Strict total order on records plus a local sorting routine.  Only the
/// first key_words() words take part in comparisons; samples carry just
/// that prefix.
class RecordOrder {
 public:
  virtual ~RecordOrder() = default;
  virtual std::size_t key_words() const = 0;
  virtual bool less(const Word* a, const Word* b) const = 0;
  /// Sorts in place; any stride >= key_words().  Returns work units.
  virtual std::uint64_t sort(Records& r) const = 0;
};

/// Rows of key columns, column c in [-1, bounds[c]), followed by a unique
/// non-negative id used as the last key, followed by payload words.
class RowOrder final : public RecordOrder {
 public:
  RowOrder(std::size_t width, Word key_bound)
      : bounds_(width, key_bound) {}
  explicit RowOrder(std::vector<Word> bounds) : bounds_(std::move(bounds)) {}

  std::size_t width() const { return bounds_.size(); }
  std::size_t key_words() const override { return bounds_.size() + 1; }
  bool less(const Word* a, const Word* b) const override;
  std::uint64_t sort(Records& r) const override;

 private:
  std::vector<Word> bounds_;
};

/// Applies `perm` (new position -> old index) to `r`.
void permute(Records& r, std::span<const std::size_t> perm);

struct SortJob {
  int first = 0;       // first processor of the range
  int count = 1;       // processors in the range
  int designated = 0;  // gathers the primary samples; inside the range
  const RecordOrder* order = nullptr;
  std::vector<Records>* local = nullptr;  // per pid; input, then output

  // Placement of the sorted output.  With span_total < 0 the job's own
  // sequence is block-distributed over all p processors.  Otherwise job
  // position t is global position offset + t of an array of length
  // span_total that is block-distributed over all p.
  std::int64_t offset = 0;
  std::int64_t span_total = -1;

  std::vector<std::int64_t>* first_pos = nullptr;  // per pid, output
};

struct SortHooks {
  /// Called on every processor at the start of each stage (0-based),
  /// before any job work.  Stage 0 may fill the jobs' local input.
  std::function<void(bsp::Context&, int stage)> before;
  /// Called on every processor at the end of the final stage.
  std::function<void(bsp::Context&)> after;
};

/// Stages (one superstep each):
///   0 local sort, primary samples -> designated
///   1 designated sorts samples, broadcasts secondary samples
///   2 partition by binary search, exchange sub-blocks and counts
///   3 sort received block, send each element to its final owner
///   4 assemble
/// Jobs whose range is a single processor finish in stage 0; if every job
/// does, only one superstep runs, unless the caller asks for at least
/// `min_stages` (for work it hangs on the hooks).  Returns the number of
/// supersteps.
int sample_sort(bsp::Machine& m, std::span<SortJob> jobs, int tag_base,
                const SortHooks& hooks = {}, int min_stages = 1);

/// Tags used by sample_sort for `njobs` jobs start at tag_base and stay
/// below tag_base + tag_span(njobs).
inline int tag_span(std::size_t njobs) { return static_cast<int>(8 * njobs + 8); }

}  // namespace dcsa::detail
