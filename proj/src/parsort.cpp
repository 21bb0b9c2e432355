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

#include "dcsa/parsort.hpp"

#include <algorithm>
#include <stdexcept>

#include "sample_sort.hpp"

namespace dcsa {

SlackPolicy parse_slack(const std::string& name) {
  if (name == "enforce") return SlackPolicy::enforce;
  if (name == "relaxed") return SlackPolicy::relaxed;
  throw std::invalid_argument("unknown slack policy '" + name +
                              "' (expected enforce or relaxed)");
}

std::string to_string(SlackPolicy policy) {
  return policy == SlackPolicy::enforce ? "enforce" : "relaxed";
}

std::size_t DistRows::rows() const {
  std::size_t sum = 0;
  for (const auto& part : parts) sum += part.ids.size();
  return sum;
}

DistRows DistRows::block(const radix::RowTable& table, int p) {
  DistRows d;
  d.width = table.width;
  d.bound = table.bound;
  const auto m = static_cast<std::int64_t>(table.rows());
  for (const auto& r : bsp::block_ranges(m, p)) {
    RowPart part;
    for (std::int64_t i = r.lo; i < r.hi; ++i) {
      const auto row = table.row(static_cast<std::size_t>(i));
      part.keys.insert(part.keys.end(), row.begin(), row.end());
      part.ids.push_back(i);
    }
    d.parts.push_back(std::move(part));
  }
  return d;
}

radix::RowTable DistRows::gather_table() const {
  radix::RowTable t;
  t.width = width;
  t.bound = bound;
  for (const auto& part : parts) {
    t.cells.insert(t.cells.end(), part.keys.begin(), part.keys.end());
  }
  return t;
}

std::vector<index_t> DistRows::gather_ids() const {
  std::vector<index_t> out;
  for (const auto& part : parts) out.insert(out.end(), part.ids.begin(), part.ids.end());
  return out;
}

bool sort_slack_ok(std::size_t m, int p) {
  const auto pp = static_cast<unsigned __int128>(p);
  return static_cast<unsigned __int128>(m) >= pp * pp * pp;
}

DistRows bsp_string_sort(bsp::Machine& m, const DistRows& input,
                         const StringSortOptions& options,
                         std::vector<std::string>* warnings) {
  const int p = m.nprocs();
  if (static_cast<int>(input.parts.size()) != p) {
    throw std::invalid_argument("bsp_string_sort: input has " +
                                std::to_string(input.parts.size()) +
                                " parts for p=" + std::to_string(p));
  }
  if (input.width == 0) throw std::invalid_argument("bsp_string_sort: width must be >= 1");
  for (const auto& part : input.parts) {
    if (part.keys.size() != part.ids.size() * input.width) {
      throw std::invalid_argument("bsp_string_sort: width mismatch, " +
                                  std::to_string(part.keys.size()) +
                                  " cells for " + std::to_string(part.ids.size()) +
                                  " rows of width " + std::to_string(input.width));
    }
  }
  if (options.designated < 0 || options.designated >= p) {
    throw std::invalid_argument("bsp_string_sort: designated processor out of range");
  }
  const std::size_t rows = input.rows();
  if (!sort_slack_ok(rows, p)) {
    const std::string msg = "string sort slackness: m=" + std::to_string(rows) +
                            " < p^3 for p=" + std::to_string(p);
    if (options.slack == SlackPolicy::enforce) throw SlackError(msg);
    if (warnings) warnings->push_back(msg);
  }

  const std::size_t w = input.width;
  const std::size_t stride = w + 1;
  detail::RowOrder order(w, std::max<index_t>(input.bound, 1));
  std::vector<detail::Records> local(static_cast<std::size_t>(p));
  detail::SortJob job;
  job.first = 0;
  job.count = p;
  job.designated = options.designated;
  job.order = &order;
  job.local = &local;

  detail::SortHooks hooks;
  hooks.before = [&](bsp::Context& ctx, int stage) {
    if (stage != 0) return;
    const auto& part = input.parts[static_cast<std::size_t>(ctx.pid())];
    auto& rec = local[static_cast<std::size_t>(ctx.pid())];
    rec.stride = stride;
    rec.data.reserve(part.ids.size() * stride);
    for (std::size_t r = 0; r < part.ids.size(); ++r) {
      rec.data.insert(rec.data.end(), part.keys.begin() + static_cast<std::ptrdiff_t>(r * w),
                      part.keys.begin() + static_cast<std::ptrdiff_t>((r + 1) * w));
      rec.data.push_back(part.ids[r]);
    }
  };
  detail::sample_sort(m, std::span<detail::SortJob>(&job, 1), 0, hooks);

  DistRows out;
  out.width = w;
  out.bound = input.bound;
  out.parts.resize(static_cast<std::size_t>(p));
  for (int pi = 0; pi < p; ++pi) {
    const auto& rec = local[static_cast<std::size_t>(pi)];
    auto& part = out.parts[static_cast<std::size_t>(pi)];
    for (std::size_t r = 0; r < rec.size(); ++r) {
      part.keys.insert(part.keys.end(), rec.at(r), rec.at(r) + w);
      part.ids.push_back(rec.at(r)[w]);
    }
  }
  return out;
}

StringSortRun bsp_string_sort(const DistRows& input, const bsp::Config& cfg,
                              SlackPolicy slack,
                              const bsp::MachineOptions& machine) {
  bsp::Machine m(cfg, machine);
  StringSortRun run;
  run.rows = bsp_string_sort(m, input, {slack, 0}, &run.warnings);
  run.ledger = m.ledger();
  return run;
}

}  // namespace dcsa
