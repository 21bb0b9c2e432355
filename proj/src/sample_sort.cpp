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

#include "sample_sort.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "dcsa/radix.hpp"

namespace dcsa::detail {

namespace {

enum StageTag : int { kSample = 0, kSplit = 1, kBlock = 2, kPlace = 3 };

int job_tag(int tag_base, std::size_t j, StageTag s) {
  return tag_base + static_cast<int>(8 * j) + s;
}

bool in_range(const SortJob& job, int pid) {
  return pid >= job.first && pid < job.first + job.count;
}

std::uint64_t log2_ceil(std::size_t x) {
  return x <= 1 ? 1 : static_cast<std::uint64_t>(std::bit_width(x - 1));
}

// Inbox messages grouped by job, in delivery (source) order.
std::vector<std::vector<const bsp::Message*>> by_job(const bsp::Context& ctx,
                                                    int tag_base,
                                                    std::size_t njobs,
                                                    StageTag stage) {
  std::vector<std::vector<const bsp::Message*>> out(njobs);
  for (const auto& msg : ctx.inbox()) {
    const int rel = msg.tag - tag_base;
    if (rel < 0 || rel % 8 != stage) continue;
    const auto j = static_cast<std::size_t>(rel / 8);
    if (j < njobs) out[j].push_back(&msg);
  }
  return out;
}

void stage_local_sort(bsp::Context& ctx, std::span<SortJob> jobs, int tag_base) {
  const int pid = ctx.pid();
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    SortJob& job = jobs[j];
    if (!in_range(job, pid)) continue;
    Records& local = (*job.local)[static_cast<std::size_t>(pid)];
    ctx.charge(job.order->sort(local));
    if (job.count == 1) {
      if (job.first_pos) {
        (*job.first_pos)[static_cast<std::size_t>(pid)] =
            job.span_total < 0 ? 0 : job.offset;
      }
      continue;
    }
    const std::size_t kw = job.order->key_words();
    const std::size_t len = local.size();
    const auto pp = static_cast<std::size_t>(job.count);
    std::vector<Word> samples;
    if (len < pp + 1) {
      samples.reserve(len * kw);
      for (std::size_t t = 0; t < len; ++t) {
        samples.insert(samples.end(), local.at(t), local.at(t) + kw);
      }
    } else {
      samples.reserve((pp + 1) * kw);
      for (std::size_t s = 0; s <= pp; ++s) {
        const std::size_t t = s * (len - 1) / pp;
        samples.insert(samples.end(), local.at(t), local.at(t) + kw);
      }
    }
    ctx.charge(samples.size());
    if (!samples.empty()) {
      ctx.send(job.designated, job_tag(tag_base, j, kSample), std::move(samples));
    }
  }
}

void stage_secondary(bsp::Context& ctx, std::span<SortJob> jobs, int tag_base) {
  const int pid = ctx.pid();
  const auto inbox = by_job(ctx, tag_base, jobs.size(), kSample);
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const SortJob& job = jobs[j];
    if (job.count == 1 || job.designated != pid) continue;
    const std::size_t kw = job.order->key_words();
    Records samples;
    samples.stride = kw;
    for (const auto* msg : inbox[j]) {
      samples.data.insert(samples.data.end(), msg->words.begin(), msg->words.end());
    }
    ctx.charge(job.order->sort(samples));
    const std::size_t s = samples.size();
    if (s == 0) continue;
    const auto pp = static_cast<std::size_t>(job.count);
    std::vector<Word> chosen;
    chosen.reserve((pp + 1) * kw);
    for (std::size_t c = 0; c <= pp; ++c) {
      const std::size_t t = c * (s - 1) / pp;
      chosen.insert(chosen.end(), samples.at(t), samples.at(t) + kw);
    }
    for (int dest = job.first; dest < job.first + job.count; ++dest) {
      ctx.send(dest, job_tag(tag_base, j, kSplit), chosen);
    }
  }
}

void stage_partition(bsp::Context& ctx, std::span<SortJob> jobs, int tag_base) {
  const int pid = ctx.pid();
  const auto inbox = by_job(ctx, tag_base, jobs.size(), kSplit);
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    SortJob& job = jobs[j];
    if (job.count == 1 || !in_range(job, pid)) continue;
    Records& local = (*job.local)[static_cast<std::size_t>(pid)];
    const std::size_t kw = job.order->key_words();
    const std::size_t len = local.size();
    const auto pp = static_cast<std::size_t>(job.count);

    // Bucket boundaries: b[t] = first element not below interior splitter t.
    std::vector<std::size_t> b(pp + 1, 0);
    b[pp] = len;
    if (!inbox[j].empty()) {
      const auto& split = inbox[j].front()->words;
      if (split.size() != (pp + 1) * kw) {
        throw std::logic_error("sample_sort: malformed splitter message");
      }
      std::size_t lo = 0;
      for (std::size_t t = 1; t < pp; ++t) {
        const Word* key = split.data() + t * kw;
        std::size_t a = lo, z = len;
        while (a < z) {
          const std::size_t mid = a + (z - a) / 2;
          if (job.order->less(local.at(mid), key)) {
            a = mid + 1;
          } else {
            z = mid;
          }
        }
        b[t] = lo = a;
      }
      ctx.charge(pp * log2_ceil(len) * kw);
    } else {
      // No samples anywhere means the job is empty.
      std::fill(b.begin(), b.end() - 1, 0);
    }
    for (std::size_t t = 0; t < pp; ++t) {
      std::vector<Word> words;
      words.reserve(2 + (b[t + 1] - b[t]) * local.stride);
      words.push_back(static_cast<Word>(b[t]));
      words.push_back(static_cast<Word>(len));
      words.insert(words.end(), local.at(b[t]), local.at(b[t]) + (b[t + 1] - b[t]) * local.stride);
      ctx.send(job.first + static_cast<int>(t), job_tag(tag_base, j, kBlock),
               std::move(words));
    }
    local.clear();
  }
}

void stage_place(bsp::Context& ctx, std::span<SortJob> jobs, int tag_base) {
  const int pid = ctx.pid();
  const int p = ctx.nprocs();
  const auto inbox = by_job(ctx, tag_base, jobs.size(), kBlock);
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    SortJob& job = jobs[j];
    if (job.count == 1 || !in_range(job, pid)) continue;
    Records& local = (*job.local)[static_cast<std::size_t>(pid)];
    local.clear();
    std::int64_t before = 0;
    std::int64_t total = 0;
    for (const auto* msg : inbox[j]) {
      before += msg->words[0];
      total += msg->words[1];
      local.data.insert(local.data.end(), msg->words.begin() + 2, msg->words.end());
    }
    ctx.charge(job.order->sort(local));

    const std::int64_t length = job.span_total < 0 ? total : job.span_total;
    const std::int64_t base = (job.span_total < 0 ? 0 : job.offset) + before;
    const auto len = static_cast<std::int64_t>(local.size());
    std::int64_t t = 0;
    while (t < len) {
      const int owner = bsp::block_owner(base + t, length, p);
      const bsp::Range r = bsp::block_range(length, p, owner);
      const std::int64_t stop = std::min(len, r.hi - base);
      std::vector<Word> words;
      words.reserve(1 + static_cast<std::size_t>(stop - t) * local.stride);
      words.push_back(base + t);
      words.insert(words.end(), local.at(static_cast<std::size_t>(t)),
                   local.at(static_cast<std::size_t>(stop)));
      ctx.send(owner, job_tag(tag_base, j, kPlace), std::move(words));
      t = stop;
    }
    local.clear();
  }
}

void stage_assemble(bsp::Context& ctx, std::span<SortJob> jobs, int tag_base) {
  const int pid = ctx.pid();
  const auto inbox = by_job(ctx, tag_base, jobs.size(), kPlace);
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    SortJob& job = jobs[j];
    if (job.count == 1) continue;
    auto runs = inbox[j];
    Records& local = (*job.local)[static_cast<std::size_t>(pid)];
    if (runs.empty()) {
      if (job.first_pos) (*job.first_pos)[static_cast<std::size_t>(pid)] = -1;
      continue;
    }
    std::sort(runs.begin(), runs.end(), [](const auto* a, const auto* b) {
      return a->words[0] < b->words[0];
    });
    local.clear();
    for (const auto* msg : runs) {
      local.data.insert(local.data.end(), msg->words.begin() + 1, msg->words.end());
    }
    ctx.charge(local.data.size());
    if (job.first_pos) {
      (*job.first_pos)[static_cast<std::size_t>(pid)] = runs.front()->words[0];
    }
  }
}

}  // namespace

bool RowOrder::less(const Word* a, const Word* b) const {
  const std::size_t k = key_words();
  return std::lexicographical_compare(a, a + k, b, b + k);
}

std::uint64_t RowOrder::sort(Records& r) const {
  const std::size_t n = r.size();
  if (n <= 1) return n;
  const std::size_t width = bounds_.size();
  Word id_bound = 1;
  for (std::size_t t = 0; t < n; ++t) id_bound = std::max(id_bound, r.at(t)[width] + 1);
  radix::OpCount ops;
  std::vector<std::size_t> perm;
  const std::size_t stride = r.stride;
  const Word* data = r.data.data();
  radix::lsd_sort(
      perm, n, width + 1,
      [&](std::size_t c) { return c == width ? id_bound : bounds_[c]; },
      [&](std::size_t row, std::size_t c) { return data[row * stride + c]; },
      &ops);
  permute(r, perm);
  return ops.ops + n * stride;
}

void permute(Records& r, std::span<const std::size_t> perm) {
  std::vector<Word> out(r.data.size());
  const std::size_t s = r.stride;
  for (std::size_t t = 0; t < perm.size(); ++t) {
    std::copy_n(r.data.begin() + static_cast<std::ptrdiff_t>(perm[t] * s), s,
                out.begin() + static_cast<std::ptrdiff_t>(t * s));
  }
  r.data.swap(out);
}

int sample_sort(bsp::Machine& m, std::span<SortJob> jobs, int tag_base,
                const SortHooks& hooks, int min_stages) {
  const int p = m.nprocs();
  bool single = true;
  for (const SortJob& job : jobs) {
    if (job.count < 1 || job.first < 0 || job.first + job.count > p ||
        job.designated < job.first || job.designated >= job.first + job.count ||
        job.order == nullptr || job.local == nullptr ||
        static_cast<int>(job.local->size()) != p) {
      throw std::invalid_argument("sample_sort: malformed job");
    }
    if (job.first_pos) job.first_pos->assign(static_cast<std::size_t>(p), -1);
    single = single && job.count == 1;
  }
  const int stages = std::clamp(single ? 1 : 5, min_stages, 5);
  using StageFn = void (*)(bsp::Context&, std::span<SortJob>, int);
  static constexpr StageFn kStages[] = {stage_local_sort, stage_secondary,
                                        stage_partition, stage_place,
                                        stage_assemble};
  for (int s = 0; s < stages; ++s) {
    m.superstep([&](bsp::Context& ctx) {
      if (hooks.before) hooks.before(ctx, s);
      kStages[s](ctx, jobs, tag_base);
      if (s + 1 == stages && hooks.after) hooks.after(ctx);
    });
  }
  return stages;
}

}  // namespace dcsa::detail
