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

#include "dcsa/parsa.hpp"

#include <algorithm>
#include <memory>
#include <stdexcept>

#include "sample_sort.hpp"

namespace dcsa {

//----------------------------------------------------------------------
// Schedule
//----------------------------------------------------------------------

index_t next_v(index_t v, index_t xlen) {
  return std::max<index_t>(3, std::min(accelerate(v), xlen));
}

ParallelSchedule ParallelSchedule::fixed(index_t v) {
  if (v < 3) throw std::invalid_argument("fixed schedule needs v >= 3");
  return ParallelSchedule(false, v);
}

ParallelSchedule ParallelSchedule::parse(std::string_view spec) {
  if (spec == "accel") return accel();
  if (spec.starts_with("fixed:")) {
    return fixed(std::stoll(std::string(spec.substr(6))));
  }
  throw std::invalid_argument("unknown schedule '" + std::string(spec) +
                              "' (expected fixed:V or accel)");
}

index_t ParallelSchedule::initial(index_t n) const {
  return std::clamp<index_t>(v0_, 3, std::max<index_t>(n, 3));
}

index_t ParallelSchedule::next(index_t v, index_t xlen) const {
  if (accelerated_) return next_v(v, xlen);
  return std::max<index_t>(3, std::min(v0_, xlen));
}

std::string ParallelSchedule::name() const {
  return accelerated_ ? "accel" : "fixed:" + std::to_string(v0_);
}

VSchedule ParallelSchedule::sequential() const {
  return accelerated_ ? VSchedule::accelerated() : VSchedule::fixed(v0_);
}

nlohmann::json RoundMetrics::to_json() const {
  nlohmann::json rs = nlohmann::json::array();
  for (const auto& r : rounds) {
    rs.push_back({{"v", r.v}, {"d", r.d}, {"n", r.n},
                  {"supersteps", r.supersteps}, {"w", r.w}, {"h", r.h}});
  }
  nlohmann::json out = {{"rounds", rs}, {"total", total.to_json(p)}};
  if (handoff) {
    out["handoff"] = {{"n", handoff->n},
                      {"supersteps", handoff->supersteps},
                      {"w", handoff->w},
                      {"h", handoff->h}};
  } else {
    out["handoff"] = nullptr;
  }
  return out;
}

bool sa_slack_ok(index_t n, int p) {
  // n >= p^{9/2}  <=>  n^2 >= p^9
  using wide = unsigned __int128;
  if (n < 0) return false;
  wide p9 = 1;
  for (int k = 0; k < 9; ++k) p9 *= static_cast<wide>(p);
  return static_cast<wide>(n) * static_cast<wide>(n) >= p9;
}

namespace {

using bsp::Context;
using bsp::Machine;
using bsp::Range;
using bsp::Word;
using detail::Records;

enum Tag : int {
  kBaseSummary = 1,
  kSampleSummary,
  kReduced,
  kRank,
  kOrd,
  kGroupSummary,
  kPairPart,
  kPairBack,
  kHandoff,
};
constexpr int kEngineTag = 100;
constexpr int kHandoffLabel = -1;

enum Decision : int { kUndecided, kDone, kDistinct, kSequential, kRecurse };

//----------------------------------------------------------------------
// Messaging helpers
//----------------------------------------------------------------------

// (index, value) pairs batched per destination.
class PairMail {
 public:
  explicit PairMail(int p) : out_(static_cast<std::size_t>(p)) {}
  void add(int dest, Word a, Word b) {
    auto& o = out_[static_cast<std::size_t>(dest)];
    o.push_back(a);
    o.push_back(b);
  }
  void flush(Context& ctx, int tag) {
    for (std::size_t d = 0; d < out_.size(); ++d) {
      if (!out_[d].empty()) ctx.send(static_cast<int>(d), tag, std::move(out_[d]));
      out_[d].clear();
    }
  }

 private:
  std::vector<std::vector<Word>> out_;
};

template <class F>
std::uint64_t for_pairs(const Context& ctx, int tag, F f) {
  std::uint64_t words = 0;
  for (const auto& msg : ctx.inbox()) {
    if (msg.tag != tag) continue;
    for (std::size_t t = 0; t + 1 < msg.words.size(); t += 2) {
      f(msg.words[t], msg.words[t + 1]);
    }
    words += msg.words.size();
  }
  return words;
}

// Messages with `tag`, one per source at most, indexed by source.
std::vector<const bsp::Message*> by_source(const Context& ctx, int tag) {
  std::vector<const bsp::Message*> out(static_cast<std::size_t>(ctx.nprocs()), nullptr);
  for (const auto& msg : ctx.inbox()) {
    if (msg.tag == tag) out[static_cast<std::size_t>(msg.source)] = &msg;
  }
  return out;
}

// The owner of position i of a length-n block distribution (position n
// belongs with n - 1) followed by every earlier processor whose halo of
// `width` entries past its block covers i.
template <class F>
void for_holders(index_t i, index_t n, int p, index_t width, F f) {
  const int owner = bsp::block_owner(std::min(i, n - 1), n, p);
  f(owner);
  for (int q = owner - 1; q >= 0; --q) {
    if (bsp::block_range(n, p, q).hi + width <= i) break;
    f(q);
  }
}

bool same_row(const Word* a, const Word* b, std::size_t w) {
  return std::equal(a, a + w, b);
}

//----------------------------------------------------------------------
// Order used by the merge: records [i, ord, rank[i + l] for each cover
// element], compared through the cover shift of the two residues.
//----------------------------------------------------------------------
class MergeOrder final : public detail::RecordOrder {
 public:
  explicit MergeOrder(const DifferenceCover& dc)
      : dc_(dc), v_(dc.period()), stride_(static_cast<std::size_t>(dc.size()) + 2) {}

  std::size_t key_words() const override { return stride_; }

  bool less(const Word* a, const Word* b) const override {
    if (a[0] == b[0]) return false;
    const index_t ka = a[0] % v_;
    const index_t kb = b[0] % v_;
    if (ka == kb) return a[1] < b[1];
    const index_t l = dc_.shift(ka, kb);
    const Word ra = a[2 + dc_.position((ka + l) % v_)];
    const Word rb = b[2 + dc_.position((kb + l) % v_)];
    if (ra == rb) {
      throw std::logic_error("merge: suffixes " + std::to_string(a[0]) + " and " +
                             std::to_string(b[0]) + " compare equal");
    }
    return ra < rb;
  }

  std::uint64_t sort(Records& r) const override {
    const std::size_t n = r.size();
    if (n <= 1) return n;
    Word ord_bound = 1;
    for (std::size_t t = 0; t < n; ++t) ord_bound = std::max(ord_bound, r.at(t)[1] + 1);
    radix::OpCount ops;
    std::vector<std::size_t> perm;
    radix::lsd_sort(
        perm, n, 2, [&](std::size_t c) { return c == 0 ? v_ : ord_bound; },
        [&](std::size_t row, std::size_t c) {
          return c == 0 ? r.at(row)[0] % v_ : r.at(row)[1];
        },
        &ops);
    std::vector<index_t> handles(perm.begin(), perm.end());
    std::vector<std::span<const index_t>> runs;
    const std::span<const index_t> all(handles);
    std::size_t start = 0;
    for (std::size_t t = 1; t <= n; ++t) {
      if (t == n || r.at(perm[t])[0] % v_ != r.at(perm[t - 1])[0] % v_) {
        runs.push_back(all.subspan(start, t - start));
        start = t;
      }
    }
    std::vector<index_t> merged;
    merged.reserve(n);
    std::uint64_t cmp = 0;
    tournament_merge(
        std::span<const std::span<const index_t>>(runs),
        [&](index_t a, index_t b) {
          return less(r.at(static_cast<std::size_t>(a)), r.at(static_cast<std::size_t>(b)));
        },
        merged, &cmp);
    std::vector<std::size_t> order(merged.begin(), merged.end());
    detail::permute(r, order);
    return ops.ops + cmp + n * stride_;
  }

 private:
  const DifferenceCover& dc_;
  index_t v_;
  std::size_t stride_;
};

//----------------------------------------------------------------------
// Level state
//----------------------------------------------------------------------

// A suffix group whose positions [gs, ge) cross processors a..b.
struct SpanGroup {
  index_t gs = 0;
  index_t ge = 0;
  int a = 0;
  int b = 0;
  bool wide() const { return b - a >= 2; }
  bool holds(int q) const { return a <= q && q <= b; }
};

struct Proc {
  Range r;
  std::vector<index_t> chars;  // [lo, hi + v - 1)
  std::vector<index_t> rank;   // [lo, hi + v)
  std::vector<index_t> ord;    // [lo, hi)
  std::vector<index_t> sa;     // positions [lo, hi) of this level's order

  int decision = kUndecided;
  index_t distinct = 0;
  std::vector<SpanGroup> spans;
  std::vector<Records> wide_parts;  // parallel to spans
  Records pair_part;                // own share of a two-processor group
};

struct Shared {
  int p = 1;
  index_t n0 = 0;
  ParallelSchedule schedule = ParallelSchedule::accel();
  SlackPolicy slack = SlackPolicy::enforce;
  std::vector<std::string>* warnings = nullptr;
  std::vector<RoundInfo> rounds;
  std::optional<HandoffInfo> handoff;
};

class Level {
 public:
  Level(Machine& m, Shared& sh, int depth, index_t n, index_t v, index_t sigma)
      : m_(m), sh_(sh), depth_(depth), n_(n), v_(v), sigma_(std::max<index_t>(sigma, 1)),
        dc_(v), merge_order_(dc_) {
    const int p = sh_.p;
    procs_.resize(static_cast<std::size_t>(p));
    for (int pi = 0; pi < p; ++pi) {
      Proc& st = procs_[static_cast<std::size_t>(pi)];
      st.r = bsp::block_range(n, p, pi);
      st.chars.assign(static_cast<std::size_t>(st.r.size() + v - 1), kPad);
    }
    index_t at = 0;
    for (index_t k : dc_.elements()) {
      offsets_.push_back(at);
      at += k <= n ? (n - k) / v + 1 : 0;
    }
    xlen_ = at;
    // Sample positions below n; the padding row at n is not counted.
    samples_ = xlen_ - (dc_.contains(n % v) ? 1 : 0);
  }

  Proc& proc(int pid) { return procs_[static_cast<std::size_t>(pid)]; }

  // Top level only: the text block and its halo.
  void load(const Text& t) {
    for (auto& st : procs_) {
      for (index_t i = st.r.lo; i < st.r.hi + v_ - 1; ++i) {
        st.chars[static_cast<std::size_t>(i - st.r.lo)] = t.at(i);
      }
    }
  }

  // Runs at the start of this level's first superstep (fills chars).
  std::function<void(Context&)> ingest;
  // Runs at the end of this level's last superstep.
  std::function<void(Context&)> finish;

  void run(bool top) {
    m_.set_label(depth_);
    if (static_cast<int>(sh_.rounds.size()) <= depth_) sh_.rounds.resize(static_cast<std::size_t>(depth_) + 1);
    sh_.rounds[static_cast<std::size_t>(depth_)] = {v_, dc_.size(), n_, 0, 0, 0};
    if (top && base_case()) return;
    sort_samples();
    const int decision = reduce();
    if (decision == kSequential) {
      sequential();
    } else if (decision == kRecurse) {
      recurse();
    }
    m_.set_label(depth_);
    order_nonsample();
    sort_prefixes();
    classify();
    merge();
  }

  std::vector<index_t> gather_sa() const {
    std::vector<index_t> out;
    out.reserve(static_cast<std::size_t>(n_));
    for (const auto& st : procs_) out.insert(out.end(), st.sa.begin(), st.sa.end());
    return out;
  }

 private:
  index_t char_at(const Proc& st, index_t i) const {
    if (i >= n_) return kPad;
    return st.chars[static_cast<std::size_t>(i - st.r.lo)];
  }

  index_t sample_pos(index_t i) const {
    const index_t k = i % v_;
    return offsets_[static_cast<std::size_t>(dc_.position(k))] + (i - k) / v_;
  }

  index_t sample_at(index_t pos) const {
    const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), pos);
    const auto j = static_cast<std::size_t>(it - offsets_.begin() - 1);
    return dc_.elements()[j] + v_ * (pos - offsets_[j]);
  }

  void run_sort(std::span<detail::SortJob> jobs, const detail::SortHooks& hooks,
                int min_stages = 1) {
    detail::sample_sort(m_, jobs, kEngineTag, hooks, min_stages);
  }

  detail::SortJob block_job(const detail::RecordOrder& order,
                            std::vector<Records>& local,
                            std::vector<std::int64_t>* first_pos = nullptr,
                            int designated = 0) {
    detail::SortJob job;
    job.first = 0;
    job.count = sh_.p;
    job.designated = designated;
    job.order = &order;
    job.local = &local;
    job.first_pos = first_pos;
    return job;
  }

  //--------------------------------------------------------------------
  // Recursion base: sort single characters, look for equal neighbours,
  // including across processor boundaries.
  //--------------------------------------------------------------------
  bool base_case() {
    const int p = sh_.p;
    detail::RowOrder order(1, sigma_);
    std::vector<Records> local(static_cast<std::size_t>(p));
    auto job = block_job(order, local);
    detail::SortHooks hooks;
    hooks.before = [&](Context& ctx, int stage) {
      if (stage != 0) return;
      const Proc& st = proc(ctx.pid());
      Records& rec = local[static_cast<std::size_t>(ctx.pid())];
      rec.stride = 2;
      for (index_t i = st.r.lo; i < st.r.hi; ++i) {
        rec.data.push_back(char_at(st, i));
        rec.data.push_back(i);
      }
      ctx.charge(rec.data.size());
    };
    hooks.after = [&](Context& ctx) {
      const Records& rec = local[static_cast<std::size_t>(ctx.pid())];
      Word dup = 0;
      for (std::size_t t = 1; t < rec.size() && !dup; ++t) dup = rec.at(t)[0] == rec.at(t - 1)[0];
      ctx.charge(rec.size());
      std::vector<Word> summary{static_cast<Word>(rec.size()), dup};
      if (!rec.empty()) {
        summary.push_back(rec.at(0)[0]);
        summary.push_back(rec.at(rec.size() - 1)[0]);
      }
      for (int q = 0; q < ctx.nprocs(); ++q) ctx.send(q, kBaseSummary, summary);
    };
    run_sort(std::span<detail::SortJob>(&job, 1), hooks);

    m_.superstep([&](Context& ctx) {
      const auto sums = by_source(ctx, kBaseSummary);
      bool distinct = true;
      const bsp::Message* prev = nullptr;
      for (const auto* s : sums) {
        if (s->words[0] == 0) continue;
        if (s->words[1]) distinct = false;
        if (prev && prev->words[3] == s->words[2]) distinct = false;
        prev = s;
      }
      ctx.charge(sums.size());
      Proc& st = proc(ctx.pid());
      st.decision = distinct ? kDone : kUndecided;
      if (!distinct) return;
      const Records& rec = local[static_cast<std::size_t>(ctx.pid())];
      st.sa.resize(rec.size());
      for (std::size_t t = 0; t < rec.size(); ++t) st.sa[t] = rec.at(t)[1];
      ctx.charge(rec.size());
      if (finish) finish(ctx);
    });
    return agreed_decision() == kDone;
  }

  int agreed_decision() const {
    const int d = procs_.front().decision;
    for (const auto& st : procs_) {
      if (st.decision != d) throw std::logic_error("processors disagree on the next step");
    }
    return d;
  }

  //--------------------------------------------------------------------
  // Steps 0 and 1: sample rows [x[i..i+v), pos, i], sorted.
  //--------------------------------------------------------------------
  void sort_samples() {
    const int p = sh_.p;
    const auto v = static_cast<std::size_t>(v_);
    sample_order_ = std::make_unique<detail::RowOrder>(v, sigma_);
    sample_local_.assign(static_cast<std::size_t>(p), {});
    auto job = block_job(*sample_order_, sample_local_);
    detail::SortHooks hooks;
    hooks.before = [&](Context& ctx, int stage) {
      if (stage != 0) return;
      if (ingest) ingest(ctx);
      Proc& st = proc(ctx.pid());
      st.rank.assign(static_cast<std::size_t>(st.r.size() + v_), kPad);
      ctx.charge(st.rank.size());
      Records& rec = sample_local_[static_cast<std::size_t>(ctx.pid())];
      rec.stride = v + 2;
      index_t end = st.r.hi;
      if (st.r.hi == n_ && st.r.lo < n_) end = n_ + 1;  // the padding row at n
      for (index_t i = st.r.lo; i < end; ++i) {
        if (!dc_.contains(i % v_)) continue;
        for (index_t c = 0; c < v_; ++c) rec.data.push_back(char_at(st, i + c));
        rec.data.push_back(sample_pos(i));
        rec.data.push_back(i);
      }
      ctx.charge(rec.data.size());
    };
    hooks.after = [&](Context& ctx) {
      const Records& rec = sample_local_[static_cast<std::size_t>(ctx.pid())];
      Word fresh = 0;
      for (std::size_t t = 1; t < rec.size(); ++t) {
        fresh += !same_row(rec.at(t), rec.at(t - 1), v);
      }
      ctx.charge(rec.size() * v);
      std::vector<Word> summary{static_cast<Word>(rec.size()), fresh};
      if (!rec.empty()) {
        summary.insert(summary.end(), rec.at(0), rec.at(0) + v);
        summary.insert(summary.end(), rec.at(rec.size() - 1), rec.at(rec.size() - 1) + v);
      }
      for (int q = 0; q < ctx.nprocs(); ++q) ctx.send(q, kSampleSummary, summary);
    };
    run_sort(std::span<detail::SortJob>(&job, 1), hooks);
  }

  //--------------------------------------------------------------------
  // Dense ranks of the sorted sample rows form X'.  Decide how the sample
  // order is found and ship X' (or the ranks themselves) accordingly.
  //--------------------------------------------------------------------
  int reduce() {
    const int p = sh_.p;
    const auto v = static_cast<std::size_t>(v_);
    m_.superstep([&](Context& ctx) {
      const auto sums = by_source(ctx, kSampleSummary);
      // Distinct rows before each processor and in total.
      index_t before_me = 0;
      index_t total = 0;
      bool my_first_fresh = true;
      const Word* prev_last = nullptr;
      for (int q = 0; q < p; ++q) {
        const auto& w = sums[static_cast<std::size_t>(q)]->words;
        if (w[0] == 0) continue;
        const Word* first = w.data() + 2;
        const bool fresh_first = prev_last == nullptr || !same_row(prev_last, first, v);
        if (q == ctx.pid()) {
          before_me = total;
          my_first_fresh = fresh_first;
        }
        total += w[1] + (fresh_first ? 1 : 0);
        prev_last = w.data() + 2 + v;
      }
      ctx.charge(static_cast<std::uint64_t>(p) * v);

      Proc& st = proc(ctx.pid());
      st.distinct = total;
      if (total == xlen_) {
        st.decision = kDistinct;
      } else if (samples_ * p <= sh_.n0 || xlen_ < 3) {
        st.decision = kSequential;
      } else {
        st.decision = kRecurse;
      }

      const Records& rec = sample_local_[static_cast<std::size_t>(ctx.pid())];
      PairMail mail(p);
      index_t cur = before_me - 1;
      const index_t child_v = sh_.schedule.next(v_, xlen_);
      for (std::size_t t = 0; t < rec.size(); ++t) {
        const bool fresh = t == 0 ? my_first_fresh : !same_row(rec.at(t), rec.at(t - 1), v);
        if (fresh) ++cur;
        const Word pos = rec.at(t)[v];
        const Word i = rec.at(t)[v + 1];
        switch (st.decision) {
          case kDistinct:
            for_holders(i, n_, p, v_, [&](int q) { mail.add(q, i, cur); });
            break;
          case kSequential:
            mail.add(0, pos, cur);
            break;
          default:
            for_holders(pos, xlen_, p, child_v - 1, [&](int q) { mail.add(q, pos, cur); });
            break;
        }
      }
      ctx.charge(rec.size() * 2);
      mail.flush(ctx, st.decision == kDistinct    ? kRank
                      : st.decision == kSequential ? kHandoff
                                                   : kReduced);
    });
    sample_local_.clear();
    return agreed_decision();
  }

  // X' is short: processor 0 solves it sequentially and returns ranks.
  void sequential() {
    const int p = sh_.p;
    m_.set_label(kHandoffLabel);
    m_.superstep([&](Context& ctx) {
      if (ctx.pid() != 0) return;
      std::vector<index_t> reduced(static_cast<std::size_t>(xlen_), 0);
      ctx.charge(for_pairs(ctx, kHandoff, [&](Word pos, Word r) {
        reduced[static_cast<std::size_t>(pos)] = r;
      }));
      SeqStats stats;
      const SuffixArray sub = dc_suffix_array(Text(std::move(reduced)), VSchedule::fixed(3), &stats);
      ctx.charge(stats.total_ops());
      PairMail mail(p);
      for (index_t q = 0; q < xlen_; ++q) {
        const index_t i = sample_at(sub[static_cast<std::size_t>(q)]);
        for_holders(i, n_, p, v_, [&](int dest) { mail.add(dest, i, q); });
      }
      ctx.charge(static_cast<std::uint64_t>(xlen_) * 2);
      mail.flush(ctx, kRank);
    });
    sh_.handoff = HandoffInfo{xlen_, 0, 0, 0};
  }

  void recurse() {
    const int p = sh_.p;
    const index_t child_v = sh_.schedule.next(v_, xlen_);
    Level child(m_, sh_, depth_ + 1, xlen_, child_v, procs_.front().distinct);
    child.ingest = [&child](Context& ctx) {
      Proc& st = child.proc(ctx.pid());
      ctx.charge(for_pairs(ctx, kReduced, [&](Word pos, Word r) {
        st.chars[static_cast<std::size_t>(pos - st.r.lo)] = r;
      }));
    };
    child.finish = [this, &child, p](Context& ctx) {
      const Proc& cst = child.proc(ctx.pid());
      PairMail mail(p);
      for (index_t q = cst.r.lo; q < cst.r.hi; ++q) {
        const index_t i = sample_at(cst.sa[static_cast<std::size_t>(q - cst.r.lo)]);
        for_holders(i, n_, p, v_, [&](int dest) { mail.add(dest, i, q); });
      }
      ctx.charge(static_cast<std::uint64_t>(cst.r.size()) * 2);
      mail.flush(ctx, kRank);
    };
    child.run(false);
  }

  //--------------------------------------------------------------------
  // Step 2: one concurrent sort per non-sample class k, on tuples
  // (x[i..i+l_k), rank[i+l_k]) with id (i - k)/v.
  //--------------------------------------------------------------------
  void order_nonsample() {
    const int p = sh_.p;
    std::vector<index_t> classes;
    for (index_t k = 0; k < v_ && k < n_; ++k) {
      if (!dc_.contains(k)) classes.push_back(k);
    }
    // With v - |D| >= p some processor is designated for several sorts;
    // still correct and still the same supersteps.
    if (static_cast<int>(classes.size()) >= p && sh_.warnings) {
      sh_.warnings->push_back("level " + std::to_string(depth_) + ": v - |D| = " +
                              std::to_string(classes.size()) + " concurrent sorts share " +
                              std::to_string(p) + " designated processors");
    }
    const std::size_t nc = classes.size();
    std::vector<index_t> steps(nc);
    std::vector<std::unique_ptr<detail::RowOrder>> orders;
    std::vector<std::vector<Records>> locals(nc, std::vector<Records>(static_cast<std::size_t>(p)));
    std::vector<std::vector<std::int64_t>> first(nc);
    std::vector<detail::SortJob> jobs;
    for (std::size_t j = 0; j < nc; ++j) {
      steps[j] = dc_.forward_step(classes[j]);
      std::vector<Word> bounds(static_cast<std::size_t>(steps[j]), sigma_);
      bounds.push_back(std::max<index_t>(xlen_, 1));
      orders.push_back(std::make_unique<detail::RowOrder>(std::move(bounds)));
      jobs.push_back(block_job(*orders.back(), locals[j], &first[j], static_cast<int>(j) % p));
    }

    detail::SortHooks hooks;
    hooks.before = [&](Context& ctx, int stage) {
      if (stage != 0) return;
      Proc& st = proc(ctx.pid());
      const index_t lo = st.r.lo;
      ctx.charge(for_pairs(ctx, kRank, [&](Word i, Word q) {
        st.rank[static_cast<std::size_t>(i - lo)] = q;
      }));
      st.ord.assign(static_cast<std::size_t>(st.r.size()), kPad);
      for (index_t i = lo; i < st.r.hi; ++i) {
        if (dc_.contains(i % v_)) {
          st.ord[static_cast<std::size_t>(i - lo)] = st.rank[static_cast<std::size_t>(i - lo)];
        }
      }
      ctx.charge(st.ord.size());
      for (std::size_t j = 0; j < nc; ++j) {
        const index_t k = classes[j];
        const index_t l = steps[j];
        Records& rec = locals[j][static_cast<std::size_t>(ctx.pid())];
        rec.stride = static_cast<std::size_t>(l) + 2;
        const index_t start = lo + ((k - lo % v_) % v_ + v_) % v_;
        for (index_t i = start; i < st.r.hi; i += v_) {
          for (index_t c = 0; c < l; ++c) rec.data.push_back(char_at(st, i + c));
          rec.data.push_back(st.rank[static_cast<std::size_t>(i + l - lo)]);
          rec.data.push_back((i - k) / v_);
        }
        ctx.charge(rec.data.size());
      }
    };
    hooks.after = [&](Context& ctx) {
      PairMail mail(p);
      for (std::size_t j = 0; j < nc; ++j) {
        const Records& rec = locals[j][static_cast<std::size_t>(ctx.pid())];
        const std::int64_t at = first[j][static_cast<std::size_t>(ctx.pid())];
        const std::size_t id = rec.stride - 1;
        for (std::size_t t = 0; t < rec.size(); ++t) {
          const index_t i = classes[j] + v_ * rec.at(t)[id];
          mail.add(bsp::block_owner(i, n_, p), i, at + static_cast<index_t>(t));
        }
        ctx.charge(rec.size() * 2);
      }
      mail.flush(ctx, kOrd);
    };
    run_sort(jobs, hooks);
  }

  //--------------------------------------------------------------------
  // Step 3: every suffix as [x[i..i+v), i, ord, rank[i + l] for the |D|
  // shifts l that land in the cover], sorted by its first v characters.
  //--------------------------------------------------------------------
  void sort_prefixes() {
    const int p = sh_.p;
    const auto v = static_cast<std::size_t>(v_);
    const auto d = static_cast<std::size_t>(dc_.size());
    prefix_order_ = std::make_unique<detail::RowOrder>(v, sigma_);
    prefix_local_.assign(static_cast<std::size_t>(p), {});
    auto job = block_job(*prefix_order_, prefix_local_);
    detail::SortHooks hooks;
    hooks.before = [&](Context& ctx, int stage) {
      if (stage != 0) return;
      Proc& st = proc(ctx.pid());
      const index_t lo = st.r.lo;
      ctx.charge(for_pairs(ctx, kOrd, [&](Word i, Word o) {
        st.ord[static_cast<std::size_t>(i - lo)] = o;
      }));
      Records& rec = prefix_local_[static_cast<std::size_t>(ctx.pid())];
      rec.stride = v + 2 + d;
      rec.data.reserve(static_cast<std::size_t>(st.r.size()) * rec.stride);
      for (index_t i = lo; i < st.r.hi; ++i) {
        for (index_t c = 0; c < v_; ++c) rec.data.push_back(char_at(st, i + c));
        rec.data.push_back(i);
        rec.data.push_back(st.ord[static_cast<std::size_t>(i - lo)]);
        const index_t k = i % v_;
        for (index_t e : dc_.elements()) {
          const index_t l = ((e - k) % v_ + v_) % v_;
          rec.data.push_back(st.rank[static_cast<std::size_t>(i + l - lo)]);
        }
      }
      ctx.charge(rec.data.size());
    };
    hooks.after = [&](Context& ctx) {
      const Proc& st = proc(ctx.pid());
      const Records& rec = prefix_local_[static_cast<std::size_t>(ctx.pid())];
      if (static_cast<index_t>(rec.size()) != st.r.size()) {
        throw std::logic_error("prefix sort left an unbalanced block");
      }
      std::vector<Word> summary{static_cast<Word>(rec.size())};
      if (!rec.empty()) {
        std::size_t last_start = 0;
        std::size_t first_end = rec.size();
        for (std::size_t t = 1; t < rec.size(); ++t) {
          if (!same_row(rec.at(t), rec.at(t - 1), v)) {
            if (first_end == rec.size()) first_end = t;
            last_start = t;
          }
        }
        ctx.charge(rec.size() * v);
        summary.push_back(st.r.lo + static_cast<index_t>(last_start));
        summary.push_back(st.r.lo + static_cast<index_t>(first_end));
        summary.insert(summary.end(), rec.at(0), rec.at(0) + v);
        summary.insert(summary.end(), rec.at(rec.size() - 1), rec.at(rec.size() - 1) + v);
      }
      for (int q = 0; q < ctx.nprocs(); ++q) ctx.send(q, kGroupSummary, summary);
    };
    run_sort(std::span<detail::SortJob>(&job, 1), hooks);
  }

  //--------------------------------------------------------------------
  // Step 4, first superstep: find the groups that cross processor
  // boundaries, merge every group held by one processor, ship shares of
  // two-processor groups to the first of the two.
  //--------------------------------------------------------------------
  std::vector<SpanGroup> find_spans(const std::vector<const bsp::Message*>& sums) const {
    const auto v = static_cast<std::size_t>(v_);
    const int p = sh_.p;
    std::vector<SpanGroup> out;
    bool open = false;
    SpanGroup cur;
    int prev = -1;
    auto close = [&](index_t ge) {
      cur.ge = ge;
      if (cur.b > cur.a) out.push_back(cur);
      open = false;
    };
    for (int q = 0; q < p; ++q) {
      const auto& w = sums[static_cast<std::size_t>(q)]->words;
      if (w[0] == 0) continue;
      const Range r = bsp::block_range(n_, p, q);
      if (open) {
        const auto& pw = sums[static_cast<std::size_t>(prev)]->words;
        if (same_row(pw.data() + 3 + v, w.data() + 3, v)) {
          cur.b = q;
          if (w[2] < r.hi) {
            close(w[2]);
          } else {
            prev = q;
            continue;
          }
        } else {
          close(bsp::block_range(n_, p, prev).hi);
        }
      }
      cur = SpanGroup{w[1], 0, q, q};
      open = true;
      prev = q;
    }
    if (open) close(bsp::block_range(n_, p, prev).hi);
    return out;
  }

  Records merge_records(const Records& rec, std::size_t from, std::size_t to) const {
    const auto v = static_cast<std::size_t>(v_);
    Records out;
    out.stride = rec.stride - v;
    out.data.reserve((to - from) * out.stride);
    for (std::size_t t = from; t < to; ++t) {
      out.data.insert(out.data.end(), rec.at(t) + v, rec.at(t) + rec.stride);
    }
    return out;
  }

  void classify() {
    const int p = sh_.p;
    const auto v = static_cast<std::size_t>(v_);
    m_.superstep([&](Context& ctx) {
      Proc& st = proc(ctx.pid());
      const auto sums = by_source(ctx, kGroupSummary);
      st.spans = find_spans(sums);
      ctx.charge(static_cast<std::uint64_t>(p) * v);
      for (int q = 0; q < p; ++q) {
        int wide = 0;
        for (const auto& g : st.spans) wide += g.wide() && g.holds(q);
        if (wide > 2) {
          throw std::logic_error("processor " + std::to_string(q) + " holds " +
                                 std::to_string(wide) + " wide groups");
        }
      }

      const Records& rec = prefix_local_[static_cast<std::size_t>(ctx.pid())];
      const index_t lo = st.r.lo;
      st.sa.assign(static_cast<std::size_t>(st.r.size()), kPad);
      st.wide_parts.assign(st.spans.size(), Records{});
      index_t local_lo = lo;
      index_t local_hi = st.r.hi;
      for (std::size_t s = 0; s < st.spans.size(); ++s) {
        const SpanGroup& g = st.spans[s];
        if (!g.holds(ctx.pid())) continue;
        const index_t from = std::max(g.gs, lo);
        const index_t to = std::min(g.ge, st.r.hi);
        Records share = merge_records(rec, static_cast<std::size_t>(from - lo),
                                      static_cast<std::size_t>(to - lo));
        ctx.charge(share.data.size());
        if (g.gs <= lo) {
          local_lo = std::max(local_lo, to);
        } else {
          local_hi = std::min(local_hi, from);
        }
        if (g.wide()) {
          st.wide_parts[s] = std::move(share);
        } else if (ctx.pid() == g.b) {
          ctx.send(g.a, kPairPart, std::move(share.data));
        } else {
          st.pair_part = std::move(share);
        }
      }

      // Groups held entirely here.
      std::size_t t = static_cast<std::size_t>(local_lo - lo);
      const auto end = static_cast<std::size_t>(local_hi - lo);
      while (t < end) {
        std::size_t u = t + 1;
        while (u < end && same_row(rec.at(u), rec.at(t), v)) ++u;
        if (u - t == 1) {
          st.sa[t] = rec.at(t)[v];
        } else {
          Records group = merge_records(rec, t, u);
          ctx.charge(merge_order_.sort(group));
          for (std::size_t e = 0; e < group.size(); ++e) st.sa[t + e] = group.at(e)[0];
        }
        t = u;
      }
      ctx.charge(static_cast<std::uint64_t>(end) * v);
      st.decision = static_cast<int>(st.spans.size());
    });
    prefix_local_.clear();
    agreed_decision();
  }

  //--------------------------------------------------------------------
  // Step 4, remaining supersteps: two-processor groups are merged on their
  // first processor and the second share sent back; groups over three or
  // more processors are merged by regular sampling with the first
  // processor designated.
  //--------------------------------------------------------------------
  void merge() {
    const int p = sh_.p;
    const std::vector<SpanGroup> spans = procs_.front().spans;
    std::vector<std::size_t> wide_ids;
    bool pairs = false;
    for (std::size_t s = 0; s < spans.size(); ++s) {
      if (spans[s].wide()) {
        wide_ids.push_back(s);
      } else {
        pairs = true;
      }
    }
    const std::size_t nw = wide_ids.size();
    std::vector<std::vector<Records>> locals(nw, std::vector<Records>(static_cast<std::size_t>(p)));
    std::vector<std::vector<std::int64_t>> first(nw);
    std::vector<detail::SortJob> jobs;
    for (std::size_t j = 0; j < nw; ++j) {
      const SpanGroup& g = spans[wide_ids[j]];
      detail::SortJob job;
      job.first = g.a;
      job.count = g.b - g.a + 1;
      job.designated = g.a;
      job.order = &merge_order_;
      job.local = &locals[j];
      job.offset = g.gs;
      job.span_total = n_;
      job.first_pos = &first[j];
      jobs.push_back(job);
    }

    detail::SortHooks hooks;
    hooks.before = [&](Context& ctx, int stage) {
      Proc& st = proc(ctx.pid());
      const index_t lo = st.r.lo;
      if (stage == 0) {
        for (std::size_t j = 0; j < nw; ++j) {
          Records& part = st.wide_parts[wide_ids[j]];
          if (spans[wide_ids[j]].holds(ctx.pid())) {
            part.stride = merge_order_.key_words();
            locals[j][static_cast<std::size_t>(ctx.pid())] = std::move(part);
          }
        }
        for (const auto& g : spans) {
          if (g.wide() || g.a != ctx.pid()) continue;
          Records group = std::move(st.pair_part);
          group.stride = merge_order_.key_words();
          for (const auto& msg : ctx.inbox()) {
            if (msg.tag == kPairPart) {
              group.data.insert(group.data.end(), msg.words.begin(), msg.words.end());
            }
          }
          ctx.charge(merge_order_.sort(group));
          const auto mine = static_cast<std::size_t>(st.r.hi - g.gs);
          for (std::size_t e = 0; e < mine; ++e) {
            st.sa[static_cast<std::size_t>(g.gs - lo) + e] = group.at(e)[0];
          }
          std::vector<Word> back;
          back.reserve(group.size() - mine);
          for (std::size_t e = mine; e < group.size(); ++e) back.push_back(group.at(e)[0]);
          ctx.send(g.b, kPairBack, std::move(back));
        }
      } else if (stage == 1) {
        for (const auto& msg : ctx.inbox()) {
          if (msg.tag != kPairBack) continue;
          std::copy(msg.words.begin(), msg.words.end(), st.sa.begin());
          ctx.charge(msg.words.size());
        }
      }
    };
    hooks.after = [&](Context& ctx) {
      Proc& st = proc(ctx.pid());
      for (std::size_t j = 0; j < nw; ++j) {
        const Records& rec = locals[j][static_cast<std::size_t>(ctx.pid())];
        const std::int64_t at = first[j][static_cast<std::size_t>(ctx.pid())];
        for (std::size_t e = 0; e < rec.size(); ++e) {
          st.sa[static_cast<std::size_t>(at - st.r.lo) + e] = rec.at(e)[0];
        }
        ctx.charge(rec.size());
      }
      if (finish) finish(ctx);
    };
    run_sort(jobs, hooks, pairs ? 2 : 1);
  }

  Machine& m_;
  Shared& sh_;
  int depth_;
  index_t n_;
  index_t v_;
  index_t sigma_;
  DifferenceCover dc_;
  MergeOrder merge_order_;
  std::vector<index_t> offsets_;
  index_t xlen_ = 0;
  index_t samples_ = 0;
  std::vector<Proc> procs_;

  std::unique_ptr<detail::RowOrder> sample_order_;
  std::vector<Records> sample_local_;
  std::unique_ptr<detail::RowOrder> prefix_order_;
  std::vector<Records> prefix_local_;
};

void fill_metrics(RoundMetrics& metrics, Shared& sh, const bsp::CostLedger& ledger) {
  metrics.rounds = sh.rounds;
  metrics.handoff = sh.handoff;
  for (const auto& s : ledger.supersteps()) {
    if (s.label == kHandoffLabel) {
      if (!metrics.handoff) metrics.handoff = HandoffInfo{};
      metrics.handoff->supersteps += 1;
      metrics.handoff->w += s.w;
      metrics.handoff->h += s.h;
    } else if (s.label >= 0 && static_cast<std::size_t>(s.label) < metrics.rounds.size()) {
      auto& r = metrics.rounds[static_cast<std::size_t>(s.label)];
      r.supersteps += 1;
      r.w += s.w;
      r.h += s.h;
    }
  }
  metrics.total = ledger;
}

}  // namespace

ParallelRun bsp_suffix_array(const Text& t, const bsp::Config& cfg,
                             const ParallelOptions& options) {
  cfg.validate();
  const index_t n = t.size();
  const int p = cfg.p;
  ParallelRun run;
  if (p > 1 && n < p) {
    throw std::invalid_argument("bsp_suffix_array: n=" + std::to_string(n) +
                                " is smaller than p=" + std::to_string(p));
  }
  if (p > 1 && !sa_slack_ok(n, p)) {
    const std::string msg = "suffix array slackness: n=" + std::to_string(n) +
                            " < p^(9/2) for p=" + std::to_string(p);
    if (options.slack == SlackPolicy::enforce) throw SlackError(msg);
    run.warnings.push_back(msg);
  }

  Machine m(cfg, options.machine);
  Shared sh;
  sh.p = p;
  sh.n0 = n;
  sh.schedule = options.schedule;
  sh.slack = options.slack;
  sh.warnings = &run.warnings;

  if (p == 1 || n < 3) {
    m.set_label(kHandoffLabel);
    const VSchedule seq = options.schedule.sequential();
    m.superstep([&](Context& ctx) {
      if (ctx.pid() != 0) return;
      SeqStats stats;
      run.sa = dc_suffix_array(t, seq, &stats);
      ctx.charge(stats.total_ops() + static_cast<std::uint64_t>(n));
    });
    sh.handoff = HandoffInfo{n, 0, 0, 0};
  } else {
    Level top(m, sh, 0, n, options.schedule.initial(n), t.alphabet());
    top.load(t);
    top.run(true);
    run.sa = top.gather_sa();
  }
  run.metrics.p = p;
  fill_metrics(run.metrics, sh, m.ledger());
  return run;
}

}  // namespace dcsa
