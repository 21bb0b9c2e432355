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

#include "dcsa/cli.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>

namespace dcsa::cli {

namespace fs = std::filesystem;

SaFormat parse_format(const std::string& name) {
  if (name == "bin") return SaFormat::bin;
  if (name == "text") return SaFormat::text;
  throw UsageError("unknown format '" + name + "' (expected bin or text)");
}

std::vector<unsigned char> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<unsigned char> data((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("cannot read " + path.string());
  return data;
}

void write_sa(const fs::path& path, const SuffixArray& sa, SaFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create " + path.string());
  if (format == SaFormat::text) {
    for (index_t i : sa) out << i << '\n';
  } else {
    std::vector<unsigned char> buf(sa.size() * 8);
    for (std::size_t k = 0; k < sa.size(); ++k) {
      auto u = static_cast<std::uint64_t>(sa[k]);
      for (int b = 0; b < 8; ++b) buf[8 * k + b] = static_cast<unsigned char>(u >> (8 * b));
    }
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size()));
  }
  if (!out) throw IoError("cannot write " + path.string());
}

SuffixArray read_sa(const fs::path& path, SaFormat format) {
  const auto data = read_bytes(path);
  SuffixArray sa;
  if (format == SaFormat::bin) {
    if (data.size() % 8 != 0) {
      throw IoError(path.string() + ": size is not a multiple of 8 bytes");
    }
    sa.resize(data.size() / 8);
    for (std::size_t k = 0; k < sa.size(); ++k) {
      std::uint64_t u = 0;
      for (int b = 0; b < 8; ++b) u |= std::uint64_t{data[8 * k + b]} << (8 * b);
      if (u > static_cast<std::uint64_t>(INT64_MAX)) {
        throw IoError(path.string() + ": entry " + std::to_string(k) + " out of range");
      }
      sa[k] = static_cast<index_t>(u);
    }
    return sa;
  }
  const char* p = reinterpret_cast<const char*>(data.data());
  const char* end = p + data.size();
  while (p < end) {
    while (p < end && (*p == '\n' || *p == '\r' || *p == ' ' || *p == '\t')) ++p;
    if (p == end) break;
    index_t v = 0;
    auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc() || v < 0) {
      throw IoError(path.string() + ": malformed entry " + std::to_string(sa.size()));
    }
    sa.push_back(v);
    p = next;
  }
  return sa;
}

void check_build(const BuildRequest& req) {
  const bool seq = req.algorithm == "seq-naive" || req.algorithm == "seq-dc";
  if (!seq && req.algorithm != "bsp") {
    throw UsageError("unknown algorithm '" + req.algorithm + "'");
  }
  if (req.out.empty()) throw UsageError("--out is required");
  if (seq) {
    if (req.procs || req.g || req.latency || req.slack || req.report) {
      throw UsageError("--procs, --g, --latency, --slack and --report need --algorithm bsp");
    }
  }
  if (req.algorithm == "seq-naive" && req.schedule) {
    throw UsageError("--schedule does not apply to seq-naive");
  }
  if (req.procs && *req.procs < 1) throw UsageError("--procs must be >= 1");
  if (req.g && *req.g < 0) throw UsageError("--g must be >= 0");
  if (req.latency && *req.latency < 0) throw UsageError("--latency must be >= 0");
  try {
    if (req.slack) parse_slack(*req.slack);
    if (req.schedule) {
      if (req.algorithm == "bsp") {
        ParallelSchedule::parse(*req.schedule);
      } else {
        parse_schedule(*req.schedule);
      }
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

nlohmann::json build_report(const ParallelRun& run, const bsp::Config& cfg,
                            const std::string& schedule, SlackPolicy slack,
                            index_t n) {
  nlohmann::json j = run.metrics.to_json();
  j["n"] = n;
  j["p"] = cfg.p;
  j["g"] = cfg.g;
  j["latency"] = cfg.latency;
  j["schedule"] = schedule;
  j["slack"] = to_string(slack);
  j["cost"] = bsp::ledger_cost(run.metrics.total, cfg.g, cfg.latency);
  j["warnings"] = run.warnings;
  return j;
}

namespace {

void write_text_file(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot create " + path.string());
  out << body;
  if (!out) throw IoError("cannot write " + path.string());
}

int run_build(const BuildRequest& req, std::ostream& out, std::ostream& err) {
  check_build(req);
  const Text t = encode_bytes(read_bytes(req.input));
  SuffixArray sa;
  if (req.algorithm == "seq-naive") {
    sa = naive_suffix_array(t);
  } else if (req.algorithm == "seq-dc") {
    sa = dc_suffix_array(t, parse_schedule(req.schedule.value_or("accel")));
  } else {
    bsp::Config cfg;
    cfg.p = req.procs.value_or(1);
    cfg.g = req.g.value_or(cfg.g);
    cfg.latency = req.latency.value_or(cfg.latency);
    ParallelOptions opts;
    opts.schedule = ParallelSchedule::parse(req.schedule.value_or("accel"));
    opts.slack = parse_slack(req.slack.value_or("enforce"));
    if (cfg.p > 1 && t.size() < cfg.p) {
      throw UsageError("--procs " + std::to_string(cfg.p) + " exceeds text length " +
                       std::to_string(t.size()));
    }
    ParallelRun run = bsp_suffix_array(t, cfg, opts);
    for (const auto& w : run.warnings) err << "warning: " << w << '\n';
    const fs::path report = req.report.value_or(fs::path(req.out.string() + ".report.json"));
    write_text_file(report, build_report(run, cfg, opts.schedule.name(), opts.slack,
                                         t.size()).dump(2) + "\n");
    sa = std::move(run.sa);
  }
  write_sa(req.out, sa, req.format);
  out << "wrote " << sa.size() << " entries to " << req.out.string() << '\n';
  return kOk;
}

}  // namespace

int cmd_build(const BuildRequest& req, std::ostream& out, std::ostream& err) {
  try {
    return run_build(req, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const SlackError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  }
}

int cmd_verify(const fs::path& input, const fs::path& sa_path, SaFormat format,
               std::ostream& out, std::ostream& err) {
  try {
    const Text t = encode_bytes(read_bytes(input));
    const SuffixArray sa = read_sa(sa_path, format);
    const VerifyResult r = verify_suffix_array(t, sa);
    if (!r) {
      err << "FAIL: " << r.message << '\n';
      return kVerifyFailed;
    }
    out << "OK: " << sa.size() << " suffixes in order\n";
    return kOk;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  }
}

std::vector<BenchRow> run_bench(const BenchRequest& req) {
  std::error_code ec;
  if (!fs::is_directory(req.corpus, ec)) {
    throw IoError("not a directory: " + req.corpus.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(req.corpus)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::vector<BenchRow> rows;
  for (const auto& file : files) {
    const Text t = encode_bytes(read_bytes(file));
    for (const auto& spec : req.schedules) {
      ParallelOptions opts;
      opts.schedule = ParallelSchedule::parse(spec);
      opts.slack = req.slack;
      for (int p : req.procs) {
        if (p > 1 && t.size() < p) continue;
        bsp::Config cfg{p, req.g, req.latency};
        const ParallelRun run = bsp_suffix_array(t, cfg, opts);
        if (!verify_suffix_array(t, run.sa)) {
          throw std::logic_error("bench: wrong suffix array for " + file.string());
        }
        const auto& total = run.metrics.total;
        rows.push_back({file.filename().string(), t.size(), opts.schedule.name(), p,
                        run.metrics.round_count(), total.S(), total.W(), total.H(),
                        bsp::ledger_cost(total, cfg.g, cfg.latency)});
      }
    }
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  os << "file,n,schedule,p,rounds,S,W,H,cost\n";
  for (const auto& r : rows) {
    os << r.file << ',' << r.n << ',' << r.schedule << ',' << r.p << ',' << r.rounds
       << ',' << r.S << ',' << r.W << ',' << r.H << ',' << r.cost << '\n';
  }
  return os.str();
}

nlohmann::json bench_json(const std::vector<BenchRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"file", r.file}, {"n", r.n}, {"schedule", r.schedule},
                   {"p", r.p}, {"rounds", r.rounds}, {"S", r.S}, {"W", r.W},
                   {"H", r.H}, {"cost", r.cost}});
  }
  return arr;
}

int cmd_bench(const BenchRequest& req, std::ostream& out, std::ostream& err) {
  try {
    for (int p : req.procs) {
      if (p < 1) throw UsageError("--procs entries must be >= 1");
    }
    for (const auto& s : req.schedules) {
      try {
        ParallelSchedule::parse(s);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
    }
    const auto rows = run_bench(req);
    const std::string csv = bench_csv(rows);
    out << csv;
    if (req.csv) write_text_file(*req.csv, csv);
    if (req.json) write_text_file(*req.json, bench_json(rows).dump(2) + "\n");
    return kOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::logic_error& e) {
    err << "FAIL: " << e.what() << '\n';
    return kVerifyFailed;
  }
}

}  // namespace dcsa::cli
