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

// Command implementations behind the dcsa executable.  They take parsed
// requests and report through streams and exit codes, so tests can drive
// them without a subprocess.

#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dcsa/parsa.hpp"
#include "dcsa/seqsa.hpp"

namespace dcsa::cli {

enum Exit : int {
  kOk = 0,
  kVerifyFailed = 1,
  kUsage = 2,
  kIo = 3,
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// bin: little-endian 8-byte unsigned entries, no header.
/// text: one decimal index per line.
enum class SaFormat { bin, text };

SaFormat parse_format(const std::string& name);

std::vector<unsigned char> read_bytes(const std::filesystem::path& path);
void write_sa(const std::filesystem::path& path, const SuffixArray& sa, SaFormat format);
SuffixArray read_sa(const std::filesystem::path& path, SaFormat format);

struct BuildRequest {
  std::filesystem::path input;
  std::filesystem::path out;
  std::optional<std::filesystem::path> report;  // bsp only
  std::string algorithm = "seq-dc";             // seq-naive | seq-dc | bsp
  std::optional<std::string> schedule;          // fixed:V | accel
  std::optional<int> procs;                     // bsp only
  std::optional<double> g;                      // bsp only
  std::optional<double> latency;                // bsp only
  std::optional<std::string> slack;             // bsp only
  SaFormat format = SaFormat::bin;
};

struct BenchRequest {
  std::filesystem::path corpus;
  std::vector<int> procs{1, 4, 16};
  std::vector<std::string> schedules{"accel", "fixed:3"};
  double g = 1.0;
  double latency = 100.0;
  SlackPolicy slack = SlackPolicy::relaxed;
  std::optional<std::filesystem::path> csv;
  std::optional<std::filesystem::path> json;
};

struct BenchRow {
  std::string file;
  index_t n = 0;
  std::string schedule;
  int p = 1;
  std::size_t rounds = 0;
  std::uint64_t S = 0;
  std::uint64_t W = 0;
  std::uint64_t H = 0;
  double cost = 0;
};

/// Throws UsageError for invalid flag combinations, IoError for files.
void check_build(const BuildRequest& req);

/// JSON cost report of one distributed build.
nlohmann::json build_report(const ParallelRun& run, const bsp::Config& cfg,
                            const std::string& schedule, SlackPolicy slack,
                            index_t n);

std::vector<BenchRow> run_bench(const BenchRequest& req);
std::string bench_csv(const std::vector<BenchRow>& rows);
nlohmann::json bench_json(const std::vector<BenchRow>& rows);

int cmd_build(const BuildRequest& req, std::ostream& out, std::ostream& err);
int cmd_verify(const std::filesystem::path& input, const std::filesystem::path& sa,
               SaFormat format, std::ostream& out, std::ostream& err);
int cmd_bench(const BenchRequest& req, std::ostream& out, std::ostream& err);

}  // namespace dcsa::cli
