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

// dcsa: build, verify and benchmark suffix arrays.
//
//   dcsa build INPUT --out SA [--algorithm seq-naive|seq-dc|bsp]
//              [--schedule accel|fixed:V] [--procs P] [--g G]
//              [--latency L] [--slack enforce|relaxed] [--report JSON]
//              [--format bin|text]
//   dcsa verify INPUT SA [--format bin|text]
//   dcsa bench CORPUS [--procs 1,4,16] [--schedules accel,fixed:3]
//              [--csv PATH] [--json PATH]
//
// Exit codes: 0 success, 1 verification failure, 2 usage error,
// 3 I/O error.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dcsa/cli.hpp"

namespace {

using dcsa::cli::BenchRequest;
using dcsa::cli::BuildRequest;

template <class T>
void set_if(const CLI::Option* opt, std::optional<T>& dst, const T& value) {
  if (opt->count() > 0) dst = value;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Suffix array construction on a simulated BSP machine"};
  app.require_subcommand(1);

  std::string format = "bin";

  // build
  auto* build = app.add_subcommand("build", "Build the suffix array of a file");
  BuildRequest breq;
  std::string input, out, report, schedule, slack;
  int procs = 1;
  double g = 1.0, latency = 100.0;
  build->add_option("input", input, "Input file (raw bytes)")->required();
  build->add_option("--out,-o", out, "Output suffix array")->required();
  build->add_option("--algorithm,-a", breq.algorithm, "seq-naive, seq-dc or bsp")
      ->check(CLI::IsMember({"seq-naive", "seq-dc", "bsp"}));
  auto* o_sched = build->add_option("--schedule", schedule, "accel or fixed:V");
  auto* o_procs = build->add_option("--procs,-p", procs, "Virtual processors (bsp)");
  auto* o_g = build->add_option("--g", g, "Cost per word communicated (bsp)");
  auto* o_lat = build->add_option("--latency", latency, "Cost per barrier (bsp)");
  auto* o_slack = build->add_option("--slack", slack, "enforce or relaxed (bsp)");
  auto* o_report = build->add_option("--report", report, "JSON cost report path (bsp)");
  build->add_option("--format", format, "bin or text")
      ->check(CLI::IsMember({"bin", "text"}));

  // verify
  auto* verify = app.add_subcommand("verify", "Check a suffix array against its text");
  std::string vinput, vsa;
  verify->add_option("input", vinput, "Input file (raw bytes)")->required();
  verify->add_option("sa", vsa, "Suffix array file")->required();
  verify->add_option("--format", format, "bin or text")
      ->check(CLI::IsMember({"bin", "text"}));

  // bench
  auto* bench = app.add_subcommand("bench", "Cost table over a corpus directory");
  BenchRequest qreq;
  std::string corpus, csv, json, bslack = "relaxed";
  bench->add_option("corpus", corpus, "Directory of input files")->required();
  bench->add_option("--procs,-p", qreq.procs, "Processor counts")->delimiter(',');
  bench->add_option("--schedules", qreq.schedules, "Schedules")->delimiter(',');
  bench->add_option("--g", qreq.g, "Cost per word communicated");
  bench->add_option("--latency", qreq.latency, "Cost per barrier");
  bench->add_option("--slack", bslack, "enforce or relaxed")
      ->check(CLI::IsMember({"enforce", "relaxed"}));
  auto* o_csv = bench->add_option("--csv", csv, "Also write the CSV here");
  auto* o_json = bench->add_option("--json", json, "Write the JSON rows here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return dcsa::cli::kUsage;
  }

  const auto fmt = dcsa::cli::parse_format(format);
  if (build->parsed()) {
    breq.input = input;
    breq.out = out;
    breq.format = fmt;
    set_if(o_sched, breq.schedule, schedule);
    set_if(o_procs, breq.procs, procs);
    set_if(o_g, breq.g, g);
    set_if(o_lat, breq.latency, latency);
    set_if(o_slack, breq.slack, slack);
    if (o_report->count() > 0) breq.report = report;
    return dcsa::cli::cmd_build(breq, std::cout, std::cerr);
  }
  if (verify->parsed()) {
    return dcsa::cli::cmd_verify(vinput, vsa, fmt, std::cout, std::cerr);
  }
  qreq.corpus = corpus;
  qreq.slack = dcsa::parse_slack(bslack);
  if (o_csv->count() > 0) qreq.csv = csv;
  if (o_json->count() > 0) qreq.json = json;
  return dcsa::cli::cmd_bench(qreq, std::cout, std::cerr);
}
