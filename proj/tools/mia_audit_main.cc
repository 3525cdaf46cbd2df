//
// Copyright 2026 The mia-audit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Command-line front end: run, sweep, regress, cache.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "glog/logging.h"
#include "mia/runner/config.h"
#include "mia/runner/runner.h"

int main(int argc, char** argv) {
  google::InitGoogleLogging(argv[0]);
  FLAGS_logtostderr = true;
  FLAGS_minloglevel = google::GLOG_WARNING;

  CLI::App app{"Membership-inference audit toolkit for language models"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<uint64_t> seed;
  std::optional<int> parallelism;
  bool offline = false;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "YAML run configuration")
        ->required();
    sub->add_option("--seed", seed, "Override the global seed");
    sub->add_option("--parallelism", parallelism, "Worker threads")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--offline", offline,
                  "Serve remote backends from the cache only");
  };
  CLI::App* run = app.add_subcommand("run", "Score and evaluate every attack");
  CLI::App* sweep = app.add_subcommand("sweep", "Vary one knob of one attack");
  CLI::App* regress =
      app.add_subcommand("regress", "Dump surrogate similarity regressions");
  CLI::App* cache = app.add_subcommand("cache", "Inspect or clear the cache");
  for (CLI::App* sub : {run, sweep, regress, cache}) add_common(sub);
  std::string cache_action;
  cache->add_option("action", cache_action, "stats or clear")
      ->required()
      ->check(CLI::IsMember({"stats", "clear"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? mia::kExitOk : mia::kExitConfigError;
  }

  auto config = mia::LoadRunConfig(config_path);
  if (!config.ok()) {
    std::cerr << "error: " << config.status().message() << "\n";
    return mia::kExitConfigError;
  }
  mia::RunOptions options;
  options.seed = seed;
  options.parallelism = parallelism;
  options.offline = offline;

  if (run->parsed()) return mia::CmdRun(*config, options, std::cout, std::cerr);
  if (sweep->parsed()) {
    return mia::CmdSweep(*config, options, std::cout, std::cerr);
  }
  if (regress->parsed()) {
    return mia::CmdRegress(*config, options, std::cout, std::cerr);
  }
  return mia::CmdCache(*config, cache_action, std::cout, std::cerr);
}
