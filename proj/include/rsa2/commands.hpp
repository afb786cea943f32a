// Copyright 2026 The rsa2 Authors
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

#ifndef RSA2_COMMANDS_HPP_
#define RSA2_COMMANDS_HPP_

#include <iosfwd>
#include <memory>
#include <string>

#include "rsa2/fr_net.hpp"
#include "rsa2/provider.hpp"
#include "rsa2/run_config.hpp"

namespace rsa2 {

// Exit codes used by the CLI: 2 config, 3 data, 4 provider, 5 model.
int exit_code_for(const std::exception& error);

std::shared_ptr<ProbabilityProvider> make_provider(const RunConfig& config);

// Runs a model over its full (context, utterance) grid and writes l0.json,
// l1.json, distributions.csv and config.toml into config.output_dir. Every
// JSON written is re-loaded through its loader before returning.
void cmd_run(const RunConfig& config, std::ostream& out);

struct EvalArgs {
  std::string metric;       // mad | meaning-scores | rs-report
  std::string predictions;  // JSON file
  std::string reference;    // human cell table or scenario JSONL
  std::string output_csv;   // optional
};

void cmd_eval(const EvalArgs& args, std::ostream& out);

struct TrainFrArgs {
  std::string dataset;             // sample rows JSON
  std::string meaning_prior;       // P(m|c) table
  std::string strategy_posterior;  // P(r|c,u) table
  std::string output_dir;
  FrTrainConfig config;
};

void cmd_train_fr(const TrainFrArgs& args, std::ostream& out);

// Strategy induction over a scenario file; writes one report per scenario
// plus a summary into config.output_dir.
void cmd_rsc(const RunConfig& config, std::ostream& out);

struct ProbeArgs {
  std::string mode;  // mcq | generate | score | embed
  std::string context;
  std::string utterance;  // optional; also the scored/embedded text
  std::vector<std::string> options;
  int n = 5;
  std::uint64_t seed = 0;
};

void cmd_probe(const RunConfig& config, const ProbeArgs& args,
               std::ostream& out);

}  // namespace rsa2

#endif  // RSA2_COMMANDS_HPP_
