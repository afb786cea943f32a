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

#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rsa2/commands.hpp"
#include "rsa2/errors.hpp"
#include "rsa2/run_config.hpp"

namespace {

using rsa2::RunConfig;

struct FlagBinding {
  const char* flag;
  std::function<void(RunConfig& dst, const RunConfig& src)> copy;
};

const std::vector<FlagBinding>& bindings() {
  static const std::vector<FlagBinding> kBindings = {
      {"--model", [](RunConfig& d, const RunConfig& s) { d.model = s.model; }},
      {"--dataset",
       [](RunConfig& d, const RunConfig& s) { d.dataset = s.dataset; }},
      {"--alpha", [](RunConfig& d, const RunConfig& s) { d.alpha = s.alpha; }},
      {"--strategy-prior",
       [](RunConfig& d, const RunConfig& s) {
         d.strategy_prior = s.strategy_prior;
       }},
      {"--strategy-prior-file",
       [](RunConfig& d, const RunConfig& s) {
         d.strategy_prior_file = s.strategy_prior_file;
       }},
      {"--provider",
       [](RunConfig& d, const RunConfig& s) { d.provider = s.provider; }},
      {"--replay-cache",
       [](RunConfig& d, const RunConfig& s) {
         d.replay_cache = s.replay_cache;
       }},
      {"--mock-fixtures",
       [](RunConfig& d, const RunConfig& s) {
         d.mock_fixtures = s.mock_fixtures;
       }},
      {"--seed", [](RunConfig& d, const RunConfig& s) { d.seed = s.seed; }},
      {"--output-dir",
       [](RunConfig& d, const RunConfig& s) { d.output_dir = s.output_dir; }},
      {"--meaning-prior",
       [](RunConfig& d, const RunConfig& s) {
         d.meaning_prior_file = s.meaning_prior_file;
       }},
      {"--utterance-prior",
       [](RunConfig& d, const RunConfig& s) {
         d.utterance_prior_file = s.utterance_prior_file;
       }},
      {"--weather-priors",
       [](RunConfig& d, const RunConfig& s) {
         d.weather_priors_file = s.weather_priors_file;
       }},
      {"--fr-checkpoint",
       [](RunConfig& d, const RunConfig& s) {
         d.fr_checkpoint = s.fr_checkpoint;
       }},
      {"--k", [](RunConfig& d, const RunConfig& s) { d.rsc_k = s.rsc_k; }},
      {"--alts",
       [](RunConfig& d, const RunConfig& s) { d.rsc_alts = s.rsc_alts; }},
      {"--max-in-flight",
       [](RunConfig& d, const RunConfig& s) {
         d.max_in_flight = s.max_in_flight;
       }},
  };
  return kBindings;
}

void add_run_options(CLI::App* cmd, RunConfig& config,
                     std::string& config_path) {
  cmd->add_option("--config", config_path, "TOML config file");
  cmd->add_option("--model", config.model, "rsa | rsa2 | qud-affect | rsc");
  cmd->add_option("--dataset", config.dataset,
                  "builtin dataset name or instance file");
  cmd->add_option("--alpha", config.alpha, "rationality parameter");
  cmd->add_option("--strategy-prior", config.strategy_prior,
                  "uniform | file | provider | indicator");
  cmd->add_option("--strategy-prior-file", config.strategy_prior_file,
                  "P(r|c,u) table file");
  cmd->add_option("--provider", config.provider, "mock | http | replay");
  cmd->add_option("--replay-cache", config.replay_cache,
                  "JSONL request/response cache");
  cmd->add_option("--mock-fixtures", config.mock_fixtures,
                  "mock provider fixture file");
  cmd->add_option("--seed", config.seed, "run seed");
  cmd->add_option("--output-dir", config.output_dir, "output directory");
  cmd->add_option("--meaning-prior", config.meaning_prior_file,
                  "P(m|c) table file");
  cmd->add_option("--utterance-prior", config.utterance_prior_file,
                  "P(u|c) table file");
  cmd->add_option("--weather-priors", config.weather_priors_file,
                  "affect-model prior bundle");
  cmd->add_option("--fr-checkpoint", config.fr_checkpoint,
                  "learned rhetorical-function checkpoint");
  cmd->add_option("--k", config.rsc_k, "cluster count");
  cmd->add_option("--alts", config.rsc_alts, "alternative utterances");
  cmd->add_option("--max-in-flight", config.max_in_flight,
                  "provider concurrency cap");
}

// Config-file values first, then every flag the user actually passed.
RunConfig resolve_config(CLI::App* cmd, const RunConfig& flag_values,
                         const std::string& config_path) {
  RunConfig resolved;
  if (!config_path.empty()) {
    resolved.apply_toml(rsa2::TomlTable::parse_file(config_path));
  }
  for (const auto& binding : bindings()) {
    if (cmd->count(binding.flag) > 0) {
      binding.copy(resolved, flag_values);
    }
  }
  return resolved;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Probabilistic-pragmatics toolkit: RSA listeners and speakers, "
               "strategy-aware listeners, affect-aware weather listeners, "
               "learned rhetorical functions and strategy clustering"};
  app.require_subcommand(1);

  RunConfig run_flags;
  std::string run_config_path;
  auto* run = app.add_subcommand("run", "run a model over its full grid");
  add_run_options(run, run_flags, run_config_path);

  rsa2::EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "evaluate predictions");
  eval->add_option("--metric", eval_args.metric,
                   "mad | meaning-scores | rs-report")
      ->required();
  eval->add_option("--predictions", eval_args.predictions, "prediction file")
      ->required();
  eval->add_option("--reference", eval_args.reference,
                   "human table or scenario file")
      ->required();
  eval->add_option("--output-csv", eval_args.output_csv, "CSV output path");

  rsa2::TrainFrArgs train_args;
  std::string split_spec;
  auto* train =
      app.add_subcommand("train-fr", "train the weather rhetorical function");
  train->add_option("--dataset", train_args.dataset, "sample rows JSON")
      ->required();
  train->add_option("--meaning-prior", train_args.meaning_prior,
                    "P(m|c) table")
      ->required();
  train->add_option("--strategy-posterior", train_args.strategy_posterior,
                    "P(r|c,u) table")
      ->required();
  train->add_option("--output-dir", train_args.output_dir, "output directory")
      ->required();
  train->add_option("--epochs", train_args.config.epochs, "training epochs");
  train->add_option("--lr", train_args.config.optimizer.learning_rate,
                    "learning rate");
  train->add_option("--weight-decay", train_args.config.weight_decay,
                    "L2 weight decay");
  train->add_option("--seed", train_args.config.seed, "split/init seed");
  train->add_option("--split", split_spec,
                    "train/val/test percentages, e.g. 60/20/20");

  RunConfig rsc_flags;
  std::string rsc_config_path;
  auto* rsc = app.add_subcommand("rsc", "induce rhetorical strategy clusters");
  add_run_options(rsc, rsc_flags, rsc_config_path);

  RunConfig probe_flags;
  rsa2::ProbeArgs probe_args;
  auto* probe = app.add_subcommand("probe", "raw provider query");
  probe->add_option("--provider", probe_flags.provider,
                    "mock | http | replay");
  probe->add_option("--replay-cache", probe_flags.replay_cache,
                    "JSONL request/response cache");
  probe->add_option("--mock-fixtures", probe_flags.mock_fixtures,
                    "mock provider fixture file");
  probe->add_option("--seed", probe_args.seed, "query seed");
  probe->add_option("--mode", probe_args.mode, "mcq | generate | score | embed")
      ->required();
  probe->add_option("--context", probe_args.context, "context text");
  probe->add_option("--utterance", probe_args.utterance,
                    "utterance / scored text");
  probe->add_option("--option", probe_args.options, "MCQ option (repeat)");
  probe->add_option("--n", probe_args.n, "generation count");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      rsa2::cmd_run(resolve_config(run, run_flags, run_config_path),
                    std::cout);
    } else if (eval->parsed()) {
      rsa2::cmd_eval(eval_args, std::cout);
    } else if (train->parsed()) {
      if (!split_spec.empty()) {
        int t = 0, v = 0, s = 0;
        if (std::sscanf(split_spec.c_str(), "%d/%d/%d", &t, &v, &s) != 3 ||
            t + v + s != 100 || t <= 0 || v <= 0 || s < 0) {
          throw rsa2::ConfigError(
              "--split must be three percentages summing to 100");
        }
        train_args.config.train_fraction = t / 100.0;
        train_args.config.val_fraction = v / 100.0;
      }
      rsa2::cmd_train_fr(train_args, std::cout);
    } else if (rsc->parsed()) {
      RunConfig resolved = resolve_config(rsc, rsc_flags, rsc_config_path);
      resolved.model = "rsc";
      rsa2::cmd_rsc(resolved, std::cout);
    } else if (probe->parsed()) {
      rsa2::cmd_probe(probe_flags, probe_args, std::cout);
    }
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return rsa2::exit_code_for(error);
  }
  return 0;
}
