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

#include "rsa2/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rsa2/conditional_table.hpp"
#include "rsa2/datasets.hpp"
#include "rsa2/errors.hpp"
#include "rsa2/http_provider.hpp"
#include "rsa2/metrics.hpp"
#include "rsa2/qud.hpp"
#include "rsa2/rhetorical.hpp"
#include "rsa2/rsa.hpp"
#include "rsa2/rsc.hpp"
#include "rsa2/scenario.hpp"

namespace rsa2 {

namespace fs = std::filesystem;

namespace {

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open " + path);
  }
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot write " + path);
  }
  out << content;
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

LabelSpacePtr space_from_json(SpaceKind kind, const nlohmann::json& j,
                              const std::string& where) {
  if (!j.is_array() || j.empty()) {
    throw DataError(where + ": expected a non-empty label array");
  }
  std::vector<std::string> labels;
  for (const auto& label : j) labels.push_back(label.get<std::string>());
  return make_space(kind, std::move(labels));
}

ConditionalTable table_or_uniform(const nlohmann::json& j,
                                  const std::vector<LabelSpacePtr>& given,
                                  const LabelSpacePtr& over) {
  if (j.is_string() && j.get<std::string>() == "uniform") {
    return ConditionalTable::uniform(given, over);
  }
  return ConditionalTable::from_json(j, given, over);
}

ConditionalTable load_table_file(const std::string& path,
                                 const std::vector<LabelSpacePtr>& given,
                                 const LabelSpacePtr& over) {
  return ConditionalTable::from_json(read_json_file(path), given, over);
}

// Strategy posterior resolution for grid datasets. "provider" only makes
// sense for scenario pipelines, where the posterior is elicited per scenario.
ConditionalTable resolve_strategy_posterior(const RunConfig& config,
                                            const LabelSpacePtr& contexts,
                                            const LabelSpacePtr& utterances,
                                            const LabelSpacePtr& strategies) {
  if (config.strategy_prior == "uniform") {
    return ConditionalTable::uniform({contexts, utterances}, strategies);
  }
  if (config.strategy_prior == "provider") {
    throw ConfigError(
        "strategy_prior = provider is only available for scenario datasets");
  }
  if (config.strategy_prior_file.empty()) {
    throw ConfigError("strategy_prior = " + config.strategy_prior +
                      " needs strategy_prior_file");
  }
  ConditionalTable table = load_table_file(config.strategy_prior_file,
                                           {contexts, utterances}, strategies);
  if (config.strategy_prior == "file") return table;
  // indicator: collapse every row onto its argmax strategy
  std::map<std::string, Categorical> rows;
  for (const auto& [key, row] : table.rows()) {
    rows.emplace(key, indicator_posterior(row));
  }
  return ConditionalTable({contexts, utterances}, strategies, std::move(rows));
}

struct GridResult {
  LabelSpacePtr contexts;
  LabelSpacePtr utterances;
  LabelSpacePtr meanings;
  std::map<std::string, Categorical> l0_rows;
  std::map<std::string, Categorical> l1_rows;
};

GridResult run_strategy_grid(const RunConfig& config, const StrategySet& fr_set,
                             const LabelSpacePtr& contexts,
                             const LabelSpacePtr& meanings,
                             const LabelSpacePtr& utterances,
                             const ConditionalTable& meaning_prior,
                             const ConditionalTable& utterance_prior) {
  const ConditionalTable strategy_posterior = resolve_strategy_posterior(
      config, contexts, utterances, fr_set.strategies());

  GridResult result{contexts, utterances, meanings, {}, {}};
  for (const auto& c : contexts->labels()) {
    const Categorical& m_prior = meaning_prior.row(c);
    const Categorical& u_prior = utterance_prior.row(c);
    for (const auto& u : utterances->labels()) {
      std::vector<Categorical> l0s;
      std::vector<Categorical> l1s;
      for (std::size_t r = 0; r < fr_set.strategies()->size(); ++r) {
        const auto& fr = fr_set.function(r);
        l0s.push_back(l0_conditioned(fr, m_prior, c, u));
        l1s.push_back(l1_conditioned(config.alpha, fr, m_prior, u_prior, c, u));
      }
      const Categorical& posterior = strategy_posterior.row(c, u);
      result.l0_rows.emplace(join_key({c, u}), l1_marginal(l0s, posterior));
      result.l1_rows.emplace(join_key({c, u}), l1_marginal(l1s, posterior));
    }
  }
  return result;
}

GridResult run_rsa_grid(const RunConfig& config) {
  const auto j = read_json_file(config.dataset);
  const auto contexts =
      space_from_json(SpaceKind::kContext, j.at("contexts"), config.dataset);
  const auto meanings =
      space_from_json(SpaceKind::kMeaning, j.at("meanings"), config.dataset);
  const auto utterances = space_from_json(SpaceKind::kUtterance,
                                          j.at("utterances"), config.dataset);
  const auto lexicon =
      SemanticLexicon::from_json(j.at("lexicon"), utterances, meanings);
  const PriorSet priors(
      table_or_uniform(j.at("meaning_prior"), {contexts}, meanings),
      table_or_uniform(j.at("utterance_prior"), {contexts}, utterances));

  GridResult result{contexts, utterances, meanings, {}, {}};
  const RsaConfig rsa_config{config.alpha};
  for (const auto& c : contexts->labels()) {
    for (const auto& u : utterances->labels()) {
      result.l0_rows.emplace(join_key({c, u}),
                             literal_listener(lexicon, priors, c, u));
      result.l1_rows.emplace(
          join_key({c, u}), pragmatic_listener(rsa_config, lexicon, priors, c, u));
    }
  }
  return result;
}

GridResult run_rsa2_grid(const RunConfig& config) {
  if (config.dataset == "numbers") {
    const auto dataset = NumbersDataset::standard();
    if (config.meaning_prior_file.empty()) {
      throw ConfigError("the numbers dataset needs meaning_prior_file");
    }
    const auto meaning_prior = load_table_file(
        config.meaning_prior_file, {dataset.contexts}, dataset.meanings);
    const auto utterance_prior =
        config.utterance_prior_file.empty()
            ? ConditionalTable::uniform({dataset.contexts}, dataset.utterances)
            : load_table_file(config.utterance_prior_file, {dataset.contexts},
                              dataset.utterances);
    return run_strategy_grid(config, dataset.strategy_set(), dataset.contexts,
                             dataset.meanings, dataset.utterances,
                             meaning_prior, utterance_prior);
  }
  if (config.dataset == "weather") {
    const auto dataset = WeatherDataset::standard();
    if (config.meaning_prior_file.empty()) {
      throw ConfigError("the weather dataset needs meaning_prior_file");
    }
    const auto meaning_prior = load_table_file(
        config.meaning_prior_file, {dataset.contexts}, dataset.states);
    const auto utterance_prior =
        config.utterance_prior_file.empty()
            ? ConditionalTable::uniform({dataset.contexts}, dataset.utterances)
            : load_table_file(config.utterance_prior_file, {dataset.contexts},
                              dataset.utterances);
    StrategySet strategies = dataset.strategy_set();
    if (!config.fr_checkpoint.empty()) {
      const FrNet net =
          fr_checkpoint_from_json(read_json_file(config.fr_checkpoint));
      strategies =
          strategies_from_net(net, dataset.contexts, dataset.states,
                              dataset.utterances, dataset.strategies);
    }
    return run_strategy_grid(config, strategies, dataset.contexts,
                             dataset.states, dataset.utterances, meaning_prior,
                             utterance_prior);
  }

  // Generic file-driven instance.
  const auto j = read_json_file(config.dataset);
  const auto contexts =
      space_from_json(SpaceKind::kContext, j.at("contexts"), config.dataset);
  const auto meanings =
      space_from_json(SpaceKind::kMeaning, j.at("meanings"), config.dataset);
  const auto utterances = space_from_json(SpaceKind::kUtterance,
                                          j.at("utterances"), config.dataset);
  std::vector<std::string> strategy_labels;
  std::vector<RhetoricalFunction> functions;
  for (const auto& fr_json : j.at("functions")) {
    functions.push_back(
        RhetoricalFunction::from_json(fr_json, contexts, meanings, utterances));
    strategy_labels.push_back(functions.back().strategy());
  }
  const StrategySet fr_set(
      make_space(SpaceKind::kStrategy, std::move(strategy_labels)),
      std::move(functions));
  const auto meaning_prior =
      table_or_uniform(j.at("meaning_prior"), {contexts}, meanings);
  const auto utterance_prior =
      table_or_uniform(j.at("utterance_prior"), {contexts}, utterances);
  return run_strategy_grid(config, fr_set, contexts, meanings, utterances,
                           meaning_prior, utterance_prior);
}

GridResult run_qud_affect_grid(const RunConfig& config) {
  const auto dataset = WeatherDataset::standard();
  if (config.weather_priors_file.empty()) {
    throw ConfigError("the qud-affect model needs weather_priors_file");
  }
  const auto priors = WeatherPriors::from_json(
      read_json_file(config.weather_priors_file), dataset.contexts,
      dataset.states, dataset.arousal, dataset.valence);
  const auto lexicon = dataset.lexicon();

  GridResult result{dataset.contexts, dataset.utterances, dataset.states,
                    {}, {}};
  for (const auto& c : dataset.contexts->labels()) {
    for (const auto& u : dataset.utterances->labels()) {
      result.l0_rows.emplace(join_key({c, u}),
                             affect_weather_literal(priors, lexicon, c, u));
      result.l1_rows.emplace(
          join_key({c, u}),
          affect_weather_model(priors, lexicon, config.alpha, c, u));
    }
  }
  return result;
}

void write_grid_outputs(const RunConfig& config, const GridResult& result,
                        std::ostream& out) {
  fs::create_directories(config.output_dir);
  const ConditionalTable l0({result.contexts, result.utterances},
                            result.meanings, result.l0_rows);
  const ConditionalTable l1({result.contexts, result.utterances},
                            result.meanings, result.l1_rows);

  const std::string l0_path = config.output_dir + "/l0.json";
  const std::string l1_path = config.output_dir + "/l1.json";
  write_json_file(l0_path, l0.to_json());
  write_json_file(l1_path, l1.to_json());

  std::vector<DistributionRow> csv_rows;
  for (const auto& c : result.contexts->labels()) {
    for (const auto& u : result.utterances->labels()) {
      csv_rows.push_back(DistributionRow{config.model, "L0", c, u,
                                         l0.row(c, u)});
      csv_rows.push_back(DistributionRow{config.model, "L1", c, u,
                                         l1.row(c, u)});
    }
  }
  write_distribution_csv(config.output_dir + "/distributions.csv", csv_rows);
  write_text_file(config.output_dir + "/config.toml", config.to_toml());

  // Outputs must survive their own loaders.
  ConditionalTable::from_json(read_json_file(l0_path),
                              {result.contexts, result.utterances},
                              result.meanings);
  ConditionalTable::from_json(read_json_file(l1_path),
                              {result.contexts, result.utterances},
                              result.meanings);
  out << "wrote " << config.output_dir << "/{l0.json, l1.json, "
      << "distributions.csv, config.toml} over "
      << result.contexts->size() * result.utterances->size() << " cells\n";
}

DistributionsByCell load_cell_distributions(const std::string& path) {
  const auto j = read_json_file(path);
  if (!j.contains("rows")) {
    throw DataError(path + ": expected a table with \"rows\"");
  }
  DistributionsByCell cells;
  for (const auto& [key, row] : j.at("rows").items()) {
    const auto sep = key.find('|');
    if (sep == std::string::npos) {
      throw DataError(path + ": row key \"" + key +
                      "\" is not a context|utterance pair");
    }
    std::vector<std::string> labels;
    for (const auto& [label, value] : row.items()) labels.push_back(label);
    std::sort(labels.begin(), labels.end());
    std::vector<double> weights;
    weights.reserve(labels.size());
    for (const auto& label : labels) {
      weights.push_back(row.at(label).get<double>());
    }
    cells.emplace(
        std::make_pair(key.substr(0, sep), key.substr(sep + 1)),
        Categorical::from_weights(make_space(SpaceKind::kMeaning, labels),
                                  weights));
  }
  return cells;
}

Categorical row_over_space(const nlohmann::json& row,
                           const LabelSpacePtr& space,
                           const std::string& where) {
  std::vector<double> weights(space->size(), 0.0);
  for (const auto& [label, value] : row.items()) {
    if (!space->contains(label)) {
      throw DataError(where + ": unknown label \"" + label + "\"");
    }
    weights[space->index_of(label)] = value.get<double>();
  }
  return Categorical::from_weights(space, weights);
}

void print_score_row(std::ostream& out, const std::string& name,
                     const MeaningScoreRow& row) {
  out << "  " << name << ": correct=" << format_double(row.correct)
      << " incorrect=" << format_double(row.incorrect)
      << " distractor=" << format_double(row.distractor)
      << " (overlap=" << format_double(row.overlap)
      << ", nonsequitur=" << format_double(row.nonsequitur)
      << ", n=" << row.count << ")\n";
}

}  // namespace

int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const ConfigError*>(&error) != nullptr) return 2;
  if (dynamic_cast<const DataError*>(&error) != nullptr) return 3;
  if (dynamic_cast<const ProviderError*>(&error) != nullptr) return 4;
  if (dynamic_cast<const ModelError*>(&error) != nullptr) return 5;
  if (dynamic_cast<const Error*>(&error) != nullptr) return 5;
  return 1;
}

std::shared_ptr<ProbabilityProvider> make_provider(const RunConfig& config) {
  if (config.provider == "mock") {
    auto mock = std::make_shared<MockProvider>(config.seed);
    if (!config.mock_fixtures.empty()) {
      mock->load_fixtures(read_json_file(config.mock_fixtures));
    }
    return mock;
  }
  if (config.provider == "http") {
    return std::make_shared<HttpProvider>(HttpProviderConfig::from_env());
  }
  if (config.replay_cache.empty()) {
    throw ConfigError("provider = replay needs replay_cache");
  }
  // With endpoint credentials present we record through; otherwise the cache
  // must already hold every request.
  std::shared_ptr<ProbabilityProvider> inner;
  if (std::getenv("RSA2_PROVIDER_URL") != nullptr) {
    inner = std::make_shared<HttpProvider>(HttpProviderConfig::from_env());
  }
  return std::make_shared<ReplayProvider>(
      inner, config.replay_cache,
      inner ? CacheMode::kRecord : CacheMode::kReplay);
}

void cmd_run(const RunConfig& config, std::ostream& out) {
  config.validate();
  if (config.model == "rsc") {
    cmd_rsc(config, out);
    return;
  }
  if (config.dataset.empty()) {
    throw ConfigError("run needs a dataset (builtin name or file)");
  }
  GridResult result = [&] {
    if (config.model == "rsa") return run_rsa_grid(config);
    if (config.model == "rsa2") return run_rsa2_grid(config);
    return run_qud_affect_grid(config);
  }();
  write_grid_outputs(config, result, out);
}

void cmd_eval(const EvalArgs& args, std::ostream& out) {
  if (args.metric == "mad") {
    const auto predicted = load_cell_distributions(args.predictions);
    const auto human = load_cell_distributions(args.reference);
    const double value = mad(predicted, human);
    out << "mad = " << format_double(value) << " over " << predicted.size()
        << " cells\n";
    if (!args.output_csv.empty()) {
      write_text_file(args.output_csv,
                      "metric,value\nmad," + format_double(value) + "\n");
    }
    return;
  }

  const auto scenarios = load_scenarios(args.reference);
  const auto predictions = read_json_file(args.predictions);

  if (args.metric == "meaning-scores") {
    std::vector<Categorical> rows;
    for (const auto& scenario : scenarios) {
      if (!predictions.contains(scenario.id)) {
        throw KeyMismatchError("predictions are missing scenario \"" +
                               scenario.id + "\"");
      }
      rows.push_back(row_over_space(predictions.at(scenario.id),
                                    scenario.meaning_space(),
                                    "scenario " + scenario.id));
    }
    const MeaningScores scores = meaning_scores(scenarios, rows);
    out << "meaning scores:\n";
    print_score_row(out, "overall", scores.overall);
    print_score_row(out, "validation", scores.validation);
    print_score_row(out, "test", scores.test);
    if (!args.output_csv.empty()) {
      std::ostringstream csv;
      csv << "split,correct,incorrect,distractor,overlap,nonsequitur,n\n";
      for (const auto& [name, row] :
           {std::pair<std::string, const MeaningScoreRow&>{"overall",
                                                           scores.overall},
            {"validation", scores.validation},
            {"test", scores.test}}) {
        csv << name << ',' << format_double(row.correct) << ','
            << format_double(row.incorrect) << ','
            << format_double(row.distractor) << ','
            << format_double(row.overlap) << ','
            << format_double(row.nonsequitur) << ',' << row.count << "\n";
      }
      write_text_file(args.output_csv, csv.str());
    }
    return;
  }

  if (args.metric == "rs-report") {
    if (scenarios.empty()) {
      throw DataError("rs-report needs at least one scenario");
    }
    std::vector<std::string> strategy_labels;
    {
      const auto& first = predictions.begin().value();
      for (const auto& [label, value] : first.items()) {
        strategy_labels.push_back(label);
      }
      std::sort(strategy_labels.begin(), strategy_labels.end());
    }
    const auto space = make_space(SpaceKind::kStrategy, strategy_labels);
    std::vector<Categorical> posteriors;
    for (const auto& scenario : scenarios) {
      if (!predictions.contains(scenario.id)) {
        throw KeyMismatchError("predictions are missing scenario \"" +
                               scenario.id + "\"");
      }
      posteriors.push_back(row_over_space(predictions.at(scenario.id), space,
                                          "scenario " + scenario.id));
    }
    const RsPosteriorReport report = rs_posterior_report(scenarios, posteriors);
    out << "strategy posterior means:\n";
    auto print_split = [&](const std::string& name,
                           const std::vector<double>& values,
                           std::size_t count) {
      out << "  " << name << " (n=" << count << "):";
      for (std::size_t r = 0; r < report.strategies.size(); ++r) {
        out << " " << report.strategies[r] << "=" << format_double(values[r]);
      }
      out << "\n";
    };
    print_split("overall", report.overall,
                report.validation_count + report.test_count);
    print_split("validation", report.validation, report.validation_count);
    print_split("test", report.test, report.test_count);
    if (!args.output_csv.empty()) {
      std::ostringstream csv;
      csv << "split";
      for (const auto& label : report.strategies) csv << ',' << label;
      csv << ",n\n";
      auto emit = [&](const std::string& name, const std::vector<double>& v,
                      std::size_t n) {
        csv << name;
        for (double value : v) csv << ',' << format_double(value);
        csv << ',' << n << "\n";
      };
      emit("overall", report.overall,
           report.validation_count + report.test_count);
      emit("validation", report.validation, report.validation_count);
      emit("test", report.test, report.test_count);
      write_text_file(args.output_csv, csv.str());
    }
    return;
  }
  throw ConfigError("metric must be mad, meaning-scores or rs-report; got \"" +
                    args.metric + "\"");
}

void cmd_train_fr(const TrainFrArgs& args, std::ostream& out) {
  const auto dataset = WeatherDataset::standard();
  const auto samples = fr_samples_from_json(read_json_file(args.dataset));
  const FrPipeline pipeline{
      dataset.contexts,
      dataset.states,
      dataset.utterances,
      dataset.strategies,
      load_table_file(args.meaning_prior, {dataset.contexts}, dataset.states),
      load_table_file(args.strategy_posterior,
                      {dataset.contexts, dataset.utterances},
                      dataset.strategies),
      1.0};

  const FrTrainResult result = fr_train(args.config, samples, pipeline);

  fs::create_directories(args.output_dir);
  const std::string checkpoint_path = args.output_dir + "/checkpoint.json";
  write_json_file(checkpoint_path,
                  fr_checkpoint_to_json(result.best, args.config,
                                        result.best_val_loss));
  std::ostringstream history;
  history << "epoch,train_loss,val_loss\n";
  for (const auto& entry : result.history) {
    history << entry.epoch << ',' << format_double(entry.train_loss) << ','
            << format_double(entry.val_loss) << "\n";
  }
  write_text_file(args.output_dir + "/history.csv", history.str());
  write_json_file(args.output_dir + "/split.json",
                  nlohmann::json{{"train", result.train_indices},
                                 {"val", result.val_indices},
                                 {"test", result.test_indices}});

  // The checkpoint must survive its own loader.
  fr_checkpoint_from_json(read_json_file(checkpoint_path));
  out << "trained " << result.history.size() << " epochs; best val loss "
      << format_double(result.best_val_loss) << " at epoch "
      << result.best_epoch << "; wrote " << checkpoint_path << "\n";
}

void cmd_rsc(const RunConfig& config, std::ostream& out) {
  config.validate();
  if (config.dataset.empty()) {
    throw ConfigError("rsc needs a scenario dataset file");
  }
  auto scenarios = load_scenarios(config.dataset);
  std::sort(scenarios.begin(), scenarios.end(),
            [](const Scenario& a, const Scenario& b) { return a.id < b.id; });
  const auto provider = make_provider(config);

  fs::create_directories(config.output_dir);
  RscOptions options;
  options.k = config.rsc_k;
  options.n_alternatives = config.rsc_alts;
  options.alpha = config.alpha;
  options.seed = config.seed;
  options.max_in_flight = config.max_in_flight;

  std::vector<DistributionRow> csv_rows;
  nlohmann::json summary = nlohmann::json::array();
  for (const auto& scenario : scenarios) {
    const RscReport report = rsc_pipeline(*provider, scenario, options);
    const std::string report_path =
        config.output_dir + "/rsc_" + scenario.id + ".json";
    write_json_file(report_path, report.to_json());
    // Written reports must parse and carry the marginal listeners.
    const auto reloaded = read_json_file(report_path);
    for (const char* key : {"scenario_id", "clusters", "l0_marginal",
                            "l1_marginal", "cluster_posterior"}) {
      if (!reloaded.contains(key)) {
        throw DataError(report_path + ": missing key \"" + key + "\"");
      }
    }
    csv_rows.push_back(DistributionRow{"rsc", "L0", scenario.id,
                                       scenario.utterance, report.l0_marginal});
    csv_rows.push_back(DistributionRow{"rsc", "L1", scenario.id,
                                       scenario.utterance, report.l1_marginal});
    summary.push_back({{"id", scenario.id},
                       {"report", report_path},
                       {"clusters", report.clusters.size()},
                       {"alternatives", report.alternatives.size()}});
    out << scenario.id << ": " << report.clusters.size() << " clusters over "
        << report.alternatives.size() << " alternatives\n";
  }
  write_distribution_csv(config.output_dir + "/distributions.csv", csv_rows);
  write_json_file(config.output_dir + "/summary.json", summary);
  write_text_file(config.output_dir + "/config.toml", config.to_toml());
}

void cmd_probe(const RunConfig& config, const ProbeArgs& args,
               std::ostream& out) {
  const auto provider = make_provider(config);
  if (args.mode == "mcq") {
    McqQuery query;
    query.context_text = args.context;
    if (!args.utterance.empty()) query.utterance = args.utterance;
    query.options = args.options;
    query.seed = args.seed;
    const Categorical dist = mcq_distribution(*provider, query);
    nlohmann::json result = nlohmann::json::object();
    for (std::size_t i = 0; i < dist.size(); ++i) {
      result[dist.space()->label(i)] = dist.prob(i);
    }
    out << result.dump(2) << "\n";
    return;
  }
  if (args.mode == "generate") {
    GenerationQuery query;
    query.context_prefix = args.context;
    query.n = args.n;
    query.seed = args.seed;
    nlohmann::json result = nlohmann::json::array();
    for (const auto& u : generate_alternatives(*provider, query)) {
      result.push_back({{"text", u.text}, {"loglik", u.loglik}});
    }
    out << result.dump(2) << "\n";
    return;
  }
  if (args.mode == "score") {
    out << format_double(provider->score_generation(args.context,
                                                    args.utterance))
        << "\n";
    return;
  }
  if (args.mode == "embed") {
    out << nlohmann::json(provider->embed(args.utterance)).dump() << "\n";
    return;
  }
  throw ConfigError("probe mode must be mcq, generate, score or embed");
}

}  // namespace rsa2
