#include "depforge/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "depforge/error.hpp"
#include "depforge/eval.hpp"
#include "depforge/fixture.hpp"
#include "depforge/learning_curve.hpp"
#include "depforge/model_io.hpp"
#include "depforge/parser.hpp"

namespace depforge {

namespace {

const std::vector<std::string> kLocalKinds{"nb", "dtree", "knn", "linear-svm", "logistic"};

struct Options {
  std::string train_path, test_path, model_dir, input_path, output_path = "-", gold_path, pred_path;
  std::string export_path;
  std::string classifier = "knn";
  std::vector<std::string> classifiers = kLocalKinds;
  std::string system = "arc-eager";
  std::string features_path;
  std::vector<std::string> sets;
  std::uint64_t seed = kDefaultSeed;
  std::string punct = "exclude";
  std::string host;
  int port = 0;
  long timeout_ms = 30'000;
  std::size_t jobs = 1;
  std::size_t step = 1000;
  std::size_t max = 11000;
  std::size_t sentences = kDefaultFixtureSentences;
};

// Raised for flag combinations CLI11 cannot express; maps to exit 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::pair<std::string, std::string> split_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw UsageError("--set expects key=value, got '" + text + "'");
  return {text.substr(0, eq), text.substr(eq + 1)};
}

// Unscoped keys apply to every kind; "kind.key=value" only to that kind.
Params params_for(const std::string& kind, const std::vector<std::string>& sets, bool scoped) {
  Params params;
  for (const auto& text : sets) {
    auto [key, value] = split_assignment(text);
    const auto dot = key.find('.');
    if (scoped && dot != std::string::npos) {
      if (key.substr(0, dot) != kind) continue;
      key = key.substr(dot + 1);
    }
    params[key] = value;
  }
  if ((kind == "linear-svm" || kind == "logistic") && !params.count("seed")) params["seed"] = "";
  return params;
}

void apply_seed(Params& params, std::uint64_t seed) {
  auto it = params.find("seed");
  if (it != params.end() && it->second.empty()) it->second = std::to_string(seed);
}

std::vector<FeatureTemplate> load_templates(const std::string& path) {
  if (path.empty()) return default_templates();
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot read " + path);
  return FeatureModel::parse_templates(in);
}

template <typename Fn>
void with_output(const std::string& path, std::ostream& out, Fn&& write) {
  if (path == "-") {
    write(out);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(Errc::Io, "cannot write " + path);
  write(file);
  if (!file) throw Error(Errc::Io, "write failed for " + path);
}

std::vector<Sentence> read_corpus_allow_empty(const std::string& path) {
  try {
    return read_conllx_file(path);
  } catch (const Error& e) {
    if (e.code() == Errc::EmptyFile) return {};
    throw;
  }
}

std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", 100.0 * fraction);
  return buf;
}

int cmd_train(const Options& o, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  ClassifierSpec spec;
  spec.kind = o.classifier;
  if (o.classifier == "remote") {
    if (o.host.empty() || o.port == 0) throw UsageError("--classifier remote needs --host and --port");
    RemoteConfig remote;
    remote.host = o.host;
    remote.port = o.port;
    remote.timeout = std::chrono::milliseconds(o.timeout_ms);
    spec.remote = remote;
    spec.export_path = o.export_path.empty() ? o.model_dir + "/training.txt" : o.export_path;
    if (!o.sets.empty()) throw UsageError("--set does not apply to --classifier remote");
  } else {
    spec.params = params_for(o.classifier, o.sets, false);
    apply_seed(spec.params, o.seed);
  }
  const auto corpus = read_conllx_file(o.train_path);
  if (o.classifier == "remote") std::filesystem::create_directories(o.model_dir);
  auto trained = train_parser(corpus, parse_system_name(o.system), load_templates(o.features_path), spec);
  save_model(o.model_dir, trained.model);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  const auto& r = trained.report;
  out << "sentences used " << r.sentences_used << " skipped " << r.sentences_skipped << '\n'
      << "instances " << r.instances << '\n'
      << "labels " << r.labels << '\n'
      << "time " << elapsed.count() << " s\n";
  return kExitOk;
}

int cmd_parse(const Options& o, std::ostream& out, std::ostream& err) {
  std::optional<RemoteConfig> remote;
  if (!o.host.empty() || o.port != 0) {
    if (o.host.empty() || o.port == 0) throw UsageError("--host and --port go together");
    remote = RemoteConfig{o.host, o.port, std::chrono::milliseconds(o.timeout_ms), 3};
  }
  const auto model = load_model(o.model_dir, remote);
  const auto input = read_corpus_allow_empty(o.input_path);
  std::vector<Sentence> parsed;
  parsed.reserve(input.size());
  int status = kExitOk;
  for (std::size_t i = 0; i < input.size(); ++i) {
    try {
      parsed.push_back(parse_sentence(model, input[i]));
    } catch (const Error& e) {
      const auto c = e.code();
      if (c != Errc::ConnectionLost && c != Errc::Timeout && c != Errc::ProtocolError && c != Errc::UnknownLabel) {
        throw;
      }
      err << "sentence " << (i + 1) << ": " << e.what() << '\n';
      auto unparsed = input[i];
      for (auto& t : unparsed.tokens) {
        t.head.reset();
        t.deprel.reset();
        t.phead = "_";
        t.pdeprel = "_";
      }
      parsed.push_back(std::move(unparsed));
      status = kExitData;
    }
  }
  with_output(o.output_path, out, [&](std::ostream& s) { write_conllx(s, parsed); });
  return status;
}

int cmd_eval(const Options& o, std::ostream& out) {
  const auto gold = read_corpus_allow_empty(o.gold_path);
  const auto pred = read_corpus_allow_empty(o.pred_path);
  const auto s = score(gold, pred, parse_punct_mode(o.punct));
  out << "LAS " << percent(s.las) << " UAS " << percent(s.uas) << " counted " << s.counted << " excluded "
      << s.excluded << '\n';
  return kExitOk;
}

int cmd_learncurve(const Options& o, std::ostream& out, std::ostream& err) {
  CurveOptions options;
  for (const auto& kind : o.classifiers) {
    if (!is_local_kind(kind)) throw UsageError("learncurve does not support classifier '" + kind + "'");
    ClassifierSpec spec;
    spec.kind = kind;
    spec.params = params_for(kind, o.sets, true);
    apply_seed(spec.params, o.seed);
    options.classifiers.push_back(std::move(spec));
  }
  options.step = o.step;
  options.max = o.max;
  options.system = parse_system_name(o.system);
  options.templates = load_templates(o.features_path);
  options.punct = parse_punct_mode(o.punct);
  options.jobs = o.jobs;
  const auto train = read_conllx_file(o.train_path);
  const auto test = read_conllx_file(o.test_path);
  const auto rows = learning_curve(train, test, options);
  for (const auto& row : rows) {
    if (!row.score) err << row.classifier << " at " << row.size << " failed: " << row.error << '\n';
  }
  with_output(o.output_path, out, [&](std::ostream& s) { write_curve_tsv(s, rows); });
  return kExitOk;
}

int cmd_genfixture(const Options& o, std::ostream& out) {
  const auto corpus = generate_fixture(o.seed, o.sentences);
  with_output(o.output_path, out, [&](std::ostream& s) { write_conllx(s, corpus); });
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Transition-based dependency parser"};
  app.name(args.empty() ? "depforge" : args.front());
  app.require_subcommand(1);

  auto add_system = [&](CLI::App* cmd) {
    cmd->add_option("--system", o.system, "arc-eager or baseline")->check(CLI::IsMember({"arc-eager", "baseline"}));
  };
  auto add_features = [&](CLI::App* cmd) {
    cmd->add_option("--features", o.features_path, "feature-model file")->check(CLI::ExistingFile);
  };
  auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", o.seed, "random seed (default: DEPFORGE_SEED or 42)");
  };
  auto add_remote = [&](CLI::App* cmd) {
    cmd->add_option("--host", o.host, "remote classifier host");
    cmd->add_option("--port", o.port, "remote classifier port")->check(CLI::Range(1, 65535));
    cmd->add_option("--timeout-ms", o.timeout_ms, "remote request timeout")->check(CLI::PositiveNumber);
  };
  auto add_punct = [&](CLI::App* cmd) {
    cmd->add_option("--punct", o.punct, "include or exclude punctuation")
        ->check(CLI::IsMember({"include", "exclude"}));
  };

  auto* train = app.add_subcommand("train", "train a parser model");
  train->add_option("--train", o.train_path, "gold CoNLL-X corpus")->required()->check(CLI::ExistingFile);
  train->add_option("--model", o.model_dir, "output model directory")->required();
  std::vector<std::string> kinds = kLocalKinds;
  kinds.push_back("remote");
  train->add_option("--classifier", o.classifier, "classifier kind")->check(CLI::IsMember(kinds));
  train->add_option("--set", o.sets, "hyperparameter key=value (repeatable)");
  train->add_option("--export", o.export_path, "remote: training-file path (default MODEL/training.txt)");
  add_system(train);
  add_features(train);
  add_seed(train);
  add_remote(train);

  auto* parse = app.add_subcommand("parse", "parse a CoNLL-X file");
  parse->add_option("--model", o.model_dir, "model directory")->required()->check(CLI::ExistingDirectory);
  parse->add_option("--input", o.input_path, "input CoNLL-X file")->required()->check(CLI::ExistingFile);
  parse->add_option("--output", o.output_path, "output file, - for stdout");
  add_remote(parse);

  auto* eval = app.add_subcommand("eval", "score predicted against gold");
  eval->add_option("--gold", o.gold_path, "gold CoNLL-X file")->required()->check(CLI::ExistingFile);
  eval->add_option("--pred", o.pred_path, "predicted CoNLL-X file")->required()->check(CLI::ExistingFile);
  add_punct(eval);

  auto* curve = app.add_subcommand("learncurve", "LAS/UAS over growing training sets");
  curve->add_option("--train", o.train_path, "gold training corpus")->required()->check(CLI::ExistingFile);
  curve->add_option("--test", o.test_path, "gold test corpus")->required()->check(CLI::ExistingFile);
  curve->add_option("--classifiers", o.classifiers, "classifier kinds")->delimiter(',');
  curve->add_option("--set", o.sets, "hyperparameter [kind.]key=value (repeatable)");
  curve->add_option("--step", o.step, "size increment")->check(CLI::PositiveNumber);
  curve->add_option("--max", o.max, "largest training size")->check(CLI::PositiveNumber);
  curve->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
  curve->add_option("--output", o.output_path, "TSV file, - for stdout");
  add_system(curve);
  add_features(curve);
  add_seed(curve);
  add_punct(curve);

  auto* gen = app.add_subcommand("genfixture", "write the synthetic treebank");
  gen->add_option("--output", o.output_path, "output file, - for stdout");
  gen->add_option("--sentences", o.sentences, "sentence count")->check(CLI::PositiveNumber);
  add_seed(gen);

  try {
    o.seed = seed_from_env(kDefaultSeed);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kExitUsage;
  }

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n\n";
    const auto* failing = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << failing->help();
    return kExitUsage;
  }

  try {
    if (train->parsed()) return cmd_train(o, out);
    if (parse->parsed()) return cmd_parse(o, out, err);
    if (eval->parsed()) return cmd_eval(o, out);
    if (curve->parsed()) return cmd_learncurve(o, out, err);
    if (gen->parsed()) return cmd_genfixture(o, out);
  } catch (const UsageError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == Errc::InvalidArgument ? kExitUsage : kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace depforge
