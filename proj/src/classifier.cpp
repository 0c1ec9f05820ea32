#include "depforge/classifier.hpp"

#include <algorithm>
#include <charconv>

#include "depforge/decision_tree.hpp"
#include "depforge/error.hpp"
#include "depforge/knn.hpp"
#include "depforge/linear.hpp"
#include "depforge/naive_bayes.hpp"

namespace depforge {

namespace {

[[noreturn]] void bad_param(const std::string& key, const std::string& value) {
  throw Error(Errc::InvalidArgument, "bad value '" + value + "' for " + key);
}

}  // namespace

void sort_ranked(std::vector<ScoredClass>& ranked) {
  std::sort(ranked.begin(), ranked.end(), [](const ScoredClass& a, const ScoredClass& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.cls < b.cls;
  });
}

double param_double(const Params& params, const std::string& key, double fallback) {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  try {
    std::size_t used = 0;
    const double value = std::stod(it->second, &used);
    if (used != it->second.size()) bad_param(key, it->second);
    return value;
  } catch (const std::logic_error&) {
    bad_param(key, it->second);
  }
}

long param_int(const Params& params, const std::string& key, long fallback) {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  long value = 0;
  const auto& text = it->second;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) bad_param(key, text);
  return value;
}

void reject_unknown_params(const Params& params, std::initializer_list<std::string_view> known,
                           std::string_view kind) {
  for (const auto& [key, value] : params) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw Error(Errc::InvalidArgument,
                  "unknown hyperparameter '" + key + "' for classifier " + std::string(kind));
    }
  }
}

void check_training_set(std::span<const Instance> instances, const Schema& schema) {
  if (instances.empty()) throw Error(Errc::EmptyTrainingSet, "no training instances");
  for (const auto& inst : instances) {
    if (inst.values.size() != schema.feature_count()) {
      throw Error(Errc::DimensionMismatch, "instance has " + std::to_string(inst.values.size()) +
                                               " values, schema has " +
                                               std::to_string(schema.feature_count()));
    }
    if (inst.label >= schema.num_classes) {
      throw Error(Errc::DimensionMismatch, "class id " + std::to_string(inst.label) + " out of range");
    }
  }
}

bool is_local_kind(std::string_view kind) {
  return kind == "nb" || kind == "dtree" || kind == "knn" || kind == "linear-svm" ||
         kind == "logistic";
}

std::unique_ptr<Classifier> make_classifier(std::string_view kind, const Params& params) {
  if (kind == "nb") {
    reject_unknown_params(params, {"alpha"}, kind);
    return std::make_unique<NaiveBayes>(param_double(params, "alpha", 1.0));
  }
  if (kind == "dtree") {
    reject_unknown_params(params, {"min_instances"}, kind);
    const long min = param_int(params, "min_instances", 2);
    if (min < 1) bad_param("min_instances", params.at("min_instances"));
    return std::make_unique<DecisionTree>(static_cast<std::size_t>(min));
  }
  if (kind == "knn") {
    reject_unknown_params(params, {"k"}, kind);
    const long k = param_int(params, "k", 1);
    if (k < 1) bad_param("k", params.at("k"));
    return std::make_unique<Knn>(static_cast<std::size_t>(k));
  }
  if (kind == "linear-svm" || kind == "logistic") {
    reject_unknown_params(params, {"epochs", "eta0", "lambda", "seed"}, kind);
    LinearOptions options;
    options.loss = kind == "logistic" ? LinearLoss::Logistic : LinearLoss::Hinge;
    const long epochs = param_int(params, "epochs", 10);
    if (epochs < 1) bad_param("epochs", params.at("epochs"));
    options.epochs = static_cast<std::size_t>(epochs);
    options.eta0 = param_double(params, "eta0", options.eta0);
    options.lambda = param_double(params, "lambda", options.lambda);
    const long seed = param_int(params, "seed", 42);
    if (seed < 0) bad_param("seed", params.at("seed"));
    options.seed = static_cast<std::uint64_t>(seed);
    return std::make_unique<LinearModel>(options);
  }
  throw Error(Errc::InvalidArgument, "unknown classifier kind '" + std::string(kind) + "'");
}

}  // namespace depforge
