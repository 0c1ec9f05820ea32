#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "depforge/features.hpp"

namespace depforge {

struct ScoredClass {
  ClassId cls = 0;
  double score = 0.0;

  bool operator==(const ScoredClass&) const = default;
};

/// Layout facts a classifier needs beyond the instances themselves.
struct Schema {
  std::vector<std::size_t> vocab_sizes;  // one per template, frozen at training end
  std::size_t num_classes = 0;

  std::size_t feature_count() const { return vocab_sizes.size(); }
  bool operator==(const Schema&) const = default;
};

/// key=value hyperparameters, as passed with `--set`.
using Params = std::map<std::string, std::string>;

/// The pluggable learner: train on instances, then rank classes for a
/// feature vector. Implementations are single-writer during train() and
/// immutable afterwards.
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual std::string_view kind() const = 0;

  /// Throws Errc::EmptyTrainingSet for an empty span.
  virtual void train(std::span<const Instance> instances, const Schema& schema) = 0;

  /// Training-observed classes, best first: score descending, then class id
  /// ascending. Never empty after training.
  virtual std::vector<ScoredClass> predict(std::span<const SymbolId> values) const = 0;

  /// Kind-specific body of classifier.txt.
  virtual void save(std::ostream& out) const = 0;
  virtual void load(std::istream& in, const Schema& schema) = 0;

  /// Hyperparameters as written to meta.txt.
  virtual Params params() const = 0;

  const Schema& schema() const { return schema_; }

 protected:
  Schema schema_;
};

/// Sorts by score descending, ties by ascending class id.
void sort_ranked(std::vector<ScoredClass>& ranked);

/// Kinds served in-process: nb, dtree, knn, linear-svm, logistic.
/// Unknown kinds or hyperparameter keys throw Errc::InvalidArgument.
std::unique_ptr<Classifier> make_classifier(std::string_view kind, const Params& params = {});

bool is_local_kind(std::string_view kind);

/// Typed accessors for Params; malformed values throw Errc::InvalidArgument.
double param_double(const Params& params, const std::string& key, double fallback);
long param_int(const Params& params, const std::string& key, long fallback);
void reject_unknown_params(const Params& params, std::initializer_list<std::string_view> known,
                           std::string_view kind);

void check_training_set(std::span<const Instance> instances, const Schema& schema);

}  // namespace depforge
