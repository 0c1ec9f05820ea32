#pragma once

#include <unordered_map>

#include "depforge/classifier.hpp"

namespace depforge {

/// Categorical Naive Bayes with Laplace smoothing. Each template's value
/// distribution per class covers the training vocabulary of that template
/// plus one bucket for unseen values:
///   P(v | c, t) = (count(t, c, v) + alpha) / (N_c + alpha * (V_t + 1))
/// predict() returns normalized log posteriors.
class NaiveBayes final : public Classifier {
 public:
  explicit NaiveBayes(double alpha = 1.0);

  std::string_view kind() const override { return "nb"; }
  void train(std::span<const Instance> instances, const Schema& schema) override;
  std::vector<ScoredClass> predict(std::span<const SymbolId> values) const override;
  void save(std::ostream& out) const override;
  void load(std::istream& in, const Schema& schema) override;
  Params params() const override;

  double alpha() const { return alpha_; }

 private:
  using ValueCounts = std::unordered_map<SymbolId, std::vector<double>>;

  double alpha_;
  std::vector<double> class_counts_;  // indexed by class id
  double total_ = 0.0;
  std::vector<ValueCounts> counts_;  // per template
};

}  // namespace depforge
