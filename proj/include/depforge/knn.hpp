#pragma once

#include "depforge/classifier.hpp"

namespace depforge {

/// Memory-based learner (IB1 with gain-ratio feature weighting).
///
/// Training stores every instance and weights each template by its gain
/// ratio on the training set. The distance is weighted overlap,
/// sum_t w_t * [x_t != y_t]. Prediction collects the k nearest stored
/// instances, extended to every instance tied with the k-th distance, and
/// ranks classes by vote count; ties go to the class more frequent in
/// training, then to the lower class id. Classes with no vote follow,
/// ordered by training frequency.
class Knn final : public Classifier {
 public:
  explicit Knn(std::size_t k = 1);

  std::string_view kind() const override { return "knn"; }
  void train(std::span<const Instance> instances, const Schema& schema) override;
  std::vector<ScoredClass> predict(std::span<const SymbolId> values) const override;
  void save(std::ostream& out) const override;
  void load(std::istream& in, const Schema& schema) override;
  Params params() const override;

  double distance(std::span<const SymbolId> a, std::span<const SymbolId> b) const;
  const std::vector<double>& weights() const { return weights_; }
  std::size_t k() const { return k_; }

 private:
  void count_classes();

  std::size_t k_;
  std::vector<Instance> memory_;
  std::vector<double> weights_;
  std::vector<double> class_freq_;
};

}  // namespace depforge
