#include "depforge/linear.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "depforge/error.hpp"

namespace depforge {

namespace {

constexpr double kMinScale = 1e-9;

double loss_value(LinearLoss loss, double margin) {
  if (loss == LinearLoss::Hinge) return std::max(0.0, 1.0 - margin);
  return margin > 0.0 ? std::log1p(std::exp(-margin)) : -margin + std::log1p(std::exp(margin));
}

// Magnitude of -dloss/dmargin.
double loss_slope(LinearLoss loss, double margin) {
  if (loss == LinearLoss::Hinge) return margin < 1.0 ? 1.0 : 0.0;
  return 1.0 / (1.0 + std::exp(margin));
}

std::string_view loss_kind(LinearLoss loss) {
  return loss == LinearLoss::Hinge ? "linear-svm" : "logistic";
}

}  // namespace

LinearModel::LinearModel(LinearOptions options) : options_(options) {
  if (options_.epochs == 0) throw Error(Errc::InvalidArgument, "linear: epochs must be positive");
  if (!(options_.eta0 > 0.0)) throw Error(Errc::InvalidArgument, "linear: eta0 must be positive");
  if (options_.lambda < 0.0 || options_.eta0 * options_.lambda >= 1.0) {
    throw Error(Errc::InvalidArgument, "linear: need 0 <= lambda < 1/eta0");
  }
}

std::string_view LinearModel::kind() const { return loss_kind(options_.loss); }

std::vector<std::uint32_t> LinearModel::active_coordinates(std::span<const SymbolId> values) const {
  return binarize(values, schema_.vocab_sizes);
}

double LinearModel::raw_score(std::size_t slot, std::span<const std::uint32_t> active) const {
  const double* w = weights_.data() + slot * dimension_;
  double sum = 0.0;
  for (auto j : active) sum += w[j];
  return scale_[slot] * sum;
}

void LinearModel::fold_scale(std::size_t slot) {
  double* w = weights_.data() + slot * dimension_;
  for (std::size_t j = 0; j < dimension_; ++j) w[j] *= scale_[slot];
  scale_[slot] = 1.0;
}

void LinearModel::train(std::span<const Instance> instances, const Schema& schema) {
  check_training_set(instances, schema);
  schema_ = schema;
  dimension_ = std::accumulate(schema.vocab_sizes.begin(), schema.vocab_sizes.end(), std::size_t{0});

  std::vector<bool> seen(schema.num_classes, false);
  for (const auto& inst : instances) seen[inst.label] = true;
  classes_.clear();
  for (ClassId c = 0; c < seen.size(); ++c) {
    if (seen[c]) classes_.push_back(c);
  }
  weights_.assign(classes_.size() * dimension_, 0.0);
  scale_.assign(classes_.size(), 1.0);
  epoch_objectives_.clear();

  std::vector<std::vector<std::uint32_t>> active;
  active.reserve(instances.size());
  for (const auto& inst : instances) active.push_back(active_coordinates(inst.values));

  std::vector<std::size_t> order(instances.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(options_.seed);
  const double horizon = static_cast<double>(instances.size());
  std::uint64_t step = 0;

  for (std::size_t epoch = 0; epoch < options_.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i : order) {
      const double eta = options_.eta0 / (1.0 + static_cast<double>(step) / horizon);
      const auto& x = active[i];
      for (std::size_t slot = 0; slot < classes_.size(); ++slot) {
        const double y = instances[i].label == classes_[slot] ? 1.0 : -1.0;
        const double margin = y * raw_score(slot, x);
        const double slope = loss_slope(options_.loss, margin);
        scale_[slot] *= 1.0 - eta * options_.lambda;
        if (slope != 0.0) {
          double* w = weights_.data() + slot * dimension_;
          const double delta = eta * y * slope / scale_[slot];
          for (auto j : x) w[j] += delta;
        }
        if (scale_[slot] < kMinScale) fold_scale(slot);
      }
      ++step;
    }
    if (track_objective_) epoch_objectives_.push_back(objective(instances));
  }
  for (std::size_t slot = 0; slot < classes_.size(); ++slot) fold_scale(slot);
}

double LinearModel::objective(std::span<const Instance> instances) const {
  double reg = 0.0;
  for (std::size_t slot = 0; slot < classes_.size(); ++slot) {
    const double* w = weights_.data() + slot * dimension_;
    double sq = 0.0;
    for (std::size_t j = 0; j < dimension_; ++j) sq += w[j] * w[j];
    reg += scale_[slot] * scale_[slot] * sq;
  }
  double loss = 0.0;
  for (const auto& inst : instances) {
    const auto x = active_coordinates(inst.values);
    for (std::size_t slot = 0; slot < classes_.size(); ++slot) {
      const double y = inst.label == classes_[slot] ? 1.0 : -1.0;
      loss += loss_value(options_.loss, y * raw_score(slot, x));
    }
  }
  const double n = instances.empty() ? 1.0 : static_cast<double>(instances.size());
  return 0.5 * options_.lambda * reg + loss / n;
}

std::vector<ScoredClass> LinearModel::predict(std::span<const SymbolId> values) const {
  if (values.size() != schema_.feature_count()) {
    throw Error(Errc::DimensionMismatch, "linear: expected " +
                                             std::to_string(schema_.feature_count()) + " values");
  }
  const auto x = active_coordinates(values);
  std::vector<ScoredClass> ranked;
  ranked.reserve(classes_.size());
  for (std::size_t slot = 0; slot < classes_.size(); ++slot) {
    ranked.push_back({classes_[slot], raw_score(slot, x)});
  }
  sort_ranked(ranked);
  return ranked;
}

double LinearModel::weight(ClassId cls, std::uint32_t coordinate) const {
  const auto it = std::find(classes_.begin(), classes_.end(), cls);
  if (it == classes_.end() || coordinate >= dimension_) return 0.0;
  const auto slot = static_cast<std::size_t>(it - classes_.begin());
  return scale_[slot] * weights_[slot * dimension_ + coordinate];
}

void LinearModel::save(std::ostream& out) const {
  out.precision(17);
  out << "dimension " << dimension_ << '\n';
  out << "classes";
  for (auto c : classes_) out << ' ' << c;
  out << '\n';
  for (std::size_t slot = 0; slot < classes_.size(); ++slot) {
    const double* w = weights_.data() + slot * dimension_;
    for (std::size_t j = 0; j < dimension_; ++j) {
      const double value = scale_[slot] * w[j];
      if (value != 0.0) out << classes_[slot] << '\t' << j << '\t' << value << '\n';
    }
  }
}

void LinearModel::load(std::istream& in, const Schema& schema) {
  schema_ = schema;
  auto fail = [](const std::string& why) { throw Error(Errc::BadModel, "linear: " + why); };
  std::string line;
  if (!std::getline(in, line) || line.rfind("dimension ", 0) != 0) fail("missing dimension");
  dimension_ = std::stoul(line.substr(10));
  const auto expected =
      std::accumulate(schema.vocab_sizes.begin(), schema.vocab_sizes.end(), std::size_t{0});
  if (dimension_ != expected) fail("dimension does not match the symbol tables");
  if (!std::getline(in, line) || line.rfind("classes", 0) != 0) fail("missing classes");
  classes_.clear();
  {
    std::istringstream cells(line.substr(7));
    ClassId c = 0;
    while (cells >> c) {
      if (c >= schema.num_classes) fail("class out of range");
      classes_.push_back(c);
    }
  }
  if (classes_.empty()) fail("no classes");
  weights_.assign(classes_.size() * dimension_, 0.0);
  scale_.assign(classes_.size(), 1.0);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    ClassId c = 0;
    std::size_t j = 0;
    double value = 0.0;
    if (!(row >> c >> j >> value) || j >= dimension_) fail("bad weight line");
    const auto it = std::find(classes_.begin(), classes_.end(), c);
    if (it == classes_.end()) fail("weight for unknown class");
    weights_[static_cast<std::size_t>(it - classes_.begin()) * dimension_ + j] = value;
  }
}

Params LinearModel::params() const {
  std::ostringstream eta, lambda;
  eta.precision(17);
  lambda.precision(17);
  eta << options_.eta0;
  lambda << options_.lambda;
  return {{"epochs", std::to_string(options_.epochs)},
          {"eta0", eta.str()},
          {"lambda", lambda.str()},
          {"seed", std::to_string(options_.seed)}};
}

}  // namespace depforge
