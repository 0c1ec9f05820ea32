#pragma once

#include <unordered_map>

#include "depforge/classifier.hpp"

namespace depforge {

/// C4.5-style tree over nominal templates: multiway splits on the template
/// with the highest gain ratio, equality tests only, no pruning.
///
/// A node becomes a leaf when it is pure, holds fewer than `min_instances`
/// rows, or every template is constant within it. Ranking at a leaf uses
/// (count_c + prior_c) / (n + 1), so leaf counts dominate and the training
/// class prior orders the rest. A value with no child edge ranks by the
/// distribution at the split node, i.e. its majority class first.
class DecisionTree final : public Classifier {
 public:
  explicit DecisionTree(std::size_t min_instances = 2);

  std::string_view kind() const override { return "dtree"; }
  void train(std::span<const Instance> instances, const Schema& schema) override;
  std::vector<ScoredClass> predict(std::span<const SymbolId> values) const override;
  void save(std::ostream& out) const override;
  void load(std::istream& in, const Schema& schema) override;
  Params params() const override;

  struct Node {
    std::vector<double> distribution;  // class counts at this node
    int feature = -1;                  // -1 for leaves
    std::unordered_map<SymbolId, std::size_t> children;
    std::vector<std::pair<SymbolId, std::size_t>> edges;  // first-seen order

    bool is_leaf() const { return feature < 0; }
  };

  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t depth() const;

 private:
  std::size_t grow(std::span<const Instance> instances, std::vector<std::uint32_t> rows);
  std::vector<ScoredClass> rank(const Node& node) const;
  std::size_t read_node(std::istream& in, const std::string& line, std::size_t& line_no);
  void write_node(std::ostream& out, std::size_t index, std::size_t indent) const;

  std::size_t min_instances_;
  std::vector<double> prior_;
  std::vector<Node> nodes_;  // nodes_[0] is the root
};

}  // namespace depforge
