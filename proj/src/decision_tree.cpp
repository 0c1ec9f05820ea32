#include "depforge/decision_tree.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "depforge/error.hpp"
#include "depforge/gain_ratio.hpp"

namespace depforge {

namespace {

std::string format_distribution(const std::vector<double>& dist) {
  std::ostringstream out;
  out.precision(17);
  bool first = true;
  for (ClassId c = 0; c < dist.size(); ++c) {
    if (dist[c] <= 0.0) continue;
    out << (first ? "" : ",") << c << ':' << dist[c];
    first = false;
  }
  return first ? "-" : out.str();
}

std::vector<double> parse_distribution(const std::string& text, std::size_t num_classes) {
  std::vector<double> dist(num_classes, 0.0);
  if (text == "-") return dist;
  std::istringstream in(text);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    const auto colon = cell.find(':');
    if (colon == std::string::npos) throw Error(Errc::BadModel, "dtree: bad distribution");
    const auto c = std::stoul(cell.substr(0, colon));
    if (c >= num_classes) throw Error(Errc::BadModel, "dtree: class out of range");
    dist[c] = std::stod(cell.substr(colon + 1));
  }
  return dist;
}

bool is_pure(const std::vector<double>& dist) {
  return std::count_if(dist.begin(), dist.end(), [](double n) { return n > 0.0; }) <= 1;
}

}  // namespace

DecisionTree::DecisionTree(std::size_t min_instances) : min_instances_(min_instances) {}

void DecisionTree::train(std::span<const Instance> instances, const Schema& schema) {
  check_training_set(instances, schema);
  schema_ = schema;
  prior_.assign(schema.num_classes, 0.0);
  for (const auto& inst : instances) prior_[inst.label] += 1.0;
  for (auto& p : prior_) p /= static_cast<double>(instances.size());

  nodes_.clear();
  std::vector<std::uint32_t> rows(instances.size());
  std::iota(rows.begin(), rows.end(), 0U);
  grow(instances, std::move(rows));
}

std::size_t DecisionTree::grow(std::span<const Instance> instances,
                               std::vector<std::uint32_t> rows) {
  const std::size_t index = nodes_.size();
  nodes_.emplace_back();
  std::vector<double> dist(schema_.num_classes, 0.0);
  for (auto r : rows) dist[instances[r].label] += 1.0;
  nodes_[index].distribution = dist;

  if (is_pure(dist) || rows.size() < min_instances_) return index;

  int best = -1;
  double best_ratio = 0.0;
  for (std::size_t t = 0; t < schema_.feature_count(); ++t) {
    const auto stats = split_stats(instances, rows, t, schema_.num_classes);
    if (stats.split_info <= 0.0) continue;  // constant within this node
    if (best < 0 || stats.ratio > best_ratio) {
      best = static_cast<int>(t);
      best_ratio = stats.ratio;
    }
  }
  if (best < 0) return index;

  // Partition by value in first-seen order so the tree layout is reproducible.
  std::vector<SymbolId> order;
  std::unordered_map<SymbolId, std::vector<std::uint32_t>> parts;
  for (auto r : rows) {
    const SymbolId v = instances[r].values[static_cast<std::size_t>(best)];
    auto [it, inserted] = parts.try_emplace(v);
    if (inserted) order.push_back(v);
    it->second.push_back(r);
  }
  rows.clear();
  rows.shrink_to_fit();

  nodes_[index].feature = best;
  for (SymbolId v : order) {
    const std::size_t child = grow(instances, std::move(parts[v]));
    nodes_[index].children.emplace(v, child);
    nodes_[index].edges.emplace_back(v, child);
  }
  return index;
}

std::vector<ScoredClass> DecisionTree::rank(const Node& node) const {
  const double n = std::accumulate(node.distribution.begin(), node.distribution.end(), 0.0);
  std::vector<ScoredClass> ranked;
  for (ClassId c = 0; c < prior_.size(); ++c) {
    if (prior_[c] <= 0.0) continue;
    ranked.push_back({c, (node.distribution[c] + prior_[c]) / (n + 1.0)});
  }
  sort_ranked(ranked);
  return ranked;
}

std::vector<ScoredClass> DecisionTree::predict(std::span<const SymbolId> values) const {
  if (values.size() != schema_.feature_count()) {
    throw Error(Errc::DimensionMismatch, "dtree: expected " +
                                             std::to_string(schema_.feature_count()) + " values");
  }
  const Node* node = &nodes_.at(0);
  while (!node->is_leaf()) {
    const auto it = node->children.find(values[static_cast<std::size_t>(node->feature)]);
    if (it == node->children.end()) break;
    node = &nodes_[it->second];
  }
  return rank(*node);
}

std::size_t DecisionTree::depth() const {
  std::vector<std::size_t> level(nodes_.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    deepest = std::max(deepest, level[i]);
    for (const auto& [v, child] : nodes_[i].children) level[child] = level[i] + 1;
  }
  return deepest;
}

// Pre-order, children in first-seen order:
//   [indent][=<value> ]leaf <dist>
//   [indent][=<value> ]split <feature> <child count> <dist>
void DecisionTree::write_node(std::ostream& out, std::size_t index, std::size_t indent) const {
  const Node& node = nodes_[index];
  if (node.is_leaf()) {
    out << "leaf " << format_distribution(node.distribution) << '\n';
    return;
  }
  out << "split " << node.feature << ' ' << node.children.size() << ' '
      << format_distribution(node.distribution) << '\n';
  for (const auto& [v, child] : node.edges) {
    out << std::string(2 * (indent + 1), ' ') << '=' << v.raw() << ' ';
    write_node(out, child, indent + 1);
  }
}

void DecisionTree::save(std::ostream& out) const {
  out.precision(17);
  out << "min_instances " << min_instances_ << '\n';
  out << "prior " << format_distribution(prior_) << '\n';
  write_node(out, 0, 0);
}

std::size_t DecisionTree::read_node(std::istream& in, const std::string& line,
                                    std::size_t& line_no) {
  std::istringstream row(line);
  std::string tag;
  row >> tag;
  const std::size_t index = nodes_.size();
  nodes_.emplace_back();
  auto fail = [&] { throw Error(Errc::BadModel, "dtree line " + std::to_string(line_no)); };
  if (tag == "leaf") {
    std::string dist;
    if (!(row >> dist)) fail();
    nodes_[index].distribution = parse_distribution(dist, schema_.num_classes);
    return index;
  }
  if (tag != "split") fail();
  int feature = 0;
  std::size_t count = 0;
  std::string dist;
  if (!(row >> feature >> count >> dist) || feature < 0 ||
      static_cast<std::size_t>(feature) >= schema_.feature_count() || count < 1) {
    fail();
  }
  nodes_[index].feature = feature;
  nodes_[index].distribution = parse_distribution(dist, schema_.num_classes);
  for (std::size_t i = 0; i < count; ++i) {
    std::string child_line;
    if (!std::getline(in, child_line)) fail();
    ++line_no;
    const auto start = child_line.find_first_not_of(' ');
    if (start == std::string::npos || child_line[start] != '=') fail();
    const auto space = child_line.find(' ', start);
    if (space == std::string::npos) fail();
    const auto raw = static_cast<std::uint32_t>(std::stoul(child_line.substr(start + 1, space - start - 1)));
    const std::size_t child = read_node(in, child_line.substr(space + 1), line_no);
    nodes_[index].children.emplace(SymbolId{raw}, child);
    nodes_[index].edges.emplace_back(SymbolId{raw}, child);
  }
  return index;
}

void DecisionTree::load(std::istream& in, const Schema& schema) {
  schema_ = schema;
  nodes_.clear();
  std::string line;
  std::size_t line_no = 0;
  auto next = [&](std::string_view tag) {
    if (!std::getline(in, line) || line.rfind(tag, 0) != 0) {
      throw Error(Errc::BadModel, "dtree: expected " + std::string(tag));
    }
    ++line_no;
    return line.substr(tag.size());
  };
  min_instances_ = std::stoul(next("min_instances "));
  prior_ = parse_distribution(next("prior "), schema.num_classes);
  if (!std::getline(in, line)) throw Error(Errc::BadModel, "dtree: missing root");
  ++line_no;
  read_node(in, line, line_no);
}

Params DecisionTree::params() const { return {{"min_instances", std::to_string(min_instances_)}}; }

}  // namespace depforge
