#include "trees.hpp"

#include <algorithm>
#include <numeric>

namespace depforge::testing {

bool brute_acyclic(const std::vector<int>& heads) {
  const int n = static_cast<int>(heads.size());
  for (int k = 1; k <= n; ++k) {
    int at = k;
    for (int steps = 0; at != 0; ++steps) {
      if (steps > n) return false;
      at = heads[at - 1];
    }
  }
  return true;
}

bool brute_no_crossing(const std::vector<int>& heads) {
  const int n = static_cast<int>(heads.size());
  for (int a = 1; a <= n; ++a) {
    const int l1 = std::min(a, heads[a - 1]), r1 = std::max(a, heads[a - 1]);
    for (int b = 1; b <= n; ++b) {
      const int l2 = std::min(b, heads[b - 1]), r2 = std::max(b, heads[b - 1]);
      if (l1 < l2 && l2 < r1 && r1 < r2) return false;
    }
  }
  return true;
}

std::vector<std::vector<int>> all_trees(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> heads(n, 0);
  while (true) {
    bool ok = true;
    for (int k = 1; k <= n; ++k) ok = ok && heads[k - 1] != k;
    if (ok && brute_acyclic(heads)) out.push_back(heads);
    int i = 0;
    while (i < n && heads[i] == n) heads[i++] = 0;
    if (i == n) break;
    ++heads[i];
  }
  return out;
}

std::vector<int> random_tree(int n, std::mt19937_64& rng, bool single_root) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 1);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> heads(n, 0);
  for (int i = 1; i < n; ++i) {
    const int lo = single_root ? 1 : 0;
    const int pick = std::uniform_int_distribution<int>(lo, i)(rng);
    heads[order[i] - 1] = pick == 0 ? 0 : order[pick - 1];
  }
  return heads;
}

Sentence make_sentence(const std::vector<int>& heads, const std::vector<std::string>& rels) {
  static const char* tags[] = {"DT", "NN", "VB", "IN", "JJ"};
  Sentence s;
  for (std::size_t i = 0; i < heads.size(); ++i) {
    Token t;
    t.id = static_cast<int>(i) + 1;
    t.form = "w" + std::to_string(i + 1);
    t.cpostag = tags[i % 5];
    t.postag = tags[i % 5];
    t.head = heads[i];
    t.deprel = rels.empty() ? std::string("dep") : rels[i];
    s.tokens.push_back(t);
  }
  return s;
}

std::vector<std::vector<std::string>> all_labelings(int n, const std::vector<std::string>& labels) {
  std::vector<std::vector<std::string>> out{{}};
  for (int i = 0; i < n; ++i) {
    std::vector<std::vector<std::string>> next;
    for (const auto& prefix : out) {
      for (const auto& l : labels) {
        auto v = prefix;
        v.push_back(l);
        next.push_back(std::move(v));
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace depforge::testing
