#pragma once

#include <random>
#include <string>
#include <vector>

#include "depforge/conllx.hpp"

namespace depforge::testing {

/// heads[k - 1] is the head of token k. Acyclicity here is checked by
/// walking up, independently of the library.
bool brute_acyclic(const std::vector<int>& heads);

/// Projectivity as "no two arcs cross", root arcs included.
bool brute_no_crossing(const std::vector<int>& heads);

/// Every acyclic head vector over n tokens (multiple roots allowed).
std::vector<std::vector<int>> all_trees(int n);

/// Uniform over attachment orders: each token in a random order attaches to
/// the root or an already placed token. `single_root` keeps one root arc.
std::vector<int> random_tree(int n, std::mt19937_64& rng, bool single_root = false);

/// Sentence with forms w1..wn, POS tags cycling over a small set.
Sentence make_sentence(const std::vector<int>& heads, const std::vector<std::string>& rels = {});

/// Every way to label `n` arcs from `labels`.
std::vector<std::vector<std::string>> all_labelings(int n, const std::vector<std::string>& labels);

}  // namespace depforge::testing
