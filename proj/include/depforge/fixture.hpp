#pragma once

#include <cstdint>
#include <vector>

#include "depforge/conllx.hpp"

namespace depforge {

inline constexpr std::uint64_t kDefaultSeed = 42;
inline constexpr std::size_t kDefaultFixtureSentences = 300;

/// Seed from DEPFORGE_SEED when set and numeric, else `fallback`.
std::uint64_t seed_from_env(std::uint64_t fallback = kDefaultSeed);

/// Synthetic projective treebank from a small closed-vocabulary grammar
/// (determiner, adjective, noun, verb, object, prepositional phrase, final
/// period), 3 to 12 tokens per sentence. Prepositions attach by word, so
/// heads follow from forms. Sentences whose arc-eager training instances
/// would contradict an earlier instance under the default feature model are
/// redrawn, so the corpus is value-unique. Same seed, same corpus.
std::vector<Sentence> generate_fixture(std::uint64_t seed, std::size_t sentences = kDefaultFixtureSentences);

}  // namespace depforge
