#include "depforge/fixture.hpp"

#include <array>
#include <cstdlib>
#include <map>
#include <random>
#include <string>

#include "depforge/error.hpp"
#include "depforge/features.hpp"
#include "depforge/oracle.hpp"

namespace depforge {

namespace {

struct Word {
  std::string_view form;
  std::string_view cpos;
  std::string_view pos;
};

constexpr std::array kDeterminers{Word{"the", "D", "DT"}, Word{"a", "D", "DT"}, Word{"every", "D", "DT"},
                                  Word{"this", "D", "DT"}};
constexpr std::array kAdjectives{Word{"big", "A", "JJ"}, Word{"small", "A", "JJ"}, Word{"red", "A", "JJ"},
                                 Word{"old", "A", "JJ"}, Word{"quick", "A", "JJ"}};
constexpr std::array kNouns{Word{"dog", "N", "NN"},   Word{"cat", "N", "NN"},   Word{"man", "N", "NN"},
                            Word{"park", "N", "NN"},  Word{"book", "N", "NN"},  Word{"garden", "N", "NN"},
                            Word{"dogs", "N", "NNS"}, Word{"books", "N", "NNS"}};
constexpr std::array kTransitive{Word{"saw", "V", "VBD"}, Word{"found", "V", "VBD"}, Word{"likes", "V", "VBZ"},
                                 Word{"chased", "V", "VBD"}, Word{"reads", "V", "VBZ"}};
constexpr std::array kIntransitive{Word{"slept", "V", "VBD"}, Word{"runs", "V", "VBZ"}, Word{"waited", "V", "VBD"}};
// "with"/"in" modify the verb, "of"/"near" the preceding noun.
constexpr std::array kVerbPreps{Word{"with", "P", "IN"}, Word{"in", "P", "IN"}};
constexpr std::array kNounPreps{Word{"of", "P", "IN"}, Word{"near", "P", "IN"}};
constexpr Word kPeriod{".", "PU", "."};

class Builder {
 public:
  explicit Builder(std::mt19937_64& rng) : rng_(rng) {}

  template <std::size_t N>
  const Word& pick(const std::array<Word, N>& words) {
    return words[std::uniform_int_distribution<std::size_t>(0, N - 1)(rng_)];
  }
  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }

  int add(const Word& w) {
    Token t;
    t.id = static_cast<int>(sentence_.tokens.size()) + 1;
    t.form = std::string(w.form);
    t.lemma = std::string(w.form);
    t.cpostag = std::string(w.cpos);
    t.postag = std::string(w.pos);
    t.head = 0;
    t.deprel = "_";
    sentence_.tokens.push_back(std::move(t));
    return sentence_.tokens.back().id;
  }
  void attach(int dep, int head, std::string_view rel) {
    auto& t = sentence_.tokens[static_cast<std::size_t>(dep - 1)];
    t.head = head;
    t.deprel = std::string(rel);
  }

  // Det? Adj? Noun; returns the noun. `bare` allows a determinerless noun.
  int noun_phrase(bool bare) {
    const bool det = !bare || coin(0.7);
    const int d = det ? add(pick(kDeterminers)) : 0;
    const int a = coin(0.4) ? add(pick(kAdjectives)) : 0;
    const int n = add(pick(kNouns));
    if (d) attach(d, n, "det");
    if (a) attach(a, n, "amod");
    return n;
  }

  Sentence take() { return std::move(sentence_); }
  std::size_t size() const { return sentence_.tokens.size(); }

 private:
  std::mt19937_64& rng_;
  Sentence sentence_;
};

Sentence draw_sentence(std::mt19937_64& rng) {
  Builder b(rng);
  const int subject = b.noun_phrase(true);
  const bool transitive = b.coin(0.7);
  const int verb = b.add(transitive ? b.pick(kTransitive) : b.pick(kIntransitive));
  b.attach(subject, verb, "nsubj");
  b.attach(verb, 0, "ROOT");
  int last_noun = 0;
  if (transitive) {
    last_noun = b.noun_phrase(false);
    b.attach(last_noun, verb, "obj");
  }
  if (b.coin(0.5)) {
    const bool to_noun = last_noun != 0 && b.coin(0.5);
    const int prep = b.add(to_noun ? b.pick(kNounPreps) : b.pick(kVerbPreps));
    const int object = b.noun_phrase(false);
    b.attach(prep, to_noun ? last_noun : verb, "prep");
    b.attach(object, prep, "pobj");
  }
  if (b.size() < 3 || b.coin(0.8)) b.attach(b.add(kPeriod), verb, "punct");
  return b.take();
}

}  // namespace

std::uint64_t seed_from_env(std::uint64_t fallback) {
  const char* text = std::getenv("DEPFORGE_SEED");
  if (!text || !*text) return fallback;
  char* end = nullptr;
  const auto value = std::strtoull(text, &end, 10);
  if (*end != '\0') throw Error(Errc::InvalidArgument, "DEPFORGE_SEED must be an unsigned integer");
  return value;
}

std::vector<Sentence> generate_fixture(std::uint64_t seed, std::size_t sentences) {
  std::mt19937_64 rng(seed);
  FeatureModel features(default_templates());
  std::map<std::vector<std::uint32_t>, std::string> seen;
  std::vector<Sentence> corpus;
  corpus.reserve(sentences);
  std::size_t attempts = 0;
  while (corpus.size() < sentences) {
    if (++attempts > sentences * 1000) {
      throw Error(Errc::InvariantViolation, "fixture grammar cannot yield enough value-unique sentences");
    }
    auto sentence = draw_sentence(rng);

    std::vector<std::pair<std::vector<std::uint32_t>, std::string>> fresh;
    bool consistent = true;
    for (const auto& step : derive(sentence, SystemKind::ArcEager)) {
      std::vector<std::uint32_t> key;
      for (auto id : extract(step.configuration, sentence, features, ExtractMode::Train)) key.push_back(id.raw());
      auto label = step.transition.label();
      const auto it = seen.find(key);
      if (it != seen.end() && it->second != label) {
        consistent = false;
        break;
      }
      for (const auto& [k, l] : fresh) {
        if (k == key && l != label) consistent = false;
      }
      if (!consistent) break;
      fresh.emplace_back(std::move(key), std::move(label));
    }
    if (!consistent) continue;
    for (auto& [k, l] : fresh) seen.emplace(std::move(k), std::move(l));
    corpus.push_back(std::move(sentence));
  }
  return corpus;
}

}  // namespace depforge
