// Acceptance runner: one PASS/FAIL line per gated criterion, plus an
// informational line for the optional learning-curve sweep on real data.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "depforge/conllx.hpp"
#include "depforge/error.hpp"
#include "depforge/eval.hpp"
#include "depforge/fixture.hpp"
#include "depforge/gain_ratio.hpp"
#include "depforge/knn.hpp"
#include "depforge/learning_curve.hpp"
#include "depforge/linear.hpp"
#include "depforge/naive_bayes.hpp"
#include "depforge/oracle.hpp"
#include "depforge/parser.hpp"
#include "depforge/transition.hpp"
#include "trees.hpp"

using namespace depforge;
using namespace depforge::testing;

namespace {

// Pinned tolerances and budgets.
constexpr double kNbTolerance = 1e-12;
constexpr double kGainTolerance = 1e-10;
constexpr double kDistanceTolerance = 1e-12;
constexpr double kEvalTolerance = 1e-12;
constexpr std::size_t kLinearEpochs = 50;
constexpr std::uint64_t kLinearSeed = 42;
constexpr int kRandomProjectivityTrees = 1000;
constexpr int kSoundnessRuns = 10000;

struct Outcome {
  bool ok = true;
  std::string detail;
};

// Collects the first failure; later checks still run so counts stay honest.
struct Tally {
  Outcome out;
  std::size_t checks = 0;

  void expect(bool cond, const std::string& what) {
    ++checks;
    if (!cond && out.ok) {
      out.ok = false;
      out.detail = what;
    }
  }
};

int failures = 0;

void criterion(const std::string& name, double budget_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome result;
  try {
    result = body();
  } catch (const std::exception& e) {
    result = {false, std::string("exception: ") + e.what()};
  }
  const double took = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (result.ok && took >= budget_s) {
    result.ok = false;
    result.detail = "over time budget";
  }
  if (!result.ok) ++failures;
  std::printf("%s  %-28s %7.2fs (budget %gs)  %s\n", result.ok ? "PASS" : "FAIL", name.c_str(), took, budget_s,
              result.detail.c_str());
  std::fflush(stdout);
}

std::string fixture(const std::string& name) { return std::string(DEPFORGE_FIXTURES) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string written(std::span<const Sentence> sentences) {
  std::ostringstream out;
  write_conllx(out, sentences);
  return out.str();
}

std::string strip_cr(const std::string& text) {
  std::string out;
  for (char c : text) {
    if (c != '\r') out += c;
  }
  return out;
}

std::vector<int> heads_from(const ArcSet& arcs, std::size_t n) {
  std::vector<int> heads;
  for (std::size_t d = 1; d <= n; ++d) heads.push_back(arcs.head(static_cast<int>(d)).value_or(-1));
  return heads;
}

bool replays_to_gold(const Sentence& s, SystemKind kind) {
  const auto& sys = system_for(kind);
  auto c = sys.initial(s);
  for (const auto& step : derive(s, kind)) {
    if (!(step.configuration == c) || !sys.legal(c, step.transition)) return false;
    c = sys.apply(c, step.transition);
  }
  return sys.is_terminal(c) && finalize(c) == gold_arcs(s);
}

Instance inst(std::vector<std::uint32_t> raw, ClassId label) {
  Instance i;
  for (auto r : raw) i.values.emplace_back(r);
  i.label = label;
  return i;
}

Schema schema_for(const std::vector<Instance>& data, std::size_t classes) {
  Schema s;
  s.num_classes = classes;
  s.vocab_sizes.assign(data.front().values.size(), 2);
  for (const auto& i : data) {
    for (std::size_t t = 0; t < i.values.size(); ++t) {
      s.vocab_sizes[t] = std::max<std::size_t>(s.vocab_sizes[t], i.values[t].raw() + 1);
    }
  }
  return s;
}

double brute_entropy(const std::map<ClassId, double>& counts) {
  double n = 0, h = 0;
  for (const auto& [c, k] : counts) n += k;
  for (const auto& [c, k] : counts) {
    if (k > 0) h -= k / n * std::log2(k / n);
  }
  return h;
}

double brute_gain_ratio(const std::vector<Instance>& data, std::size_t f) {
  std::map<ClassId, double> all;
  std::map<std::uint32_t, std::map<ClassId, double>> by_value;
  for (const auto& i : data) {
    all[i.label] += 1;
    by_value[i.values[f].raw()][i.label] += 1;
  }
  const double n = static_cast<double>(data.size());
  double conditional = 0, split = 0;
  for (const auto& [v, counts] : by_value) {
    double size = 0;
    for (const auto& [c, k] : counts) size += k;
    const double p = size / n;
    conditional += p * brute_entropy(counts);
    split -= p * std::log2(p);
  }
  return split > 0 ? (brute_entropy(all) - conditional) / split : 0.0;
}

std::vector<Instance> random_set(std::mt19937_64& rng, std::size_t n, std::size_t features, std::uint32_t arity,
                                 std::size_t classes) {
  std::vector<Instance> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::uint32_t> raw;
    for (std::size_t t = 0; t < features; ++t) raw.push_back(2 + static_cast<std::uint32_t>(rng() % arity));
    out.push_back(inst(raw, static_cast<ClassId>(rng() % classes)));
  }
  return out;
}

std::string percent(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", 100.0 * x);
  return buf;
}

// Each token attached to the token before it; the first to the root.
std::vector<Sentence> previous_token_baseline(std::span<const Sentence> corpus) {
  std::vector<Sentence> out(corpus.begin(), corpus.end());
  for (auto& s : out) {
    for (auto& t : s.tokens) {
      t.head = t.id - 1;
      t.deprel = "dep";
    }
  }
  return out;
}

Outcome conllx_round_trip() {
  Tally t;
  for (const char* name : {"two_token.conll", "tiny.conll", "punct.conll", "punct_pred.conll",
                           "two_token_pred.conll", "multi.conll", "nonprojective.conll", "crlf.conll"}) {
    const auto path = fixture(name);
    t.expect(written(read_conllx_file(path)) == strip_cr(slurp(path)), std::string("not identical: ") + name);
  }
  const std::vector<std::pair<const char*, Errc>> malformed{
      {"wrong_columns.conll", Errc::WrongColumnCount}, {"non_numeric_id.conll", Errc::NonNumericId},
      {"head_out_of_range.conll", Errc::HeadOutOfRange}, {"empty.conll", Errc::EmptyFile},
      {"blank_only.conll", Errc::EmptyFile},           {"cyclic.conll", Errc::CyclicHeads},
      {"gapped_ids.conll", Errc::InvariantViolation}};
  for (const auto& [name, code] : malformed) {
    bool matched = false;
    try {
      read_conllx_file(fixture(std::string("malformed/") + name));
    } catch (const Error& e) {
      matched = e.code() == code;
    }
    t.expect(matched, std::string("wrong or missing error: ") + name);
  }
  if (t.out.ok) t.out.detail = std::to_string(t.checks) + " files";
  return t.out;
}

Outcome projectivity() {
  Tally t;
  std::size_t exhaustive = 0;
  for (int n = 1; n <= 4; ++n) {
    for (const auto& heads : all_trees(n)) {
      t.expect(is_projective(heads) == brute_no_crossing(heads), "disagreement on an enumerated tree");
      ++exhaustive;
    }
  }
  std::mt19937_64 rng(seed_from_env());
  for (int i = 0; i < kRandomProjectivityTrees; ++i) {
    const auto heads = random_tree(1 + static_cast<int>(rng() % 8), rng);
    t.expect(is_projective(heads) == brute_no_crossing(heads), "disagreement on a random tree");
  }
  if (t.out.ok) {
    t.out.detail = std::to_string(exhaustive) + " enumerated + " + std::to_string(kRandomProjectivityTrees) +
                   " random, 100% agreement";
  }
  return t.out;
}

Outcome soundness() {
  Tally t;
  std::mt19937_64 rng(seed_from_env());
  const std::vector<std::string> rels{"a", "b"};
  for (auto kind : {SystemKind::ArcEager, SystemKind::Baseline}) {
    const auto& sys = system_for(kind);
    const auto inventory = sys.all_transitions(rels);
    for (int run = 0; run < kSoundnessRuns; ++run) {
      const std::size_t n = 1 + rng() % 10;
      auto c = sys.initial(n);
      std::size_t steps = 0;
      while (!sys.is_terminal(c) && steps <= 2 * n + 2) {
        std::vector<Transition> legal;
        for (const auto& tr : inventory) {
          if (sys.legal(c, tr)) legal.push_back(tr);
        }
        if (legal.empty()) break;
        c = sys.apply(c, legal[rng() % legal.size()]);
        ++steps;
      }
      t.expect(sys.is_terminal(c), "run did not terminate");
      if (!sys.is_terminal(c)) continue;
      const auto arcs = finalize(c);
      const auto heads = heads_from(arcs, n);
      t.expect(arcs.size() == n, "not single-headed");
      t.expect(brute_acyclic(heads), "cycle");
      t.expect(brute_no_crossing(heads), "crossing arcs");
    }
  }
  if (t.out.ok) t.out.detail = std::to_string(kSoundnessRuns) + " runs per system";
  return t.out;
}

Outcome oracle_round_trip() {
  Tally t;
  std::size_t trees = 0;
  for (auto kind : {SystemKind::ArcEager, SystemKind::Baseline}) {
    for (int n = 1; n <= 4; ++n) {
      for (const auto& heads : all_trees(n)) {
        if (!brute_no_crossing(heads)) continue;
        for (const auto& labels : all_labelings(n, {"a", "b"})) {
          t.expect(replays_to_gold(make_sentence(heads, labels), kind), "enumerated tree not reproduced");
          ++trees;
        }
      }
    }
  }
  const auto corpus = generate_fixture(seed_from_env());
  std::size_t fixture_sentences = 0;
  for (const auto& s : corpus) {
    if (!is_projective(s)) continue;
    for (auto kind : {SystemKind::ArcEager, SystemKind::Baseline}) {
      t.expect(replays_to_gold(s, kind), "fixture sentence not reproduced");
    }
    ++fixture_sentences;
  }
  if (t.out.ok) {
    t.out.detail = std::to_string(trees) + " labeled trees, " + std::to_string(fixture_sentences) +
                   " fixture sentences, both systems";
  }
  return t.out;
}

Outcome eval_correctness() {
  Tally t;
  const auto gold = read_conllx_file(fixture("tiny.conll"));
  const auto self = score(gold, gold);
  t.expect(self.las == 1.0 && self.uas == 1.0, "score(g, g) is not (1, 1)");

  const auto g2 = read_conllx_file(fixture("two_token.conll"));
  const auto p2 = read_conllx_file(fixture("two_token_pred.conll"));
  const auto two = score(g2, p2, PunctMode::Include);
  t.expect(std::abs(two.las - 0.0) < kEvalTolerance && std::abs(two.uas - 0.5) < kEvalTolerance,
           "two-token example");

  const auto gp = read_conllx_file(fixture("punct.conll"));
  const auto pp = read_conllx_file(fixture("punct_pred.conll"));
  const auto ex = score(gp, pp, PunctMode::Exclude);
  const auto in = score(gp, pp, PunctMode::Include);
  t.expect(ex.counted == 2 && ex.excluded == 1 && ex.total == 3, "excluded counts");
  t.expect(in.counted == 3 && in.excluded == 0, "included counts");
  t.expect(std::abs(ex.uas - 0.5) < kEvalTolerance && std::abs(in.uas - 2.0 / 3.0) < kEvalTolerance,
           "punctuation-sensitive scores");
  return t.out;
}

Outcome classifier_oracles() {
  Tally t;

  const std::vector<Instance> three{inst({2}, 0), inst({2}, 0), inst({3}, 1)};
  NaiveBayes nb;
  nb.train(three, schema_for(three, 2));
  const auto ranked = nb.predict(std::vector{SymbolId(2)});
  t.expect(ranked.size() == 2 && ranked[0].cls == 0, "NB ranking");
  if (ranked.size() == 2) {
    t.expect(std::abs(std::exp(ranked[0].score) - 24.0 / 29.0) < kNbTolerance, "NB posterior of the winner");
    t.expect(std::abs(std::exp(ranked[1].score) - 5.0 / 29.0) < kNbTolerance, "NB posterior of the loser");
  }

  std::mt19937_64 rng(seed_from_env());
  for (int trial = 0; trial < 100; ++trial) {
    const auto data = random_set(rng, 1 + rng() % 30, 3, 1 + static_cast<std::uint32_t>(rng() % 4), 3);
    std::vector<std::uint32_t> rows(data.size());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<std::uint32_t>(i);
    for (std::size_t f = 0; f < 3; ++f) {
      t.expect(std::abs(split_stats(data, rows, f, 3).ratio - brute_gain_ratio(data, f)) < kGainTolerance,
               "gain ratio");
    }
  }

  const auto memory = random_set(rng, 50, 5, 3, 3);
  Knn knn;
  knn.train(memory, schema_for(memory, 3));
  for (const auto& a : memory) {
    for (const auto& b : memory) {
      double d = 0;
      for (std::size_t f = 0; f < knn.weights().size(); ++f) d += a.values[f] == b.values[f] ? 0.0 : knn.weights()[f];
      t.expect(std::abs(knn.distance(a.values, b.values) - d) < kDistanceTolerance, "k-NN distance");
    }
  }

  std::vector<Instance> separable;
  for (int i = 0; i < 90; ++i) {
    const auto cls = static_cast<ClassId>(i % 3);
    separable.push_back(inst({2 + cls, 2 + static_cast<std::uint32_t>(rng() % 4)}, cls));
  }
  const auto schema = schema_for(separable, 3);
  for (auto loss : {LinearLoss::Hinge, LinearLoss::Logistic}) {
    LinearOptions options;
    options.loss = loss;
    options.epochs = kLinearEpochs;
    options.seed = kLinearSeed;
    LinearModel model(options);
    model.train(separable, schema);
    std::size_t right = 0;
    for (const auto& i : separable) right += model.predict(i.values).front().cls == i.label;
    t.expect(right == separable.size(), "linear training accuracy below 100%");
  }
  return t.out;
}

ClassifierSpec spec_of(const std::string& kind, Params params = {}) {
  ClassifierSpec spec;
  spec.kind = kind;
  spec.params = std::move(params);
  return spec;
}

Outcome memorization() {
  const auto corpus = generate_fixture(seed_from_env());
  const auto trained = train_parser(corpus, SystemKind::ArcEager, default_templates(), spec_of("knn", {{"k", "1"}}));
  std::vector<Sentence> parsed;
  for (const auto& s : corpus) parsed.push_back(parse_sentence(trained.model, s));
  const auto s = score(corpus, parsed, PunctMode::Include);
  return {s.las == 1.0, "LAS " + percent(s.las) + " over " + std::to_string(s.counted) + " tokens"};
}

Outcome generalization() {
  const auto corpus = generate_fixture(seed_from_env());
  const std::size_t cut = corpus.size() * 4 / 5;
  const std::vector<Sentence> train(corpus.begin(), corpus.begin() + static_cast<std::ptrdiff_t>(cut));
  const std::vector<Sentence> test(corpus.begin() + static_cast<std::ptrdiff_t>(cut), corpus.end());
  const double floor = score(test, previous_token_baseline(test), PunctMode::Include).uas;

  Outcome out;
  out.detail = "baseline UAS " + percent(floor);
  for (const char* kind : {"dtree", "knn", "linear-svm", "logistic"}) {
    const auto trained = train_parser(train, SystemKind::ArcEager, default_templates(), spec_of(kind));
    std::vector<Sentence> parsed;
    for (const auto& s : test) parsed.push_back(parse_sentence(trained.model, s));
    const double uas = score(test, parsed, PunctMode::Include).uas;
    out.detail += std::string(", ") + kind + " " + percent(uas);
    if (!(uas > floor)) out.ok = false;
  }
  return out;
}

// Optional sweep over user-supplied CoNLL-X data; reported, never gated.
void qualitative_sweep() {
  const char* train_path = std::getenv("DEPFORGE_CURVE_TRAIN");
  const char* test_path = std::getenv("DEPFORGE_CURVE_TEST");
  if (!train_path || !test_path) {
    std::printf("SKIP  %-28s set DEPFORGE_CURVE_TRAIN and DEPFORGE_CURVE_TEST to run\n", "learning curve sweep");
    return;
  }
  try {
    const auto train = read_conllx_file(train_path);
    const auto test = read_conllx_file(test_path);
    CurveOptions options;
    for (const char* kind : {"nb", "dtree", "knn", "linear-svm", "logistic"}) options.classifiers.push_back(spec_of(kind));
    options.step = 1000;
    options.max = 11000;
    const auto rows = learning_curve(train, test, options);
    std::map<std::string, double> last;
    for (const auto& r : rows) {
      if (r.score) last[r.classifier] = r.score->las;
    }
    std::string detail;
    for (const auto& [kind, las] : last) detail += kind + " " + percent(las) + " ";
    const bool nb_worst = last.count("nb") &&
                          std::all_of(last.begin(), last.end(), [&](const auto& kv) { return kv.second >= last["nb"]; });
    std::printf("INFO  %-28s final LAS: %s(nb lowest: %s)\n", "learning curve sweep", detail.c_str(),
                nb_worst ? "yes" : "no");
  } catch (const std::exception& e) {
    std::printf("INFO  %-28s could not run: %s\n", "learning curve sweep", e.what());
  }
}

}  // namespace

int main() {
  criterion("conll-x round trip", 1, conllx_round_trip);
  criterion("projectivity oracle", 10, projectivity);
  criterion("transition soundness", 30, soundness);
  criterion("oracle round trip", 60, oracle_round_trip);
  criterion("eval correctness", 1, eval_correctness);
  criterion("classifier oracles", 30, classifier_oracles);
  criterion("k-NN memorization", 60, memorization);
  criterion("80/20 generalization", 120, generalization);
  qualitative_sweep();
  std::printf("%s: %d failing criteria\n", failures == 0 ? "OK" : "FAILED", failures);
  return failures == 0 ? 0 : 1;
}
