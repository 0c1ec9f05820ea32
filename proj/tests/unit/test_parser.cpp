#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "depforge/error.hpp"
#include "depforge/fixture.hpp"
#include "depforge/model_io.hpp"
#include "depforge/oracle.hpp"
#include "depforge/parser.hpp"
#include "fake_peer.hpp"
#include "trees.hpp"

using namespace depforge;
using namespace depforge::testing;
namespace fs = std::filesystem;

namespace {

std::string fixture(const std::string& name) { return std::string(DEPFORGE_FIXTURES) + "/" + name; }

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("depforge-parser-" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir.parent_path());
  return dir;
}

std::vector<int> heads(const Sentence& s) {
  std::vector<int> out;
  for (const auto& t : s.tokens) out.push_back(*t.head);
  return out;
}

ClassifierSpec spec(std::string kind, Params params = {}) {
  ClassifierSpec s;
  s.kind = std::move(kind);
  s.params = std::move(params);
  return s;
}

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return Errc::Io;
}

}  // namespace

TEST_CASE("fallback when every proposal is illegal") {
  const auto only_reduce = [](const Configuration&) { return std::vector<Transition>{Transition::reduce()}; };
  std::size_t steps = 0;
  const auto arcs = run_parser(SystemKind::ArcEager, 4, only_reduce, "ROOT", &steps);
  CHECK(steps == 4);
  for (int d = 1; d <= 4; ++d) CHECK(arcs.contains(0, "ROOT", d));
}

TEST_CASE("a guide that always proposes LEFT-ARC") {
  // LEFT-ARC is illegal only with the root on top, so SHIFT and LEFT-ARC
  // alternate: each token is headed by its right neighbour and the last one
  // is root-attached by finalize.
  const auto left = [](const Configuration&) { return std::vector<Transition>{Transition::left_arc("x")}; };
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto arcs = run_parser(SystemKind::ArcEager, n, left, "ROOT");
    for (int d = 1; d < static_cast<int>(n); ++d) CHECK(arcs.contains(d + 1, "x", d));
    CHECK(arcs.contains(0, "ROOT", static_cast<int>(n)));
  }
  const auto one = run_parser(SystemKind::ArcEager, 1, left, "ROOT");
  CHECK(one.contains(0, "ROOT", 1));
}

TEST_CASE("an oracle guide reproduces gold") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const auto h = random_tree(1 + static_cast<int>(rng() % 10), rng);
    if (!brute_no_crossing(h)) continue;
    const auto s = make_sentence(h);
    const auto gold = gold_arcs(s);
    for (auto kind : {SystemKind::ArcEager, SystemKind::Baseline}) {
      const auto guide = [&](const Configuration& c) {
        return std::vector<Transition>{oracle_transition(kind, c, gold)};
      };
      std::size_t steps = 0;
      CHECK(run_parser(kind, s.size(), guide, "ROOT", &steps) == gold);
      if (kind == SystemKind::ArcEager) CHECK(steps <= 2 * s.size());
    }
  }
}

TEST_CASE("random guides still yield projective trees") {
  std::mt19937_64 rng(22);
  const std::vector<std::string> rels{"a", "b"};
  for (auto kind : {SystemKind::ArcEager, SystemKind::Baseline}) {
    const auto inventory = system_for(kind).all_transitions(rels);
    for (int trial = 0; trial < 500; ++trial) {
      const std::size_t n = 1 + rng() % 10;
      const auto guide = [&](const Configuration&) {
        auto shuffled = inventory;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        shuffled.resize(1 + rng() % shuffled.size());
        return shuffled;
      };
      const auto arcs = run_parser(kind, n, guide, "ROOT");
      REQUIRE(arcs.size() == n);
      std::vector<int> h;
      for (std::size_t d = 1; d <= n; ++d) h.push_back(*arcs.head(static_cast<int>(d)));
      CHECK(brute_acyclic(h));
      CHECK(brute_no_crossing(h));
    }
  }
}

TEST_CASE("training data for the three-token fixture") {
  const auto corpus = read_conllx_file(fixture("tiny.conll"));
  const auto data = collect_training_data(corpus, SystemKind::ArcEager, default_templates());
  CHECK(data.instances.size() == 5);
  CHECK(data.report.sentences_used == 1);
  CHECK(data.report.relations == std::vector<std::string>{"det", "root", "subj"});
  CHECK(data.labels.find("SHIFT").has_value());
  CHECK(data.labels.find("REDUCE").has_value());
  CHECK(data.labels.find("LEFT-ARC:det").has_value());
  CHECK_FALSE(data.labels.find("LEFT-ARC:obj").has_value());
  CHECK(data.labels.size() == 2 + 2 * 3);

  const auto baseline = collect_training_data(corpus, SystemKind::Baseline, default_templates());
  CHECK_FALSE(baseline.labels.find("REDUCE").has_value());
}

TEST_CASE("non-projective sentences are skipped") {
  auto corpus = read_conllx_file(fixture("nonprojective.conll"));
  CHECK(code_of([&] { collect_training_data(corpus, SystemKind::ArcEager, default_templates()); }) ==
        Errc::NoProjectiveSentences);
  corpus.push_back(read_conllx_file(fixture("tiny.conll"))[0]);
  const auto data = collect_training_data(corpus, SystemKind::ArcEager, default_templates());
  CHECK(data.report.sentences_used == 1);
  CHECK(data.report.sentences_skipped == 1);
}

TEST_CASE("parsing preserves the other columns and is deterministic") {
  const auto corpus = read_conllx_file(fixture("multi.conll"));
  const auto train = generate_fixture(3, 60);
  const auto trained = train_parser(train, SystemKind::ArcEager, default_templates(), spec("dtree"));
  for (const auto& s : corpus) {
    const auto a = parse_sentence(trained.model, s);
    CHECK(parse_sentence(trained.model, s) == a);
    REQUIRE(a.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(a.tokens[i].form == s.tokens[i].form);
      CHECK(a.tokens[i].lemma == s.tokens[i].lemma);
      CHECK(a.tokens[i].feats == s.tokens[i].feats);
      CHECK(a.tokens[i].postag == s.tokens[i].postag);
      CHECK(a.tokens[i].phead == "_");
      CHECK(a.tokens[i].pdeprel == "_");
      CHECK(a.tokens[i].head.has_value());
    }
    CHECK(is_projective(a));
  }
}

TEST_CASE("layout disagreement is reported") {
  const auto train = generate_fixture(4, 20);
  auto trained = train_parser(train, SystemKind::ArcEager, default_templates(), spec("nb"));
  const auto s = train.front();
  trained.model.features = FeatureModel(std::vector{FeatureTemplate::parse("postag(stack[0])")});
  CHECK(code_of([&] { parse_sentence(trained.model, s); }) == Errc::ModelMismatch);
  trained.model.classifier.reset();
  CHECK(code_of([&] { parse_sentence(trained.model, s); }) == Errc::ModelMismatch);
}

TEST_CASE("models survive a save and load for every kind") {
  const auto train = generate_fixture(5, 80);
  const auto test = generate_fixture(6, 20);
  for (const char* kind : {"nb", "dtree", "knn", "linear-svm", "logistic"}) {
    CAPTURE(kind);
    const auto trained = train_parser(train, SystemKind::ArcEager, default_templates(), spec(kind));
    const auto dir = scratch(kind);
    save_model(dir.string(), trained.model);
    for (const char* file : {"meta.txt", "features.txt", "labels.txt", "classifier.txt", "symbols-form.txt",
                             "symbols-postag.txt", "symbols-deprel.txt"}) {
      CHECK(fs::exists(dir / file));
    }
    const auto loaded = load_model(dir.string());
    CHECK(loaded.system == trained.model.system);
    CHECK(loaded.features == trained.model.features);
    CHECK(loaded.labels == trained.model.labels);
    CHECK(loaded.classifier->params() == trained.model.classifier->params());
    for (const auto& s : test) CHECK(parse_sentence(loaded, s) == parse_sentence(trained.model, s));
  }
}

TEST_CASE("baseline models round trip too") {
  const auto train = generate_fixture(7, 40);
  const auto trained = train_parser(train, SystemKind::Baseline, default_templates(), spec("knn"));
  const auto dir = scratch("baseline");
  save_model(dir.string(), trained.model);
  const auto loaded = load_model(dir.string());
  CHECK(loaded.system == SystemKind::Baseline);
  for (const auto& s : train) CHECK(parse_sentence(loaded, s) == parse_sentence(trained.model, s));
}

TEST_CASE("broken model directories") {
  CHECK(code_of([] { load_model("/nonexistent/model"); }) == Errc::BadModel);
  const auto train = generate_fixture(8, 10);
  const auto trained = train_parser(train, SystemKind::ArcEager, default_templates(), spec("knn"));
  const auto dir = scratch("broken");
  save_model(dir.string(), trained.model);
  fs::remove(dir / "labels.txt");
  CHECK(code_of([&] { load_model(dir.string()); }) == Errc::BadModel);
  save_model(dir.string(), trained.model);
  std::ofstream(dir / "classifier.txt") << "k one\n";
  CHECK(code_of([&] { load_model(dir.string()); }) == Errc::BadModel);
  save_model(dir.string(), trained.model);
  std::ofstream(dir / "meta.txt") << "format-version=9\n";
  CHECK(code_of([&] { load_model(dir.string()); }) == Errc::BadModel);
}

TEST_CASE("remote models export the training file and parse over the wire") {
  const auto train = generate_fixture(9, 30);
  const auto dir = scratch("remote");
  fs::create_directories(dir);
  // The peer memorizes the exported file, standing in for an external server.
  std::map<std::string, std::string> table;
  FakePeer peer(classify_script([&](const std::string& values) {
    const auto it = table.find(values);
    return it == table.end() ? std::string("CATEGORY SHIFT") : "CATEGORY " + it->second;
  }));
  ClassifierSpec remote;
  remote.kind = "remote";
  remote.remote = RemoteConfig{"127.0.0.1", peer.port(), std::chrono::milliseconds(2000), 3};
  remote.export_path = (dir / "training.txt").string();
  const auto trained = train_parser(train, SystemKind::ArcEager, default_templates(), remote);
  save_model(dir.string(), trained.model);

  std::ifstream exported(dir / "training.txt");
  std::string line;
  std::size_t lines = 0;
  while (std::getline(exported, line)) {
    const auto fields = split_fields(line);
    REQUIRE(fields.size() == 15);
    std::vector<std::string> values(fields.begin(), fields.end() - 1);
    table[join_fields(values)] = fields.back();
    ++lines;
  }
  CHECK(lines == trained.report.instances);

  const auto loaded = load_model(dir.string());
  CHECK(loaded.classifier->kind() == "remote");
  for (const auto& s : train) CHECK(heads(parse_sentence(loaded, s)) == heads(s));
}

TEST_CASE("synthetic treebank") {
  const auto a = generate_fixture(kDefaultSeed);
  CHECK(a.size() == kDefaultFixtureSentences);
  CHECK(generate_fixture(kDefaultSeed) == a);
  CHECK(generate_fixture(kDefaultSeed + 1) != a);
  std::size_t shortest = 99, longest = 0;
  for (const auto& s : a) {
    validate(s);
    CHECK(is_projective(s));
    shortest = std::min(shortest, s.size());
    longest = std::max(longest, s.size());
  }
  CHECK(shortest >= 3);
  CHECK(longest <= 12);

  // No two instances share values but not the label.
  const auto data = collect_training_data(a, SystemKind::ArcEager, default_templates());
  std::map<std::vector<std::uint32_t>, ClassId> seen;
  for (const auto& i : data.instances) {
    std::vector<std::uint32_t> key;
    for (auto v : i.values) key.push_back(v.raw());
    const auto [it, fresh] = seen.emplace(key, i.label);
    CHECK(it->second == i.label);
  }
}
