#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "depforge/classifier.hpp"
#include "depforge/conllx.hpp"
#include "depforge/features.hpp"
#include "depforge/remote.hpp"
#include "depforge/transition.hpp"

namespace depforge {

inline constexpr std::string_view kDefaultRootRelation = "ROOT";

struct ParserModel {
  SystemKind system = SystemKind::ArcEager;
  FeatureModel features;  // symbol tables frozen
  LabelSet labels;
  std::unique_ptr<Classifier> classifier;
  std::string default_relation{kDefaultRootRelation};
};

/// Ranks candidate transitions for a configuration, best first.
using TransitionGuide = std::function<std::vector<Transition>(const Configuration&)>;

/// The deterministic parsing loop: take the first legal transition the guide
/// proposes, or SHIFT when none is legal, until the buffer is empty; then
/// root-attach leftovers. `transitions` receives the number of steps taken.
ArcSet run_parser(SystemKind system, std::size_t sentence_len, const TransitionGuide& guide,
                  std::string_view default_relation, std::size_t* transitions = nullptr);

/// Guide backed by the model's feature extraction and classifier.
/// Throws Errc::ModelMismatch when their layouts disagree.
TransitionGuide classifier_guide(const ParserModel& model, const Sentence& sentence);

/// Copy of `sentence` with predicted HEAD/DEPREL; PHEAD/PDEPREL become "_".
Sentence parse_sentence(const ParserModel& model, const Sentence& sentence,
                        std::size_t* transitions = nullptr);

/// Writes HEAD/DEPREL from `arcs` into a copy of `sentence`.
Sentence with_arcs(const Sentence& sentence, const ArcSet& arcs);

struct ClassifierSpec {
  std::string kind = "knn";
  Params params;
  std::optional<RemoteConfig> remote;  // required when kind == "remote"
  std::string export_path;             // remote: where to write the training file
};

struct TrainReport {
  std::size_t sentences_used = 0;
  std::size_t sentences_skipped = 0;  // non-projective gold
  std::size_t instances = 0;
  std::size_t labels = 0;
  std::vector<std::string> relations;
};

struct TrainingData {
  FeatureModel features;
  LabelSet labels;
  std::vector<Instance> instances;
  TrainReport report;
};

/// Oracle derivation plus training-mode extraction over a gold corpus.
/// The label inventory is every transition of the system over the
/// relations seen in used sentences. Throws Errc::NoProjectiveSentences.
TrainingData collect_training_data(std::span<const Sentence> corpus, SystemKind system,
                                   std::vector<FeatureTemplate> templates);

struct TrainedParser {
  ParserModel model;
  TrainReport report;
};

TrainedParser train_parser(std::span<const Sentence> corpus, SystemKind system,
                           std::vector<FeatureTemplate> templates, const ClassifierSpec& spec,
                           std::string default_relation = std::string(kDefaultRootRelation));

/// Builds (untrained) the classifier a spec describes.
std::unique_ptr<Classifier> build_classifier(const ClassifierSpec& spec, const FeatureModel& features,
                                             const LabelSet& labels);

}  // namespace depforge
