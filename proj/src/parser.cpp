#include "depforge/parser.hpp"

#include <algorithm>
#include <set>

#include "depforge/error.hpp"
#include "depforge/oracle.hpp"

namespace depforge {

ArcSet run_parser(SystemKind system, std::size_t sentence_len, const TransitionGuide& guide,
                  std::string_view default_relation, std::size_t* transitions) {
  const auto& ts = system_for(system);
  Configuration config = ts.initial(sentence_len);
  const std::size_t limit = 2 * sentence_len + 2;
  std::size_t steps = 0;
  while (!ts.is_terminal(config)) {
    const auto ranked = guide(config);
    const auto chosen = std::find_if(ranked.begin(), ranked.end(),
                                     [&](const Transition& t) { return ts.legal(config, t); });
    config = ts.apply(config, chosen != ranked.end() ? *chosen : Transition::shift());
    if (++steps > limit) {
      throw Error(Errc::InvariantViolation, "parse exceeded " + std::to_string(limit) + " transitions");
    }
  }
  if (transitions) *transitions = steps;
  return finalize(config, default_relation);
}

TransitionGuide classifier_guide(const ParserModel& model, const Sentence& sentence) {
  if (!model.classifier) throw Error(Errc::ModelMismatch, "parser model has no classifier");
  const auto& schema = model.classifier->schema();
  if (schema.feature_count() != model.features.size()) {
    throw Error(Errc::ModelMismatch,
                "classifier expects " + std::to_string(schema.feature_count()) +
                    " features, feature model has " + std::to_string(model.features.size()));
  }
  if (schema.vocab_sizes != model.features.vocab_sizes() || schema.num_classes != model.labels.size()) {
    throw Error(Errc::ModelMismatch, "classifier layout differs from the feature model or label set");
  }
  // Labels are parsed once per call rather than per step.
  auto transitions = std::make_shared<std::vector<Transition>>();
  transitions->reserve(model.labels.size());
  for (const auto& label : model.labels.labels()) transitions->push_back(Transition::from_label(label));

  return [&model, &sentence, transitions](const Configuration& config) {
    const auto values = extract(config, sentence, model.features);
    const auto scored = model.classifier->predict(values);
    std::vector<Transition> ranked;
    ranked.reserve(scored.size());
    for (const auto& s : scored) {
      if (s.cls >= transitions->size()) {
        throw Error(Errc::ModelMismatch, "classifier produced class " + std::to_string(s.cls));
      }
      ranked.push_back((*transitions)[s.cls]);
    }
    return ranked;
  };
}

Sentence with_arcs(const Sentence& sentence, const ArcSet& arcs) {
  Sentence out = sentence;
  for (auto& tok : out.tokens) {
    tok.head = arcs.head(tok.id);
    const auto* rel = arcs.relation(tok.id);
    tok.deprel = rel ? std::optional<std::string>(*rel) : std::nullopt;
    tok.phead = "_";
    tok.pdeprel = "_";
  }
  return out;
}

Sentence parse_sentence(const ParserModel& model, const Sentence& sentence, std::size_t* transitions) {
  const auto guide = classifier_guide(model, sentence);
  const auto arcs = run_parser(model.system, sentence.size(), guide, model.default_relation, transitions);
  return with_arcs(sentence, arcs);
}

TrainingData collect_training_data(std::span<const Sentence> corpus, SystemKind system,
                                   std::vector<FeatureTemplate> templates) {
  TrainingData data{FeatureModel(std::move(templates)), {}, {}, {}};

  std::vector<std::vector<OracleStep>> derivations;
  std::set<std::string> relations;
  for (const auto& sentence : corpus) {
    std::vector<OracleStep> steps;
    try {
      steps = derive(sentence, system);
    } catch (const Error& e) {
      if (e.code() != Errc::NonProjectiveGold) throw;
      ++data.report.sentences_skipped;
      derivations.emplace_back();
      continue;
    }
    for (const auto& tok : sentence.tokens) relations.insert(tok.deprel.value_or("_"));
    derivations.push_back(std::move(steps));
    ++data.report.sentences_used;
  }
  if (data.report.sentences_used == 0) {
    throw Error(Errc::NoProjectiveSentences,
                std::to_string(data.report.sentences_skipped) + " sentences, none projective");
  }

  data.report.relations.assign(relations.begin(), relations.end());
  for (const auto& t : system_for(system).all_transitions(data.report.relations)) {
    data.labels.intern(t.label());
  }

  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (const auto& step : derivations[i]) {
      Instance inst;
      inst.values = extract(step.configuration, corpus[i], data.features, ExtractMode::Train);
      inst.label = *data.labels.find(step.transition.label());
      data.instances.push_back(std::move(inst));
    }
  }
  data.report.instances = data.instances.size();
  data.report.labels = data.labels.size();
  return data;
}

std::unique_ptr<Classifier> build_classifier(const ClassifierSpec& spec, const FeatureModel& features,
                                             const LabelSet& labels) {
  if (spec.kind == "remote") {
    if (!spec.remote) throw Error(Errc::InvalidArgument, "remote classifier needs host and port");
    if (!spec.params.empty()) {
      throw Error(Errc::InvalidArgument, "remote classifier takes no hyperparameters");
    }
    return std::make_unique<RemoteClassifier>(*spec.remote, features, labels, spec.export_path);
  }
  return make_classifier(spec.kind, spec.params);
}

TrainedParser train_parser(std::span<const Sentence> corpus, SystemKind system,
                           std::vector<FeatureTemplate> templates, const ClassifierSpec& spec,
                           std::string default_relation) {
  // Fail on a bad spec before the (possibly long) extraction pass.
  if (spec.kind != "remote") make_classifier(spec.kind, spec.params);

  auto data = collect_training_data(corpus, system, std::move(templates));
  TrainedParser out;
  out.report = data.report;
  out.model.system = system;
  out.model.default_relation = std::move(default_relation);
  out.model.classifier = build_classifier(spec, data.features, data.labels);
  out.model.classifier->train(data.instances, Schema{data.features.vocab_sizes(), data.labels.size()});
  out.model.features = std::move(data.features);
  out.model.labels = std::move(data.labels);
  return out;
}

}  // namespace depforge
