#pragma once

#include <optional>
#include <string>

#include "depforge/parser.hpp"

namespace depforge {

inline constexpr int kModelFormatVersion = 1;

// Model directory layout (UTF-8 text):
//   meta.txt            key=value: format-version, classifier, system,
//                       default-relation, param.<name> per hyperparameter
//   features.txt        feature-model file
//   symbols-<attr>.txt  one symbol per line, line k holds id k + 2
//   labels.txt          one class label per line, line k holds class id k
//   classifier.txt      kind-specific body

void save_model(const std::string& dir, const ParserModel& model);

/// `remote_override` replaces the host/port recorded for a remote model.
/// Throws Errc::BadModel for missing or inconsistent files.
ParserModel load_model(const std::string& dir,
                       const std::optional<RemoteConfig>& remote_override = std::nullopt);

}  // namespace depforge
