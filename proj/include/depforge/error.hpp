#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace depforge {

enum class Errc {
  // conllx
  WrongColumnCount,
  NonNumericId,
  HeadOutOfRange,
  CyclicHeads,
  EmptyFile,
  InvariantViolation,
  MissingHead,
  // transition / oracle
  EmptySentence,
  IllegalTransition,
  NotTerminal,
  NonProjectiveGold,
  EmptyBuffer,
  // features
  VocabularyMismatch,
  BadFeatureSpec,
  // classifiers
  EmptyTrainingSet,
  DimensionMismatch,
  // remote
  LengthMismatch,
  BadEscape,
  Timeout,
  ProtocolError,
  UnknownLabel,
  ConnectionLost,
  // parser / model io
  ModelMismatch,
  NoProjectiveSentences,
  BadModel,
  // eval
  Misaligned,
  InvalidArgument,
  Io,
};

std::string_view errc_name(Errc code);

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map them to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace depforge
