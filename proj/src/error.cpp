#include "depforge/error.hpp"

namespace depforge {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::WrongColumnCount: return "WrongColumnCount";
    case Errc::NonNumericId: return "NonNumericId";
    case Errc::HeadOutOfRange: return "HeadOutOfRange";
    case Errc::CyclicHeads: return "CyclicHeads";
    case Errc::EmptyFile: return "EmptyFile";
    case Errc::InvariantViolation: return "InvariantViolation";
    case Errc::MissingHead: return "MissingHead";
    case Errc::EmptySentence: return "EmptySentence";
    case Errc::IllegalTransition: return "IllegalTransition";
    case Errc::NotTerminal: return "NotTerminal";
    case Errc::NonProjectiveGold: return "NonProjectiveGold";
    case Errc::EmptyBuffer: return "EmptyBuffer";
    case Errc::VocabularyMismatch: return "VocabularyMismatch";
    case Errc::BadFeatureSpec: return "BadFeatureSpec";
    case Errc::EmptyTrainingSet: return "EmptyTrainingSet";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::BadEscape: return "BadEscape";
    case Errc::Timeout: return "Timeout";
    case Errc::ProtocolError: return "ProtocolError";
    case Errc::UnknownLabel: return "UnknownLabel";
    case Errc::ConnectionLost: return "ConnectionLost";
    case Errc::ModelMismatch: return "ModelMismatch";
    case Errc::NoProjectiveSentences: return "NoProjectiveSentences";
    case Errc::BadModel: return "BadModel";
    case Errc::Misaligned: return "Misaligned";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace depforge
