#include "ontoling/error.hpp"

namespace ontoling {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::EmptyTerm: return "EmptyTerm";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::DanglingEndpoint: return "DanglingEndpoint";
    case Errc::PosViolation: return "PosViolation";
    case Errc::TaxonomyCycle: return "TaxonomyCycle";
    case Errc::EmptyLexicon: return "EmptyLexicon";
    case Errc::SelfLoop: return "SelfLoop";
    case Errc::DuplicateRelation: return "DuplicateRelation";
    case Errc::InvalidSynset: return "InvalidSynset";
    case Errc::UnknownSynset: return "UnknownSynset";
    case Errc::InvalidCombination: return "InvalidCombination";
    case Errc::InvalidLevelSpec: return "InvalidLevelSpec";
    case Errc::Unsatisfiable: return "Unsatisfiable";
    case Errc::InsufficientDistractors: return "InsufficientDistractors";
    case Errc::DisjointnessFailure: return "DisjointnessFailure";
    case Errc::NetworkCount: return "NetworkCount";
    case Errc::PosConstraint: return "PosConstraint";
    case Errc::RelationKindConstraint: return "RelationKindConstraint";
    case Errc::NodeCountConstraint: return "NodeCountConstraint";
    case Errc::Disconnected: return "Disconnected";
    case Errc::EdgeNotInLexicon: return "EdgeNotInLexicon";
    case Errc::SlotMismatch: return "SlotMismatch";
    case Errc::BankSize: return "BankSize";
    case Errc::DuplicateTerm: return "DuplicateTerm";
    case Errc::MissingAnswer: return "MissingAnswer";
    case Errc::AmbiguousAnswer: return "AmbiguousAnswer";
    case Errc::NetworksOverlap: return "NetworksOverlap";
    case Errc::InvalidPlayer: return "InvalidPlayer";
    case Errc::UnknownLevel: return "UnknownLevel";
    case Errc::UnknownSlot: return "UnknownSlot";
    case Errc::TermNotInBank: return "TermNotInBank";
    case Errc::TermAlreadyPlaced: return "TermAlreadyPlaced";
    case Errc::NothingPlaced: return "NothingPlaced";
    case Errc::SessionNotInProgress: return "SessionNotInProgress";
    case Errc::SessionCompleted: return "SessionCompleted";
    case Errc::IncompletePlacement: return "IncompletePlacement";
    case Errc::NotPassed: return "NotPassed";
    case Errc::AlreadyCompleted: return "AlreadyCompleted";
    case Errc::NotFound: return "NotFound";
    case Errc::CorruptRecord: return "CorruptRecord";
    case Errc::VersionUnsupported: return "VersionUnsupported";
    case Errc::StorageFailure: return "StorageFailure";
    case Errc::BadRequest: return "BadRequest";
  }
  return "Unknown";
}

}  // namespace ontoling
