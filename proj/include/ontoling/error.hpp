#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ontoling {

/// Machine-readable error and violation codes shared by every layer.
/// The service maps each code onto exactly one HTTP status.
enum class Errc {
  // lexicon
  EmptyTerm,
  SyntaxError,
  DuplicateId,
  DanglingEndpoint,
  PosViolation,
  TaxonomyCycle,
  EmptyLexicon,
  SelfLoop,
  DuplicateRelation,
  InvalidSynset,
  UnknownSynset,
  InvalidCombination,
  // levels
  InvalidLevelSpec,
  Unsatisfiable,
  InsufficientDistractors,
  DisjointnessFailure,
  NetworkCount,
  PosConstraint,
  RelationKindConstraint,
  NodeCountConstraint,
  Disconnected,
  EdgeNotInLexicon,
  SlotMismatch,
  BankSize,
  DuplicateTerm,
  MissingAnswer,
  AmbiguousAnswer,
  NetworksOverlap,
  // engine
  InvalidPlayer,
  UnknownLevel,
  UnknownSlot,
  TermNotInBank,
  TermAlreadyPlaced,
  NothingPlaced,
  SessionNotInProgress,
  SessionCompleted,
  IncompletePlacement,
  NotPassed,
  AlreadyCompleted,
  // store
  NotFound,
  CorruptRecord,
  VersionUnsupported,
  StorageFailure,
  // transport
  BadRequest,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace ontoling
