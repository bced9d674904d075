#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace facecue {

enum class ErrorCode {
  WrongPointCount,
  NonFiniteCoordinate,
  DegenerateLandmark,
  InvalidConfig,
  EmptyDataset,
  DuplicateFrameId,
  MissingLabel,
  TooFewSamples,
  KTooLarge,
  EmptyTrainingSet,
  DimensionMismatch,
  EmptyTestSet,
  ClassAbsent,
  MissingFile,
  MalformedHeader,
  RowParseError,
  IoError,
  FormatVersionMismatch,
  MalformedModel,
  DigestMismatch,
  TrainTestOverlap,
  AugmentedTestData,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::WrongPointCount: return "WrongPointCount";
    case ErrorCode::NonFiniteCoordinate: return "NonFiniteCoordinate";
    case ErrorCode::DegenerateLandmark: return "DegenerateLandmark";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::DuplicateFrameId: return "DuplicateFrameId";
    case ErrorCode::MissingLabel: return "MissingLabel";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::KTooLarge: return "KTooLarge";
    case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyTestSet: return "EmptyTestSet";
    case ErrorCode::ClassAbsent: return "ClassAbsent";
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::RowParseError: return "RowParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::FormatVersionMismatch: return "FormatVersionMismatch";
    case ErrorCode::MalformedModel: return "MalformedModel";
    case ErrorCode::DigestMismatch: return "DigestMismatch";
    case ErrorCode::TrainTestOverlap: return "TrainTestOverlap";
    case ErrorCode::AugmentedTestData: return "AugmentedTestData";
  }
  return "Unknown";
}

/// Violations of the train/test protocol, as opposed to bad input data.
constexpr bool is_protocol_violation(ErrorCode code) {
  return code == ErrorCode::TrainTestOverlap || code == ErrorCode::AugmentedTestData;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace facecue
