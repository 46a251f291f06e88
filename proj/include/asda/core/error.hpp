#pragma once

#include <stdexcept>
#include <string>

namespace asda {

enum class Errc {
  // scene
  MissingField,
  SchemaMismatch,
  InconsistentBaseMap,
  UnknownNode,
  // distribution
  EmptyDistributionSpace,
  DegenerateRegion,
  FetchFailed,
  NoFeatures,
  MalformedFeature,
  SamplingExhausted,
  EmptyLayer,
  // pipeline
  UnknownOperation,
  InvalidParams,
  DuplicateName,
  UnknownAsset,
  EmptyTextureSet,
  NoTargetInstances,
  InvalidRange,
  InvalidProbabilityVector,
  NeedTwoAnchors,
  // dsl
  SyntaxError,
  UnknownTarget,
  UnterminatedString,
  PhaseViolation,
  DuplicateCollect,
  UnknownMethod,
  // capture / post
  NoAnchors,
  IoError,
  DuplicateRecord,
  UnknownEffect,
  // optimizer
  InsufficientPoints,
  DegenerateFit,
  Unreachable,
  BudgetExhausted,
  // cli
  MissingManifest,
  ConfigError,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::MissingField: return "MissingField";
    case Errc::SchemaMismatch: return "SchemaMismatch";
    case Errc::InconsistentBaseMap: return "InconsistentBaseMap";
    case Errc::UnknownNode: return "UnknownNode";
    case Errc::EmptyDistributionSpace: return "EmptyDistributionSpace";
    case Errc::DegenerateRegion: return "DegenerateRegion";
    case Errc::FetchFailed: return "FetchFailed";
    case Errc::NoFeatures: return "NoFeatures";
    case Errc::MalformedFeature: return "MalformedFeature";
    case Errc::SamplingExhausted: return "SamplingExhausted";
    case Errc::EmptyLayer: return "EmptyLayer";
    case Errc::UnknownOperation: return "UnknownOperation";
    case Errc::InvalidParams: return "InvalidParams";
    case Errc::DuplicateName: return "DuplicateName";
    case Errc::UnknownAsset: return "UnknownAsset";
    case Errc::EmptyTextureSet: return "EmptyTextureSet";
    case Errc::NoTargetInstances: return "NoTargetInstances";
    case Errc::InvalidRange: return "InvalidRange";
    case Errc::InvalidProbabilityVector: return "InvalidProbabilityVector";
    case Errc::NeedTwoAnchors: return "NeedTwoAnchors";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::UnknownTarget: return "UnknownTarget";
    case Errc::UnterminatedString: return "UnterminatedString";
    case Errc::PhaseViolation: return "PhaseViolation";
    case Errc::DuplicateCollect: return "DuplicateCollect";
    case Errc::UnknownMethod: return "UnknownMethod";
    case Errc::NoAnchors: return "NoAnchors";
    case Errc::IoError: return "IoError";
    case Errc::DuplicateRecord: return "DuplicateRecord";
    case Errc::UnknownEffect: return "UnknownEffect";
    case Errc::InsufficientPoints: return "InsufficientPoints";
    case Errc::DegenerateFit: return "DegenerateFit";
    case Errc::Unreachable: return "Unreachable";
    case Errc::BudgetExhausted: return "BudgetExhausted";
    case Errc::MissingManifest: return "MissingManifest";
    case Errc::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace asda
