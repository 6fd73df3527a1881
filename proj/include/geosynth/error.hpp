#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace geosynth {

enum class Errc {
  // construction-dsl
  SyntaxError,
  UnknownPrimitive,
  UndeclaredPoint,
  DuplicateDeclaration,
  // layout-engine
  UnsatisfiableConstruction,
  NumericDegeneracy,
  PoolTooSmall,
  // qa-synthesizer
  NotEnoughPoints,
  NoCircle,
  NoEligibleAngle,
  NoEligiblePair,
  NoEligibleLines,
  MalformedSpec,
  UnsupportedPredicate,
  // curriculum-engine
  SourceExhausted,
  // eval-harness
  EmptyGroundTruth,
  EndpointError,
  ImageMissing,
  MalformedPredictions,
  // pipeline / cli
  InvalidConfig,
  Io,
};

inline std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::UnknownPrimitive: return "UnknownPrimitive";
    case Errc::UndeclaredPoint: return "UndeclaredPoint";
    case Errc::DuplicateDeclaration: return "DuplicateDeclaration";
    case Errc::UnsatisfiableConstruction: return "UnsatisfiableConstruction";
    case Errc::NumericDegeneracy: return "NumericDegeneracy";
    case Errc::PoolTooSmall: return "PoolTooSmall";
    case Errc::NotEnoughPoints: return "NotEnoughPoints";
    case Errc::NoCircle: return "NoCircle";
    case Errc::NoEligibleAngle: return "NoEligibleAngle";
    case Errc::NoEligiblePair: return "NoEligiblePair";
    case Errc::NoEligibleLines: return "NoEligibleLines";
    case Errc::MalformedSpec: return "MalformedSpec";
    case Errc::UnsupportedPredicate: return "UnsupportedPredicate";
    case Errc::SourceExhausted: return "SourceExhausted";
    case Errc::EmptyGroundTruth: return "EmptyGroundTruth";
    case Errc::EndpointError: return "EndpointError";
    case Errc::ImageMissing: return "ImageMissing";
    case Errc::MalformedPredictions: return "MalformedPredictions";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

/// 1-based position in DSL or logical-form source text.
struct SourceLocation {
  std::size_t line = 1;
  std::size_t column = 1;
};

/// Every failure raised by the library. `code` identifies the error kind;
/// `where` is set for parse diagnostics and `statement` for layout failures.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message,
        std::optional<SourceLocation> where = std::nullopt,
        std::optional<std::size_t> statement = std::nullopt)
      : std::runtime_error(compose(code, message, where, statement)),
        code_(code),
        detail_(message),
        where_(where),
        statement_(statement) {}

  Errc code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }
  const std::optional<SourceLocation>& where() const noexcept { return where_; }
  const std::optional<std::size_t>& statement() const noexcept { return statement_; }

 private:
  static std::string compose(Errc code, const std::string& message,
                             const std::optional<SourceLocation>& where,
                             const std::optional<std::size_t>& statement) {
    std::string out(errc_name(code));
    if (where) {
      out += " at " + std::to_string(where->line) + ":" + std::to_string(where->column);
    }
    if (statement) {
      out += " in statement " + std::to_string(*statement + 1);
    }
    out += ": " + message;
    return out;
  }

  Errc code_;
  std::string detail_;
  std::optional<SourceLocation> where_;
  std::optional<std::size_t> statement_;
};

}  // namespace geosynth
