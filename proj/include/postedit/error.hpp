#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace postedit {

enum class ErrorCode {
  InvalidArgument,
  InvalidText,
  UnknownPage,
  UnknownSegment,
  UnknownProject,
  IllegalTransition,
  PlaceholderSegment,
  InvalidSLP1Character,
  InvalidThreshold,
  MalformedLine,
  EmptyLexicon,
  StaleSuggestion,
  MalformedEvent,
  MissingManifest,
  UnsupportedVersion,
  MissingReferencedFile,
  MalformedMatrix,
  MalformedManifest,
  CorruptArchive,
  BackendUnavailable,
  Conflict,
  IoError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by line-oriented parsers (lexicon, TM). `line()` is 1-based.
class MalformedLine : public Error {
 public:
  MalformedLine(std::size_t line, const std::string& what)
      : Error(ErrorCode::MalformedLine,
              "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class InvalidSLP1Character : public Error {
 public:
  InvalidSLP1Character(std::size_t position, char c);

  // Byte offset into the input.
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace postedit
