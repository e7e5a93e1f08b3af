#include "postedit/error.hpp"

namespace postedit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidText: return "InvalidText";
    case ErrorCode::UnknownPage: return "UnknownPage";
    case ErrorCode::UnknownSegment: return "UnknownSegment";
    case ErrorCode::UnknownProject: return "UnknownProject";
    case ErrorCode::IllegalTransition: return "IllegalTransition";
    case ErrorCode::PlaceholderSegment: return "PlaceholderSegment";
    case ErrorCode::InvalidSLP1Character: return "InvalidSLP1Character";
    case ErrorCode::InvalidThreshold: return "InvalidThreshold";
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::EmptyLexicon: return "EmptyLexicon";
    case ErrorCode::StaleSuggestion: return "StaleSuggestion";
    case ErrorCode::MalformedEvent: return "MalformedEvent";
    case ErrorCode::MissingManifest: return "MissingManifest";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::MissingReferencedFile: return "MissingReferencedFile";
    case ErrorCode::MalformedMatrix: return "MalformedMatrix";
    case ErrorCode::MalformedManifest: return "MalformedManifest";
    case ErrorCode::CorruptArchive: return "CorruptArchive";
    case ErrorCode::BackendUnavailable: return "BackendUnavailable";
    case ErrorCode::Conflict: return "Conflict";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

InvalidSLP1Character::InvalidSLP1Character(std::size_t position, char c)
    : Error(ErrorCode::InvalidSLP1Character,
            "invalid SLP1 character 0x" +
                [c] {
                  static const char* hex = "0123456789abcdef";
                  auto u = static_cast<unsigned char>(c);
                  return std::string{hex[u >> 4], hex[u & 0xf]};
                }() +
                " at position " + std::to_string(position)),
      position_(position) {}

}  // namespace postedit
