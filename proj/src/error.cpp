#include "shapehmm/error.hpp"

namespace shapehmm {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::EmptySequence: return "EmptySequence";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::EmptyModel: return "EmptyModel";
    case Errc::NegativeAlpha: return "NegativeAlpha";
    case Errc::TooLarge: return "TooLarge";
    case Errc::MalformedModelFile: return "MalformedModelFile";
    case Errc::UnknownLetter: return "UnknownLetter";
    case Errc::MalformedLine: return "MalformedLine";
    case Errc::EmptyList: return "EmptyList";
    case Errc::InsufficientWords: return "InsufficientWords";
    case Errc::EmptyTestSet: return "EmptyTestSet";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

namespace {

std::string decorate(Errc code, const std::string& what, std::optional<std::size_t> line) {
  std::string out = to_string(code);
  if (line) out += " (line " + std::to_string(*line) + ")";
  out += ": ";
  out += what;
  return out;
}

}  // namespace

Error::Error(Errc code, const std::string& what, std::optional<std::size_t> line)
    : std::runtime_error(decorate(code, what, line)), code_(code), line_(line) {}

}  // namespace shapehmm
