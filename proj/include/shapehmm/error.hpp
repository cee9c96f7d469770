#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace shapehmm {

enum class Errc {
  EmptySequence,
  LengthMismatch,
  EmptyModel,
  NegativeAlpha,
  TooLarge,
  MalformedModelFile,
  UnknownLetter,
  MalformedLine,
  EmptyList,
  InsufficientWords,
  EmptyTestSet,
  Io,
};

const char* to_string(Errc code) noexcept;

/// Every failure in the library is reported through this exception. `line()`
/// carries a 1-based line number for errors raised while reading text files.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what, std::optional<std::size_t> line = std::nullopt);

  Errc code() const noexcept { return code_; }
  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  Errc code_;
  std::optional<std::size_t> line_;
};

}  // namespace shapehmm
