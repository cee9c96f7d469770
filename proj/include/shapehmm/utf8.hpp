#pragma once

#include <string>
#include <string_view>

namespace shapehmm::utf8 {

/// Throws Error(MalformedLine) on ill-formed input (overlong forms,
/// surrogates, truncated sequences).
std::u32string decode(std::string_view bytes);

std::string encode(char32_t cp);
std::string encode(std::u32string_view text);

}  // namespace shapehmm::utf8
