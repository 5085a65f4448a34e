#pragma once

#include <string>
#include <string_view>

namespace scribeforge::utf8 {

// Decodes UTF-8 into Unicode scalar values. Throws FormatError on malformed input.
std::u32string decode(std::string_view text);

std::string encode(std::u32string_view text);
std::string encode(char32_t c);

} // namespace scribeforge::utf8
