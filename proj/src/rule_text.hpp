#pragma once

// Shared pieces of the small call-syntax parsers used by set, function and sequence rules.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sumset::detail {

std::string_view trim(std::string_view s);

/// Whole-string integer; DomainError naming `what` otherwise.
std::int64_t parse_int(std::string_view s, const char* what);

/// "name(a, b(c, d), [e, f])" -> name and its top-level arguments. A bare word has none.
std::pair<std::string, std::vector<std::string_view>> split_call(std::string_view s);

void expect_args(const std::string& name, const std::vector<std::string_view>& args, std::size_t lo, std::size_t hi);

}  // namespace sumset::detail
