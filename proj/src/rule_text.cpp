#include "rule_text.hpp"

#include <cctype>
#include <charconv>

#include "sumsetlab/error.hpp"

namespace sumset::detail {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::int64_t parse_int(std::string_view s, const char* what) {
  s = trim(s);
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw DomainError(std::string("expected an integer for ") + what + ", got '" + std::string(s) + "'");
  return v;
}

/// Splits "name(a, b(c, d), [e, f])" into name and top-level arguments.
std::pair<std::string, std::vector<std::string_view>> split_call(std::string_view s) {
  s = trim(s);
  const auto open = s.find('(');
  if (open == std::string_view::npos) {
    for (char ch : s)
      if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_')) throw DomainError("bad set rule: " + std::string(s));
    return {std::string(s), {}};
  }
  if (s.back() != ')') throw DomainError("set rule missing ')': " + std::string(s));
  std::string name(trim(s.substr(0, open)));
  std::vector<std::string_view> args;
  const auto body = s.substr(open + 1, s.size() - open - 2);
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < body.size(); ++i) {
    const char ch = body[i];
    if (ch == '(' || ch == '[') ++depth;
    else if (ch == ')' || ch == ']') {
      if (--depth < 0) throw DomainError("unbalanced brackets in set rule: " + std::string(s));
    } else if (ch == ',' && depth == 0) {
      args.push_back(trim(body.substr(start, i - start)));
      start = i + 1;
    }
  }
  if (depth != 0) throw DomainError("unbalanced brackets in set rule: " + std::string(s));
  if (!trim(body).empty()) args.push_back(trim(body.substr(start)));
  return {name, args};
}

void expect_args(const std::string& name, const std::vector<std::string_view>& args, std::size_t lo, std::size_t hi) {
  if (args.size() < lo || args.size() > hi)
    throw DomainError(name + " takes " + std::to_string(lo) + (lo == hi ? "" : ".." + std::to_string(hi)) +
                      " arguments, got " + std::to_string(args.size()));
}

}  // namespace sumset::detail
