#pragma once

#include <charconv>
#include <cstdint>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ppad/error.hpp"

namespace ppad {

/// Line-oriented reader shared by all text formats. Strips `#` comments and
/// surrounding whitespace, skips blank lines and keeps 1-based line numbers
/// for diagnostics.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  /// Next non-blank line with comments removed, or nullopt at end of input.
  std::optional<std::string> next() {
    if (pending_) {
      std::optional<std::string> out = std::move(pending_);
      pending_.reset();
      return out;
    }
    std::string raw;
    while (std::getline(in_, raw)) {
      ++line_;
      if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      std::string_view view = trim(raw);
      if (!view.empty()) return std::string(view);
    }
    return std::nullopt;
  }

  /// Pushes a line back so the next call to next() returns it again.
  void unread(std::string line) { pending_ = std::move(line); }

  std::size_t line() const noexcept { return line_; }

  [[noreturn]] void fail(const std::string& what) const { throw FormatError(what, line_); }

  static std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
  }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
  std::optional<std::string> pending_;
};

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

/// Strict unsigned decimal parse; no sign, no trailing characters.
inline std::optional<std::uint64_t> parse_uint(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

/// Parses a `key=<uint>` header field such as `n=6`.
inline std::optional<std::uint64_t> parse_keyed_uint(std::string_view token, std::string_view key) {
  if (token.size() <= key.size() + 1 || token.substr(0, key.size()) != key ||
      token[key.size()] != '=') {
    return std::nullopt;
  }
  return parse_uint(token.substr(key.size() + 1));
}

}  // namespace ppad
