#pragma once

// Line-oriented parsing shared by the network and product loaders.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "adspread/error.hpp"
#include "adspread/network.hpp"

namespace adspread::detail {

/// Calls fn(line_number, tokens) for every non-blank line after stripping
/// '#' comments. Tokens are whitespace separated.
template <typename Fn>
void for_each_record(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::vector<std::string_view> tokens;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    tokens.clear();
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
      const std::size_t start = i;
      while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
      if (i > start) tokens.push_back(line.substr(start, i - start));
    }
    if (!tokens.empty()) fn(line_no, std::span<const std::string_view>(tokens));
  }
}

inline NodeId parse_node_id(std::string_view tok, const std::string& where) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size() || value >= kNoNode) {
    throw Error(ErrorKind::Parse, fmt::format("{}: bad node id '{}'", where, tok));
  }
  return static_cast<NodeId>(value);
}

inline double parse_real(std::string_view tok, const std::string& where) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(value)) {
    throw Error(ErrorKind::Parse, fmt::format("{}: bad number '{}'", where, tok));
  }
  return value;
}

}  // namespace adspread::detail
