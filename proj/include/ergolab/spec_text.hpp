#pragma once

// Tokenizer for the compact `name:key=value,key=value` grammar used to name
// systems, observables, sequences and weights on the command line.

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ergolab/numbers.hpp"

namespace ergolab {

struct SpecText {
  std::string name;
  std::vector<std::pair<std::string, std::string>> keyed;
  std::vector<std::string> positional;
  std::string raw_args;  // everything after the first ':'

  /// Value for `key`; ParseError if absent.
  const std::string& get(std::string_view key) const;
  const std::string* find(std::string_view key) const;
  /// ParseError if any keyed argument is not in `allowed`, or if positional
  /// arguments are present when `allow_positional` is false.
  void expect_keys(std::initializer_list<std::string_view> allowed, bool allow_positional = false) const;
};

/// Splits at the first ':' and then on commas outside parentheses.
SpecText parse_spec_text(std::string_view text);

/// Comma split outside parentheses, with surrounding whitespace trimmed.
std::vector<std::string> split_top_level(std::string_view text, char sep);

std::int64_t parse_int64(std::string_view text);
double parse_real(std::string_view text);

/// Shortest round-trip text for a double (17 significant digits).
std::string format_real(double v);

}  // namespace ergolab
