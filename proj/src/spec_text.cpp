#include "ergolab/spec_text.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>

namespace ergolab {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

const std::string* SpecText::find(std::string_view key) const {
  for (const auto& [k, v] : keyed) {
    if (k == key) return &v;
  }
  return nullptr;
}

const std::string& SpecText::get(std::string_view key) const {
  if (const auto* v = find(key)) return *v;
  throw ParseError("'" + name + "' requires argument '" + std::string(key) + "'");
}

void SpecText::expect_keys(std::initializer_list<std::string_view> allowed, bool allow_positional) const {
  for (const auto& [k, v] : keyed) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      throw ParseError("'" + name + "' does not accept argument '" + k + "'");
  }
  if (!allow_positional && !positional.empty())
    throw ParseError("'" + name + "' does not accept positional argument '" + positional.front() + "'");
}

std::vector<std::string> split_top_level(std::string_view text, char sep) {
  std::vector<std::string> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || (text[i] == sep && depth == 0)) {
      parts.push_back(trim(text.substr(start, i - start)));
      start = i + 1;
      continue;
    }
    if (text[i] == '(') ++depth;
    if (text[i] == ')') --depth;
    if (depth < 0) throw ParseError("unbalanced ')' in '" + std::string(text) + "'");
  }
  if (depth != 0) throw ParseError("unbalanced '(' in '" + std::string(text) + "'");
  return parts;
}

SpecText parse_spec_text(std::string_view text) {
  SpecText spec;
  std::string t = trim(text);
  auto colon = t.find(':');
  spec.name = trim(std::string_view(t).substr(0, colon));
  if (spec.name.empty()) throw ParseError("empty spec '" + std::string(text) + "'");
  if (colon == std::string::npos) return spec;
  spec.raw_args = t.substr(colon + 1);
  if (trim(spec.raw_args).empty()) return spec;
  for (auto& part : split_top_level(spec.raw_args, ',')) {
    if (part.empty()) throw ParseError("empty argument in '" + std::string(text) + "'");
    auto eq = part.find('=');
    if (eq == std::string::npos) {
      spec.positional.push_back(part);
    } else {
      std::string key = trim(std::string_view(part).substr(0, eq));
      std::string value = trim(std::string_view(part).substr(eq + 1));
      if (key.empty() || value.empty()) throw ParseError("malformed argument '" + part + "'");
      if (spec.find(key)) throw ParseError("duplicate argument '" + key + "'");
      spec.keyed.emplace_back(std::move(key), std::move(value));
    }
  }
  return spec;
}

std::int64_t parse_int64(std::string_view text) {
  i128 v = parse_i128(trim(text));
  if (v > INT64_MAX || v < INT64_MIN) throw ParseError("integer out of range: '" + std::string(text) + "'");
  return static_cast<std::int64_t>(v);
}

double parse_real(std::string_view text) {
  std::string s = trim(text);
  if (s.empty()) throw ParseError("empty number");
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE) throw ParseError("malformed number '" + s + "'");
  return v;
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace ergolab
