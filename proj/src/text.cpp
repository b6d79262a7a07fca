// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "apbench/text.hpp"

#include <algorithm>
#include <cctype>

namespace apbench::text {

namespace {
bool is_space(unsigned char c) { return std::isspace(c) != 0; }
bool is_alnum(unsigned char c) { return std::isalnum(c) != 0; }
}  // namespace

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string normalize_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (unsigned char c : s) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(c));
  }
  return out;
}

std::string canonicalize(std::string_view s) {
  std::string kept;
  kept.reserve(s.size());
  for (unsigned char c : s) {
    if (is_alnum(c)) {
      kept.push_back(static_cast<char>(std::tolower(c)));
    } else if (is_space(c)) {
      kept.push_back(' ');
    }
    // punctuation dropped
  }
  return normalize_whitespace(kept);
}

std::vector<std::string> tokenize(std::string_view s) {
  std::vector<std::string> tokens;
  std::string cur;
  for (unsigned char c : s) {
    if (is_alnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  if (n == 0) return m;
  if (m == 0) return n;
  std::vector<std::size_t> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

double normalized_similarity(std::string_view a, std::string_view b) {
  const std::string ca = canonicalize(a);
  const std::string cb = canonicalize(b);
  const std::size_t longest = std::max(ca.size(), cb.size());
  if (longest == 0) return 1.0;
  const double dist = static_cast<double>(edit_distance(ca, cb));
  return 1.0 - dist / static_cast<double>(longest);
}

bool contains_ci(std::string_view haystack, std::string_view needle) {
  const std::string h = normalize_whitespace(lowercase(haystack));
  const std::string n = normalize_whitespace(lowercase(needle));
  if (n.empty()) return true;
  return h.find(n) != std::string::npos;
}

}  // namespace apbench::text
