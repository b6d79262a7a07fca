// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace apbench::text {

std::string lowercase(std::string_view s);

// Collapses whitespace runs to single spaces and trims the ends.
std::string normalize_whitespace(std::string_view s);

// Lowercases and removes everything that is neither alphanumeric nor space,
// then normalizes whitespace. Shared by the offline similarity scorer and
// keyword matching.
std::string canonicalize(std::string_view s);

// Lowercased alphanumeric runs.
std::vector<std::string> tokenize(std::string_view s);

std::size_t edit_distance(std::string_view a, std::string_view b);

// 1 - edit_distance / max(len) over canonicalized strings; 1.0 for two empty
// strings after canonicalization.
double normalized_similarity(std::string_view a, std::string_view b);

bool contains_ci(std::string_view haystack, std::string_view needle);

}  // namespace apbench::text
