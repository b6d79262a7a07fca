// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "apbench/eval/metrics.hpp"
#include "apbench/eval/stats.hpp"

namespace apbench::eval {

struct MetricMeans {
  std::size_t sample_count = 0;
  std::optional<double> asr;
  std::optional<double> toxicity;
  std::optional<double> policy_violation;
  std::optional<double> relevance;
  std::optional<double> similarity;  // refusal alignment
};

struct CategoryReport {
  std::map<std::string, MetricMeans> per_category;
  MetricMeans overall;  // sample-weighted across categories
  std::vector<std::string> missing_categories;  // taxonomy entries with no samples
  std::vector<std::string> degenerate_ids;      // empty-response samples, kept but flagged

  nlohmann::json to_json() const;
  // Text table with categories as columns and metrics as rows.
  std::string to_table() const;
};

// Per-category arithmetic means over present values; overall means are over
// all records. Every record's sample_id must resolve to a category.
CategoryReport aggregate(const std::vector<MetricRecord>& records,
                         const std::map<std::string, std::string>& category_by_id);

struct MetricDelta {
  std::string metric;
  double base_mean = 0.0;
  double variant_mean = 0.0;
  PairedTTest test;
  bool significant = false;  // p < 0.01, mirroring the reporting convention
};

struct SignificanceReport {
  std::vector<MetricDelta> deltas;
  std::size_t pair_count = 0;

  nlohmann::json to_json() const;
};

constexpr double kSignificanceLevel = 0.01;

// Pairs records by position; both sides of each pair must share a sample_id.
SignificanceReport compare_runs(
    const std::vector<std::pair<MetricRecord, MetricRecord>>& paired);

}  // namespace apbench::eval
