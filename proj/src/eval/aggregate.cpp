// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "apbench/eval/aggregate.hpp"

#include <algorithm>
#include <functional>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "apbench/bench/manifest.hpp"
#include "apbench/errors.hpp"

namespace apbench::eval {

namespace {

struct Accumulator {
  std::size_t count = 0;
  std::vector<double> asr, tox, pv, rel, sim;

  void add(const MetricRecord& r) {
    ++count;
    asr.push_back(r.attack_success ? 1.0 : 0.0);
    if (r.toxicity) tox.push_back(*r.toxicity);
    if (r.policy_violation) pv.push_back(*r.policy_violation);
    if (r.relevance) rel.push_back(*r.relevance);
    if (r.refusal_alignment) sim.push_back(*r.refusal_alignment);
  }

  // Values are sorted before summation so the means are bit-identical under
  // any permutation of the input records.
  static std::optional<double> mean(std::vector<double> values) {
    if (values.empty()) return std::nullopt;
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
  }

  MetricMeans means() const {
    MetricMeans m;
    m.sample_count = count;
    m.asr = mean(asr);
    m.toxicity = mean(tox);
    m.policy_violation = mean(pv);
    m.relevance = mean(rel);
    m.similarity = mean(sim);
    return m;
  }
};

nlohmann::json means_to_json(const MetricMeans& m) {
  nlohmann::json j{{"sample_count", m.sample_count}};
  if (m.asr) j["asr"] = *m.asr;
  if (m.toxicity) j["toxicity"] = *m.toxicity;
  if (m.policy_violation) j["policy_violation"] = *m.policy_violation;
  if (m.relevance) j["relevance"] = *m.relevance;
  if (m.similarity) j["similarity"] = *m.similarity;
  return j;
}

std::string cell(const std::optional<double>& value) {
  if (!value) return "-";
  std::ostringstream out;
  out << std::fixed << std::setprecision(3) << *value;
  return out.str();
}

}  // namespace

nlohmann::json CategoryReport::to_json() const {
  nlohmann::json cats = nlohmann::json::object();
  for (const auto& [name, means] : per_category) {
    cats[name] = means_to_json(means);
  }
  return nlohmann::json{{"categories", std::move(cats)},
                        {"overall", means_to_json(overall)},
                        {"missing_categories", missing_categories},
                        {"degenerate_ids", degenerate_ids}};
}

std::string CategoryReport::to_table() const {
  std::vector<std::string> columns;
  for (const auto& [name, means] : per_category) columns.push_back(name);

  const std::vector<std::pair<std::string, const std::optional<double> MetricMeans::*>> rows = {
      {"ASR", &MetricMeans::asr},
      {"TS", &MetricMeans::toxicity},
      {"PV", &MetricMeans::policy_violation},
      {"Relevance", &MetricMeans::relevance},
      {"Similarity", &MetricMeans::similarity},
  };

  std::size_t name_width = 10;
  for (const auto& c : columns) name_width = std::max(name_width, c.size());
  const std::size_t col_width = std::max<std::size_t>(name_width + 2, 10);

  std::ostringstream out;
  out << std::left << std::setw(12) << "Metric";
  for (const auto& c : columns) out << std::setw(static_cast<int>(col_width)) << c;
  out << std::setw(static_cast<int>(col_width)) << "Average" << "\n";

  for (const auto& [label, member] : rows) {
    out << std::left << std::setw(12) << label;
    for (const auto& c : columns) {
      out << std::setw(static_cast<int>(col_width)) << cell(per_category.at(c).*member);
    }
    out << std::setw(static_cast<int>(col_width)) << cell(overall.*member) << "\n";
  }

  out << "\nSamples: " << overall.sample_count;
  if (!missing_categories.empty()) {
    out << "\nNo samples for:";
    for (const auto& c : missing_categories) out << " " << c;
  }
  if (!degenerate_ids.empty()) {
    out << "\nDegenerate (empty) responses: " << degenerate_ids.size();
  }
  out << "\n";
  return out.str();
}

CategoryReport aggregate(const std::vector<MetricRecord>& records,
                         const std::map<std::string, std::string>& category_by_id) {
  std::map<std::string, Accumulator> per_category;
  Accumulator overall;
  CategoryReport report;

  for (const MetricRecord& r : records) {
    const auto it = category_by_id.find(r.sample_id);
    if (it == category_by_id.end()) {
      throw UnknownSampleId("no manifest entry for sample '" + r.sample_id + "'");
    }
    per_category[it->second].add(r);
    overall.add(r);
    if (r.degenerate) report.degenerate_ids.push_back(r.sample_id);
  }

  for (const auto& [name, acc] : per_category) {
    report.per_category[name] = acc.means();
  }
  report.overall = overall.means();
  std::sort(report.degenerate_ids.begin(), report.degenerate_ids.end());

  for (const std::string& cat : bench::categories()) {
    if (per_category.find(cat) == per_category.end()) {
      report.missing_categories.push_back(cat);
    }
  }
  return report;
}

nlohmann::json SignificanceReport::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const MetricDelta& d : deltas) {
    arr.push_back({{"metric", d.metric},
                   {"base_mean", d.base_mean},
                   {"variant_mean", d.variant_mean},
                   {"mean_delta", d.test.mean_delta},
                   {"t_statistic", d.test.t_statistic},
                   {"p_value", d.test.p_value},
                   {"zero_variance", d.test.zero_variance},
                   {"pairs", d.test.n},
                   {"significant", d.significant}});
  }
  return nlohmann::json{{"metrics", std::move(arr)}, {"pair_count", pair_count}};
}

SignificanceReport compare_runs(
    const std::vector<std::pair<MetricRecord, MetricRecord>>& paired) {
  if (paired.size() < 2) throw InsufficientPairs("compare_runs needs at least 2 pairs");
  for (const auto& [base, variant] : paired) {
    if (base.sample_id != variant.sample_id) {
      throw Error("compare_runs: pair mixes samples '" + base.sample_id + "' and '" +
                  variant.sample_id + "'");
    }
  }

  SignificanceReport report;
  report.pair_count = paired.size();

  struct Extractor {
    std::string name;
    std::function<std::optional<double>(const MetricRecord&)> get;
  };
  const std::vector<Extractor> extractors = {
      {"asr", [](const MetricRecord& r) {
         return std::optional<double>(r.attack_success ? 1.0 : 0.0);
       }},
      {"toxicity", [](const MetricRecord& r) { return r.toxicity; }},
      {"policy_violation",
       [](const MetricRecord& r) {
         return r.policy_violation ? std::optional<double>(*r.policy_violation)
                                   : std::nullopt;
       }},
      {"relevance", [](const MetricRecord& r) { return r.relevance; }},
      {"similarity", [](const MetricRecord& r) { return r.refusal_alignment; }},
  };

  for (const Extractor& ex : extractors) {
    std::vector<double> base_vals, variant_vals;
    for (const auto& [base, variant] : paired) {
      const auto b = ex.get(base);
      const auto v = ex.get(variant);
      if (b && v) {
        base_vals.push_back(*b);
        variant_vals.push_back(*v);
      }
    }
    if (base_vals.size() < 2) continue;  // metric absent from this run pair

    MetricDelta delta;
    delta.metric = ex.name;
    delta.base_mean = std::accumulate(base_vals.begin(), base_vals.end(), 0.0) /
                      static_cast<double>(base_vals.size());
    delta.variant_mean = std::accumulate(variant_vals.begin(), variant_vals.end(), 0.0) /
                         static_cast<double>(variant_vals.size());
    delta.test = paired_t_test(base_vals, variant_vals);
    delta.significant = delta.test.p_value < kSignificanceLevel;
    report.deltas.push_back(std::move(delta));
  }
  return report;
}

}  // namespace apbench::eval
