#include "handover/eval.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <utility>

#include "handover/error.hpp"
#include "handover/synthetic.hpp"

namespace handover {

namespace {

struct SplitOutcome {
  double accuracy = 0.0;
  ConfusionMatrix confusion;
  double shifted_accuracy = 0.0;
};

// One derived-seed round: balance, split, train, score the held-out side,
// optionally re-score it under a rigid translation of the test records.
SplitOutcome run_split(const Dataset& records, const TrainConfig& config,
                       std::uint64_t derived_seed, bool with_shift, double dx, double dy) {
  const Dataset balanced = balance(records, derived_seed);
  const auto [train_side, test_side] =
      split(balanced, config.split_ratio, derived_seed, config.split_mode);

  TrainingSet train_set = encode_dataset(train_side, config.layout);
  TrainingSet test_set = encode_dataset(test_side, config.layout);
  std::optional<NormStats> stats;
  if (config.normalize) {
    stats = fit_norm_stats(train_set);
    train_set = apply_norm_stats(train_set, *stats);
    test_set = apply_norm_stats(test_set, *stats);
  }

  TrainConfig split_config = config;
  split_config.seed = derived_seed;
  const TrainResult trained = train(train_set, split_config);

  SplitOutcome outcome;
  for (const LabeledVector& sample : test_set) {
    outcome.confusion.add(predict(trained.network, sample.first, config.threshold).label,
                          sample.second);
  }
  outcome.accuracy = outcome.confusion.accuracy();

  if (with_shift) {
    TrainingSet shifted_set = encode_dataset(translate_all(test_side, dx, dy), config.layout);
    if (stats) {
      shifted_set = apply_norm_stats(shifted_set, *stats);
    }
    ConfusionMatrix shifted;
    for (const LabeledVector& sample : shifted_set) {
      shifted.add(predict(trained.network, sample.first, config.threshold).label, sample.second);
    }
    outcome.shifted_accuracy = shifted.accuracy();
  }
  return outcome;
}

double mean_of(const std::vector<double>& values) {
  double total = 0.0;
  for (double v : values) {
    total += v;
  }
  return total / static_cast<double>(values.size());
}

double population_std(const std::vector<double>& values, double mean) {
  double sq = 0.0;
  for (double v : values) {
    sq += (v - mean) * (v - mean);
  }
  return std::sqrt(sq / static_cast<double>(values.size()));
}

std::string fixed6(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.6f", v);
  return buffer;
}

Json confusion_to_json(const ConfusionMatrix& m) {
  return Json{{"tp", m.tp}, {"fp", m.fp}, {"fn", m.fn}, {"tn", m.tn}};
}

Json reference_to_json() {
  Json refs;
  for (const ReferenceRow& row : kReferenceRows) {
    refs[row.method] = row.accuracy_percent;
  }
  return refs;
}

void append_reference_text(std::ostringstream& out) {
  out << "reference accuracies (%):\n";
  for (const ReferenceRow& row : kReferenceRows) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "  %-24s %5.1f\n", row.method, row.accuracy_percent);
    out << buffer;
  }
}

EvalReport assemble_report(Layout layout, const TrainConfig& base, std::size_t n_splits,
                           const std::vector<SplitOutcome>& outcomes) {
  EvalReport report;
  report.layout = layout;
  report.config = base;
  report.config.layout = layout;
  report.n_splits = n_splits;
  for (const SplitOutcome& outcome : outcomes) {
    report.split_accuracies.push_back(outcome.accuracy);
    report.split_confusions.push_back(outcome.confusion);
    report.pooled += outcome.confusion;
  }
  report.mean_accuracy = mean_of(report.split_accuracies);
  report.std_accuracy = population_std(report.split_accuracies, report.mean_accuracy);
  return report;
}

void check_binary(int value, const char* what) {
  if (value != 0 && value != 1) {
    throw ConfigError(std::string(what) + " must be 0 or 1");
  }
}

}  // namespace

double ConfusionMatrix::accuracy() const {
  if (total() == 0) {
    throw ConfigError("confusion matrix is empty");
  }
  return static_cast<double>(tp + tn) / static_cast<double>(total());
}

void ConfusionMatrix::add(int predicted, int actual) {
  check_binary(predicted, "prediction");
  check_binary(actual, "label");
  if (actual == 1) {
    (predicted == 1 ? tp : fn) += 1;
  } else {
    (predicted == 1 ? fp : tn) += 1;
  }
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  tp += other.tp;
  fp += other.fp;
  fn += other.fn;
  tn += other.tn;
  return *this;
}

double accuracy(const std::vector<int>& predictions, const std::vector<int>& labels) {
  if (predictions.empty()) {
    throw ConfigError("cannot score an empty prediction list");
  }
  if (predictions.size() != labels.size()) {
    throw ConfigError("predictions and labels differ in length");
  }
  std::size_t matches = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    check_binary(predictions[i], "prediction");
    check_binary(labels[i], "label");
    matches += predictions[i] == labels[i] ? 1 : 0;
  }
  return static_cast<double>(matches) / static_cast<double>(predictions.size());
}

EvalReport multi_seed_eval(const Dataset& records, const TrainConfig& config,
                           std::size_t n_splits) {
  validate_config(config);
  if (n_splits == 0) {
    throw ConfigError("n_splits must be positive");
  }
  std::vector<SplitOutcome> outcomes;
  outcomes.reserve(n_splits);
  for (std::size_t i = 0; i < n_splits; ++i) {
    outcomes.push_back(run_split(records, config, config.seed + i, false, 0.0, 0.0));
  }
  return assemble_report(config.layout, config, n_splits, outcomes);
}

LayoutComparison compare_layouts(const Dataset& records, const TrainConfig& config,
                                 std::size_t n_splits, double dx, double dy) {
  validate_config(config);
  if (n_splits == 0) {
    throw ConfigError("n_splits must be positive");
  }
  LayoutComparison comparison;
  comparison.shift_dx = dx;
  comparison.shift_dy = dy;
  for (Layout layout : {Layout::kAbsolute, Layout::kRelative}) {
    TrainConfig layout_config = config;
    layout_config.layout = layout;
    std::vector<SplitOutcome> outcomes;
    std::vector<double> shifted;
    outcomes.reserve(n_splits);
    for (std::size_t i = 0; i < n_splits; ++i) {
      outcomes.push_back(run_split(records, layout_config, config.seed + i, true, dx, dy));
      shifted.push_back(outcomes.back().shifted_accuracy);
    }
    EvalReport report = assemble_report(layout, config, n_splits, outcomes);
    if (layout == Layout::kAbsolute) {
      comparison.absolute = std::move(report);
      comparison.absolute_shifted = std::move(shifted);
      comparison.absolute_shifted_mean = mean_of(comparison.absolute_shifted);
    } else {
      comparison.relative = std::move(report);
      comparison.relative_shifted = std::move(shifted);
      comparison.relative_shifted_mean = mean_of(comparison.relative_shifted);
    }
  }
  return comparison;
}

Json report_to_json(const EvalReport& report) {
  Json json;
  json["layout"] = layout_name(report.layout);
  json["n_splits"] = report.n_splits;
  json["config"] = train_config_to_json(report.config);
  Json splits = Json::array();
  for (std::size_t i = 0; i < report.n_splits; ++i) {
    Json row;
    row["split"] = i;
    row["seed"] = report.config.seed + i;
    row["accuracy"] = report.split_accuracies[i];
    row["confusion"] = confusion_to_json(report.split_confusions[i]);
    splits.push_back(std::move(row));
  }
  json["splits"] = std::move(splits);
  json["mean_accuracy"] = report.mean_accuracy;
  json["std_accuracy"] = report.std_accuracy;
  json["pooled_confusion"] = confusion_to_json(report.pooled);
  json["reference_accuracies_percent"] = reference_to_json();
  return json;
}

std::string report_to_text(const EvalReport& report) {
  std::ostringstream out;
  out << "layout: " << layout_name(report.layout) << "\n";
  out << "splits: " << report.n_splits << "\n\n";
  out << "  split        seed  accuracy        tp      fp      fn      tn\n";
  for (std::size_t i = 0; i < report.n_splits; ++i) {
    const ConfusionMatrix& m = report.split_confusions[i];
    char buffer[128];
    std::snprintf(buffer, sizeof buffer, "  %5zu  %10llu  %s  %6zu  %6zu  %6zu  %6zu\n", i,
                  static_cast<unsigned long long>(report.config.seed + i),
                  fixed6(report.split_accuracies[i]).c_str(), m.tp, m.fp, m.fn, m.tn);
    out << buffer;
  }
  out << "\nmean accuracy: " << fixed6(report.mean_accuracy) << "\n";
  out << "std accuracy:  " << fixed6(report.std_accuracy) << "\n";
  out << "pooled: tp=" << report.pooled.tp << " fp=" << report.pooled.fp
      << " fn=" << report.pooled.fn << " tn=" << report.pooled.tn << "\n\n";
  append_reference_text(out);
  return out.str();
}

std::string report_to_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "layout,split,seed,accuracy,tp,fp,fn,tn\n";
  for (std::size_t i = 0; i < report.n_splits; ++i) {
    const ConfusionMatrix& m = report.split_confusions[i];
    out << layout_name(report.layout) << "," << i << "," << report.config.seed + i << ","
        << fixed6(report.split_accuracies[i]) << "," << m.tp << "," << m.fp << "," << m.fn
        << "," << m.tn << "\n";
  }
  return out.str();
}

Json comparison_to_json(const LayoutComparison& comparison) {
  Json json;
  json["shift"] = Json{{"dx", comparison.shift_dx}, {"dy", comparison.shift_dy}};
  json["absolute"] = report_to_json(comparison.absolute);
  json["relative"] = report_to_json(comparison.relative);
  json["shifted_accuracy"] =
      Json{{"absolute", Json{{"per_split", comparison.absolute_shifted},
                             {"mean", comparison.absolute_shifted_mean}}},
           {"relative", Json{{"per_split", comparison.relative_shifted},
                             {"mean", comparison.relative_shifted_mean}}}};
  return json;
}

std::string comparison_to_text(const LayoutComparison& comparison) {
  std::ostringstream out;
  char buffer[160];
  std::snprintf(buffer, sizeof buffer, "layout comparison: %zu splits, shift (%+g, %+g)\n\n",
                comparison.absolute.n_splits, comparison.shift_dx, comparison.shift_dy);
  out << buffer;
  out << "  layout    mean      std       shifted   delta\n";
  const auto row = [&](const char* name, const EvalReport& report, double shifted_mean) {
    std::snprintf(buffer, sizeof buffer, "  %-8s  %s  %s  %s  %+.6f\n", name,
                  fixed6(report.mean_accuracy).c_str(), fixed6(report.std_accuracy).c_str(),
                  fixed6(shifted_mean).c_str(), shifted_mean - report.mean_accuracy);
    out << buffer;
  };
  row("absolute", comparison.absolute, comparison.absolute_shifted_mean);
  row("relative", comparison.relative, comparison.relative_shifted_mean);

  out << "\nper-split accuracy:\n";
  out << "  split        seed  absolute  abs-shifted  relative  rel-shifted\n";
  for (std::size_t i = 0; i < comparison.absolute.n_splits; ++i) {
    std::snprintf(buffer, sizeof buffer, "  %5zu  %10llu  %s  %s   %s  %s\n", i,
                  static_cast<unsigned long long>(comparison.absolute.config.seed + i),
                  fixed6(comparison.absolute.split_accuracies[i]).c_str(),
                  fixed6(comparison.absolute_shifted[i]).c_str(),
                  fixed6(comparison.relative.split_accuracies[i]).c_str(),
                  fixed6(comparison.relative_shifted[i]).c_str());
    out << buffer;
  }
  out << "\n";
  append_reference_text(out);
  return out.str();
}

std::string comparison_to_csv(const LayoutComparison& comparison) {
  std::ostringstream out;
  out << "layout,split,seed,accuracy,shifted_accuracy,tp,fp,fn,tn\n";
  const auto rows = [&](const EvalReport& report, const std::vector<double>& shifted) {
    for (std::size_t i = 0; i < report.n_splits; ++i) {
      const ConfusionMatrix& m = report.split_confusions[i];
      out << layout_name(report.layout) << "," << i << "," << report.config.seed + i << ","
          << fixed6(report.split_accuracies[i]) << "," << fixed6(shifted[i]) << "," << m.tp
          << "," << m.fp << "," << m.fn << "," << m.tn << "\n";
    }
  };
  rows(comparison.absolute, comparison.absolute_shifted);
  rows(comparison.relative, comparison.relative_shifted);
  return out.str();
}

}  // namespace handover
