#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "handover/dataset.hpp"
#include "handover/mlp.hpp"

namespace handover {

struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  double accuracy() const;
  void add(int predicted, int actual);
  ConfusionMatrix& operator+=(const ConfusionMatrix& other);
};

// Fraction of exact matches; rejects empty or mismatched inputs.
double accuracy(const std::vector<int>& predictions, const std::vector<int>& labels);

struct EvalReport {
  Layout layout = Layout::kRelative;
  TrainConfig config;
  std::size_t n_splits = 0;
  std::vector<double> split_accuracies;
  std::vector<ConfusionMatrix> split_confusions;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;  // population std over the split accuracies
  ConfusionMatrix pooled;
};

// Split i runs with derived seed config.seed + i: balance, split, train,
// then score on the held-out side.
EvalReport multi_seed_eval(const Dataset& records, const TrainConfig& config,
                           std::size_t n_splits = 5);

struct LayoutComparison {
  EvalReport absolute;
  EvalReport relative;
  double shift_dx = 0.0;
  double shift_dy = 0.0;
  // Same trained models scored on test sets translated by (shift_dx, shift_dy).
  std::vector<double> absolute_shifted;
  std::vector<double> relative_shifted;
  double absolute_shifted_mean = 0.0;
  double relative_shifted_mean = 0.0;
};

// Both layouts run on identical derived seeds so the splits pair up.
LayoutComparison compare_layouts(const Dataset& records, const TrainConfig& config,
                                 std::size_t n_splits, double dx, double dy);

Json report_to_json(const EvalReport& report);
std::string report_to_text(const EvalReport& report);
std::string report_to_csv(const EvalReport& report);

Json comparison_to_json(const LayoutComparison& comparison);
std::string comparison_to_text(const LayoutComparison& comparison);
std::string comparison_to_csv(const LayoutComparison& comparison);

// Published headline accuracies shown as static reference rows in reports.
struct ReferenceRow {
  const char* method;
  double accuracy_percent;
};

inline constexpr std::array<ReferenceRow, 5> kReferenceRows{{
    {"end_to_end_alexnet", 50.0},
    {"end_to_end_resnet50", 89.4},
    {"cnn_skeleton_image", 83.3},
    {"mlp_absolute_pixels", 90.1},
    {"mlp_relative_to_object", 90.6},
}};

}  // namespace handover
