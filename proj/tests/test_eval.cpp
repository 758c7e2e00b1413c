#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "handover/error.hpp"
#include "handover/eval.hpp"
#include "handover/synthetic.hpp"
#include "test_util.hpp"

using namespace handover;

namespace {

Dataset small_dataset(std::uint64_t seed = 5) {
  SceneConfig cfg;
  cfg.n_records = 240;
  cfg.seed = seed;
  return generate(cfg);
}

TrainConfig small_config() {
  TrainConfig config;
  config.layout = Layout::kRelative;
  config.hidden_dims = {16, 16, 8, 4};
  config.epochs = 15;
  config.seed = 9;
  return config;
}

double mean_like_report(const std::vector<double>& values) {
  double total = 0.0;
  for (double v : values) total += v;
  return total / static_cast<double>(values.size());
}

double std_like_report(const std::vector<double>& values, double mean) {
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  return std::sqrt(sq / static_cast<double>(values.size()));
}

}  // namespace

TEST_SUITE("eval") {
  TEST_CASE("confusion matrix tallies each quadrant") {
    ConfusionMatrix m;
    m.add(1, 1);
    m.add(1, 1);
    m.add(1, 0);
    m.add(0, 1);
    m.add(0, 0);
    m.add(0, 0);
    m.add(0, 0);
    CHECK(m.tp == 2);
    CHECK(m.fp == 1);
    CHECK(m.fn == 1);
    CHECK(m.tn == 3);
    CHECK(m.total() == 7);
    CHECK(m.accuracy() == 5.0 / 7.0);

    ConfusionMatrix other;
    other.add(1, 1);
    other += m;
    CHECK(other.tp == 3);
    CHECK(other.total() == 8);

    CHECK_THROWS_AS(ConfusionMatrix{}.accuracy(), ConfigError);
    CHECK_THROWS_AS(m.add(2, 0), ConfigError);
    CHECK_THROWS_AS(m.add(0, -1), ConfigError);
  }

  TEST_CASE("list accuracy checks its inputs") {
    CHECK(accuracy({1, 0, 1, 1}, {1, 0, 0, 1}) == 0.75);
    CHECK(accuracy({0}, {0}) == 1.0);
    CHECK_THROWS_AS(accuracy({}, {}), ConfigError);
    CHECK_THROWS_AS(accuracy({1, 0}, {1}), ConfigError);
    CHECK_THROWS_AS(accuracy({3}, {1}), ConfigError);
    CHECK_THROWS_AS(accuracy({1}, {7}), ConfigError);
  }

  TEST_CASE("multi_seed_eval aggregates derived-seed splits") {
    const Dataset ds = small_dataset();
    const TrainConfig config = small_config();
    const EvalReport report = multi_seed_eval(ds, config, 3);

    CHECK(report.layout == Layout::kRelative);
    CHECK(report.n_splits == 3);
    REQUIRE(report.split_accuracies.size() == 3);
    REQUIRE(report.split_confusions.size() == 3);
    ConfusionMatrix pooled;
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(report.split_accuracies[i] >= 0.0);
      CHECK(report.split_accuracies[i] <= 1.0);
      CHECK(report.split_accuracies[i] == report.split_confusions[i].accuracy());
      pooled += report.split_confusions[i];
    }
    CHECK(report.pooled.tp == pooled.tp);
    CHECK(report.pooled.fp == pooled.fp);
    CHECK(report.pooled.fn == pooled.fn);
    CHECK(report.pooled.tn == pooled.tn);
    CHECK(report.mean_accuracy == mean_like_report(report.split_accuracies));
    CHECK(report.std_accuracy ==
          std_like_report(report.split_accuracies, report.mean_accuracy));

    // Reruns come out bit-identical.
    const EvalReport again = multi_seed_eval(ds, config, 3);
    CHECK(report_to_json(report) == report_to_json(again));

    CHECK_THROWS_AS(multi_seed_eval(ds, config, 0), ConfigError);
  }

  TEST_CASE("eval report serializes with stable keys") {
    const EvalReport report = multi_seed_eval(small_dataset(), small_config(), 2);
    const Json json = report_to_json(report);
    CHECK(json.at("layout") == "relative");
    CHECK(json.at("n_splits") == 2);
    CHECK(json.at("config").at("epochs") == 15);
    REQUIRE(json.at("splits").size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
      const Json& row = json.at("splits").at(i);
      CHECK(row.at("split") == i);
      CHECK(row.at("seed") == report.config.seed + i);
      CHECK(row.at("accuracy") == report.split_accuracies[i]);
      CHECK(row.at("confusion").at("tp") == report.split_confusions[i].tp);
      CHECK(row.at("confusion").at("tn") == report.split_confusions[i].tn);
    }
    CHECK(json.at("mean_accuracy") == report.mean_accuracy);
    CHECK(json.at("std_accuracy") == report.std_accuracy);
    CHECK(json.at("pooled_confusion").at("fp") == report.pooled.fp);
    const Json& refs = json.at("reference_accuracies_percent");
    CHECK(refs.at("end_to_end_alexnet") == 50.0);
    CHECK(refs.at("end_to_end_resnet50") == 89.4);
    CHECK(refs.at("cnn_skeleton_image") == 83.3);
    CHECK(refs.at("mlp_absolute_pixels") == 90.1);
    CHECK(refs.at("mlp_relative_to_object") == 90.6);

    const std::string text = report_to_text(report);
    CHECK(text.find("mean accuracy") != std::string::npos);
    CHECK(text.find("reference accuracies") != std::string::npos);

    const std::string csv = report_to_csv(report);
    std::istringstream lines(csv);
    std::string line;
    REQUIRE(std::getline(lines, line));
    CHECK(line == "layout,split,seed,accuracy,tp,fp,fn,tn");
    std::size_t rows = 0;
    while (std::getline(lines, line)) {
      CHECK(line.rfind("relative,", 0) == 0);
      rows += 1;
    }
    CHECK(rows == 2);
  }

  TEST_CASE("layout comparison pairs seeds and scores under a shift") {
    const Dataset ds = small_dataset();
    TrainConfig config = small_config();
    config.epochs = 10;
    const LayoutComparison cmp = compare_layouts(ds, config, 2, 32.0, 16.0);

    CHECK(cmp.shift_dx == 32.0);
    CHECK(cmp.shift_dy == 16.0);
    CHECK(cmp.absolute.layout == Layout::kAbsolute);
    CHECK(cmp.relative.layout == Layout::kRelative);
    CHECK(cmp.absolute.n_splits == 2);
    CHECK(cmp.relative.n_splits == 2);
    CHECK(cmp.absolute.config.seed == config.seed);
    CHECK(cmp.relative.config.seed == config.seed);
    REQUIRE(cmp.absolute_shifted.size() == 2);
    REQUIRE(cmp.relative_shifted.size() == 2);

    // Integer shifts cancel exactly in the relative layout, split by split.
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(cmp.relative_shifted[i] == cmp.relative.split_accuracies[i]);
    }
    CHECK(cmp.relative_shifted_mean == cmp.relative.mean_accuracy);
    CHECK(cmp.absolute_shifted_mean == mean_like_report(cmp.absolute_shifted));

    const Json json = comparison_to_json(cmp);
    CHECK(json.at("shift").at("dx") == 32.0);
    CHECK(json.at("shift").at("dy") == 16.0);
    CHECK(json.at("absolute").at("layout") == "absolute");
    CHECK(json.at("relative").at("layout") == "relative");
    const Json& shifted = json.at("shifted_accuracy");
    CHECK(shifted.at("absolute").at("per_split").size() == 2);
    CHECK(shifted.at("absolute").at("mean") == cmp.absolute_shifted_mean);
    CHECK(shifted.at("relative").at("per_split").at(0) == cmp.relative_shifted[0]);
    CHECK(shifted.at("relative").at("mean") == cmp.relative_shifted_mean);

    const std::string text = comparison_to_text(cmp);
    CHECK(text.find("absolute") != std::string::npos);
    CHECK(text.find("relative") != std::string::npos);
    CHECK(text.find("per-split accuracy") != std::string::npos);

    const std::string csv = comparison_to_csv(cmp);
    std::istringstream lines(csv);
    std::string line;
    REQUIRE(std::getline(lines, line));
    CHECK(line == "layout,split,seed,accuracy,shifted_accuracy,tp,fp,fn,tn");
    std::size_t absolute_rows = 0, relative_rows = 0;
    while (std::getline(lines, line)) {
      if (line.rfind("absolute,", 0) == 0) absolute_rows += 1;
      if (line.rfind("relative,", 0) == 0) relative_rows += 1;
    }
    CHECK(absolute_rows == 2);
    CHECK(relative_rows == 2);

    CHECK_THROWS_AS(compare_layouts(ds, config, 0, 1.0, 1.0), ConfigError);
  }

  TEST_CASE("evaluation honors normalization and video splitting") {
    const Dataset ds = small_dataset(6);
    TrainConfig config = small_config();
    config.epochs = 5;
    config.normalize = true;
    const EvalReport normalized = multi_seed_eval(ds, config, 1);
    CHECK(normalized.split_accuracies.size() == 1);
    CHECK(normalized.mean_accuracy >= 0.0);
    CHECK(normalized.mean_accuracy <= 1.0);

    config.normalize = false;
    config.split_mode = SplitMode::kVideo;
    const EvalReport by_video = multi_seed_eval(ds, config, 1);
    CHECK(by_video.split_accuracies.size() == 1);
    CHECK(by_video.config.split_mode == SplitMode::kVideo);
  }

  TEST_CASE("reference rows stay frozen") {
    REQUIRE(kReferenceRows.size() == 5);
    CHECK(std::string(kReferenceRows[0].method) == "end_to_end_alexnet");
    CHECK(kReferenceRows[0].accuracy_percent == 50.0);
    CHECK(std::string(kReferenceRows[1].method) == "end_to_end_resnet50");
    CHECK(kReferenceRows[1].accuracy_percent == 89.4);
    CHECK(std::string(kReferenceRows[2].method) == "cnn_skeleton_image");
    CHECK(kReferenceRows[2].accuracy_percent == 83.3);
    CHECK(std::string(kReferenceRows[3].method) == "mlp_absolute_pixels");
    CHECK(kReferenceRows[3].accuracy_percent == 90.1);
    CHECK(std::string(kReferenceRows[4].method) == "mlp_relative_to_object");
    CHECK(kReferenceRows[4].accuracy_percent == 90.6);
  }
}
