#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "handover/feature.hpp"
#include "handover/mlp.hpp"

namespace handover {

// Keys keep insertion order so serialized files are stable across runs.
using Json = nlohmann::ordered_json;

struct Dataset {
  std::vector<FeatureRecord> records;

  // Validates every record and rejects duplicate frame ids.
  static Dataset from_records(std::vector<FeatureRecord> records);

  std::size_t size() const { return records.size(); }
  std::size_t count_label(int label) const;
};

std::vector<FeatureRecord> parse_records(const std::string& text, const std::string& origin);
Dataset load_records(const std::string& path);
Json records_to_json(const std::vector<FeatureRecord>& records);
void save_records(const Dataset& dataset, const std::string& path);

// Records that carry a 0/1 label, original order preserved.
Dataset labeled_subset(const Dataset& dataset);

// Subsamples the majority class down to the minority count; order preserved.
Dataset balance(const Dataset& dataset, std::uint64_t seed);

// Train/test split; both sides keep the original record order.
std::pair<Dataset, Dataset> split(const Dataset& dataset, double ratio, std::uint64_t seed,
                                  SplitMode mode);

// Per-slot z-score parameters; sentinel slots are excluded and passed through.
struct NormStats {
  std::vector<double> mean;
  std::vector<double> stddev;
};

NormStats fit_norm_stats(const TrainingSet& data);
FeatureVector apply_norm_stats(const FeatureVector& x, const NormStats& stats);
TrainingSet apply_norm_stats(const TrainingSet& data, const NormStats& stats);

std::vector<FeatureVector> encode_records(const std::vector<FeatureRecord>& records,
                                          Layout layout);
TrainingSet encode_dataset(const Dataset& dataset, Layout layout);

inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
  MlpNetwork network;
  TrainConfig config;
  std::optional<NormStats> norm_stats;
};

Json train_config_to_json(const TrainConfig& config);
Json checkpoint_to_json(const Checkpoint& checkpoint);
Checkpoint checkpoint_from_json(const Json& json);
void save_checkpoint(const Checkpoint& checkpoint, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace handover
