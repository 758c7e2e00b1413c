#include "handover/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "handover/error.hpp"
#include "handover/rng.hpp"

namespace handover {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path + " for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw IoError("failed while reading " + path);
  }
  return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + path + " for writing");
  }
  out << text;
  out.flush();
  if (!out) {
    throw IoError("failed while writing " + path);
  }
}

Json parse_json(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& error) {
    // error.byte counts processed bytes, so the offending byte is byte - 1.
    const std::size_t offset = std::min(error.byte > 0 ? error.byte - 1 : 0, text.size());
    std::size_t line = 1;
    std::size_t line_start = 0;
    for (std::size_t i = 0; i < offset; ++i) {
      if (text[i] == '\n') {
        line += 1;
        line_start = i + 1;
      }
    }
    throw SchemaError(origin + ":" + std::to_string(line) + ":" +
                      std::to_string(offset - line_start + 1) + ": invalid JSON");
  }
}

const Json& require_field(const Json& json, const char* key, const std::string& where) {
  if (!json.contains(key)) {
    throw SchemaError(where + ": missing field \"" + key + "\"");
  }
  return json.at(key);
}

double require_number(const Json& json, const std::string& where) {
  if (!json.is_number()) {
    throw SchemaError(where + " must be a number");
  }
  return json.get<double>();
}

FeatureRecord record_from_json(const Json& json, const std::string& where_base) {
  if (!json.is_object()) {
    throw SchemaError(where_base + ": record must be an object");
  }
  FeatureRecord record;

  const Json& frame_id = require_field(json, "frame_id", where_base);
  if (!frame_id.is_string()) {
    throw SchemaError(where_base + ": frame_id must be a string");
  }
  record.frame_id = frame_id.get<std::string>();
  const std::string where = where_base + " (" + record.frame_id + ")";

  const Json& source_video = require_field(json, "source_video", where);
  if (!source_video.is_string()) {
    throw SchemaError(where + ": source_video must be a string");
  }
  record.source_video = source_video.get<std::string>();

  if (json.contains("label") && !json.at("label").is_null()) {
    const Json& label = json.at("label");
    if (!label.is_number_integer()) {
      throw SchemaError(where + ": label must be 0, 1, or null");
    }
    record.label = label.get<int>();
  }

  const Json& objects = require_field(json, "objects", where);
  if (!objects.is_array()) {
    throw SchemaError(where + ": objects must be an array");
  }
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const Json& entry = objects.at(i);
    const std::string obj_where = where + ": objects[" + std::to_string(i) + "]";
    if (!entry.is_object()) {
      throw SchemaError(obj_where + " must be an object");
    }
    BoundingBox box;
    box.x_min = require_number(require_field(entry, "x_min", obj_where), obj_where + ".x_min");
    box.y_min = require_number(require_field(entry, "y_min", obj_where), obj_where + ".y_min");
    box.x_max = require_number(require_field(entry, "x_max", obj_where), obj_where + ".x_max");
    box.y_max = require_number(require_field(entry, "y_max", obj_where), obj_where + ".y_max");
    box.score = require_number(require_field(entry, "score", obj_where), obj_where + ".score");
    record.objects.push_back(box);
  }

  const Json& keypoints = require_field(json, "keypoints", where);
  if (!keypoints.is_array() || keypoints.size() != kKeypointCount) {
    throw SchemaError(where + ": keypoints must be an array of " +
                      std::to_string(kKeypointCount) + " [x, y, confidence] triples");
  }
  for (std::size_t i = 0; i < kKeypointCount; ++i) {
    const Json& entry = keypoints.at(i);
    const std::string kp_where = where + ": keypoints[" + std::to_string(i) + "]";
    if (!entry.is_array() || entry.size() != 3) {
      throw SchemaError(kp_where + " must be an [x, y, confidence] triple");
    }
    Keypoint& kp = record.keypoints.points[i];
    kp.x = require_number(entry.at(0), kp_where + "[0]");
    kp.y = require_number(entry.at(1), kp_where + "[1]");
    kp.confidence = require_number(entry.at(2), kp_where + "[2]");
  }

  if (json.contains("head_pose") && !json.at("head_pose").is_null()) {
    const Json& pose = json.at("head_pose");
    const std::string pose_where = where + ": head_pose";
    if (!pose.is_object()) {
      throw SchemaError(pose_where + " must be an object or null");
    }
    HeadPose head;
    head.yaw = require_number(require_field(pose, "yaw", pose_where), pose_where + ".yaw");
    head.pitch = require_number(require_field(pose, "pitch", pose_where), pose_where + ".pitch");
    head.roll = require_number(require_field(pose, "roll", pose_where), pose_where + ".roll");
    record.head_pose = head;
  }

  return record;
}

Json record_to_json(const FeatureRecord& record) {
  Json json;
  json["frame_id"] = record.frame_id;
  json["source_video"] = record.source_video;
  json["label"] = record.label ? Json(*record.label) : Json(nullptr);
  Json objects = Json::array();
  for (const BoundingBox& box : record.objects) {
    objects.push_back(Json{{"x_min", box.x_min},
                           {"y_min", box.y_min},
                           {"x_max", box.x_max},
                           {"y_max", box.y_max},
                           {"score", box.score}});
  }
  json["objects"] = std::move(objects);
  Json keypoints = Json::array();
  for (const Keypoint& kp : record.keypoints.points) {
    keypoints.push_back(Json::array({kp.x, kp.y, kp.confidence}));
  }
  json["keypoints"] = std::move(keypoints);
  json["head_pose"] = record.head_pose ? Json{{"yaw", record.head_pose->yaw},
                                              {"pitch", record.head_pose->pitch},
                                              {"roll", record.head_pose->roll}}
                                       : Json(nullptr);
  return json;
}

void require_all_labeled(const Dataset& dataset, const char* operation) {
  for (std::size_t i = 0; i < dataset.records.size(); ++i) {
    if (!dataset.records[i].label) {
      throw SchemaError(std::string(operation) + ": record " + std::to_string(i) + " (" +
                        dataset.records[i].frame_id + ") has no label");
    }
  }
}

Dataset take_rows(const Dataset& dataset, const std::vector<std::size_t>& sorted_indices) {
  Dataset out;
  out.records.reserve(sorted_indices.size());
  for (std::size_t index : sorted_indices) {
    out.records.push_back(dataset.records[index]);
  }
  return out;
}

}  // namespace

Dataset Dataset::from_records(std::vector<FeatureRecord> records) {
  std::unordered_set<std::string> seen;
  seen.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const FeatureRecord& record = records[i];
    const std::string where = "record " + std::to_string(i);
    if (record.frame_id.empty()) {
      throw SchemaError(where + ": frame_id must be non-empty");
    }
    if (record.source_video.empty()) {
      throw SchemaError(where + " (" + record.frame_id + "): source_video must be non-empty");
    }
    if (!seen.insert(record.frame_id).second) {
      throw SchemaError(where + ": duplicate frame_id \"" + record.frame_id + "\"");
    }
    const std::string problem = validate_record(record);
    if (!problem.empty()) {
      throw SchemaError(where + " (" + record.frame_id + "): " + problem);
    }
  }
  Dataset dataset;
  dataset.records = std::move(records);
  return dataset;
}

std::size_t Dataset::count_label(int label) const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(),
                    [label](const FeatureRecord& r) { return r.label && *r.label == label; }));
}

std::vector<FeatureRecord> parse_records(const std::string& text, const std::string& origin) {
  const Json json = parse_json(text, origin);
  if (!json.is_array()) {
    throw SchemaError(origin + ": expected a top-level array of records");
  }
  std::vector<FeatureRecord> records;
  records.reserve(json.size());
  for (std::size_t i = 0; i < json.size(); ++i) {
    records.push_back(record_from_json(json.at(i), origin + ": record " + std::to_string(i)));
  }
  return records;
}

Dataset load_records(const std::string& path) {
  return Dataset::from_records(parse_records(read_file(path), path));
}

Json records_to_json(const std::vector<FeatureRecord>& records) {
  Json json = Json::array();
  for (const FeatureRecord& record : records) {
    json.push_back(record_to_json(record));
  }
  return json;
}

void save_records(const Dataset& dataset, const std::string& path) {
  write_file(path, records_to_json(dataset.records).dump(2) + "\n");
}

Dataset labeled_subset(const Dataset& dataset) {
  Dataset out;
  for (const FeatureRecord& record : dataset.records) {
    if (record.label) {
      out.records.push_back(record);
    }
  }
  return out;
}

Dataset balance(const Dataset& dataset, std::uint64_t seed) {
  require_all_labeled(dataset, "balance");
  const std::size_t negatives = dataset.count_label(0);
  const std::size_t positives = dataset.count_label(1);
  if (negatives == 0 || positives == 0) {
    throw ConfigError("cannot balance a single-class set");
  }
  const int majority = negatives > positives ? 0 : 1;
  const std::size_t keep = std::min(negatives, positives);

  std::vector<std::size_t> majority_indices;
  for (std::size_t i = 0; i < dataset.records.size(); ++i) {
    if (*dataset.records[i].label == majority) {
      majority_indices.push_back(i);
    }
  }
  Rng rng(seed);
  rng.shuffle(majority_indices);
  majority_indices.resize(keep);
  std::sort(majority_indices.begin(), majority_indices.end());

  std::vector<std::size_t> kept;
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < dataset.records.size(); ++i) {
    if (*dataset.records[i].label != majority) {
      kept.push_back(i);
    } else if (cursor < majority_indices.size() && majority_indices[cursor] == i) {
      kept.push_back(i);
      cursor += 1;
    }
  }
  return take_rows(dataset, kept);
}

std::pair<Dataset, Dataset> split(const Dataset& dataset, double ratio, std::uint64_t seed,
                                  SplitMode mode) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw ConfigError("split ratio must lie strictly between 0 and 1");
  }
  if (dataset.size() < 2) {
    throw ConfigError("cannot split fewer than two records");
  }

  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
  Rng rng(seed);

  if (mode == SplitMode::kFrame) {
    std::vector<std::size_t> order(dataset.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);
    std::size_t take =
        static_cast<std::size_t>(std::floor(ratio * static_cast<double>(dataset.size())));
    take = std::clamp<std::size_t>(take, 1, dataset.size() - 1);
    train_indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take));
    test_indices.assign(order.begin() + static_cast<std::ptrdiff_t>(take), order.end());
  } else {
    // Whole videos stay on one side so test frames come from unseen videos.
    std::vector<std::string> videos;
    for (const FeatureRecord& record : dataset.records) {
      if (std::find(videos.begin(), videos.end(), record.source_video) == videos.end()) {
        videos.push_back(record.source_video);
      }
    }
    if (videos.size() < 2) {
      throw ConfigError("video split needs at least two videos");
    }
    std::vector<std::size_t> frame_counts(videos.size(), 0);
    for (const FeatureRecord& record : dataset.records) {
      const std::size_t v = static_cast<std::size_t>(
          std::find(videos.begin(), videos.end(), record.source_video) - videos.begin());
      frame_counts[v] += 1;
    }
    std::vector<std::size_t> order(videos.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);

    const double target = ratio * static_cast<double>(dataset.size());
    std::unordered_set<std::string> train_videos;
    double taken = 0.0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (taken >= target || i + 1 == order.size()) {
        break;  // the final video always lands on the test side
      }
      train_videos.insert(videos[order[i]]);
      taken += static_cast<double>(frame_counts[order[i]]);
    }
    if (train_videos.empty()) {
      train_videos.insert(videos[order[0]]);
    }
    for (std::size_t i = 0; i < dataset.records.size(); ++i) {
      if (train_videos.count(dataset.records[i].source_video) > 0) {
        train_indices.push_back(i);
      } else {
        test_indices.push_back(i);
      }
    }
  }

  std::sort(train_indices.begin(), train_indices.end());
  std::sort(test_indices.begin(), test_indices.end());
  return {take_rows(dataset, train_indices), take_rows(dataset, test_indices)};
}

NormStats fit_norm_stats(const TrainingSet& data) {
  if (data.empty()) {
    throw ConfigError("cannot fit normalization on an empty set");
  }
  const std::size_t width = data.front().first.values.size();
  NormStats stats;
  stats.mean.assign(width, 0.0);
  stats.stddev.assign(width, 1.0);
  for (std::size_t slot = 0; slot < width; ++slot) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const LabeledVector& sample : data) {
      const double v = sample.first.values[slot];
      if (v == kSentinel) {
        continue;
      }
      sum += v;
      count += 1;
    }
    if (count == 0) {
      continue;  // all-sentinel slot keeps mean 0, stddev 1
    }
    const double mean = sum / static_cast<double>(count);
    double sq = 0.0;
    for (const LabeledVector& sample : data) {
      const double v = sample.first.values[slot];
      if (v == kSentinel) {
        continue;
      }
      sq += (v - mean) * (v - mean);
    }
    const double stddev = std::sqrt(sq / static_cast<double>(count));
    stats.mean[slot] = mean;
    stats.stddev[slot] = stddev < 1e-12 ? 1.0 : stddev;
  }
  return stats;
}

FeatureVector apply_norm_stats(const FeatureVector& x, const NormStats& stats) {
  if (x.values.size() != stats.mean.size() || x.values.size() != stats.stddev.size()) {
    throw ConfigError("normalization stats do not match the feature width");
  }
  FeatureVector out = x;
  for (std::size_t slot = 0; slot < out.values.size(); ++slot) {
    if (out.values[slot] == kSentinel) {
      continue;  // the sentinel is a marker, not a measurement
    }
    out.values[slot] = (out.values[slot] - stats.mean[slot]) / stats.stddev[slot];
  }
  return out;
}

TrainingSet apply_norm_stats(const TrainingSet& data, const NormStats& stats) {
  TrainingSet out;
  out.reserve(data.size());
  for (const LabeledVector& sample : data) {
    out.emplace_back(apply_norm_stats(sample.first, stats), sample.second);
  }
  return out;
}

std::vector<FeatureVector> encode_records(const std::vector<FeatureRecord>& records,
                                          Layout layout) {
  std::vector<FeatureVector> out;
  out.reserve(records.size());
  for (const FeatureRecord& record : records) {
    out.push_back(encode(record, layout));
  }
  return out;
}

TrainingSet encode_dataset(const Dataset& dataset, Layout layout) {
  require_all_labeled(dataset, "encode");
  TrainingSet out;
  out.reserve(dataset.size());
  for (const FeatureRecord& record : dataset.records) {
    out.emplace_back(encode(record, layout), *record.label);
  }
  return out;
}

Json train_config_to_json(const TrainConfig& config) {
  return Json{{"layout", layout_name(config.layout)},
              {"hidden_dims", config.hidden_dims},
              {"learning_rate", config.learning_rate},
              {"batch_size", config.batch_size},
              {"epochs", config.epochs},
              {"threshold", config.threshold},
              {"seed", config.seed},
              {"normalize", config.normalize},
              {"split_ratio", config.split_ratio},
              {"split_mode", split_mode_name(config.split_mode)}};
}

Json checkpoint_to_json(const Checkpoint& checkpoint) {
  const MlpNetwork& net = checkpoint.network;
  for (std::size_t layer = 0; layer < net.layer_count(); ++layer) {
    const bool finite_weights = std::all_of(net.weights[layer].data.begin(),
                                            net.weights[layer].data.end(),
                                            [](double v) { return std::isfinite(v); });
    const bool finite_biases = std::all_of(net.biases[layer].begin(), net.biases[layer].end(),
                                           [](double v) { return std::isfinite(v); });
    if (!finite_weights || !finite_biases) {
      throw NumericError("layer " + std::to_string(layer) + " contains non-finite parameters");
    }
  }

  Json json;
  json["version"] = kCheckpointVersion;
  json["layout"] = layout_name(net.layout);
  json["layer_dims"] = net.layer_dims;
  Json weights = Json::array();
  for (const Matrix& w : net.weights) {
    weights.push_back(w.data);
  }
  json["weights"] = std::move(weights);
  Json biases = Json::array();
  for (const std::vector<double>& b : net.biases) {
    biases.push_back(b);
  }
  json["biases"] = std::move(biases);

  json["config"] = train_config_to_json(checkpoint.config);

  json["norm_stats"] = checkpoint.norm_stats
                           ? Json{{"mean", checkpoint.norm_stats->mean},
                                  {"std", checkpoint.norm_stats->stddev}}
                           : Json(nullptr);
  return json;
}

Checkpoint checkpoint_from_json(const Json& json) {
  if (!json.is_object()) {
    throw SchemaError("checkpoint: expected a top-level object");
  }
  const Json& version = require_field(json, "version", "checkpoint");
  if (!version.is_number_integer() || version.get<int>() != kCheckpointVersion) {
    throw SchemaError("checkpoint: unsupported version (expected " +
                      std::to_string(kCheckpointVersion) + ")");
  }

  Checkpoint checkpoint;
  MlpNetwork& net = checkpoint.network;

  const Json& layout = require_field(json, "layout", "checkpoint");
  if (!layout.is_string()) {
    throw SchemaError("checkpoint: layout must be a string");
  }
  net.layout = layout_from_name(layout.get<std::string>());

  const Json& dims = require_field(json, "layer_dims", "checkpoint");
  if (!dims.is_array() || dims.size() != kHiddenLayerCount + 2) {
    throw SchemaError("checkpoint: layer_dims must list input, " +
                      std::to_string(kHiddenLayerCount) + " hidden, and output sizes");
  }
  for (const Json& dim : dims) {
    if (!dim.is_number_integer() || dim.get<long long>() <= 0) {
      throw SchemaError("checkpoint: layer_dims entries must be positive integers");
    }
    net.layer_dims.push_back(dim.get<std::size_t>());
  }
  if (net.layer_dims.front() != layout_length(net.layout)) {
    throw SchemaError("checkpoint: layer_dims[0] does not match the layout width");
  }
  if (net.layer_dims.back() != 1) {
    throw SchemaError("checkpoint: the output layer must have one unit");
  }

  const Json& weights = require_field(json, "weights", "checkpoint");
  const Json& biases = require_field(json, "biases", "checkpoint");
  const std::size_t layers = net.layer_dims.size() - 1;
  if (!weights.is_array() || weights.size() != layers) {
    throw SchemaError("checkpoint: weights must hold one matrix per layer");
  }
  if (!biases.is_array() || biases.size() != layers) {
    throw SchemaError("checkpoint: biases must hold one vector per layer");
  }
  for (std::size_t layer = 0; layer < layers; ++layer) {
    const std::size_t rows = net.layer_dims[layer + 1];
    const std::size_t cols = net.layer_dims[layer];
    const Json& w = weights.at(layer);
    if (!w.is_array() || w.size() != rows * cols) {
      throw SchemaError("checkpoint: weights[" + std::to_string(layer) + "] must hold " +
                        std::to_string(rows * cols) + " values");
    }
    Matrix matrix(rows, cols);
    for (std::size_t i = 0; i < w.size(); ++i) {
      matrix.data[i] =
          require_number(w.at(i), "checkpoint: weights[" + std::to_string(layer) + "]");
    }
    net.weights.push_back(std::move(matrix));

    const Json& b = biases.at(layer);
    if (!b.is_array() || b.size() != rows) {
      throw SchemaError("checkpoint: biases[" + std::to_string(layer) + "] must hold " +
                        std::to_string(rows) + " values");
    }
    std::vector<double> bias(rows);
    for (std::size_t i = 0; i < rows; ++i) {
      bias[i] = require_number(b.at(i), "checkpoint: biases[" + std::to_string(layer) + "]");
    }
    net.biases.push_back(std::move(bias));
  }

  const Json& config = require_field(json, "config", "checkpoint");
  if (!config.is_object()) {
    throw SchemaError("checkpoint: config must be an object");
  }
  TrainConfig& train = checkpoint.config;
  const Json& config_layout = require_field(config, "layout", "checkpoint: config");
  if (!config_layout.is_string()) {
    throw SchemaError("checkpoint: config.layout must be a string");
  }
  train.layout = layout_from_name(config_layout.get<std::string>());
  if (train.layout != net.layout) {
    throw SchemaError("checkpoint: config.layout disagrees with the checkpoint layout");
  }

  const Json& hidden = require_field(config, "hidden_dims", "checkpoint: config");
  if (!hidden.is_array() || hidden.size() != kHiddenLayerCount) {
    throw SchemaError("checkpoint: config.hidden_dims must list " +
                      std::to_string(kHiddenLayerCount) + " sizes");
  }
  train.hidden_dims.clear();
  for (std::size_t i = 0; i < hidden.size(); ++i) {
    const Json& dim = hidden.at(i);
    if (!dim.is_number_integer() || dim.get<long long>() <= 0) {
      throw SchemaError("checkpoint: config.hidden_dims entries must be positive integers");
    }
    train.hidden_dims.push_back(dim.get<std::size_t>());
    if (train.hidden_dims.back() != net.layer_dims[i + 1]) {
      throw SchemaError("checkpoint: config.hidden_dims disagrees with layer_dims");
    }
  }

  train.learning_rate =
      require_number(require_field(config, "learning_rate", "checkpoint: config"),
                     "checkpoint: config.learning_rate");
  const Json& batch = require_field(config, "batch_size", "checkpoint: config");
  if (!batch.is_number_integer() || batch.get<long long>() <= 0) {
    throw SchemaError("checkpoint: config.batch_size must be a positive integer");
  }
  train.batch_size = batch.get<std::size_t>();
  const Json& epochs = require_field(config, "epochs", "checkpoint: config");
  if (!epochs.is_number_integer() || epochs.get<long long>() <= 0) {
    throw SchemaError("checkpoint: config.epochs must be a positive integer");
  }
  train.epochs = epochs.get<std::size_t>();
  train.threshold = require_number(require_field(config, "threshold", "checkpoint: config"),
                                   "checkpoint: config.threshold");
  const Json& seed = require_field(config, "seed", "checkpoint: config");
  if (!seed.is_number_integer()) {
    throw SchemaError("checkpoint: config.seed must be an integer");
  }
  train.seed = seed.get<std::uint64_t>();
  const Json& normalize = require_field(config, "normalize", "checkpoint: config");
  if (!normalize.is_boolean()) {
    throw SchemaError("checkpoint: config.normalize must be a boolean");
  }
  train.normalize = normalize.get<bool>();
  train.split_ratio = require_number(require_field(config, "split_ratio", "checkpoint: config"),
                                     "checkpoint: config.split_ratio");
  const Json& split_mode = require_field(config, "split_mode", "checkpoint: config");
  if (!split_mode.is_string()) {
    throw SchemaError("checkpoint: config.split_mode must be a string");
  }
  train.split_mode = split_mode_from_name(split_mode.get<std::string>());
  validate_config(train);

  // The schema keeps the seed inside config; mirror it onto the network.
  net.seed = train.seed;

  const Json& norm = require_field(json, "norm_stats", "checkpoint");
  if (!norm.is_null()) {
    if (!norm.is_object()) {
      throw SchemaError("checkpoint: norm_stats must be an object or null");
    }
    NormStats stats;
    const Json& mean = require_field(norm, "mean", "checkpoint: norm_stats");
    const Json& stddev = require_field(norm, "std", "checkpoint: norm_stats");
    if (!mean.is_array() || mean.size() != net.layer_dims.front() || !stddev.is_array() ||
        stddev.size() != net.layer_dims.front()) {
      throw SchemaError("checkpoint: norm_stats arrays must match the input width");
    }
    for (std::size_t i = 0; i < mean.size(); ++i) {
      stats.mean.push_back(require_number(mean.at(i), "checkpoint: norm_stats.mean"));
      stats.stddev.push_back(require_number(stddev.at(i), "checkpoint: norm_stats.std"));
    }
    checkpoint.norm_stats = std::move(stats);
  }

  return checkpoint;
}

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path) {
  write_file(path, checkpoint_to_json(checkpoint).dump(2) + "\n");
}

Checkpoint load_checkpoint(const std::string& path) {
  return checkpoint_from_json(parse_json(read_file(path), path));
}

}  // namespace handover
