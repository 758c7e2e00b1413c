#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "handover/dataset.hpp"
#include "handover/feature.hpp"

namespace handover {

// Generative rule thresholds are part of the config so tests can replay the
// labeling predicate against emitted records.
struct SceneConfig {
  double image_width = 640.0;
  double image_height = 480.0;
  std::size_t n_records = 2000;
  double positive_fraction = 0.5;
  double noise_sigma = 3.0;       // pixels, applied after labeling
  double corner_fraction = 0.2;   // torso anchor biased to an image corner
  std::uint64_t seed = 0;

  double near_wrist_factor = 0.5;  // offers: centroid within this x body scale of a wrist
  double far_wrist_factor = 2.0;   // idle object: centroid beyond this x body scale of both
  double facing_yaw = 30.0;        // degrees; offers face the camera
  double facing_pitch = 20.0;
  double away_yaw = 60.0;          // degrees; |yaw| beyond this reads as looking away
};

void validate_scene_config(const SceneConfig& config);

enum class SceneKind { kHandover, kNoObject, kObjectFar, kLookingAway };

const char* scene_kind_name(SceneKind kind);

// Clean (pre-noise) geometry the record was labeled from.
struct SceneTruth {
  SceneKind kind = SceneKind::kHandover;
  double body_scale = 0.0;
  bool near_corner = false;
  PixelPoint left_wrist{0.0, 0.0};
  PixelPoint right_wrist{0.0, 0.0};
  std::optional<PixelPoint> object_centroid;
};

struct GeneratedScene {
  FeatureRecord record;
  SceneTruth truth;
};

// Pure function of config; coordinates land on a 1/64 px grid so that
// integer translations cancel exactly in the relative encoding.
std::vector<GeneratedScene> generate_scenes(const SceneConfig& config);

Dataset generate(const SceneConfig& config);

// Shifts every keypoint and bbox corner; labels and head poses unchanged.
FeatureRecord translate_record(const FeatureRecord& record, double dx, double dy);
Dataset translate_all(const Dataset& dataset, double dx, double dy);

}  // namespace handover
