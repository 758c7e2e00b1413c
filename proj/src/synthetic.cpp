#include "handover/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "handover/error.hpp"
#include "handover/rng.hpp"

namespace handover {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDegToRad = kPi / 180.0;

// Skeleton proportions relative to the sampled body scale. The range spans
// near and far subjects widely enough that no fixed pixel threshold can
// stand in for the scale-relative distance rules.
constexpr double kMinBodyScale = 40.0;
constexpr double kMaxBodyScale = 170.0;
constexpr double kShoulderHalf = 0.30;
constexpr double kUpperArm = 0.75;
constexpr double kForearm = 0.65;
constexpr double kHeadLift = 0.35;
constexpr double kHipHalf = 0.18;

// All emitted coordinates sit on a 1/64 px grid; dyadic values make integer
// translations cancel bit-exactly in the relative encoding.
double snap(double v) {
  return std::round(v * 64.0) / 64.0;
}

double distance(PixelPoint a, PixelPoint b) {
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

// theta is measured from straight down, positive swings outward; side is +1
// for the subject's left (image right when facing the camera), -1 otherwise.
PixelPoint arm_point(PixelPoint from, double length, double theta_deg, double side) {
  const double theta = theta_deg * kDegToRad;
  return {from[0] + side * length * std::sin(theta), from[1] + length * std::cos(theta)};
}

struct ArmPose {
  double shoulder_theta = 0.0;  // degrees from straight down
  double bend = 0.0;            // extra outward rotation of the forearm
};

ArmPose hanging_arm(Rng& rng) {
  return {rng.uniform(-12.0, 12.0), rng.uniform(0.0, 15.0)};
}

ArmPose extended_arm(Rng& rng) {
  return {rng.uniform(50.0, 115.0), rng.uniform(0.0, 12.0)};
}

std::array<PixelPoint, kKeypointCount> build_skeleton(Rng& rng, PixelPoint anchor, double s,
                                                      const ArmPose& left,
                                                      const ArmPose& right) {
  std::array<PixelPoint, kKeypointCount> p{};
  const double nose_jitter = rng.uniform(-0.04, 0.04) * s;
  p[kNose] = {anchor[0] + nose_jitter, anchor[1] - kHeadLift * s};
  p[kLeftEye] = {p[kNose][0] + 0.08 * s, p[kNose][1] - 0.05 * s};
  p[kRightEye] = {p[kNose][0] - 0.08 * s, p[kNose][1] - 0.05 * s};
  p[kLeftEar] = {p[kNose][0] + 0.16 * s, p[kNose][1] - 0.02 * s};
  p[kRightEar] = {p[kNose][0] - 0.16 * s, p[kNose][1] - 0.02 * s};
  p[kLeftShoulder] = {anchor[0] + kShoulderHalf * s, anchor[1] + rng.uniform(0.02, 0.08) * s};
  p[kRightShoulder] = {anchor[0] - kShoulderHalf * s, anchor[1] + rng.uniform(0.02, 0.08) * s};
  p[kLeftElbow] = arm_point(p[kLeftShoulder], kUpperArm * s, left.shoulder_theta, +1.0);
  p[kLeftWrist] =
      arm_point(p[kLeftElbow], kForearm * s, left.shoulder_theta + left.bend, +1.0);
  p[kRightElbow] = arm_point(p[kRightShoulder], kUpperArm * s, right.shoulder_theta, -1.0);
  p[kRightWrist] =
      arm_point(p[kRightElbow], kForearm * s, right.shoulder_theta + right.bend, -1.0);
  const double hip_y = anchor[1] + rng.uniform(0.95, 1.05) * s;
  p[kLeftHip] = {anchor[0] + kHipHalf * s, hip_y};
  p[kRightHip] = {anchor[0] - kHipHalf * s, hip_y};
  p[kLeftKnee] = {p[kLeftHip][0] + rng.uniform(-0.03, 0.03) * s, p[kLeftHip][1] + 0.5 * s};
  p[kRightKnee] = {p[kRightHip][0] + rng.uniform(-0.03, 0.03) * s, p[kRightHip][1] + 0.5 * s};
  p[kLeftAnkle] = {p[kLeftKnee][0] + rng.uniform(-0.03, 0.03) * s, p[kLeftKnee][1] + 0.5 * s};
  p[kRightAnkle] = {p[kRightKnee][0] + rng.uniform(-0.03, 0.03) * s, p[kRightKnee][1] + 0.5 * s};
  return p;
}

PixelPoint sample_anchor(Rng& rng, const SceneConfig& cfg, bool near_corner) {
  if (near_corner) {
    const std::uint64_t which = rng.index(4);
    const bool left = which % 2 == 0;
    const bool top = which < 2;
    const double mx = rng.uniform(0.06, 0.22) * cfg.image_width;
    const double my = top ? rng.uniform(0.12, 0.30) * cfg.image_height
                          : cfg.image_height - rng.uniform(0.40, 0.55) * cfg.image_height;
    return {left ? mx : cfg.image_width - mx, my};
  }
  return {rng.uniform(0.40, 0.60) * cfg.image_width,
          rng.uniform(0.30, 0.45) * cfg.image_height};
}

HeadPose facing_head(Rng& rng, const SceneConfig& cfg) {
  return {rng.uniform(-cfg.facing_yaw, cfg.facing_yaw),
          rng.uniform(-cfg.facing_pitch, cfg.facing_pitch), rng.uniform(-12.0, 12.0)};
}

// A glance just past the yaw rule rather than a full head turn, so the rule
// boundary itself is what separates these scenes from offers.
HeadPose away_head(Rng& rng, const SceneConfig& cfg) {
  const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
  const double hi = std::min(cfg.away_yaw + 15.0, 178.0);
  const double lo = std::min(cfg.away_yaw + 1.0, hi);
  return {sign * rng.uniform(lo, hi), rng.uniform(-cfg.facing_pitch, cfg.facing_pitch),
          rng.uniform(-12.0, 12.0)};
}

BoundingBox make_box(Rng& rng, PixelPoint centroid, double s) {
  const double w = rng.uniform(0.18, 0.42) * s;
  const double h = rng.uniform(0.18, 0.42) * s;
  BoundingBox box;
  box.x_min = centroid[0] - 0.5 * w;
  box.x_max = centroid[0] + 0.5 * w;
  box.y_min = centroid[1] - 0.5 * h;
  box.y_max = centroid[1] + 0.5 * h;
  box.score = rng.uniform(0.55, 0.99);
  return box;
}

// The held object sits near the wrist; the upper bound is 0.9 x the rule
// radius so noisy replays stay inside the rule.
PixelPoint near_wrist_point(Rng& rng, PixelPoint wrist, double s, double factor) {
  const double r = rng.uniform(0.0, 0.9) * factor * s;
  const double angle = rng.uniform(0.0, 2.0 * kPi);
  return {wrist[0] + r * std::cos(angle), wrist[1] + r * std::sin(angle)};
}

// Point at (at least) min_dist from both wrists; the midpoint-ring fallback
// clears the bound for any geometry, though it may leave the frame.
PixelPoint ring_point(Rng& rng, PixelPoint left_wrist, PixelPoint right_wrist,
                      double min_dist) {
  for (int attempt = 0; attempt < 50; ++attempt) {
    const bool from_left = rng.bernoulli(0.5);
    const PixelPoint& wrist = from_left ? left_wrist : right_wrist;
    const PixelPoint& other = from_left ? right_wrist : left_wrist;
    const double phi = rng.uniform(0.0, 2.0 * kPi);
    const PixelPoint candidate{wrist[0] + min_dist * std::cos(phi),
                               wrist[1] + min_dist * std::sin(phi)};
    if (distance(candidate, other) >= min_dist) {
      return candidate;
    }
  }
  const double phi = rng.uniform(0.0, 2.0 * kPi);
  const double reach = min_dist + 0.5 * distance(left_wrist, right_wrist);
  return {0.5 * (left_wrist[0] + right_wrist[0]) + reach * std::cos(phi),
          0.5 * (left_wrist[1] + right_wrist[1]) + reach * std::sin(phi)};
}

// Far objects split between hugging the rule boundary and scattering over
// the frame: boundary cases pin the rule down at body scale, scattered ones
// cover the full range of separations.
PixelPoint far_point(Rng& rng, const SceneConfig& cfg, PixelPoint left_wrist,
                     PixelPoint right_wrist, double s) {
  const double min_dist = cfg.far_wrist_factor * s + 6.0 * cfg.noise_sigma;
  if (rng.bernoulli(0.5)) {
    const double base = min_dist + 1.0;
    return ring_point(rng, left_wrist, right_wrist,
                      rng.uniform(base, base + 1.2 * s));
  }
  for (int attempt = 0; attempt < 200; ++attempt) {
    const PixelPoint candidate{rng.uniform(0.0, cfg.image_width),
                               rng.uniform(0.0, cfg.image_height)};
    if (distance(candidate, left_wrist) > min_dist &&
        distance(candidate, right_wrist) > min_dist) {
      return candidate;
    }
  }
  return ring_point(rng, left_wrist, right_wrist, min_dist + 1.0);
}

FeatureRecord finish_record(Rng& rng, const SceneConfig& cfg, std::size_t index,
                            const std::array<PixelPoint, kKeypointCount>& skeleton,
                            std::vector<BoundingBox> objects, const HeadPose& head, int label) {
  FeatureRecord record;
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "frame_%06zu", index);
  record.frame_id = buffer;
  std::snprintf(buffer, sizeof buffer, "vid_%03zu", index / 100);
  record.source_video = buffer;
  record.label = label;
  record.head_pose = head;

  for (std::size_t i = 0; i < kKeypointCount; ++i) {
    Keypoint& kp = record.keypoints.points[i];
    kp.x = snap(skeleton[i][0] + rng.gaussian(0.0, cfg.noise_sigma));
    kp.y = snap(skeleton[i][1] + rng.gaussian(0.0, cfg.noise_sigma));
    kp.confidence = rng.uniform(0.5, 1.0);
  }
  for (BoundingBox& box : objects) {
    box.x_min = snap(box.x_min + rng.gaussian(0.0, cfg.noise_sigma));
    box.y_min = snap(box.y_min + rng.gaussian(0.0, cfg.noise_sigma));
    box.x_max = snap(box.x_max + rng.gaussian(0.0, cfg.noise_sigma));
    box.y_max = snap(box.y_max + rng.gaussian(0.0, cfg.noise_sigma));
    if (box.x_min >= box.x_max) {
      const double mid = snap(0.5 * (box.x_min + box.x_max));
      box.x_min = mid - 0.5;
      box.x_max = mid + 0.5;
    }
    if (box.y_min >= box.y_max) {
      const double mid = snap(0.5 * (box.y_min + box.y_max));
      box.y_min = mid - 0.5;
      box.y_max = mid + 0.5;
    }
  }
  record.objects = std::move(objects);
  return record;
}

GeneratedScene make_scene(Rng& rng, const SceneConfig& cfg, std::size_t index) {
  GeneratedScene scene;
  SceneTruth& truth = scene.truth;

  const bool positive = rng.bernoulli(cfg.positive_fraction);
  SceneKind kind = SceneKind::kHandover;
  if (!positive) {
    const std::uint64_t mode = rng.index(3);
    kind = mode == 0   ? SceneKind::kNoObject
           : mode == 1 ? SceneKind::kObjectFar
                       : SceneKind::kLookingAway;
  }
  truth.kind = kind;
  truth.near_corner = rng.bernoulli(cfg.corner_fraction);

  const PixelPoint anchor = sample_anchor(rng, cfg, truth.near_corner);
  const double s = rng.uniform(kMinBodyScale, kMaxBodyScale);
  truth.body_scale = s;

  // Non-offer scenes still extend an arm half the time, so arm pose alone
  // never separates the classes; the wrist-object relation has to.
  const bool offers = kind == SceneKind::kHandover || kind == SceneKind::kLookingAway;
  const bool extended = offers || rng.bernoulli(0.5);
  const bool extend_left = extended && rng.bernoulli(0.5);
  const ArmPose left = extended && extend_left ? extended_arm(rng) : hanging_arm(rng);
  const ArmPose right = extended && !extend_left ? extended_arm(rng) : hanging_arm(rng);
  const auto skeleton = build_skeleton(rng, anchor, s, left, right);
  truth.left_wrist = skeleton[kLeftWrist];
  truth.right_wrist = skeleton[kRightWrist];

  HeadPose head{};
  std::vector<BoundingBox> objects;
  int label = 0;
  switch (kind) {
    case SceneKind::kHandover: {
      head = facing_head(rng, cfg);
      const PixelPoint wrist = extend_left ? skeleton[kLeftWrist] : skeleton[kRightWrist];
      const PixelPoint centroid = near_wrist_point(rng, wrist, s, cfg.near_wrist_factor);
      truth.object_centroid = centroid;
      objects.push_back(make_box(rng, centroid, s));
      label = 1;
      break;
    }
    case SceneKind::kNoObject: {
      head = HeadPose{rng.uniform(-75.0, 75.0), rng.uniform(-cfg.facing_pitch, cfg.facing_pitch),
                      rng.uniform(-12.0, 12.0)};
      break;
    }
    case SceneKind::kObjectFar: {
      head = facing_head(rng, cfg);
      const PixelPoint centroid =
          far_point(rng, cfg, skeleton[kLeftWrist], skeleton[kRightWrist], s);
      truth.object_centroid = centroid;
      objects.push_back(make_box(rng, centroid, s));
      break;
    }
    case SceneKind::kLookingAway: {
      head = away_head(rng, cfg);
      const PixelPoint wrist = extend_left ? skeleton[kLeftWrist] : skeleton[kRightWrist];
      const PixelPoint centroid = near_wrist_point(rng, wrist, s, cfg.near_wrist_factor);
      truth.object_centroid = centroid;
      objects.push_back(make_box(rng, centroid, s));
      break;
    }
  }
  scene.record = finish_record(rng, cfg, index, skeleton, std::move(objects), head, label);
  return scene;
}

}  // namespace

void validate_scene_config(const SceneConfig& config) {
  if (!(config.image_width > 0.0) || !std::isfinite(config.image_width) ||
      !(config.image_height > 0.0) || !std::isfinite(config.image_height)) {
    throw ConfigError("image dimensions must be positive");
  }
  if (config.n_records == 0) {
    throw ConfigError("n_records must be positive");
  }
  if (!(config.positive_fraction >= 0.0 && config.positive_fraction <= 1.0)) {
    throw ConfigError("positive fraction must lie in [0, 1]");
  }
  if (!(config.corner_fraction >= 0.0 && config.corner_fraction <= 1.0)) {
    throw ConfigError("corner fraction must lie in [0, 1]");
  }
  if (!(config.noise_sigma >= 0.0) || !std::isfinite(config.noise_sigma)) {
    throw ConfigError("noise sigma must be non-negative");
  }
  if (!(config.near_wrist_factor > 0.0)) {
    throw ConfigError("near wrist factor must be positive");
  }
  if (!(config.far_wrist_factor > config.near_wrist_factor)) {
    throw ConfigError("far wrist factor must exceed the near wrist factor");
  }
  if (!(config.facing_yaw > 0.0 && config.facing_yaw < config.away_yaw)) {
    throw ConfigError("facing yaw must lie strictly between 0 and the away yaw");
  }
  if (!(config.away_yaw <= 150.0)) {
    throw ConfigError("away yaw must not exceed 150 degrees");
  }
  if (!(config.facing_pitch > 0.0 && config.facing_pitch < 90.0)) {
    throw ConfigError("facing pitch must lie strictly between 0 and 90 degrees");
  }
}

const char* scene_kind_name(SceneKind kind) {
  switch (kind) {
    case SceneKind::kHandover:
      return "handover";
    case SceneKind::kNoObject:
      return "no_object";
    case SceneKind::kObjectFar:
      return "object_far";
    case SceneKind::kLookingAway:
      return "looking_away";
  }
  return "unknown";
}

std::vector<GeneratedScene> generate_scenes(const SceneConfig& config) {
  validate_scene_config(config);
  Rng rng(config.seed);
  std::vector<GeneratedScene> scenes;
  scenes.reserve(config.n_records);
  for (std::size_t i = 0; i < config.n_records; ++i) {
    scenes.push_back(make_scene(rng, config, i));
  }
  return scenes;
}

Dataset generate(const SceneConfig& config) {
  std::vector<FeatureRecord> records;
  records.reserve(config.n_records);
  for (GeneratedScene& scene : generate_scenes(config)) {
    records.push_back(std::move(scene.record));
  }
  return Dataset::from_records(std::move(records));
}

FeatureRecord translate_record(const FeatureRecord& record, double dx, double dy) {
  FeatureRecord out = record;
  for (BoundingBox& box : out.objects) {
    box.x_min += dx;
    box.x_max += dx;
    box.y_min += dy;
    box.y_max += dy;
  }
  for (Keypoint& kp : out.keypoints.points) {
    kp.x += dx;
    kp.y += dy;
  }
  return out;
}

Dataset translate_all(const Dataset& dataset, double dx, double dy) {
  Dataset out;
  out.records.reserve(dataset.size());
  for (const FeatureRecord& record : dataset.records) {
    out.records.push_back(translate_record(record, dx, dy));
  }
  return out;
}

}  // namespace handover
