#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace handover {

// Axis-aligned detection box in image coordinates (x right, y down).
struct BoundingBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;
  double score = 0.0;  // detector confidence in [0, 1]

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
  double centroid_x() const { return 0.5 * (x_min + x_max); }
  double centroid_y() const { return 0.5 * (y_min + y_max); }
};

struct Keypoint {
  double x = 0.0;
  double y = 0.0;
  double confidence = 0.0;
};

// COCO keypoint order.
enum CocoIndex : std::size_t {
  kNose = 0,
  kLeftEye = 1,
  kRightEye = 2,
  kLeftEar = 3,
  kRightEar = 4,
  kLeftShoulder = 5,
  kRightShoulder = 6,
  kLeftElbow = 7,
  kRightElbow = 8,
  kLeftWrist = 9,
  kRightWrist = 10,
  kLeftHip = 11,
  kRightHip = 12,
  kLeftKnee = 13,
  kRightKnee = 14,
  kLeftAnkle = 15,
  kRightAnkle = 16,
};

inline constexpr std::size_t kKeypointCount = 17;
inline constexpr std::size_t kUpperBodyCount = 11;  // COCO indices 0..10

struct BodyKeypoints {
  std::array<Keypoint, kKeypointCount> points{};
};

// Euler angles in degrees, camera frame.
struct HeadPose {
  double yaw = 0.0;
  double pitch = 0.0;
  double roll = 0.0;
};

// One frame's detector outputs plus an optional ground-truth label.
struct FeatureRecord {
  std::string frame_id;
  std::string source_video;
  std::vector<BoundingBox> objects;
  BodyKeypoints keypoints;
  std::optional<HeadPose> head_pose;
  std::optional<int> label;  // 0 or 1 when present
};

enum class Layout { kAbsolute, kRelative };

inline constexpr std::size_t kAbsoluteLength = 29;
inline constexpr std::size_t kRelativeLength = 26;

// Written into the three head-angle slots when the detection backing them
// is unavailable.
inline constexpr double kSentinel = -999.0;

std::size_t layout_length(Layout layout);
const char* layout_name(Layout layout);
Layout layout_from_name(const std::string& name);

struct FeatureVector {
  Layout layout = Layout::kRelative;
  std::vector<double> values;
};

// Largest-area box wins; ties go to the lowest index.
std::optional<BoundingBox> select_target_object(const std::vector<BoundingBox>& objects);

using PixelPoint = std::array<double, 2>;

// COCO indices 0-10 (nose, eyes, ears, shoulders, elbows, wrists) in COCO
// order, confidences dropped.
std::array<PixelPoint, kUpperBodyCount> upper_body_keypoints(const BodyKeypoints& kp);

// [cx, cy, w, h | 22 keypoint pixel coords | yaw, pitch, roll]. The four
// box slots are zero when no object is detected; the angle slots hold the
// sentinel when head pose is absent.
FeatureVector encode_absolute(const FeatureRecord& record);

// [presence | 22 keypoint coords relative to the target centroid |
// yaw, pitch, roll]. With no detected object the presence bit is 0, the
// coordinate slots are zero and the angle slots hold the sentinel.
FeatureVector encode_relative(const FeatureRecord& record);

FeatureVector encode(const FeatureRecord& record, Layout layout);

// Empty string when every type invariant holds, otherwise a message naming
// the offending field.
std::string validate_record(const FeatureRecord& record);

}  // namespace handover
