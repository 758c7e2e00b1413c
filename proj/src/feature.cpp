#include "handover/feature.hpp"

#include <cmath>

#include "handover/error.hpp"

namespace handover {
namespace {

void append_head_angles(std::vector<double>& values, const std::optional<HeadPose>& pose) {
  if (pose) {
    values.push_back(pose->yaw);
    values.push_back(pose->pitch);
    values.push_back(pose->roll);
  } else {
    values.insert(values.end(), 3, kSentinel);
  }
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

std::size_t layout_length(Layout layout) {
  return layout == Layout::kAbsolute ? kAbsoluteLength : kRelativeLength;
}

const char* layout_name(Layout layout) {
  return layout == Layout::kAbsolute ? "absolute" : "relative";
}

Layout layout_from_name(const std::string& name) {
  if (name == "absolute") return Layout::kAbsolute;
  if (name == "relative") return Layout::kRelative;
  throw ConfigError("unknown layout \"" + name + "\" (expected \"absolute\" or \"relative\")");
}

std::optional<BoundingBox> select_target_object(const std::vector<BoundingBox>& objects) {
  if (objects.empty()) return std::nullopt;
  std::size_t best = 0;
  for (std::size_t i = 1; i < objects.size(); ++i) {
    if (objects[i].area() > objects[best].area()) best = i;
  }
  return objects[best];
}

std::array<PixelPoint, kUpperBodyCount> upper_body_keypoints(const BodyKeypoints& kp) {
  std::array<PixelPoint, kUpperBodyCount> out{};
  for (std::size_t i = 0; i < kUpperBodyCount; ++i) {
    out[i] = {kp.points[i].x, kp.points[i].y};
  }
  return out;
}

FeatureVector encode_absolute(const FeatureRecord& record) {
  FeatureVector out;
  out.layout = Layout::kAbsolute;
  out.values.reserve(kAbsoluteLength);
  const auto target = select_target_object(record.objects);
  if (target) {
    out.values.push_back(target->centroid_x());
    out.values.push_back(target->centroid_y());
    out.values.push_back(target->width());
    out.values.push_back(target->height());
  } else {
    out.values.insert(out.values.end(), 4, 0.0);
  }
  for (const auto& p : upper_body_keypoints(record.keypoints)) {
    out.values.push_back(p[0]);
    out.values.push_back(p[1]);
  }
  append_head_angles(out.values, record.head_pose);
  return out;
}

FeatureVector encode_relative(const FeatureRecord& record) {
  FeatureVector out;
  out.layout = Layout::kRelative;
  out.values.reserve(kRelativeLength);
  const auto target = select_target_object(record.objects);
  out.values.push_back(target ? 1.0 : 0.0);
  if (target) {
    const double cx = target->centroid_x();
    const double cy = target->centroid_y();
    for (const auto& p : upper_body_keypoints(record.keypoints)) {
      out.values.push_back(p[0] - cx);
      out.values.push_back(p[1] - cy);
    }
    append_head_angles(out.values, record.head_pose);
  } else {
    out.values.insert(out.values.end(), 2 * kUpperBodyCount, 0.0);
    out.values.insert(out.values.end(), 3, kSentinel);
  }
  return out;
}

FeatureVector encode(const FeatureRecord& record, Layout layout) {
  return layout == Layout::kAbsolute ? encode_absolute(record) : encode_relative(record);
}

std::string validate_record(const FeatureRecord& record) {
  for (std::size_t i = 0; i < record.objects.size(); ++i) {
    const BoundingBox& b = record.objects[i];
    const std::string tag = "objects[" + std::to_string(i) + "]";
    if (!finite(b.x_min) || !finite(b.y_min) || !finite(b.x_max) || !finite(b.y_max) ||
        !finite(b.score)) {
      return tag + ": coordinates and score must be finite";
    }
    if (!(b.x_min < b.x_max)) return tag + ": x_min must be < x_max";
    if (!(b.y_min < b.y_max)) return tag + ": y_min must be < y_max";
    if (!(b.score >= 0.0 && b.score <= 1.0)) return tag + ": score out of [0,1]";
  }
  for (std::size_t i = 0; i < kKeypointCount; ++i) {
    const Keypoint& p = record.keypoints.points[i];
    const std::string tag = "keypoints[" + std::to_string(i) + "]";
    if (!finite(p.x) || !finite(p.y) || !finite(p.confidence)) {
      return tag + ": coordinates and confidence must be finite";
    }
    if (!(p.confidence >= 0.0 && p.confidence <= 1.0)) {
      return tag + ": confidence out of [0,1]";
    }
  }
  if (record.head_pose) {
    const HeadPose& h = *record.head_pose;
    if (!finite(h.yaw) || !finite(h.pitch) || !finite(h.roll)) {
      return "head_pose: angles must be finite";
    }
    if (!(h.yaw >= -180.0 && h.yaw <= 180.0)) return "head_pose: yaw out of [-180,180]";
    if (!(h.pitch >= -90.0 && h.pitch <= 90.0)) return "head_pose: pitch out of [-90,90]";
    if (!(h.roll >= -90.0 && h.roll <= 90.0)) return "head_pose: roll out of [-90,90]";
  }
  if (record.label && *record.label != 0 && *record.label != 1) {
    return "label: must be 0 or 1";
  }
  return "";
}

}  // namespace handover
