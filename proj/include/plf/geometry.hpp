// Copyright 2026 The plfkit Authors.
// SPDX-License-Identifier: Apache-2.0

// Axis-aligned boxes in absolute pixel coordinates, their normalized
// (center, size) counterpart used by YOLO label files, IoU and COCO area
// classes. Everything here is a pure function on values.

#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <span>
#include <string_view>

#include "plf/errors.hpp"

namespace plf {

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;

/// Top-left anchored box: (x_min, y_min, width, height) in pixels.
template <typename Scalar>
struct BasicBox {
  Scalar x_min{0};
  Scalar y_min{0};
  Scalar width{0};
  Scalar height{0};

  Vector2<Scalar> min_corner() const { return {x_min, y_min}; }
  Vector2<Scalar> max_corner() const { return {x_min + width, y_min + height}; }
  Vector2<Scalar> extent() const { return {width, height}; }
  Scalar area() const { return width * height; }
  bool valid() const {
    return width > Scalar(0) && height > Scalar(0) && std::isfinite(x_min) &&
           std::isfinite(y_min) && std::isfinite(width) && std::isfinite(height);
  }

  BasicBox translated(const Vector2<Scalar>& t) const {
    return {x_min + t.x(), y_min + t.y(), width, height};
  }

  friend bool operator==(const BasicBox&, const BasicBox&) = default;
};

/// YOLO-style box: center and size as fractions of the image dimensions.
template <typename Scalar>
struct BasicNormBox {
  Scalar cx{0};
  Scalar cy{0};
  Scalar w{0};
  Scalar h{0};
  int class_id{0};

  friend bool operator==(const BasicNormBox&, const BasicNormBox&) = default;
};

using BBox = BasicBox<double>;
using NormBox = BasicNormBox<double>;

enum class AreaClass { Small, Medium, Large };

inline constexpr double kSmallAreaMax = 32.0 * 32.0;
inline constexpr double kMediumAreaMax = 96.0 * 96.0;
inline constexpr double kNormTolerance = 1e-6;

template <typename Scalar>
Scalar intersection_area(const BasicBox<Scalar>& a, const BasicBox<Scalar>& b) {
  const Vector2<Scalar> lo = a.min_corner().cwiseMax(b.min_corner());
  const Vector2<Scalar> hi = a.max_corner().cwiseMin(b.max_corner());
  return (hi - lo).cwiseMax(Scalar(0)).prod();
}

/// Intersection over union. Boxes touching only along an edge give 0.
template <typename Scalar>
Scalar iou(const BasicBox<Scalar>& a, const BasicBox<Scalar>& b) {
  const Scalar inter = intersection_area(a, b);
  if (inter <= Scalar(0)) return Scalar(0);
  const Scalar uni = a.area() + b.area() - inter;
  return std::min(Scalar(1), inter / uni);
}

/// Pairwise IoU: rows index `rows`, columns index `cols`.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> iou_matrix(
    std::span<const BasicBox<Scalar>> rows,
    std::span<const BasicBox<Scalar>> cols) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(
      static_cast<Eigen::Index>(rows.size()),
      static_cast<Eigen::Index>(cols.size()));
  for (Eigen::Index i = 0; i < out.rows(); ++i)
    for (Eigen::Index j = 0; j < out.cols(); ++j)
      out(i, j) = iou(rows[static_cast<std::size_t>(i)],
                      cols[static_cast<std::size_t>(j)]);
  return out;
}

inline Eigen::MatrixXd pairwise_iou(std::span<const BBox> rows,
                                    std::span<const BBox> cols) {
  return iou_matrix<double>(rows, cols);
}

/// Intersect `b` with the image rectangle [0, img_w] x [0, img_h].
/// The result may be degenerate; callers check `valid()`.
template <typename Scalar>
BasicBox<Scalar> clamp_to_image(const BasicBox<Scalar>& b, Scalar img_w,
                                Scalar img_h) {
  const Vector2<Scalar> size(img_w, img_h);
  if ((b.min_corner().array() >= Scalar(0)).all() &&
      (b.max_corner().array() <= size.array()).all())
    return b;
  const Vector2<Scalar> lo = b.min_corner().cwiseMax(Scalar(0)).cwiseMin(size);
  const Vector2<Scalar> hi = b.max_corner().cwiseMax(Scalar(0)).cwiseMin(size);
  const Vector2<Scalar> ext = (hi - lo).cwiseMax(Scalar(0));
  return {lo.x(), lo.y(), ext.x(), ext.y()};
}

/// Pixel box to normalized label box. The box is clamped to the image first;
/// throws OutOfImage if nothing of it remains inside.
template <typename Scalar>
BasicNormBox<Scalar> to_norm(const BasicBox<Scalar>& b, int class_id,
                             Scalar img_w, Scalar img_h) {
  if (!(img_w > Scalar(0)) || !(img_h > Scalar(0)))
    throw RangeError("image dimensions must be positive");
  const BasicBox<Scalar> c = clamp_to_image(b, img_w, img_h);
  if (!c.valid()) throw OutOfImage("box has no area inside the image");
  return {(c.x_min + c.width / Scalar(2)) / img_w,
          (c.y_min + c.height / Scalar(2)) / img_h, c.width / img_w,
          c.height / img_h, class_id};
}

template <typename Scalar>
BasicBox<Scalar> from_norm(const BasicNormBox<Scalar>& n, Scalar img_w,
                           Scalar img_h) {
  const Scalar w = n.w * img_w;
  const Scalar h = n.h * img_h;
  return {n.cx * img_w - w / Scalar(2), n.cy * img_h - h / Scalar(2), w, h};
}

/// True when all coordinates lie in [0,1] and the box stays inside the
/// unit square up to kNormTolerance.
template <typename Scalar>
bool norm_box_valid(const BasicNormBox<Scalar>& n) {
  const auto unit = [](Scalar v) { return v >= Scalar(0) && v <= Scalar(1); };
  if (!unit(n.cx) || !unit(n.cy) || !unit(n.w) || !unit(n.h)) return false;
  if (n.class_id < 0) return false;
  const Scalar eps(kNormTolerance);
  return n.cx - n.w / 2 >= -eps && n.cx + n.w / 2 <= 1 + eps &&
         n.cy - n.h / 2 >= -eps && n.cy + n.h / 2 <= 1 + eps;
}

inline AreaClass area_class(double area) {
  if (area < kSmallAreaMax) return AreaClass::Small;
  if (area < kMediumAreaMax) return AreaClass::Medium;
  return AreaClass::Large;
}

template <typename Scalar>
AreaClass area_class(const BasicBox<Scalar>& b) {
  return area_class(static_cast<double>(b.area()));
}

inline std::string_view to_string(AreaClass c) {
  switch (c) {
    case AreaClass::Small: return "small";
    case AreaClass::Medium: return "medium";
    case AreaClass::Large: return "large";
  }
  return "unknown";
}

}  // namespace plf
