#pragma once

#include <optional>
#include <string>
#include <vector>

#include "textforge/geometry.hpp"

namespace textforge {

enum class CurveKind { Straight, Parabola, Circle };
enum class Concavity { Up, Down };

struct CurveSpec {
  CurveKind kind = CurveKind::Straight;
  double alpha = 0.0;       // Parabola: y = alpha * x^2, x normalized to [-1, 1]
  double bend_angle = 0.0;  // Circle: angle subtended between outer char centers
  Concavity concavity = Concavity::Up;

  static CurveSpec straight() { return {}; }
  static CurveSpec parabola(double alpha) {
    return {CurveKind::Parabola, alpha, 0.0, alpha >= 0.0 ? Concavity::Down : Concavity::Up};
  }
  static CurveSpec circle(double bend, Concavity c) { return {CurveKind::Circle, 0.0, bend, c}; }

  bool operator==(const CurveSpec&) const = default;
};

const char* to_string(CurveKind kind);
CurveKind curve_kind_from_string(const std::string& s);

/// One dataset entry. Coordinates are source-image pixels, x right, y down.
struct SampleRecord {
  std::string id;
  std::string image_path;  // relative to the manifest directory
  std::string text;
  std::optional<ControlPolygon> polygon;
  std::optional<std::vector<Quad>> char_boxes;
  std::optional<CurveSpec> curve;
  bool is_curved = false;

  bool operator==(const SampleRecord&) const = default;
};

}  // namespace textforge
