#include "synth.hpp"

#include <algorithm>
#include <cmath>

#include "rng.hpp"

namespace qfal {

namespace {

struct Point {
  double x, y;
};

double dist_to_segment(double px, double py, Point a, Point b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0.0) {
    t = ((px - a.x) * dx + (py - a.y) * dy) / len2;
    t = std::clamp(t, 0.0, 1.0);
  }
  const double ex = a.x + t * dx - px;
  const double ey = a.y + t * dy - py;
  return std::sqrt(ex * ex + ey * ey);
}

// Accumulates the brightest stroke response per pixel.
class Canvas {
 public:
  void stroke(Point a, Point b, double width) {
    segments_.push_back({a, b, width});
  }

  void polyline(const std::vector<Point>& pts, double width) {
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      stroke(pts[i], pts[i + 1], width);
    }
  }

  double intensity(double px, double py) const {
    double best = 0.0;
    for (const auto& s : segments_) {
      const double d = dist_to_segment(px, py, s.a, s.b);
      const double v = std::exp(-(d * d) / (2.0 * s.width * s.width));
      best = std::max(best, v);
    }
    return best;
  }

 private:
  struct Segment {
    Point a, b;
    double width;
  };
  std::vector<Segment> segments_;
};

std::vector<Point> arc_points(Point center, double rx, double ry,
                              double deg_from, double deg_to, int steps) {
  std::vector<Point> pts;
  pts.reserve(steps + 1);
  const double rad = 3.14159265358979323846 / 180.0;
  for (int i = 0; i <= steps; ++i) {
    const double a = rad * (deg_from + (deg_to - deg_from) * i / steps);
    pts.push_back({center.x + rx * std::cos(a), center.y + ry * std::sin(a)});
  }
  return pts;
}

void draw_zero(Canvas& canvas, Rng& rng, double cx, double cy, double s,
               double w) {
  const double rx = s * rng.uniform(4.6, 5.8);
  const double ry = s * rng.uniform(6.6, 8.0);
  canvas.polyline(arc_points({cx, cy}, rx, ry, 0, 360, 40), w);
}

void draw_one(Canvas& canvas, Rng& rng, double cx, double cy, double s,
              double w) {
  const double slant = rng.uniform(-1.2, 1.2);
  const Point top{cx + slant, cy - 8.0 * s};
  const Point bottom{cx - slant, cy + 8.0 * s};
  canvas.stroke(top, bottom, w);
  // small flag at the top
  canvas.stroke({top.x - rng.uniform(2.5, 4.0), top.y + rng.uniform(2.0, 3.5)},
                top, w);
  if (rng.uniform() < 0.5) {
    // base serif
    canvas.stroke({bottom.x - 2.5 * s, bottom.y}, {bottom.x + 2.5 * s, bottom.y},
                  w);
  }
}

void draw_two(Canvas& canvas, Rng& rng, double cx, double cy, double s,
              double w) {
  const double r = s * rng.uniform(3.8, 4.8);
  const Point head{cx, cy - 8.0 * s + r};
  auto arc = arc_points(head, r, r, 180, 380, 16);
  canvas.polyline(arc, w);
  const Point corner{cx - 4.2 * s, cy + 8.0 * s};
  canvas.stroke(arc.back(), corner, w);
  canvas.stroke(corner, {cx + 4.4 * s, cy + 8.0 * s}, w);
}

RawImage render_digit(int label, std::uint64_t seed) {
  Rng rng(seed);
  const double cx = 13.5 + rng.uniform(-2.5, 2.5);
  const double cy = 13.5 + rng.uniform(-2.5, 2.5);
  const double scale = rng.uniform(0.75, 1.2);
  const double width = rng.uniform(0.9, 1.9);
  const double brightness = rng.uniform(0.6, 1.0);
  const double noise_sigma = rng.uniform(5.0, 16.0);

  Canvas canvas;
  switch (label) {
    case 0: draw_zero(canvas, rng, cx, cy, scale, width); break;
    case 1: draw_one(canvas, rng, cx, cy, scale, width); break;
    default: draw_two(canvas, rng, cx, cy, scale, width); break;
  }

  RawImage img;
  img.label = static_cast<std::uint8_t>(label);
  for (int r = 0; r < kRawSide; ++r) {
    for (int c = 0; c < kRawSide; ++c) {
      double v = 255.0 * brightness * canvas.intensity(c, r);
      v += rng.normal(0.0, noise_sigma);
      img.pixels[r * kRawSide + c] =
          static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
    }
  }
  return img;
}

}  // namespace

std::vector<RawImage> synth_raw_images(int count, std::uint64_t seed) {
  std::vector<RawImage> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    out.push_back(render_digit(i % kNumClasses, hash_stream(seed, i)));
  }
  return out;
}

void write_synth_idx(const std::string& images_path,
                     const std::string& labels_path, int count,
                     std::uint64_t seed) {
  const auto raws = synth_raw_images(count, seed);
  IdxImages images;
  images.rows = kRawSide;
  images.cols = kRawSide;
  images.grids.reserve(raws.size());
  std::vector<std::uint8_t> labels;
  labels.reserve(raws.size());
  for (const auto& raw : raws) {
    images.grids.emplace_back(raw.pixels.begin(), raw.pixels.end());
    labels.push_back(raw.label);
  }
  const auto image_bytes = encode_idx_images(images);
  const auto label_bytes = encode_idx_labels(labels);
  write_file(images_path, image_bytes);
  write_file(labels_path, label_bytes);
}

}  // namespace qfal
