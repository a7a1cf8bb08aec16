#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "lrbound/errors.hpp"
#include "lrbound/format.hpp"
#include "lrbound/model.hpp"
#include "lrbound/parallel.hpp"
#include "lrbound/speed.hpp"

namespace lrbound {

// A 2-D slice of coupling space.  Each axis drives one or more interaction
// labels (labels sharing a physical constant are listed together and move
// in lockstep, e.g. the two exchange terms of the XY model).
struct SweepSpec {
  ModelSpec base;
  std::vector<std::string> x_labels, y_labels;
  double x_min = 0.0, x_max = 0.0;
  int x_steps = 0;
  double y_min = 0.0, y_max = 0.0;
  int y_steps = 0;
  bool log_spaced = false;
};

struct RegionPoint {
  double x = 0.0, y = 0.0;
  double v_lr = 0.0;
  std::string region_id;
};

struct RegionGrid {
  std::vector<double> xs, ys;
  std::vector<RegionPoint> points;  // row-major, y rows emitted outer

  const RegionPoint& at(int ix, int iy) const {
    return points[static_cast<std::size_t>(iy) * xs.size() + ix];
  }
};

struct BoundarySegment {
  double x1 = 0.0, y1 = 0.0, x2 = 0.0, y2 = 0.0;
  std::string region_a, region_b;
};

// Canonical region label: functional form plus the sorted active cycle
// sequences, e.g. "breakpoint:X-Z+X-Y" -> "breakpoint:X-Y+X-Z".
inline std::string region_id(const ModelSpec& spec, const SpeedResult& res) {
  std::vector<std::string> seqs;
  for (const auto& c : res.active_cycles)
    seqs.push_back(sequence_string(spec, c.type_sequence));
  std::sort(seqs.begin(), seqs.end());
  return std::string(to_string(res.form)) + ":" + join(seqs, "+");
}

namespace detail {

inline std::vector<double> axis_values(double lo, double hi, int steps, bool log_spaced) {
  std::vector<double> v(steps);
  for (int i = 0; i < steps; ++i) {
    double f = steps == 1 ? 0.0 : static_cast<double>(i) / (steps - 1);
    v[i] = log_spaced ? std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo)))
                      : lo + f * (hi - lo);
  }
  return v;
}

}  // namespace detail

// Classifies every grid node by the functional form and active cycles of
// its Lieb-Robinson speed.  Grid points solve independently; assembly is by
// index, so output is deterministic under any worker count.
inline RegionGrid sweep(const SweepSpec& sw) {
  if (sw.x_steps < 2 || sw.y_steps < 2)
    fail(Errc::invalid_field, "sweep needs at least 2 steps per axis");
  if (!(sw.x_min > 0.0) || !(sw.y_min > 0.0) || !(sw.x_max > sw.x_min) ||
      !(sw.y_max > sw.y_min))
    fail(Errc::invalid_field, "sweep ranges must be positive and increasing");
  if (sw.x_labels.empty() || sw.y_labels.empty())
    fail(Errc::invalid_field, "sweep axes need at least one label each");
  for (const auto& l : sw.x_labels)
    if (sw.base.find_label(l) < 0)
      fail(Errc::invalid_field, "unknown x label '" + l + "'");
  for (const auto& l : sw.y_labels)
    if (sw.base.find_label(l) < 0)
      fail(Errc::invalid_field, "unknown y label '" + l + "'");

  RegionGrid grid;
  grid.xs = detail::axis_values(sw.x_min, sw.x_max, sw.x_steps, sw.log_spaced);
  grid.ys = detail::axis_values(sw.y_min, sw.y_max, sw.y_steps, sw.log_spaced);
  grid.points.resize(static_cast<std::size_t>(sw.x_steps) * sw.y_steps);

  std::vector<std::string> errors(grid.points.size());
  parallel_for(grid.points.size(), [&](std::size_t idx) {
    int iy = static_cast<int>(idx) / sw.x_steps;
    int ix = static_cast<int>(idx) % sw.x_steps;
    double x = grid.xs[ix], y = grid.ys[iy];
    try {
      ModelSpec point = sw.base;
      for (const auto& l : sw.x_labels)
        point.interactions[point.find_label(l)].coupling = x;
      for (const auto& l : sw.y_labels)
        point.interactions[point.find_label(l)].coupling = y;
      ModelSpec solved = validate(point);
      SpeedResult res = solve_speed(solved);
      grid.points[idx] = {x, y, res.v_lr, region_id(solved, res)};
    } catch (const LrError& e) {
      errors[idx] = std::string(e.what()) + " at grid point (x=" + fmt_g12(x) +
                    ", y=" + fmt_g12(y) + ")";
    }
  });
  for (const auto& e : errors)
    if (!e.empty()) fail(Errc::invalid_field, e);
  return grid;
}

// Adjacent grid cells with different region ids produce one segment across
// the shared cell edge, positioned at the midpoint of the two nodes.
inline std::vector<BoundarySegment> find_boundaries(const RegionGrid& grid) {
  std::vector<BoundarySegment> segments;
  const int nx = static_cast<int>(grid.xs.size());
  const int ny = static_cast<int>(grid.ys.size());
  auto half = [](const std::vector<double>& v, int i) {
    if (v.size() < 2) return 0.5;
    if (i == 0) return (v[1] - v[0]) / 2.0;
    if (i == static_cast<int>(v.size()) - 1) return (v[i] - v[i - 1]) / 2.0;
    return std::min(v[i] - v[i - 1], v[i + 1] - v[i]) / 2.0;
  };
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const RegionPoint& p = grid.at(ix, iy);
      if (ix + 1 < nx) {
        const RegionPoint& q = grid.at(ix + 1, iy);
        if (p.region_id != q.region_id) {
          double xm = (grid.xs[ix] + grid.xs[ix + 1]) / 2.0;
          double h = half(grid.ys, iy);
          segments.push_back({xm, grid.ys[iy] - h, xm, grid.ys[iy] + h,
                              p.region_id, q.region_id});
        }
      }
      if (iy + 1 < ny) {
        const RegionPoint& q = grid.at(ix, iy + 1);
        if (p.region_id != q.region_id) {
          double ym = (grid.ys[iy] + grid.ys[iy + 1]) / 2.0;
          double h = half(grid.xs, ix);
          segments.push_back({grid.xs[ix] - h, ym, grid.xs[ix] + h, ym,
                              p.region_id, q.region_id});
        }
      }
    }
  }
  return segments;
}

}  // namespace lrbound
