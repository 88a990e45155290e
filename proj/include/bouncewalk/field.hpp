// Copyright 2026 The bouncewalk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Scalar and vector fields on regular 1-3 dimensional grids with
// second-order finite-difference calculus and a plain text exchange format.
//
// Layout is row-major with the last active axis fastest. Vectors always
// carry three components so cross products work on 2-D grids.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bouncewalk/errors.hpp"
#include "bouncewalk/format.hpp"

namespace bouncewalk {

struct Vec3 {
  std::array<double, 3> c{0.0, 0.0, 0.0};

  double& operator[](std::size_t i) { return c[i]; }
  double operator[](std::size_t i) const { return c[i]; }
  bool operator==(const Vec3&) const = default;
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

struct Grid {
  int dims = 2;
  std::array<int, 3> shape{1, 1, 1};        // unused axes are 1
  std::array<double, 3> spacing{1.0, 1.0, 1.0};
  std::array<double, 3> origin{0.0, 0.0, 0.0};

  /// Cube-like grid with `points` per active axis centred on the origin.
  static Grid centered(int dims, int points, double h) {
    require(dims >= 1 && dims <= 3, ErrorKind::InvalidArgument, "grid dims must be 1, 2 or 3");
    Grid g;
    g.dims = dims;
    for (int a = 0; a < dims; ++a) {
      g.shape[a] = points;
      g.spacing[a] = h;
      g.origin[a] = -0.5 * h * (points - 1);
    }
    return g;
  }

  void validate() const {
    require(dims >= 1 && dims <= 3, ErrorKind::InvalidArgument, "grid dims must be 1, 2 or 3");
    for (int a = 0; a < 3; ++a) {
      if (a < dims) {
        require(shape[a] >= 1, ErrorKind::InvalidArgument, "grid shape must be positive");
        require(std::isfinite(spacing[a]) && spacing[a] > 0.0, ErrorKind::InvalidArgument,
                "grid spacing must be > 0");
        require(std::isfinite(origin[a]), ErrorKind::InvalidArgument, "grid origin must be finite");
      } else {
        require(shape[a] == 1, ErrorKind::InvalidArgument, "inactive grid axes must have shape 1");
      }
    }
  }

  std::size_t size() const {
    return static_cast<std::size_t>(shape[0]) * shape[1] * shape[2];
  }
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * shape[1] + j) * shape[2] + k;
  }
  std::array<int, 3> unravel(std::size_t idx) const {
    const int k = static_cast<int>(idx % shape[2]);
    idx /= shape[2];
    const int j = static_cast<int>(idx % shape[1]);
    return {static_cast<int>(idx / shape[1]), j, k};
  }
  Vec3 position(std::size_t idx) const {
    const auto ijk = unravel(idx);
    Vec3 p{0.0, 0.0, 0.0};
    for (int a = 0; a < dims; ++a) p[a] = origin[a] + spacing[a] * ijk[a];
    return p;
  }
  double cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dims; ++a) v *= spacing[a];
    return v;
  }
  /// True when the point is at least `margin` cells away from every face.
  bool interior(std::size_t idx, int margin) const {
    const auto ijk = unravel(idx);
    for (int a = 0; a < dims; ++a) {
      if (ijk[a] < margin || ijk[a] >= shape[a] - margin) return false;
    }
    return true;
  }

  bool operator==(const Grid&) const = default;
};

struct ScalarField {
  Grid grid;
  std::vector<double> values;

  explicit ScalarField(Grid g = {}, double fill = 0.0) : grid(g), values(g.size(), fill) {}

  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
};

struct VectorField {
  Grid grid;
  std::vector<Vec3> values;

  explicit VectorField(Grid g = {}) : grid(g), values(g.size(), Vec3{0.0, 0.0, 0.0}) {}

  Vec3& operator[](std::size_t i) { return values[i]; }
  const Vec3& operator[](std::size_t i) const { return values[i]; }
};

inline ScalarField sample_scalar(const Grid& g, const std::function<double(const Vec3&)>& f) {
  g.validate();
  ScalarField out(g);
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = f(g.position(i));
  return out;
}

inline VectorField sample_vector(const Grid& g, const std::function<Vec3(const Vec3&)>& f) {
  g.validate();
  VectorField out(g);
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = f(g.position(i));
  return out;
}

inline void require_same_grid(const Grid& a, const Grid& b) {
  require(a == b, ErrorKind::DimensionMismatch, "fields live on different grids");
}

namespace detail {

inline void require_stencil(const Grid& g) {
  g.validate();
  for (int a = 0; a < g.dims; ++a) {
    require(g.shape[a] >= 5, ErrorKind::GridTooSmall,
            "finite differences need at least 5 points per axis");
  }
}

// d/d(axis) of component `comp` of a strided sample array; central in the
// interior, second-order one-sided at the two faces.
template <typename Get>
double derivative(const Grid& g, std::size_t idx, int axis, Get&& get) {
  const auto ijk = g.unravel(idx);
  const int i = ijk[axis];
  const int n = g.shape[axis];
  std::size_t stride = 1;
  for (int a = 2; a > axis; --a) stride *= static_cast<std::size_t>(g.shape[a]);
  const double h = g.spacing[axis];
  if (i == 0) {
    return (-3.0 * get(idx) + 4.0 * get(idx + stride) - get(idx + 2 * stride)) / (2.0 * h);
  }
  if (i == n - 1) {
    return (3.0 * get(idx) - 4.0 * get(idx - stride) + get(idx - 2 * stride)) / (2.0 * h);
  }
  return (get(idx + stride) - get(idx - stride)) / (2.0 * h);
}

}  // namespace detail

inline VectorField gradient(const ScalarField& f) {
  detail::require_stencil(f.grid);
  VectorField out(f.grid);
  const auto get = [&](std::size_t i) { return f.values[i]; };
  for (std::size_t i = 0; i < f.grid.size(); ++i) {
    for (int a = 0; a < f.grid.dims; ++a) out[i][a] = detail::derivative(f.grid, i, a, get);
  }
  return out;
}

inline ScalarField divergence(const VectorField& F) {
  detail::require_stencil(F.grid);
  ScalarField out(F.grid);
  for (int a = 0; a < F.grid.dims; ++a) {
    const auto get = [&](std::size_t i) { return F.values[i][a]; };
    for (std::size_t i = 0; i < F.grid.size(); ++i) out[i] += detail::derivative(F.grid, i, a, get);
  }
  return out;
}

/// Full curl on 3-D grids; on 2-D grids only the z component is non-zero;
/// identically zero on 1-D grids.
inline VectorField curl(const VectorField& F) {
  detail::require_stencil(F.grid);
  VectorField out(F.grid);
  const Grid& g = F.grid;
  const auto d = [&](std::size_t i, int axis, int comp) {
    if (axis >= g.dims) return 0.0;
    return detail::derivative(g, i, axis, [&](std::size_t k) { return F.values[k][comp]; });
  };
  for (std::size_t i = 0; i < g.size(); ++i) {
    out[i] = {d(i, 1, 2) - d(i, 2, 1), d(i, 2, 0) - d(i, 0, 2), d(i, 0, 1) - d(i, 1, 0)};
  }
  return out;
}

inline double max_abs_interior(const ScalarField& f, int margin = 1) {
  double m = 0.0;
  for (std::size_t i = 0; i < f.grid.size(); ++i) {
    if (f.grid.interior(i, margin)) m = std::max(m, std::abs(f.values[i]));
  }
  return m;
}

inline double max_norm_interior(const VectorField& F, int margin = 1) {
  double m = 0.0;
  for (std::size_t i = 0; i < F.grid.size(); ++i) {
    if (F.grid.interior(i, margin)) m = std::max(m, norm(F.values[i]));
  }
  return m;
}

// ---------------------------------------------------------------------------
// Text format: one header line "dims n_1..n_d h_1..h_d o_1..o_d", then one
// sample per line in row-major order (a scalar, or three vector components).

inline void write_header(std::ostream& os, const Grid& g) {
  os << g.dims;
  for (int a = 0; a < g.dims; ++a) os << ' ' << g.shape[a];
  for (int a = 0; a < g.dims; ++a) os << ' ' << format_double(g.spacing[a]);
  for (int a = 0; a < g.dims; ++a) os << ' ' << format_double(g.origin[a]);
  os << '\n';
}

inline void write_field(std::ostream& os, const ScalarField& f) {
  write_header(os, f.grid);
  for (double v : f.values) os << format_double(v) << '\n';
}

inline void write_field(std::ostream& os, const VectorField& F) {
  write_header(os, F.grid);
  for (const auto& v : F.values) {
    os << format_double(v[0]) << ' ' << format_double(v[1]) << ' ' << format_double(v[2]) << '\n';
  }
}

namespace detail {

inline std::vector<double> parse_numbers(const std::string& line, int line_no) {
  std::istringstream ss(line);
  std::vector<double> out;
  std::string tok;
  while (ss >> tok) {
    double v = 0.0;
    require(parse_double(tok, v), ErrorKind::Io,
            "line " + std::to_string(line_no) + ": bad number '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

inline Grid read_header(std::istream& is) {
  std::string line;
  require(static_cast<bool>(std::getline(is, line)), ErrorKind::Io, "missing field header");
  const auto nums = parse_numbers(line, 1);
  require(!nums.empty(), ErrorKind::Io, "empty field header");
  Grid g;
  g.dims = static_cast<int>(nums[0]);
  require(g.dims >= 1 && g.dims <= 3 && nums[0] == g.dims, ErrorKind::Io, "bad dims in header");
  require(nums.size() == static_cast<std::size_t>(1 + 3 * g.dims), ErrorKind::Io,
          "header must hold dims, shape, spacing and origin");
  for (int a = 0; a < g.dims; ++a) {
    g.shape[a] = static_cast<int>(nums[1 + a]);
    require(g.shape[a] == nums[1 + a], ErrorKind::Io, "grid shape must be integral");
    g.spacing[a] = nums[1 + g.dims + a];
    g.origin[a] = nums[1 + 2 * g.dims + a];
  }
  g.validate();
  return g;
}

template <typename Fn>
void read_rows(std::istream& is, std::size_t rows, std::size_t width, Fn&& store) {
  std::string line;
  int line_no = 1;
  for (std::size_t r = 0; r < rows; ++r) {
    ++line_no;
    require(static_cast<bool>(std::getline(is, line)), ErrorKind::Io,
            "field ends after " + std::to_string(r) + " of " + std::to_string(rows) + " samples");
    const auto nums = parse_numbers(line, line_no);
    require(nums.size() == width, ErrorKind::Io,
            "line " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                " values");
    store(r, nums);
  }
}

}  // namespace detail

inline ScalarField read_scalar_field(std::istream& is) {
  ScalarField f(detail::read_header(is));
  detail::read_rows(is, f.grid.size(), 1,
                    [&](std::size_t r, const std::vector<double>& v) { f.values[r] = v[0]; });
  return f;
}

inline VectorField read_vector_field(std::istream& is) {
  VectorField F(detail::read_header(is));
  detail::read_rows(is, F.grid.size(), 3, [&](std::size_t r, const std::vector<double>& v) {
    F.values[r] = {v[0], v[1], v[2]};
  });
  return F;
}

/// CSV of a 2-D scalar field: "x,y,value".
inline void write_slice_csv(std::ostream& os, const ScalarField& f) {
  require(f.grid.dims == 2, ErrorKind::DimensionMismatch, "slice export needs a 2-D field");
  os << "x,y,value\n";
  for (std::size_t i = 0; i < f.grid.size(); ++i) {
    const Vec3 p = f.grid.position(i);
    os << format_double(p[0]) << ',' << format_double(p[1]) << ',' << format_double(f[i]) << '\n';
  }
}

/// CSV of a 2-D vector field: "x,y,value_x,value_y,value_z".
inline void write_slice_csv(std::ostream& os, const VectorField& F) {
  require(F.grid.dims == 2, ErrorKind::DimensionMismatch, "slice export needs a 2-D field");
  os << "x,y,value_x,value_y,value_z\n";
  for (std::size_t i = 0; i < F.grid.size(); ++i) {
    const Vec3 p = F.grid.position(i);
    os << format_double(p[0]) << ',' << format_double(p[1]) << ',' << format_double(F[i][0]) << ','
       << format_double(F[i][1]) << ',' << format_double(F[i][2]) << '\n';
  }
}

}  // namespace bouncewalk
