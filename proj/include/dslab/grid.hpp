#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace dslab {

using Vec2 = std::array<double, 2>;

inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(const Vec2& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1]); }
inline Vec2 scale(double t, const Vec2& a) { return {t * a[0], t * a[1]}; }
inline Vec2 add(const Vec2& a, const Vec2& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec2 sub(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }

/// Box domain [origin, origin+extent] split into n cells per axis.
///
/// Quadrature points are the cell centers and the solver's lattice nodes
/// coincide with them, so a GridFunction and a JetField share indexing.
/// Points are ordered row-major with x fastest: index = i + n[0]*j.
/// In 1D the second axis is inert (n[1] = 1, extent[1] = 1).
struct Grid {
  int dim = 1;
  Vec2 origin{0.0, 0.0};
  Vec2 extent{1.0, 1.0};
  std::array<int, 2> n{1, 1};
  Vec2 h{1.0, 1.0};
  std::vector<Vec2> quad_points;
  std::vector<double> quad_weights;

  std::size_t size() const { return quad_points.size(); }
  std::size_t index(int i, int j = 0) const {
    return static_cast<std::size_t>(i) + static_cast<std::size_t>(n[0]) * static_cast<std::size_t>(j);
  }
  double volume() const { return dim == 1 ? extent[0] : extent[0] * extent[1]; }
};

Grid build_grid(int dim, int n, double extent);
Grid build_grid(int dim, std::array<int, 2> n, Vec2 extent, Vec2 origin = {0.0, 0.0});

/// Per-point (value, gradient) samples. Unused gradient components are zero.
struct JetField {
  int dim = 1;
  std::vector<double> values;
  std::vector<Vec2> grads;

  std::size_t size() const { return values.size(); }
  /// Throws unless lengths match the grid and all entries are finite.
  void validate(const Grid& grid) const;
};

/// Nodal values on the grid lattice.
struct GridFunction {
  std::vector<double> values;
  bool admissible_state = false;  ///< when set, 0 <= U <= 1 is enforced by validate()

  std::size_t size() const { return values.size(); }
  void validate(const Grid& grid) const;
};

struct AnalyticFieldSpec {
  std::string name;
  std::map<std::string, double> params;
};

struct Jet {
  double value = 0.0;
  Vec2 grad{0.0, 0.0};
};

/// Catalog entries: constant, affine, exp-linear, quadratic-bump, abs-kink,
/// ex51-pair, ex52-pair, noisy-image. Throws std::invalid_argument on an
/// unknown name or a missing required parameter.
Jet eval_field(const AnalyticFieldSpec& spec, const Vec2& x);
JetField sample_jet(const AnalyticFieldSpec& spec, const Grid& grid);
GridFunction sample_nodal(const AnalyticFieldSpec& spec, const Grid& grid);
const std::vector<std::string>& field_catalog();

/// Centered differences with a reflected ghost (u_{-1} = u_0, u_n = u_{n-1}),
/// i.e. homogeneous Neumann. Exact on affine data away from the boundary;
/// the boundary cell of u = x sees half the true slope.
JetField discrete_gradient(const GridFunction& u, const Grid& grid);

/// Neighbour indices used by the stencil along one axis (ghosts map to self).
struct StencilNeighbours {
  std::size_t east, west, north, south;
};
StencilNeighbours neighbours(const Grid& grid, std::size_t k);

/// Σ weight_i * value_i, summed in ascending point index.
double integrate(std::span<const double> values, const Grid& grid);

}  // namespace dslab
