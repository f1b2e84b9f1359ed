#pragma once

#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

namespace dwx {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Uniform mesh, endpoints included. Inner product is h * sum(f*g).
struct Grid {
  double x_min = 0.0;
  double x_max = 1.0;
  std::size_t n = 0;
  double h = 0.0;

  double x(std::size_t i) const;
  Vec points() const;
  double inner(const Vec& f, const Vec& g) const { return h * f.dot(g); }
  double norm(const Vec& f) const;
  std::size_t nearest_index(double pos) const;
  bool same_as(const Grid& other) const;
};

Grid build_grid(double x_min, double x_max, std::int64_t n);

// Throws grid-mismatch unless both grids describe the same mesh.
void require_same_grid(const Grid& a, const Grid& b);

}  // namespace dwx
