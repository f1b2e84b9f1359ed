#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "dwx/grid.hpp"

namespace dwx {

struct Tridiagonal {
  Vec diag;
  Vec off;  // size dim-1
};

// Symmetric operator on coefficient vectors (Euclidean inner product).
// An optional projector is applied after every application.
class LinearOperator {
 public:
  using Map = std::function<void(const Vec& in, Vec& out)>;

  LinearOperator(std::size_t dim, Map apply);

  LinearOperator& with_projector(Map projector);
  LinearOperator& with_tridiagonal(Tridiagonal t);

  std::size_t dimension() const { return dim_; }
  Vec apply(const Vec& v) const;
  void apply_into(const Vec& v, Vec& out) const;
  Vec apply_raw(const Vec& v) const;

  bool has_projector() const { return static_cast<bool>(projector_); }
  Vec project(const Vec& v) const;

  const std::optional<Tridiagonal>& tridiagonal() const { return tri_; }

  // Column-by-column materialisation of P A P (or A without projector).
  Mat to_dense() const;

 private:
  std::size_t dim_;
  Map apply_;
  Map projector_;
  std::optional<Tridiagonal> tri_;
};

LinearOperator tridiagonal_operator(Tridiagonal t);
LinearOperator dense_operator(Mat m);

// Worst relative |<u,Av> - <Au,v>| over random pairs.
double symmetry_defect(const LinearOperator& op, int trials, std::uint64_t seed);
// Worst of ||PPv - Pv|| and ||PAv - APv|| relative to ||v||, ||Av||.
double projector_defect(const LinearOperator& op, int trials, std::uint64_t seed);

Vec random_vector(std::size_t n, std::uint64_t seed);

}  // namespace dwx
