#include "dwx/linear_operator.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dwx/error.hpp"

namespace dwx {

LinearOperator::LinearOperator(std::size_t dim, Map apply) : dim_(dim), apply_(std::move(apply)) {
  if (dim == 0) throw Error(Errc::invalid_argument, "operator dimension must be positive");
}

LinearOperator& LinearOperator::with_projector(Map projector) {
  projector_ = std::move(projector);
  return *this;
}

LinearOperator& LinearOperator::with_tridiagonal(Tridiagonal t) {
  tri_ = std::move(t);
  return *this;
}

Vec LinearOperator::apply_raw(const Vec& v) const {
  Vec out(static_cast<Eigen::Index>(dim_));
  apply_(v, out);
  return out;
}

void LinearOperator::apply_into(const Vec& v, Vec& out) const {
  out.resize(static_cast<Eigen::Index>(dim_));
  apply_(v, out);
  if (projector_) {
    Vec tmp = out;
    projector_(tmp, out);
  }
}

Vec LinearOperator::apply(const Vec& v) const {
  Vec out;
  apply_into(v, out);
  return out;
}

Vec LinearOperator::project(const Vec& v) const {
  if (!projector_) return v;
  Vec out(static_cast<Eigen::Index>(dim_));
  projector_(v, out);
  return out;
}

Mat LinearOperator::to_dense() const {
  const auto n = static_cast<Eigen::Index>(dim_);
  Mat m(n, n);
  Vec e = Vec::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    e.setZero();
    e[j] = 1.0;
    m.col(j) = apply(project(e));
  }
  return 0.5 * (m + m.transpose());
}

LinearOperator tridiagonal_operator(Tridiagonal t) {
  const auto n = static_cast<std::size_t>(t.diag.size());
  if (t.off.size() + 1 != t.diag.size()) throw Error(Errc::invalid_argument, "off-diagonal must have dim-1 entries");
  Vec d = t.diag, o = t.off;
  LinearOperator op(n, [d, o](const Vec& in, Vec& out) {
    const Eigen::Index m = d.size();
    out = d.cwiseProduct(in);
    if (m > 1) {
      out.head(m - 1) += o.cwiseProduct(in.tail(m - 1));
      out.tail(m - 1) += o.cwiseProduct(in.head(m - 1));
    }
  });
  op.with_tridiagonal(std::move(t));
  return op;
}

LinearOperator dense_operator(Mat m) {
  if (m.rows() != m.cols()) throw Error(Errc::invalid_argument, "dense operator must be square");
  const auto n = static_cast<std::size_t>(m.rows());
  return LinearOperator(n, [m = std::move(m)](const Vec& in, Vec& out) { out.noalias() = m * in; });
}

Vec random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vec v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = dist(rng);
  return v;
}

double symmetry_defect(const LinearOperator& op, int trials, std::uint64_t seed) {
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    Vec u = op.project(random_vector(op.dimension(), seed + 2 * static_cast<std::uint64_t>(t)));
    Vec v = op.project(random_vector(op.dimension(), seed + 2 * static_cast<std::uint64_t>(t) + 1));
    Vec au = op.apply(u), av = op.apply(v);
    double scale = std::max({std::abs(u.dot(av)), u.norm() * av.norm(), 1e-300});
    worst = std::max(worst, std::abs(u.dot(av) - au.dot(v)) / scale);
  }
  return worst;
}

double projector_defect(const LinearOperator& op, int trials, std::uint64_t seed) {
  if (!op.has_projector()) return 0.0;
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    Vec v = random_vector(op.dimension(), seed + static_cast<std::uint64_t>(t));
    Vec pv = op.project(v);
    worst = std::max(worst, (op.project(pv) - pv).norm() / v.norm());
    Vec pav = op.project(op.apply_raw(v));
    Vec apv = op.apply_raw(pv);
    worst = std::max(worst, (pav - apv).norm() / std::max(op.apply_raw(v).norm(), 1e-300));
  }
  return worst;
}

}  // namespace dwx
