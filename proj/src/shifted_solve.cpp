#include <cmath>
#include <sstream>

#include "dwx/eigensolve.hpp"
#include "dwx/error.hpp"

namespace dwx {

ShiftedSolveResult shifted_solve(const LinearOperator& op, double E, const Vec& rhs, const std::vector<Vec>& deflate,
                                 const ShiftedSolveOptions& opt) {
  const auto n = static_cast<Eigen::Index>(op.dimension());
  if (rhs.size() != n) throw Error(Errc::invalid_argument, "rhs has wrong dimension");
  for (const auto& d : deflate)
    if (d.size() != n) throw Error(Errc::invalid_argument, "deflation vector has wrong dimension");

  auto project = [&](Vec v) {
    v = op.project(v);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& d : deflate) v -= d.dot(v) * d;
    return v;
  };
  auto shifted = [&](const Vec& v) { return project(op.apply(v) - E * v); };

  ShiftedSolveResult out;
  out.x = Vec::Zero(n);
  Vec b = project(rhs);
  const double bnorm = b.norm();
  if (bnorm == 0.0) return out;

  const std::size_t max_iter =
      opt.max_iter ? opt.max_iter : std::max<std::size_t>(1000, 20 * static_cast<std::size_t>(n));
  Vec r = b, p = b;
  double rr = r.dot(r);
  std::size_t it = 0;
  for (; it < max_iter; ++it) {
    if (std::sqrt(rr) <= opt.tol * bnorm) {
      // confirm with the true residual, restart from it if the recursion drifted
      r = b - shifted(out.x);
      rr = r.dot(r);
      if (std::sqrt(rr) <= opt.tol * bnorm) break;
      p = r;
    }
    Vec q = shifted(p);
    const double curv = p.dot(q);
    if (std::abs(curv) <= 1e-12 * p.squaredNorm())
      throw Error(Errc::near_singular_shift, "shift is numerically on a non-deflated eigenvalue");
    const double alpha = rr / curv;
    out.x += alpha * p;
    r -= alpha * q;
    r = project(r);
    const double rr_new = r.dot(r);
    p = project(r + (rr_new / rr) * p);
    rr = rr_new;
  }
  out.x = project(out.x);
  out.iterations = it;
  out.residual = (b - shifted(out.x)).norm() / bnorm;
  if (out.residual > opt.tol) {
    std::ostringstream os;
    os << "shifted solve stopped after " << it << " iterations at relative residual " << out.residual;
    throw Error(Errc::no_convergence, os.str());
  }
  return out;
}

}  // namespace dwx
