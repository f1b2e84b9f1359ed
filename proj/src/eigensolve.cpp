#include "dwx/eigensolve.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dwx/error.hpp"

namespace dwx {

namespace {

void check_k(const LinearOperator& op, std::size_t k) {
  if (k < 1 || k > op.dimension()) {
    std::ostringstream os;
    os << "requested k = " << k << " eigenpairs of a dimension-" << op.dimension() << " operator";
    throw Error(Errc::invalid_argument, os.str());
  }
}

void fill_residuals(const LinearOperator& op, std::vector<EigenPair>& pairs) {
  for (auto& p : pairs) p.residual = (op.apply(p.vector) - p.energy * p.vector).norm();
}

std::vector<EigenPair> tridiagonal_pairs(const Tridiagonal& t, std::size_t k) {
  const auto n = static_cast<lapack_int>(t.diag.size());
  std::vector<double> d(t.diag.data(), t.diag.data() + n);
  std::vector<double> e(static_cast<std::size_t>(n), 0.0);
  for (lapack_int i = 0; i + 1 < n; ++i) e[static_cast<std::size_t>(i)] = t.off[i];
  std::vector<double> w(static_cast<std::size_t>(n));
  std::vector<double> z(static_cast<std::size_t>(n) * k);
  std::vector<lapack_int> isuppz(2 * k);
  lapack_int m = 0;
  lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n, d.data(), e.data(), 0.0, 0.0, 1,
                                   static_cast<lapack_int>(k), 0.0, &m, w.data(), z.data(), n, isuppz.data());
  if (info != 0 || m != static_cast<lapack_int>(k))
    throw Error(Errc::no_convergence, "LAPACK dstevr failed with info " + std::to_string(info));
  std::vector<EigenPair> out(k);
  for (std::size_t j = 0; j < k; ++j) {
    out[j].energy = w[j];
    out[j].vector = Eigen::Map<const Vec>(z.data() + j * static_cast<std::size_t>(n), n);
    out[j].vector.normalize();
  }
  return out;
}

std::vector<EigenPair> symmetric_dense_pairs(Mat a, std::size_t k) {
  const auto n = static_cast<lapack_int>(a.rows());
  std::vector<double> w(static_cast<std::size_t>(n));
  std::vector<double> z(static_cast<std::size_t>(n) * k);
  std::vector<lapack_int> isuppz(2 * std::max<std::size_t>(k, 1));
  lapack_int m = 0;
  lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'U', n, a.data(), n, 0.0, 0.0, 1,
                                   static_cast<lapack_int>(k), 0.0, &m, w.data(), z.data(), n, isuppz.data());
  if (info != 0 || m != static_cast<lapack_int>(k))
    throw Error(Errc::no_convergence, "LAPACK dsyevr failed with info " + std::to_string(info));
  std::vector<EigenPair> out(k);
  for (std::size_t j = 0; j < k; ++j) {
    out[j].energy = w[j];
    out[j].vector = Eigen::Map<const Vec>(z.data() + j * static_cast<std::size_t>(n), n);
    out[j].vector.normalize();
  }
  return out;
}

// Orthogonalise v against the first j columns of V (two passes).
double orthogonalize(const Mat& V, Eigen::Index j, Vec& v) {
  for (int pass = 0; pass < 2; ++pass) {
    if (j == 0) break;
    Vec c = V.leftCols(j).transpose() * v;
    v.noalias() -= V.leftCols(j) * c;
  }
  return v.norm();
}

}  // namespace

void canonicalize(std::vector<EigenPair>& pairs) {
  auto first_significant = [](const Vec& v) -> Eigen::Index {
    for (Eigen::Index i = 0; i < v.size(); ++i)
      if (std::abs(v[i]) > 1e-6) return i;
    return 0;
  };
  for (auto& p : pairs) {
    Eigen::Index i = first_significant(p.vector);
    if (p.vector[i] < 0.0) p.vector = -p.vector;
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const EigenPair& a, const EigenPair& b) { return a.energy < b.energy; });
  // tie-break near-degenerate neighbours deterministically
  for (std::size_t i = 0; i + 1 < pairs.size(); ++i) {
    if (std::abs(pairs[i + 1].energy - pairs[i].energy) <= 1e-10 &&
        first_significant(pairs[i + 1].vector) < first_significant(pairs[i].vector))
      std::swap(pairs[i], pairs[i + 1]);
  }
}

std::vector<EigenPair> dense_eigenpairs(const LinearOperator& op, std::size_t k) {
  check_k(op, k);
  std::vector<EigenPair> out;
  if (op.tridiagonal() && !op.has_projector()) {
    out = tridiagonal_pairs(*op.tridiagonal(), k);
  } else {
    Mat a = op.to_dense();
    if (op.has_projector()) {
      // push the complement of the projector's range above the spectrum
      const auto n = a.rows();
      double bound = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) bound = std::max(bound, a.row(i).cwiseAbs().sum());
      const double sigma = bound + 1.0;
      Mat p(n, n);
      Vec e = Vec::Zero(n);
      for (Eigen::Index j = 0; j < n; ++j) {
        e.setZero();
        e[j] = 1.0;
        p.col(j) = op.project(e);
      }
      p = 0.5 * (p + p.transpose());
      a += sigma * (Mat::Identity(n, n) - p);
    }
    out = symmetric_dense_pairs(std::move(a), k);
  }
  fill_residuals(op, out);
  canonicalize(out);
  return out;
}

std::vector<EigenPair> lanczos_eigenpairs(const LinearOperator& op, std::size_t k, const SolverOptions& opt) {
  check_k(op, k);
  const auto n = static_cast<Eigen::Index>(op.dimension());
  auto m = static_cast<Eigen::Index>(opt.krylov_dim ? opt.krylov_dim : std::max<std::size_t>(2 * k + 40, 64));
  m = std::min(m, n);
  if (m <= static_cast<Eigen::Index>(k)) m = std::min<Eigen::Index>(n, static_cast<Eigen::Index>(k) + 1);
  const auto kk = static_cast<Eigen::Index>(k);

  Mat V(n, m), W(n, m);
  Eigen::Index j = 0;
  std::uint64_t reseed = opt.seed;

  // Append a new orthonormal basis vector built from v.
  auto push = [&](Vec v) {
    double before = v.norm();
    double after = orthogonalize(V, j, v);
    while (!(after > 1e-10 * std::max(before, 1e-300))) {
      v = op.project(random_vector(static_cast<std::size_t>(n), ++reseed));
      before = v.norm();
      after = orthogonalize(V, j, v);
    }
    V.col(j) = v / after;
    Vec w;
    op.apply_into(V.col(j), w);
    W.col(j) = w;
    ++j;
  };

  Vec start = opt.start ? *opt.start : random_vector(static_cast<std::size_t>(n), opt.seed);
  if (start.size() != n) throw Error(Errc::invalid_argument, "Lanczos start vector has wrong dimension");
  push(op.project(start));

  double worst = 0.0;
  for (int cycle = 0; cycle <= opt.max_restarts; ++cycle) {
    while (j < m) push(W.col(j - 1));

    Mat H = V.transpose() * W;
    H = 0.5 * (H + H.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(H);
    const Vec& theta = es.eigenvalues();
    const Mat& S = es.eigenvectors();

    const Eigen::Index keep = (m == n) ? kk : std::min<Eigen::Index>(m - 1, std::max<Eigen::Index>(kk + (m - kk) / 2, kk + 1));
    Mat Y = V * S.leftCols(keep);
    Mat AY = W * S.leftCols(keep);

    worst = 0.0;
    bool done = true;
    std::vector<double> res(static_cast<std::size_t>(keep));
    for (Eigen::Index i = 0; i < keep; ++i) {
      res[static_cast<std::size_t>(i)] = (AY.col(i) - theta[i] * Y.col(i)).norm();
      if (i < kk) {
        double lim = opt.tol * std::max(1.0, std::abs(theta[i]));
        worst = std::max(worst, res[static_cast<std::size_t>(i)] / std::max(1.0, std::abs(theta[i])));
        if (res[static_cast<std::size_t>(i)] > lim) done = false;
      }
    }
    if (done || m == n) {
      std::vector<EigenPair> out(k);
      for (std::size_t i = 0; i < k; ++i) {
        out[i].energy = theta[static_cast<Eigen::Index>(i)];
        out[i].vector = Y.col(static_cast<Eigen::Index>(i));
        double nv = out[i].vector.norm();
        out[i].vector /= nv;
        out[i].residual = res[i] / nv;
      }
      canonicalize(out);
      return out;
    }
    if (cycle == opt.max_restarts) break;

    // thick restart: keep the lowest Ritz vectors plus the next Krylov direction
    Vec next = W.col(m - 1);
    orthogonalize(V, m, next);
    V.leftCols(keep) = Y;
    W.leftCols(keep) = AY;
    j = keep;
    push(next);
  }
  std::ostringstream os;
  os << "Lanczos hit the restart cap (" << opt.max_restarts << ") with relative residual " << worst;
  throw Error(Errc::no_convergence, os.str());
}

std::vector<EigenPair> lowest_eigenpairs(const LinearOperator& op, std::size_t k, const SolverOptions& opt) {
  check_k(op, k);
  if ((op.tridiagonal() && !op.has_projector()) || op.dimension() <= opt.dense_limit) return dense_eigenpairs(op, k);
  return lanczos_eigenpairs(op, k, opt);
}

}  // namespace dwx
