#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dwx/linear_operator.hpp"

namespace dwx {

struct EigenPair {
  double energy = 0.0;
  Vec vector;  // unit Euclidean norm
  double residual = 0.0;
};

struct SolverOptions {
  double tol = 1e-8;            // residual <= tol * max(1, |E|)
  int max_restarts = 50;
  std::size_t krylov_dim = 0;   // 0: chosen from k
  std::size_t dense_limit = 4096;
  std::optional<Vec> start;     // Lanczos start vector
  std::uint64_t seed = 12345;
};

// k lowest eigenpairs, ascending. Tridiagonal operators without a projector
// always go through LAPACK MRRR; other operators use the dense path up to
// dense_limit and thick-restart Lanczos beyond it.
std::vector<EigenPair> lowest_eigenpairs(const LinearOperator& op, std::size_t k, const SolverOptions& opt = {});

std::vector<EigenPair> dense_eigenpairs(const LinearOperator& op, std::size_t k);
std::vector<EigenPair> lanczos_eigenpairs(const LinearOperator& op, std::size_t k, const SolverOptions& opt = {});

// Sign convention: first component with |c| > 1e-6 is positive. Pairs within
// 1e-10 in energy are ordered by the index of that component.
void canonicalize(std::vector<EigenPair>& pairs);

struct ShiftedSolveOptions {
  double tol = 1e-8;  // relative to ||rhs||
  std::size_t max_iter = 0;  // 0: 20 * dim, at least 1000
};

struct ShiftedSolveResult {
  Vec x;
  double residual = 0.0;  // ||P_perp (rhs - (A - E) x)|| / ||rhs||
  std::size_t iterations = 0;
};

// Solves (A - E) x = P rhs on the complement of span(deflate) by conjugate
// gradients, re-projecting every iterate. deflate must be orthonormal.
ShiftedSolveResult shifted_solve(const LinearOperator& op, double E, const Vec& rhs, const std::vector<Vec>& deflate,
                                 const ShiftedSolveOptions& opt = {});

}  // namespace dwx
