#pragma once

// Dense linear-algebra helpers shared by every stage: rank-thresholded null
// spaces, Kronecker commutation systems, the matrix exponential, and seeded
// random draws.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "orbit_isom/error.hpp"

namespace orbit_isom {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// The one random engine used for every draw; its name is written into reports.
using Rng = std::mt19937_64;
inline constexpr const char* kRngName = "mt19937_64";

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline double orthogonality_residual(const Matrix& m) {
  return max_abs(m.transpose() * m - Matrix::Identity(m.cols(), m.cols()));
}

inline double commutator_residual(const Matrix& a, const Matrix& b) { return max_abs(a * b - b * a); }

/// Polar factor U·Vᵀ of the SVD: the closest orthogonal matrix in Frobenius norm.
inline Matrix nearest_orthogonal(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

/// Singular-value threshold for rank decisions. Without an override the cut is
/// 100·eps·max(σ_max, 1); values in [cut, 100·cut] are treated as ambiguous.
struct RankPolicy {
  std::optional<double> absolute;

  double threshold(double sigma_max) const {
    if (absolute) return *absolute;
    return 100.0 * std::numeric_limits<double>::epsilon() * std::max(sigma_max, 1.0);
  }
};

/// Orthonormal bases for the null space of A and its orthogonal complement
/// (the row space), both as column blocks of size A.cols().
struct RankSplit {
  Matrix null;
  Matrix row;
};

inline RankSplit rank_split(const Matrix& a, const RankPolicy& policy, const std::string& stage) {
  const Eigen::Index n = a.cols();
  if (a.rows() == 0 || n == 0) return {Matrix::Identity(n, n), Matrix(n, 0)};

  // BDCSVD returns NaN singular vectors on some dense commutation systems.
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  if (!svd.matrixV().allFinite()) fail(ErrorKind::Internal, stage, "non-finite singular vectors");
  const Vector& sigma = svd.singularValues();
  const double cut = policy.threshold(sigma.size() ? sigma(0) : 0.0);

  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) >= cut && sigma(i) <= 100.0 * cut) {
      std::ostringstream msg;
      msg << "numerical rank ambiguity: singular value " << sigma(i) << " inside [" << cut << ", "
          << 100.0 * cut << "]; supply tighter input";
      fail(ErrorKind::Ambiguous, stage, msg.str());
    }
    if (sigma(i) > cut) ++rank;
  }
  const Matrix& v = svd.matrixV();
  return {v.rightCols(n - rank), v.leftCols(rank)};
}

inline Matrix null_space(const Matrix& a, const RankPolicy& policy, const std::string& stage) {
  return rank_split(a, policy, stage).null;
}

/// Orthonormal basis of the column span of `columns`.
inline Matrix column_span(const Matrix& columns, const RankPolicy& policy, const std::string& stage) {
  if (columns.cols() == 0) return Matrix(columns.rows(), 0);
  return rank_split(columns.transpose(), policy, stage).row;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Column-major vec.
inline Vector vec(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

inline Matrix unvec(const Vector& v, Eigen::Index n) { return Eigen::Map<const Matrix>(v.data(), n, n); }

/// Stacked linear system whose null space is {A : A·M = M·A for every M}.
/// Uses vec(A·M − M·A) = (Mᵀ ⊗ I − I ⊗ M)·vec(A).
inline Matrix commutation_system(std::span<const Matrix> ms, Eigen::Index n) {
  Matrix sys(static_cast<Eigen::Index>(ms.size()) * n * n, n * n);
  const Matrix id = Matrix::Identity(n, n);
  for (std::size_t k = 0; k < ms.size(); ++k)
    sys.middleRows(static_cast<Eigen::Index>(k) * n * n, n * n) = kron(ms[k].transpose(), id) - kron(id, ms[k]);
  return sys;
}

/// Null-space basis of a commutation system, unpacked into n×n matrices.
/// Frobenius-orthonormal because the singular vectors are orthonormal.
inline std::vector<Matrix> commuting_matrices(std::span<const Matrix> ms, Eigen::Index n, const RankPolicy& policy,
                                              const std::string& stage) {
  const Matrix basis = null_space(commutation_system(ms, n), policy, stage);
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(basis.cols()));
  for (Eigen::Index c = 0; c < basis.cols(); ++c) out.push_back(unvec(basis.col(c), n));
  return out;
}

/// Matrix exponential by scaling and squaring: the argument is scaled until
/// its 1-norm is at most 0.5, a degree-16 Taylor polynomial is evaluated in
/// Horner form, and the result is squared back.
inline Matrix expm(const Matrix& a) {
  const Eigen::Index n = a.rows();
  const double norm = a.size() ? a.cwiseAbs().colwise().sum().maxCoeff() : 0.0;
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Matrix scaled = a / std::ldexp(1.0, squarings);

  const Matrix id = Matrix::Identity(n, n);
  Matrix result = id;
  for (int k = 16; k >= 1; --k) result = id + (scaled * result) / static_cast<double>(k);
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

/// exp(t·X) for a circle generator (X³ = −X), via I + sin t·X + (1 − cos t)·X².
inline Matrix circle_exp(const Matrix& x, double t) {
  return Matrix::Identity(x.rows(), x.cols()) + std::sin(t) * x + (1.0 - std::cos(t)) * (x * x);
}

inline Matrix rotation2(double angle) {
  Matrix r(2, 2);
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

inline Matrix block_diag(std::span<const Matrix> blocks) {
  Eigen::Index n = 0;
  for (const auto& b : blocks) n += b.rows();
  Matrix out = Matrix::Zero(n, n);
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    out.block(at, at, b.rows(), b.cols()) = b;
    at += b.rows();
  }
  return out;
}

inline Matrix block_diag(std::initializer_list<Matrix> blocks) {
  return block_diag(std::span<const Matrix>(blocks.begin(), blocks.size()));
}

inline Vector gaussian_vector(Rng& rng, Eigen::Index n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

inline Vector random_unit_vector(Rng& rng, Eigen::Index n) {
  Vector v = gaussian_vector(rng, n);
  while (v.norm() < 1e-12) v = gaussian_vector(rng, n);
  return v / v.norm();
}

/// Uniformly random rotation in SO(3) from a unit quaternion.
inline Matrix random_rotation3(Rng& rng) {
  const Vector q = random_unit_vector(rng, 4);
  const Eigen::Quaterniond quat(q(0), q(1), q(2), q(3));
  return quat.toRotationMatrix();
}

}  // namespace orbit_isom
