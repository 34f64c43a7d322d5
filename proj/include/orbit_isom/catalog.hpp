#pragma once

// Fixed catalog of continuous compact actions. Each action is a product of
// circle factors and SO(3) factors, all written through circle generators
// (matrices with X³ = −X), so every element is a product of circle_exp terms.

#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "orbit_isom/linalg.hpp"

namespace orbit_isom {

struct CatalogMetadata {
  bool hasBoundary = false;
  int cohomogeneity = 0;
  std::optional<double> expectedSectorAngle;
  std::string singularIsotropyNote;
  /// Why the reflection of the quotient sector has no lift; empty when not applicable.
  std::string obstruction;
};

class CatalogAction {
 public:
  enum class FactorKind { Circle, Rotation3 };

  struct Factor {
    FactorKind kind;
    /// Circle: {X}. Rotation3: {Lx, Ly, Lz} embedded in the ambient space.
    std::vector<Matrix> generators;
  };

  CatalogAction(std::string id, int dimension, std::vector<Factor> factors, CatalogMetadata metadata)
      : id_(std::move(id)), dimension_(dimension), factors_(std::move(factors)), metadata_(std::move(metadata)) {}

  const std::string& id() const { return id_; }
  int dimension() const { return dimension_; }
  const CatalogMetadata& metadata() const { return metadata_; }
  const std::vector<Factor>& factors() const { return factors_; }

  /// Basis of the Lie algebra of the acting group (every element a circle generator).
  std::vector<Matrix> lie_basis() const {
    std::vector<Matrix> out;
    for (const auto& f : factors_) out.insert(out.end(), f.generators.begin(), f.generators.end());
    return out;
  }

  int parameter_count() const {
    int k = 0;
    for (const auto& f : factors_) k += f.kind == FactorKind::Circle ? 1 : 3;
    return k;
  }

  /// Group element at the given parameters: one angle per circle factor and
  /// ZYZ Euler angles (α, β, γ) per SO(3) factor.
  Matrix element(std::span<const double> params) const {
    Matrix g = Matrix::Identity(dimension_, dimension_);
    std::size_t at = 0;
    for (const auto& f : factors_) {
      if (f.kind == FactorKind::Circle) {
        g = g * circle_exp(f.generators[0], params[at++]);
      } else {
        const Matrix& ly = f.generators[1];
        const Matrix& lz = f.generators[2];
        g = g * circle_exp(lz, params[at]) * circle_exp(ly, params[at + 1]) * circle_exp(lz, params[at + 2]);
        at += 3;
      }
    }
    return g;
  }

  /// Deterministic coarse grid with at most `density` elements: the same
  /// resolution r = ⌊density^(1/k)⌋ on every one of the k parameters. A single
  /// circle factor therefore gets exactly `density` equally spaced samples.
  std::vector<Matrix> grid(int density) const {
    const int k = parameter_count();
    if (k == 0) return {Matrix::Identity(dimension_, dimension_)};
    const int r = grid_resolution(density);

    std::vector<std::vector<double>> axes;
    for (const auto& f : factors_) {
      if (f.kind == FactorKind::Circle) {
        axes.push_back(uniform_angles(r));
      } else {
        axes.push_back(uniform_angles(r));
        std::vector<double> beta(static_cast<std::size_t>(r));
        for (int j = 0; j < r; ++j) beta[static_cast<std::size_t>(j)] = std::numbers::pi * (j + 0.5) / r;
        axes.push_back(beta);
        axes.push_back(uniform_angles(r));
      }
    }
    std::vector<Matrix> out;
    std::vector<double> params(static_cast<std::size_t>(k));
    std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
    while (true) {
      for (std::size_t p = 0; p < idx.size(); ++p) params[p] = axes[p][idx[p]];
      out.push_back(element(params));
      std::size_t p = 0;
      while (p < idx.size() && ++idx[p] == axes[p].size()) idx[p++] = 0;
      if (p == idx.size()) break;
    }
    return out;
  }

  int grid_resolution(int density) const {
    const int k = parameter_count();
    if (k == 0) return 1;
    int r = static_cast<int>(std::floor(std::pow(static_cast<double>(density), 1.0 / k) + 1e-9));
    return std::max(r, 2);
  }

  /// Product quadrature for the normalized Haar measure: uniform angles on each
  /// circle, and uniform α, γ with Gauss–Legendre nodes in cos β on SO(3).
  /// Exact for the trigonometric polynomials of low degree that arise from
  /// characters of g².
  void haar_quadrature(int order, std::vector<Matrix>& nodes, std::vector<double>& weights) const {
    nodes.clear();
    weights.clear();
    std::vector<std::vector<double>> axes;
    std::vector<std::vector<double>> axis_weights;
    const std::vector<double> uniform_w(static_cast<std::size_t>(order), 1.0 / order);
    for (const auto& f : factors_) {
      axes.push_back(uniform_angles(order));
      axis_weights.push_back(uniform_w);
      if (f.kind == FactorKind::Rotation3) {
        const auto [x, w] = gauss_legendre(order);
        std::vector<double> beta(x.size());
        std::vector<double> bw(w.size());
        for (std::size_t j = 0; j < x.size(); ++j) {
          beta[j] = std::acos(x[j]);
          bw[j] = w[j] / 2.0;
        }
        axes.push_back(beta);
        axis_weights.push_back(bw);
        axes.push_back(uniform_angles(order));
        axis_weights.push_back(uniform_w);
      }
    }
    if (axes.empty()) {
      nodes.push_back(Matrix::Identity(dimension_, dimension_));
      weights.push_back(1.0);
      return;
    }
    std::vector<double> params(axes.size());
    std::vector<std::size_t> idx(axes.size(), 0);
    while (true) {
      double w = 1.0;
      for (std::size_t p = 0; p < idx.size(); ++p) {
        params[p] = axes[p][idx[p]];
        w *= axis_weights[p][idx[p]];
      }
      nodes.push_back(element(params));
      weights.push_back(w);
      std::size_t p = 0;
      while (p < idx.size() && ++idx[p] == axes[p].size()) idx[p++] = 0;
      if (p == idx.size()) break;
    }
  }

  /// Gauss–Legendre nodes and weights on [−1, 1] (Golub–Welsch).
  static std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
    Matrix jacobi = Matrix::Zero(n, n);
    for (int k = 1; k < n; ++k) {
      const double b = k / std::sqrt(4.0 * k * k - 1.0);
      jacobi(k - 1, k) = b;
      jacobi(k, k - 1) = b;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(jacobi);
    std::vector<double> x(static_cast<std::size_t>(n));
    std::vector<double> w(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      x[static_cast<std::size_t>(i)] = eig.eigenvalues()(i);
      const double v0 = eig.eigenvectors()(0, i);
      w[static_cast<std::size_t>(i)] = 2.0 * v0 * v0;
    }
    return {x, w};
  }

 private:
  static std::vector<double> uniform_angles(int r) {
    std::vector<double> out(static_cast<std::size_t>(r));
    for (int j = 0; j < r; ++j) out[static_cast<std::size_t>(j)] = 2.0 * std::numbers::pi * j / r;
    return out;
  }

  std::string id_;
  int dimension_;
  std::vector<Factor> factors_;
  CatalogMetadata metadata_;
};

namespace catalog_detail {

inline Matrix complex_structure2() {
  Matrix j(2, 2);
  j << 0.0, -1.0, 1.0, 0.0;
  return j;
}

/// so(3) basis Lx, Ly, Lz (rotation generators about the coordinate axes).
inline std::vector<Matrix> so3_generators() {
  Matrix lx = Matrix::Zero(3, 3), ly = Matrix::Zero(3, 3), lz = Matrix::Zero(3, 3);
  lx(2, 1) = 1.0;
  lx(1, 2) = -1.0;
  ly(0, 2) = 1.0;
  ly(2, 0) = -1.0;
  lz(1, 0) = 1.0;
  lz(0, 1) = -1.0;
  return {lx, ly, lz};
}

}  // namespace catalog_detail

inline constexpr std::string_view kHopfId = "hopf-u1-r4";
inline constexpr std::string_view kProductId = "so2xso3-r5";
inline constexpr std::string_view kTensorId = "so2-tensor-so3-r6";
inline constexpr std::string_view kTrivialPlaneId = "trivial-r2";

inline std::vector<std::string> catalog_ids() {
  return {std::string(kHopfId), std::string(kProductId), std::string(kTensorId), std::string(kTrivialPlaneId)};
}

/// Scalar U(1) on C² = R⁴ with z = x1 + i·x2, w = x3 + i·x4.
inline CatalogAction hopf_action() {
  const Matrix j = catalog_detail::complex_structure2();
  CatalogMetadata meta;
  meta.hasBoundary = false;
  meta.cohomogeneity = 3;
  meta.singularIsotropyNote = "free action on the unit sphere; SV/G is the round 2-sphere of radius 1/2";
  return CatalogAction(std::string(kHopfId), 4, {{CatalogAction::FactorKind::Circle, {block_diag({j, j})}}},
                       std::move(meta));
}

/// SO(2) × SO(3) acting block-diagonally on R² × R³.
inline CatalogAction product_action() {
  const Matrix j = catalog_detail::complex_structure2();
  std::vector<Matrix> rot;
  for (const auto& l : catalog_detail::so3_generators()) rot.push_back(block_diag({Matrix::Zero(2, 2), l}));
  CatalogMetadata meta;
  meta.hasBoundary = true;
  meta.cohomogeneity = 2;
  meta.expectedSectorAngle = std::numbers::pi / 2.0;
  meta.singularIsotropyNote = "boundary rays R²×0 and 0×R³; singular orbits are a circle and a 2-sphere";
  meta.obstruction = "singular orbits over the two boundary rays are a 2-sphere and a circle, not diffeomorphic";
  return CatalogAction(std::string(kProductId), 5,
                       {{CatalogAction::FactorKind::Circle, {block_diag({j, Matrix::Zero(3, 3)})}},
                        {CatalogAction::FactorKind::Rotation3, rot}},
                       std::move(meta));
}

/// SO(2) × SO(3) acting on R² ⊗ R³ (Kronecker ordering, index 3i + j).
inline CatalogAction tensor_action() {
  const Matrix j = catalog_detail::complex_structure2();
  std::vector<Matrix> rot;
  for (const auto& l : catalog_detail::so3_generators()) rot.push_back(kron(Matrix::Identity(2, 2), l));
  CatalogMetadata meta;
  meta.hasBoundary = true;
  meta.cohomogeneity = 2;
  meta.expectedSectorAngle = std::numbers::pi / 4.0;
  meta.singularIsotropyNote =
      "isotropy along the two boundary rays is SO(2) and SO(2)×Z2 (reference data, not computed)";
  meta.obstruction = "isotropy groups SO(2) and SO(2)×Z2 on the boundary rays; singular orbits not diffeomorphic";
  return CatalogAction(std::string(kTensorId), 6,
                       {{CatalogAction::FactorKind::Circle, {kron(j, Matrix::Identity(3, 3))}},
                        {CatalogAction::FactorKind::Rotation3, rot}},
                       std::move(meta));
}

/// Degenerate entry: the trivial group on R², whose unit-sphere quotient is the whole circle.
inline CatalogAction trivial_plane_action() {
  CatalogMetadata meta;
  meta.hasBoundary = false;
  meta.cohomogeneity = 2;
  meta.expectedSectorAngle = std::numbers::pi;
  meta.singularIsotropyNote = "trivial group; every point is principal";
  return CatalogAction(std::string(kTrivialPlaneId), 2, {}, std::move(meta));
}

inline std::optional<CatalogAction> find_catalog_action(std::string_view id) {
  if (id == kHopfId) return hopf_action();
  if (id == kProductId) return product_action();
  if (id == kTensorId) return tensor_action();
  if (id == kTrivialPlaneId) return trivial_plane_action();
  return std::nullopt;
}

}  // namespace orbit_isom
