#pragma once

// Commutant algebra Hom_G(V, V), its isotypic split, the real/complex/
// quaternionic classification of each block, and the identity component of
// the equivariant isometry group assembled from it.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "orbit_isom/catalog.hpp"
#include "orbit_isom/linalg.hpp"
#include "orbit_isom/repr_model.hpp"

namespace orbit_isom {

/// What the commutant stage needs from a group: matrices whose commutant is
/// the full commutant (group generators, or a Lie algebra basis for connected
/// groups), a Haar quadrature for character averages, and the group's own Lie
/// algebra (empty for finite groups).
struct LinearAction {
  Eigen::Index dimension = 0;
  std::vector<Matrix> commuteWith;
  std::vector<Matrix> groupLie;
  std::vector<Matrix> haarNodes;
  std::vector<double> haarWeights;
  RankPolicy rank;

  /// Same action written in the orthonormal coordinates `basis` of an invariant subspace.
  LinearAction restricted(const Matrix& basis) const {
    LinearAction out;
    out.dimension = basis.cols();
    out.rank = rank;
    auto conj = [&](const Matrix& m) -> Matrix { return basis.transpose() * m * basis; };
    for (const auto& m : commuteWith) out.commuteWith.push_back(conj(m));
    for (const auto& m : groupLie) out.groupLie.push_back(conj(m));
    for (const auto& m : haarNodes) out.haarNodes.push_back(conj(m));
    out.haarWeights = haarWeights;
    return out;
  }
};

inline LinearAction action_from_group(const FiniteGroupData& group, const RankPolicy& rank = {}) {
  LinearAction a;
  a.dimension = group.dimension();
  a.commuteWith = group.generators;
  a.haarNodes = group.elements;
  a.haarWeights.assign(group.order(), 1.0 / static_cast<double>(group.order()));
  a.rank = rank;
  return a;
}

inline constexpr int kHaarOrder = 6;

inline LinearAction action_from_catalog(const CatalogAction& action, const RankPolicy& rank = {}) {
  LinearAction a;
  a.dimension = action.dimension();
  a.commuteWith = action.lie_basis();
  a.groupLie = a.commuteWith;
  action.haar_quadrature(kHaarOrder, a.haarNodes, a.haarWeights);
  a.rank = rank;
  return a;
}

enum class SchurType { Real, Complex, Quaternionic };

inline const char* to_string(SchurType t) {
  switch (t) {
    case SchurType::Real: return "real";
    case SchurType::Complex: return "complex";
    case SchurType::Quaternionic: return "quaternionic";
  }
  return "?";
}

/// Real dimension of the endomorphism skew field: 1, 2 or 4.
inline int skew_field_dim(SchurType t) { return t == SchurType::Real ? 1 : t == SchurType::Complex ? 2 : 4; }

/// Per-copy value of (1/|G|)Σ χ(g²) for a real irreducible of the given type.
/// Quaternionic blocks complexify to two copies of an indicator −1 module.
inline int fs_per_copy(SchurType t) { return t == SchurType::Real ? 1 : t == SchurType::Complex ? 0 : -2; }

/// Frobenius-orthonormal basis of {A : A·M = M·A for every M in commuteWith}.
inline std::vector<Matrix> commutant_basis(const LinearAction& action) {
  return commuting_matrices(action.commuteWith, action.dimension, action.rank, "commutant_basis");
}

inline std::vector<Matrix> commutant_basis(const TrivialSplit& split, const LinearAction& full) {
  return commutant_basis(full.restricted(split.complementBasis));
}

/// Center of the commutant: matrices commuting with the action and with every
/// commutant basis element.
inline std::vector<Matrix> commutant_center(const LinearAction& action, const std::vector<Matrix>& commutant) {
  std::vector<Matrix> all = action.commuteWith;
  all.insert(all.end(), commutant.begin(), commutant.end());
  return commuting_matrices(all, action.dimension, action.rank, "isotypic_split");
}

struct IsotypicSubspace {
  Matrix basis;  // orthonormal columns in the coordinates of the action
  double eigenvalue = 0.0;
};

inline constexpr double kIsotypicGap = 1e-6;
inline constexpr int kIsotypicAttempts = 10;

/// Seed stream for a named stage, so stages draw independent sequences from one user seed.
inline Rng stage_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

/// Eigenspaces of a random symmetric element of the commutant's center. The
/// center is a *-algebra whose symmetric part is spanned by the isotypic
/// projectors, so distinct random eigenvalues separate the components.
inline std::vector<IsotypicSubspace> isotypic_split(const std::vector<Matrix>& commutant, const LinearAction& action,
                                                    std::uint64_t seed) {
  const Eigen::Index n = action.dimension;
  if (n == 0) return {};
  const auto center = commutant_center(action, commutant);

  struct Attempt {
    std::vector<IsotypicSubspace> parts;
    double min_gap = 0.0;
  };
  std::optional<Attempt> best;

  for (int attempt = 0; attempt < kIsotypicAttempts; ++attempt) {
    Rng rng = stage_rng(seed + static_cast<std::uint64_t>(attempt), 0x15070e1c);
    const Vector coef = random_unit_vector(rng, static_cast<Eigen::Index>(center.size()));
    Matrix z = Matrix::Zero(n, n);
    for (std::size_t k = 0; k < center.size(); ++k) z += coef(static_cast<Eigen::Index>(k)) * center[k];
    const Matrix s = 0.5 * (z + z.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(s);
    const Vector& lambda = eig.eigenvalues();

    // Clusters: consecutive eigenvalues within 1e-9 belong together; any gap
    // in (1e-9, 1e-6] makes this draw unusable.
    Attempt trial;
    trial.min_gap = std::numeric_limits<double>::infinity();
    bool usable = true;
    Eigen::Index start = 0;
    for (Eigen::Index i = 1; i <= n; ++i) {
      const bool boundary = i == n || lambda(i) - lambda(i - 1) > 1e-9;
      if (i < n && boundary) {
        const double gap = lambda(i) - lambda(i - 1);
        if (gap <= kIsotypicGap) usable = false;
        trial.min_gap = std::min(trial.min_gap, gap);
      }
      if (boundary) {
        trial.parts.push_back({eig.eigenvectors().middleCols(start, i - start), lambda(start)});
        start = i;
      }
    }
    if (!usable) continue;
    if (!best || trial.min_gap > best->min_gap) best = std::move(trial);
    // Well separated: eigenvector error is about eps/gap, so stop early.
    if (best->min_gap > 1e-2) break;
  }
  if (!best) fail(ErrorKind::Ambiguous, "isotypic_split", "isotypic separation failed after 10 re-randomizations");

  auto parts = std::move(best->parts);
  std::stable_sort(parts.begin(), parts.end(), [](const IsotypicSubspace& a, const IsotypicSubspace& b) {
    if (a.basis.cols() != b.basis.cols()) return a.basis.cols() < b.basis.cols();
    return a.eigenvalue < b.eigenvalue;
  });
  return parts;
}

struct IsotypicComponent {
  Matrix basis;
  int multiplicity = 0;
  int irreducibleDim = 0;
  SchurType schurType = SchurType::Real;
  double fsSum = 0.0;
  /// Dimension of the commutant of the action restricted to this component.
  int commutantDim = 0;

  int dimension() const { return static_cast<int>(basis.cols()); }
};

/// Haar average of trace(P·ρ(g²)·P) over the action.
inline double frobenius_schur_sum(const Matrix& basis, const LinearAction& action) {
  double s = 0.0;
  for (std::size_t k = 0; k < action.haarNodes.size(); ++k) {
    const Matrix& g = action.haarNodes[k];
    s += action.haarWeights[k] * (basis.transpose() * (g * (g * basis))).trace();
  }
  return s;
}

inline IsotypicComponent classify_component(const Matrix& basis, const LinearAction& action) {
  const std::string stage = "classify_component";
  IsotypicComponent out;
  out.basis = basis;
  out.fsSum = frobenius_schur_sum(basis, action);
  const LinearAction local = action.restricted(basis);
  out.commutantDim = static_cast<int>(commutant_basis(local).size());

  const double s = out.fsSum;
  const int c = out.commutantDim;
  auto inconsistent = [&](const std::string& why) {
    std::ostringstream msg;
    msg << "type/multiplicity inconsistency (" << why << "): fsSum = " << s << ", commutant dim = " << c;
    fail(ErrorKind::Internal, stage, msg.str());
  };

  if (s > 0.5) {
    out.schurType = SchurType::Real;
    out.multiplicity = static_cast<int>(std::lround(s));
    if (c != out.multiplicity * out.multiplicity) inconsistent("real type needs c = n^2");
  } else if (s < -0.5) {
    out.schurType = SchurType::Quaternionic;
    out.multiplicity = static_cast<int>(std::lround(-s / 2.0));
    if (c != 4 * out.multiplicity * out.multiplicity) inconsistent("quaternionic type needs c = 4n^2");
  } else {
    out.schurType = SchurType::Complex;
    const double n = std::sqrt(c / 2.0);
    if (std::abs(n - std::round(n)) > 1e-6 || n < 0.5) inconsistent("complex type needs c = 2n^2");
    out.multiplicity = static_cast<int>(std::lround(n));
  }
  const double expected = out.multiplicity * fs_per_copy(out.schurType);
  if (std::abs(s - expected) > 1e-6) inconsistent("fsSum is not n times the type indicator");
  if (out.multiplicity < 1 || out.dimension() % out.multiplicity != 0) inconsistent("multiplicity does not divide dimension");
  out.irreducibleDim = out.dimension() / out.multiplicity;
  if (out.irreducibleDim % skew_field_dim(out.schurType) != 0) inconsistent("irreducible dimension not divisible by skew field dimension");
  return out;
}

inline int factor_dimension(SchurType t, int n) {
  switch (t) {
    case SchurType::Real: return n * (n - 1) / 2;
    case SchurType::Complex: return n * n;
    case SchurType::Quaternionic: return n * (2 * n + 1);
  }
  return 0;
}

inline int factor_rank(SchurType t, int n) { return t == SchurType::Real ? n / 2 : n; }

inline std::string factor_name(SchurType t, int n) {
  const char* g = t == SchurType::Real ? "SO" : t == SchurType::Complex ? "U" : "Sp";
  return std::string(g) + "(" + std::to_string(n) + ")";
}

struct EquivariantFactor {
  SchurType schurType = SchurType::Real;
  int multiplicity = 0;
  std::size_t component = 0;
  /// Orthonormal skew-symmetric basis of the factor's Lie algebra, in F⊥ coordinates.
  std::vector<Matrix> lieBasis;

  std::string name() const { return factor_name(schurType, multiplicity); }
  int dimension() const { return factor_dimension(schurType, multiplicity); }
  int rank() const { return factor_rank(schurType, multiplicity); }
};

struct EquivariantIsometryGroup {
  std::vector<EquivariantFactor> factors;
  /// All factor Lie bases concatenated, in F⊥ coordinates.
  std::vector<Matrix> lieBasis;
  /// F and F⊥ bases of the ambient space, for embedding into V.
  Matrix fixedBasis;
  Matrix complementBasis;
  int totalDim = 0;
  int rank = 0;

  int ambient_dim() const { return static_cast<int>(fixedBasis.rows()); }
  Matrix embed(const Matrix& a) const { return complementBasis * a * complementBasis.transpose(); }
  Matrix embed_isometry(const Matrix& a) const {
    return fixedBasis * fixedBasis.transpose() + complementBasis * a * complementBasis.transpose();
  }
  /// Lie basis in the coordinates of V (zero on F).
  std::vector<Matrix> lie_basis_ambient() const {
    std::vector<Matrix> out;
    for (const auto& a : lieBasis) out.push_back(embed(a));
    return out;
  }
};

/// Skew-symmetric part of the commutant of the action restricted to
/// `component`, embedded back into the action's coordinates.
inline std::vector<Matrix> skew_commutant(const IsotypicComponent& component, const LinearAction& action) {
  const auto local = commutant_basis(action.restricted(component.basis));
  const Eigen::Index d = component.basis.cols();
  Matrix columns(d * d, static_cast<Eigen::Index>(local.size()));
  for (std::size_t k = 0; k < local.size(); ++k)
    columns.col(static_cast<Eigen::Index>(k)) = vec(0.5 * (local[k] - local[k].transpose()));
  const Matrix span = column_span(columns, action.rank, "equivariant_isometry_group");
  std::vector<Matrix> out;
  for (Eigen::Index c = 0; c < span.cols(); ++c) {
    const Matrix a = unvec(span.col(c), d);
    out.push_back(component.basis * a * component.basis.transpose());
  }
  return out;
}

inline EquivariantIsometryGroup equivariant_isometry_group(const std::vector<IsotypicComponent>& components,
                                                           const LinearAction& action, const TrivialSplit& split) {
  EquivariantIsometryGroup out;
  out.fixedBasis = split.fixedBasis;
  out.complementBasis = split.complementBasis;
  for (std::size_t i = 0; i < components.size(); ++i) {
    EquivariantFactor f;
    f.schurType = components[i].schurType;
    f.multiplicity = components[i].multiplicity;
    f.component = i;
    f.lieBasis = skew_commutant(components[i], action);
    if (static_cast<int>(f.lieBasis.size()) != f.dimension()) {
      std::ostringstream msg;
      msg << "skew commutant of component " << i << " has dimension " << f.lieBasis.size() << " but " << f.name()
          << " has dimension " << f.dimension();
      fail(ErrorKind::Internal, "equivariant_isometry_group", msg.str());
    }
    out.totalDim += f.dimension();
    out.rank += f.rank();
    out.lieBasis.insert(out.lieBasis.end(), f.lieBasis.begin(), f.lieBasis.end());
    out.factors.push_back(std::move(f));
  }
  return out;
}

/// exp(t·A) in V coordinates for a seeded random combination A of the Lie basis,
/// scaled to operator norm 1.
inline Matrix sample_equivariant_isometry(const EquivariantIsometryGroup& group, double t, std::uint64_t seed) {
  const Eigen::Index n = group.ambient_dim();
  if (group.lieBasis.empty()) return Matrix::Identity(n, n);
  Rng rng = stage_rng(seed, 0x5a3b1e);
  const Vector coef = random_unit_vector(rng, static_cast<Eigen::Index>(group.lieBasis.size()));
  Matrix a = Matrix::Zero(group.complementBasis.cols(), group.complementBasis.cols());
  for (std::size_t k = 0; k < group.lieBasis.size(); ++k) a += coef(static_cast<Eigen::Index>(k)) * group.lieBasis[k];
  // Unit operator norm, so t is the fastest rotation angle (A = ±J for a single U(1)).
  a /= Eigen::JacobiSVD<Matrix>(a).singularValues()(0);
  return group.embed_isometry(expm(t * a));
}

}  // namespace orbit_isom
