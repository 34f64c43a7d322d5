#pragma once

// Identity component of Isom(V/G): the surjection from Isom_G(V)₀, its kernel
// (searched in the center of the product of the equivariant factors), the
// no-boundary formula for that kernel, and the structural validators.

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "orbit_isom/catalog.hpp"
#include "orbit_isom/commutant.hpp"
#include "orbit_isom/linalg.hpp"
#include "orbit_isom/orbit_geometry.hpp"
#include "orbit_isom/repr_model.hpp"

namespace orbit_isom {

inline constexpr int kKernelSamples = 8;
inline constexpr int kWholeFactorProbes = 5;
inline constexpr double kCircleProbeTimes[] = {0.1, 0.37, 1.01};

/// Elements of G commuting with every element, checked against the
/// generators (which suffices).
inline std::vector<Matrix> center_of_group(const FiniteGroupData& group) {
  std::vector<Matrix> out;
  for (const auto& z : group.elements) {
    bool central = true;
    for (const auto& g : group.generators)
      if (commutator_residual(z, g) > 1e-9) {
        central = false;
        break;
      }
    if (central) out.push_back(z);
  }
  return out;
}

/// Number of eigenvalues equal to −1 of an orthogonal matrix.
inline int minus_one_multiplicity(const Matrix& m) {
  const Matrix shifted = m + Matrix::Identity(m.rows(), m.cols());
  Eigen::JacobiSVD<Matrix> svd(shifted);
  int count = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) < 1e-6) ++count;
  return count;
}

/// Central elements lying in Isom_G(V)₀. On a real-type block z acts as
/// M ⊗ I_d with M ∈ O(n); z is in SO(n) iff the −1 eigenspace of z on the
/// block has dimension d·(even number). Complex and quaternionic factors are
/// connected, so they impose nothing.
inline std::vector<Matrix> center_in_component(const std::vector<Matrix>& center, const EquivariantIsometryGroup& equiv,
                                               const std::vector<IsotypicComponent>& components) {
  const std::string stage = "center_in_component";
  std::vector<Matrix> out;
  for (const auto& z : center) {
    const Matrix zr = equiv.complementBasis.transpose() * z * equiv.complementBasis;
    bool inside = true;
    for (const auto& comp : components) {
      const Matrix& b = comp.basis;
      const Matrix leak = zr * b - b * (b.transpose() * zr * b);
      if (max_abs(leak) > 1e-8)
        fail(ErrorKind::Internal, stage, "coordinate extraction residual above 1e-8: element does not preserve a component");
      if (comp.schurType != SchurType::Real) continue;
      const Matrix block = b.transpose() * zr * b;
      const int minus = minus_one_multiplicity(block);
      if (minus % comp.irreducibleDim != 0)
        fail(ErrorKind::Internal, stage, "−1 eigenspace is not a union of irreducible copies");
      if ((minus / comp.irreducibleDim) % 2 != 0) inside = false;
    }
    if (inside) out.push_back(z);
  }
  return out;
}

/// Circle generator K (K² = −I on the block, zero elsewhere) of the center of
/// a U(n) factor, or of a whole SO(2) factor. Returned in F⊥ coordinates.
inline std::optional<Matrix> factor_circle(const EquivariantFactor& factor, const IsotypicComponent& comp,
                                           const LinearAction& action) {
  const Matrix& b = comp.basis;
  Matrix k;
  if (factor.schurType == SchurType::Real && factor.multiplicity == 2) {
    k = b.transpose() * factor.lieBasis.front() * b;
  } else if (factor.schurType == SchurType::Complex) {
    const LinearAction local = action.restricted(b);
    const auto comm = commutant_basis(local);
    const auto center = commutant_center(local, comm);
    const Eigen::Index d = b.cols();
    Matrix columns(d * d, static_cast<Eigen::Index>(center.size()));
    for (std::size_t i = 0; i < center.size(); ++i)
      columns.col(static_cast<Eigen::Index>(i)) = vec(0.5 * (center[i] - center[i].transpose()));
    const Matrix span = column_span(columns, action.rank, "compute_kernel");
    if (span.cols() != 1) fail(ErrorKind::Internal, "compute_kernel", "complex factor center is not one circle");
    k = unvec(span.col(0), d);
  } else {
    return std::nullopt;
  }
  const double mu2 = -(k * k).trace() / static_cast<double>(k.rows());
  k /= std::sqrt(mu2);
  return b * k * b.transpose();
}

struct KernelDescription {
  /// Discrete kernel elements found (a group, identity first), V coordinates.
  std::vector<Matrix> finitePart;
  /// Orthonormal basis of the kernel's torus directions, F⊥ coordinates.
  std::vector<Matrix> continuousPart;
  /// Factors lying entirely in the kernel.
  std::vector<std::size_t> wholeFactors;
  bool containsCenterOfG = false;
  /// Discrete elements commute with Isom_G(V)₀.
  bool central = true;
  /// |ker(p) / ker(p)₀|.
  std::size_t componentOrder = 1;
};

namespace detail {

inline Matrix block_sign(const std::vector<IsotypicComponent>& comps, const std::vector<std::size_t>& flipped,
                         Eigen::Index n) {
  Matrix d = Matrix::Identity(n, n);
  for (std::size_t i : flipped) d -= 2.0 * comps[i].basis * comps[i].basis.transpose();
  return d;
}

}  // namespace detail

struct KernelInputs {
  const OrbitSpace* space = nullptr;
  const EquivariantIsometryGroup* equiv = nullptr;
  const std::vector<IsotypicComponent>* components = nullptr;
  /// Action restricted to F⊥.
  const LinearAction* action = nullptr;
  /// Z(G) ∩ Isom_G(V)₀ for finite groups (V coordinates); empty for catalog actions.
  std::vector<Matrix> centerInComponent;
  std::uint64_t seed = kDefaultSeed;
};

inline KernelDescription compute_kernel(const KernelInputs& in) {
  const std::string stage = "compute_kernel";
  const auto& space = *in.space;
  const auto& equiv = *in.equiv;
  const auto& comps = *in.components;
  const auto& action = *in.action;
  const Eigen::Index m = equiv.complementBasis.cols();
  const std::uint64_t test_seed = in.seed ^ 0x6b65726eULL;
  KernelDescription out;

  auto trivial_on_quotient = [&](const Matrix& f_perp) {
    return orbit_equivalence_test(space, equiv.embed_isometry(f_perp), kKernelSamples, test_seed);
  };

  // Whole-factor probes.
  {
    Rng rng = stage_rng(in.seed, 0xfac7);
    std::uniform_real_distribution<double> times(0.3, 1.3);
    for (std::size_t i = 0; i < equiv.factors.size(); ++i) {
      const auto& f = equiv.factors[i];
      if (f.lieBasis.empty()) continue;
      int passed = 0;
      for (int probe = 0; probe < kWholeFactorProbes; ++probe) {
        const Vector coef = random_unit_vector(rng, static_cast<Eigen::Index>(f.lieBasis.size()));
        Matrix a = Matrix::Zero(m, m);
        for (std::size_t k = 0; k < f.lieBasis.size(); ++k) a += coef(static_cast<Eigen::Index>(k)) * f.lieBasis[k];
        if (trivial_on_quotient(expm(times(rng) * a))) ++passed;
      }
      if (passed == kWholeFactorProbes) out.wholeFactors.push_back(i);
      else if (passed != 0)
        fail(ErrorKind::Ambiguous, stage, "kernel resolution ambiguous: factor " + f.name() + " partially orbit-trivial");
    }
  }
  auto killed = [&](std::size_t factor) {
    return std::find(out.wholeFactors.begin(), out.wholeFactors.end(), factor) != out.wholeFactors.end();
  };

  // Circle directions of the center torus.
  std::vector<Matrix> circles;
  std::vector<std::size_t> circle_factor;
  for (std::size_t i = 0; i < equiv.factors.size(); ++i)
    if (auto k = factor_circle(equiv.factors[i], comps[equiv.factors[i].component], action)) {
      circles.push_back(*k);
      circle_factor.push_back(i);
    }

  std::vector<bool> circle_passes(circles.size(), false);
  for (std::size_t j = 0; j < circles.size(); ++j) {
    int passed = 0;
    for (double t : kCircleProbeTimes)
      if (trivial_on_quotient(circle_exp(circles[j], t))) ++passed;
    if (passed != 0 && passed != 3)
      fail(ErrorKind::Ambiguous, stage, "kernel resolution ambiguous: circle passes at some t and fails at others");
    circle_passes[j] = passed == 3;
  }

  // Torus directions X = Σ c_j K_j whose flow is tangent to the orbits at
  // generic points: (I − Π_{T_v})·X·v = 0 with T_v = span{Y·v : Y ∈ Lie(G)}.
  Matrix coefficient_basis(static_cast<Eigen::Index>(circles.size()), 0);
  if (!circles.empty()) {
    Rng rng = stage_rng(in.seed, 0x7a9e);
    const int points = 6;
    Matrix system(points * m, static_cast<Eigen::Index>(circles.size()));
    for (int p = 0; p < points; ++p) {
      const Vector v = generic_point(space, rng);
      const Vector vr = equiv.complementBasis.transpose() * v;
      Matrix tangent(m, static_cast<Eigen::Index>(action.groupLie.size()));
      for (std::size_t k = 0; k < action.groupLie.size(); ++k)
        tangent.col(static_cast<Eigen::Index>(k)) = action.groupLie[k] * vr;
      Matrix proj = Matrix::Identity(m, m);
      if (tangent.cols() > 0) {
        RankPolicy loose;
        loose.absolute = 1e-8;
        const Matrix q = column_span(tangent, loose, stage);
        proj -= q * q.transpose();
      }
      for (std::size_t j = 0; j < circles.size(); ++j)
        system.block(p * m, static_cast<Eigen::Index>(j), m, 1) = proj * circles[j] * vr;
    }
    RankPolicy policy;
    policy.absolute = 1e-8;
    coefficient_basis = null_space(system, policy, stage);
  }
  for (Eigen::Index c = 0; c < coefficient_basis.cols(); ++c) {
    Matrix x = Matrix::Zero(m, m);
    for (std::size_t j = 0; j < circles.size(); ++j) x += coefficient_basis(static_cast<Eigen::Index>(j), c) * circles[j];
    for (double t : kCircleProbeTimes)
      if (!trivial_on_quotient(expm(t * x)))
        fail(ErrorKind::Ambiguous, stage, "kernel resolution ambiguous: tangent torus direction moves orbits");
    out.continuousPart.push_back(x / x.norm());
  }
  auto in_torus = [&](std::size_t j) {
    if (coefficient_basis.cols() == 0) return false;
    Vector e = Vector::Zero(static_cast<Eigen::Index>(circles.size()));
    e(static_cast<Eigen::Index>(j)) = 1.0;
    return (e - coefficient_basis * (coefficient_basis.transpose() * e)).norm() < 1e-6;
  };
  for (std::size_t j = 0; j < circles.size(); ++j)
    if (circle_passes[j] != in_torus(j))
      fail(ErrorKind::Ambiguous, stage, "kernel resolution ambiguous: circle test disagrees with tangency test");

  // Discrete candidates: ±I on blocks whose factor contains −I, and the
  // central elements of G that lie in the identity component.
  std::vector<std::size_t> sign_factors;
  for (std::size_t i = 0; i < equiv.factors.size(); ++i) {
    const auto& f = equiv.factors[i];
    if (f.schurType != SchurType::Real || f.multiplicity % 2 == 0) sign_factors.push_back(i);
  }
  std::vector<std::vector<std::size_t>> subsets;
  if (sign_factors.size() <= 12) {
    for (std::size_t mask = 1; mask < (std::size_t{1} << sign_factors.size()); ++mask) {
      std::vector<std::size_t> s;
      for (std::size_t b = 0; b < sign_factors.size(); ++b)
        if (mask & (std::size_t{1} << b)) s.push_back(sign_factors[b]);
      subsets.push_back(s);
    }
  } else {
    for (std::size_t i : sign_factors) subsets.push_back({i});
    subsets.push_back(sign_factors);
  }
  std::vector<Matrix> passing;
  std::vector<std::vector<std::size_t>> passing_blocks;
  for (const auto& s : subsets) {
    std::vector<std::size_t> blocks;
    for (std::size_t i : s) blocks.push_back(equiv.factors[i].component);
    const Matrix d = detail::block_sign(comps, blocks, m);
    if (trivial_on_quotient(d)) {
      passing.push_back(equiv.embed_isometry(d));
      passing_blocks.push_back(s);
    }
  }
  const Eigen::Index n = equiv.ambient_dim();
  for (const auto& z : in.centerInComponent) {
    if (max_abs(z - Matrix::Identity(n, n)) <= kDedupTolerance) continue;
    if (orbit_equivalence_test(space, z, kKernelSamples, test_seed)) passing.push_back(z);
  }
  if (passing.empty()) {
    out.finitePart = {Matrix::Identity(n, n)};
  } else {
    out.finitePart = close_generators(passing, 1u << 16, stage).elements;
  }

  // Centrality: discrete elements commute with the Lie algebra of Isom_G(V)₀.
  const auto lie_ambient = equiv.lie_basis_ambient();
  for (const auto& e : out.finitePart)
    for (const auto& a : lie_ambient)
      if (commutator_residual(e, a) > 1e-8) out.central = false;

  // Component count: sign elements lying in the identity component of the
  // kernel (through a killed factor or a kernel circle) do not count.
  auto in_identity_component = [&](const std::vector<std::size_t>& flipped) {
    for (std::size_t i : flipped) {
      if (killed(i)) continue;
      bool covered = false;
      for (std::size_t j = 0; j < circles.size(); ++j)
        if (circle_factor[j] == i && in_torus(j)) covered = true;
      if (!covered) {
        // One torus direction through several blocks: solve s·c_j ≡ π [j flipped] mod 2π.
        if (coefficient_basis.cols() != 1) return false;
        const Vector c = coefficient_basis.col(0);
        Eigen::Index j0 = 0;
        c.cwiseAbs().maxCoeff(&j0);
        auto target = [&](std::size_t j) {
          const bool f = std::find(flipped.begin(), flipped.end(), circle_factor[j]) != flipped.end();
          return f ? std::numbers::pi : 0.0;
        };
        for (int k = -16; k <= 16; ++k) {
          const double s = (target(static_cast<std::size_t>(j0)) + 2.0 * std::numbers::pi * k) / c(j0);
          bool ok = true;
          for (std::size_t j = 0; j < circles.size() && ok; ++j) {
            const double r = std::remainder(s * c(static_cast<Eigen::Index>(j)) - target(j), 2.0 * std::numbers::pi);
            if (std::abs(r) > 1e-6) ok = false;
          }
          for (std::size_t f : flipped) {
            const bool has_circle =
                std::find(circle_factor.begin(), circle_factor.end(), f) != circle_factor.end();
            if (!has_circle && !killed(f)) ok = false;
          }
          if (ok) return true;
        }
        return false;
      }
    }
    return true;
  };
  std::size_t identity_like = 1;
  for (const auto& s : passing_blocks)
    if (in_identity_component(s)) ++identity_like;
  if (in.centerInComponent.empty() && !passing_blocks.empty()) {
    // Sign elements form an elementary abelian 2-group; the ones in K₀ form a subgroup.
    std::size_t sub = 1;
    while (sub < identity_like) sub <<= 1;
    out.componentOrder = std::max<std::size_t>(1, out.finitePart.size() / std::max<std::size_t>(sub, 1));
  } else {
    out.componentOrder = coefficient_basis.cols() == 0 && out.wholeFactors.empty() ? out.finitePart.size()
                                                                                   : std::max<std::size_t>(1, out.finitePart.size() / identity_like);
  }

  // Z(G) ∩ Isom_G(V)₀ ⊆ ker(p).
  out.containsCenterOfG = true;
  for (const auto& z : in.centerInComponent) {
    bool found = false;
    for (const auto& e : out.finitePart)
      if (max_abs(e - z) <= kDedupTolerance) found = true;
    if (!found) out.containsCenterOfG = false;
  }
  return out;
}

/// Lie algebra of the center of G, in F⊥ coordinates: combinations of the
/// group's Lie basis commuting with all of it.
inline std::vector<Matrix> group_center_algebra(const LinearAction& action) {
  const auto& lie = action.groupLie;
  if (lie.empty()) return {};
  const Eigen::Index m = action.dimension;
  const Eigen::Index k = static_cast<Eigen::Index>(lie.size());
  Matrix system(k * m * m, k);
  for (Eigen::Index l = 0; l < k; ++l)
    for (Eigen::Index j = 0; j < k; ++j)
      system.block(l * m * m, j, m * m, 1) = vec(lie[static_cast<std::size_t>(j)] * lie[static_cast<std::size_t>(l)] -
                                                 lie[static_cast<std::size_t>(l)] * lie[static_cast<std::size_t>(j)]);
  RankPolicy policy;
  policy.absolute = 1e-9;
  const Matrix coef = null_space(system, policy, "compute_kernel");
  std::vector<Matrix> out;
  for (Eigen::Index c = 0; c < coef.cols(); ++c) {
    Matrix z = Matrix::Zero(m, m);
    for (Eigen::Index j = 0; j < k; ++j) z += coef(j, c) * lie[static_cast<std::size_t>(j)];
    out.push_back(z);
  }
  return out;
}

struct CompactFactorEntry {
  std::string name;
  std::string type;
  int multiplicity = 0;
  int dimension = 0;
  int irreducibleDim = 0;
  double fsSum = 0.0;
  bool inKernel = false;
};

enum class FormulaApplied { NoBoundaryFormula, CentralKernelSearch };

inline const char* to_string(FormulaApplied f) {
  return f == FormulaApplied::NoBoundaryFormula ? "proposition-4.1b" : "central-kernel-search";
}

enum class Verdict { Pass, Fail, NotApplicable };

inline const char* to_string(Verdict v) { return v == Verdict::Pass ? "pass" : v == Verdict::Fail ? "fail" : "n/a"; }

struct QuotientIsometryReport {
  std::string input;
  int dimension = 0;
  int euclideanFactorDim = 0;
  std::vector<CompactFactorEntry> compactFactors;
  int equivariantDim = 0;
  int equivariantRank = 0;
  std::size_t kernelFiniteOrder = 1;
  int kernelCircleDirections = 0;
  int kernelWholeFactors = 0;
  bool kernelContainsCenterOfG = true;
  bool kernelCentral = true;
  bool boundary = false;
  FormulaApplied formulaApplied = FormulaApplied::CentralKernelSearch;
  int rank = 0;
  /// Dimension of Isom(V/G)₀ including the Euclidean factor.
  int quotientDim = 0;
  std::string quotientGroup;
  std::string identifiedAs;
  bool irreducible = false;
  Verdict theoremB = Verdict::Pass;
  Verdict theoremC = Verdict::NotApplicable;
  std::uint64_t seed = kDefaultSeed;
  int density = 0;
  double distanceStep = 0.0;
  std::vector<std::string> notes;
};

/// Every stage's output, for callers that need more than the report.
struct Analysis {
  RepresentationSpec spec;
  TrivialSplit split;
  std::optional<FiniteGroupData> group;
  std::optional<CatalogAction> action;
  std::optional<OrbitSpace> space;
  LinearAction restricted;
  std::vector<Matrix> commutant;
  std::vector<IsotypicComponent> components;
  EquivariantIsometryGroup equivariant;
  std::vector<Matrix> center;
  std::vector<Matrix> centerInComponent;
  bool boundary = false;
  KernelDescription kernel;
  QuotientIsometryReport report;
};

struct AnalyzeOptions {
  int density = kDefaultDensity;
  std::string input;
};

namespace detail {

inline std::string identify_single(const EquivariantFactor& f, bool circle_killed, std::size_t finite_order,
                                   std::string& quotient) {
  const int n = f.multiplicity;
  const std::string name = f.name();
  if (circle_killed) {
    quotient = name + "/U(1)";
    if (n == 1) return "trivial";
    if (n == 2) return "SO(3)";
    return "PU(" + std::to_string(n) + ")";
  }
  if (finite_order <= 1) {
    quotient = name;
    return name;
  }
  switch (f.schurType) {
    case SchurType::Real:
      if (n == 2) {
        quotient = name + "/Z" + std::to_string(finite_order);
        return "SO(2)";
      }
      quotient = name + "/{±I}";
      if (n == 4) return "SO(3)×SO(3)";
      return "PSO(" + std::to_string(n) + ")";
    case SchurType::Complex:
      quotient = name + "/Z" + std::to_string(finite_order);
      return n == 1 ? "U(1)" : quotient;
    case SchurType::Quaternionic:
      quotient = name + "/{±I}";
      return n == 1 ? "SO(3)" : "PSp(" + std::to_string(n) + ")";
  }
  return quotient;
}

}  // namespace detail

inline Verdict verify_theorem_B(const QuotientIsometryReport& report) {
  for (const auto& f : report.compactFactors) {
    const auto& nm = f.name;
    const bool classical = nm.rfind("SO(", 0) == 0 || nm.rfind("U(", 0) == 0 || nm.rfind("Sp(", 0) == 0;
    if (!classical) return Verdict::Fail;
  }
  return report.kernelCentral ? Verdict::Pass : Verdict::Fail;
}

enum class IrreducibleClass { NotIrreducible, FiniteGroup, TrivialOrU1, TrivialOrSp1OrSO3 };

inline const char* to_string(IrreducibleClass c) {
  switch (c) {
    case IrreducibleClass::NotIrreducible: return "not-irreducible";
    case IrreducibleClass::FiniteGroup: return "finite-group";
    case IrreducibleClass::TrivialOrU1: return "trivial-or-U1";
    case IrreducibleClass::TrivialOrSp1OrSO3: return "trivial-or-Sp1-or-SO3";
  }
  return "?";
}

inline IrreducibleClass classify_irreducible(const QuotientIsometryReport& report) {
  if (!report.irreducible || report.compactFactors.size() != 1) return IrreducibleClass::NotIrreducible;
  const auto& t = report.compactFactors.front().type;
  if (t == "real") return IrreducibleClass::FiniteGroup;
  if (t == "complex") return IrreducibleClass::TrivialOrU1;
  return IrreducibleClass::TrivialOrSp1OrSO3;
}

/// The whole pipeline: trivial split, group data, commutant, isotypic split,
/// Isom_G(V)₀, boundary, kernel, and report assembly.
inline Analysis analyze(const RepresentationSpec& spec, const AnalyzeOptions& options = {}) {
  Analysis an;
  an.spec = spec;
  const Eigen::Index n = spec.dimension;

  an.split = fixed_subspace(spec);
  LinearAction full;
  if (spec.is_finite()) {
    an.group = enumerate_group(spec);
    full = action_from_group(*an.group, spec.rank);
    an.space = OrbitSpace::finite(*an.group, options.input.empty() ? "finite" : options.input);
  } else {
    an.action = *find_catalog_action(spec.catalog_id());
    full = action_from_catalog(*an.action, spec.rank);
    an.space = OrbitSpace::catalog(*an.action, options.density);
  }
  an.restricted = full.restricted(an.split.complementBasis);

  if (an.split.complement_dim() > 0) {
    an.commutant = commutant_basis(an.restricted);
    for (const auto& part : isotypic_split(an.commutant, an.restricted, spec.seed))
      an.components.push_back(classify_component(part.basis, an.restricted));
  }
  an.equivariant = equivariant_isometry_group(an.components, an.restricted, an.split);

  int commutant_identity = 0;
  for (const auto& c : an.components)
    commutant_identity += c.multiplicity * c.multiplicity * skew_field_dim(c.schurType);
  if (commutant_identity != static_cast<int>(an.commutant.size()))
    fail(ErrorKind::Internal, "isotypic_split", "commutant dimension differs from the sum of n_i^2 t_i");

  an.boundary = has_boundary(*an.space);
  if (an.group) {
    an.center = center_of_group(*an.group);
    an.centerInComponent = center_in_component(an.center, an.equivariant, an.components);
  }

  KernelInputs kin;
  kin.space = &*an.space;
  kin.equiv = &an.equivariant;
  kin.components = &an.components;
  kin.action = &an.restricted;
  kin.centerInComponent = an.centerInComponent;
  kin.seed = spec.seed;
  an.kernel = compute_kernel(kin);

  auto& r = an.report;
  r.input = options.input;
  r.dimension = static_cast<int>(n);
  r.euclideanFactorDim = an.split.fixed_dim();
  r.boundary = an.boundary;
  r.seed = spec.seed;
  r.equivariantDim = an.equivariant.totalDim;
  r.equivariantRank = an.equivariant.rank;
  r.kernelFiniteOrder = an.kernel.componentOrder;
  r.kernelCircleDirections = static_cast<int>(an.kernel.continuousPart.size());
  r.kernelWholeFactors = static_cast<int>(an.kernel.wholeFactors.size());
  r.kernelContainsCenterOfG = an.kernel.containsCenterOfG;
  r.kernelCentral = an.kernel.central;
  if (!an.group) {
    r.density = an.space->density();
    r.distanceStep = an.space->grid_step();
  }

  for (std::size_t i = 0; i < an.equivariant.factors.size(); ++i) {
    const auto& f = an.equivariant.factors[i];
    const auto& c = an.components[f.component];
    CompactFactorEntry e;
    e.name = f.name();
    e.type = to_string(f.schurType);
    e.multiplicity = f.multiplicity;
    e.dimension = c.dimension();
    e.irreducibleDim = c.irreducibleDim;
    e.fsSum = c.fsSum;
    e.inKernel = std::find(an.kernel.wholeFactors.begin(), an.kernel.wholeFactors.end(), i) !=
                 an.kernel.wholeFactors.end();
    r.compactFactors.push_back(std::move(e));
  }

  // Rank: alive factors minus the kernel torus seen on them.
  std::vector<std::size_t> alive;
  for (std::size_t i = 0; i < an.equivariant.factors.size(); ++i)
    if (!r.compactFactors[i].inKernel) alive.push_back(i);
  const Eigen::Index m = an.split.complement_dim();
  Matrix alive_proj = Matrix::Zero(m, m);
  for (std::size_t i : alive) {
    const auto& b = an.components[an.equivariant.factors[i].component].basis;
    alive_proj += b * b.transpose();
  }
  int torus_on_alive = 0;
  std::vector<bool> circle_killed(an.equivariant.factors.size(), false);
  if (!an.kernel.continuousPart.empty()) {
    Matrix cols(m * m, static_cast<Eigen::Index>(an.kernel.continuousPart.size()));
    for (std::size_t k = 0; k < an.kernel.continuousPart.size(); ++k)
      cols.col(static_cast<Eigen::Index>(k)) = vec(alive_proj * an.kernel.continuousPart[k] * alive_proj);
    RankPolicy policy;
    policy.absolute = 1e-8;
    torus_on_alive = static_cast<int>(column_span(cols, policy, "quotient_isometry_group").cols());
    for (std::size_t i : alive) {
      const auto& b = an.components[an.equivariant.factors[i].component].basis;
      for (const auto& x : an.kernel.continuousPart) {
        const Matrix on_block = b * b.transpose() * x * b * b.transpose();
        if (max_abs(on_block) > 1e-8 && max_abs(on_block - x) <= 1e-8) circle_killed[i] = true;
      }
    }
  }
  int alive_rank = 0;
  int alive_dim = 0;
  for (std::size_t i : alive) {
    alive_rank += an.equivariant.factors[i].rank();
    alive_dim += an.equivariant.factors[i].dimension();
  }
  r.rank = alive_rank - torus_on_alive;
  const int f = r.euclideanFactorDim;
  r.quotientDim = f + f * (f - 1) / 2 + alive_dim - torus_on_alive;

  // Names.
  std::vector<std::size_t> nontrivial;
  for (std::size_t i : alive)
    if (an.equivariant.factors[i].dimension() > 0) nontrivial.push_back(i);
  const std::size_t finite_order = an.kernel.componentOrder;
  if (nontrivial.empty()) {
    r.quotientGroup = "trivial";
    r.identifiedAs = "trivial";
  } else if (nontrivial.size() == 1) {
    const std::size_t i = nontrivial.front();
    r.identifiedAs = detail::identify_single(an.equivariant.factors[i], circle_killed[i], finite_order, r.quotientGroup);
  } else {
    std::string product;
    for (std::size_t k = 0; k < nontrivial.size(); ++k)
      product += (k ? "×" : "") + an.equivariant.factors[nontrivial[k]].name();
    std::string quotient = product;
    if (torus_on_alive > 0 || finite_order > 1) {
      quotient = "(" + product + ")/K";
      if (torus_on_alive > 0) quotient += " [torus dim " + std::to_string(torus_on_alive) + "]";
      if (finite_order > 1) quotient += " [finite order " + std::to_string(finite_order) + "]";
    }
    r.quotientGroup = quotient;
    r.identifiedAs = quotient;
  }

  r.irreducible = an.components.size() == 1 && an.components.front().multiplicity == 1 && r.euclideanFactorDim == 0;
  r.theoremB = verify_theorem_B(r);
  r.theoremC = r.irreducible ? (r.rank <= 1 ? Verdict::Pass : Verdict::Fail) : Verdict::NotApplicable;

  r.notes.push_back("isotypic method: commutant-center split");
  r.notes.push_back(std::string("random generator: ") + kRngName);
  if (r.euclideanFactorDim > 0)
    r.notes.push_back("Euclidean factor Isom(F)_0 of dimension " + std::to_string(f + f * (f - 1) / 2) +
                      " (translations and rotations of F), reported symbolically");
  if (!an.group)
    r.notes.push_back("catalog quotient distances: coarse grid of " + std::to_string(an.space->sample_count()) +
                      " elements plus circle-coordinate ascent; grid step " + std::to_string(r.distanceStep) + " rad");

  // Without boundary the kernel must be exactly Z(G) ∩ Isom_G(V)₀.
  if (!an.boundary) {
    r.formulaApplied = FormulaApplied::NoBoundaryFormula;
    bool consistent = true;
    if (an.group) {
      consistent = an.kernel.finitePart.size() == an.centerInComponent.size() && an.kernel.containsCenterOfG;
    } else {
      const auto zg = group_center_algebra(an.restricted);
      consistent = zg.size() == an.kernel.continuousPart.size() + [&] {
        std::size_t d = 0;
        for (std::size_t i : an.kernel.wholeFactors) d += an.equivariant.factors[i].lieBasis.size();
        return d;
      }();
      for (const auto& z : zg) {
        Matrix residual = z;
        for (const auto& x : an.kernel.continuousPart) residual -= (z.cwiseProduct(x).sum()) * x;
        for (std::size_t i : an.kernel.wholeFactors) {
          const auto& b = an.components[an.equivariant.factors[i].component].basis;
          residual -= b * b.transpose() * residual * b * b.transpose();
        }
        if (max_abs(residual) > 1e-8) consistent = false;
      }
      r.kernelContainsCenterOfG = consistent;
    }
    if (!consistent)
      fail(ErrorKind::Internal, "quotient_isometry_group",
           "boundary-free quotient but ker(p) differs from Z(G) ∩ Isom_G(V)_0 (bug or tolerance issue)");
    r.notes.push_back("kernel: no boundary, so ker(p) = Z(G) ∩ Isom_G(V)_0 (checked against the search)");
  } else {
    r.formulaApplied = FormulaApplied::CentralKernelSearch;
    r.notes.push_back(
        "kernel method: center of the product of equivariant factors plus whole-factor probes; "
        "with boundary present this is a search, not a completeness proof");
  }
  return an;
}

inline QuotientIsometryReport quotient_isometry_group(const RepresentationSpec& spec, const AnalyzeOptions& options = {}) {
  return analyze(spec, options).report;
}

}  // namespace orbit_isom
