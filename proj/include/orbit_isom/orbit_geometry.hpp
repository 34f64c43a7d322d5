#pragma once

// The quotient metric d(Gx, Gy) = min_g ‖x − g·y‖ on V/G and its angular
// version on SV/G, boundary detection, sector angles of cohomogeneity-two
// quotients, and orbit-equivalence tests for candidate isometries.

#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "orbit_isom/catalog.hpp"
#include "orbit_isom/commutant.hpp"
#include "orbit_isom/linalg.hpp"
#include "orbit_isom/repr_model.hpp"

namespace orbit_isom {

inline constexpr int kDefaultDensity = 2048;
inline constexpr double kOrbitTrivialTol = 1e-7;

struct QuotientPoint {
  Vector representative;
  std::string contextId;
};

/// A group acting on V together with the machinery to minimize over orbits:
/// full enumeration for finite groups, or a coarse parameter grid followed by
/// exact one-dimensional maximizations along circle subgroups (a Jacobi-style
/// coordinate ascent of ⟨a, g·b⟩) for catalog actions.
class OrbitSpace {
 public:
  static OrbitSpace finite(FiniteGroupData group, std::string id = "finite") {
    OrbitSpace s;
    s.id_ = std::move(id);
    s.dimension_ = group.dimension();
    s.finite_ = std::make_shared<const FiniteGroupData>(std::move(group));
    s.stack(s.finite_->elements);
    return s;
  }

  static OrbitSpace catalog(const CatalogAction& action, int density = kDefaultDensity) {
    OrbitSpace s;
    s.id_ = "catalog:" + action.id();
    s.dimension_ = action.dimension();
    s.catalog_ = std::make_shared<const CatalogAction>(action);
    s.density_ = density;
    s.lie_ = action.lie_basis();
    s.stack(action.grid(density));
    s.step_ = action.parameter_count() == 0 ? 0.0 : 2.0 * std::numbers::pi / action.grid_resolution(density);
    return s;
  }

  const std::string& id() const { return id_; }
  int dimension() const { return dimension_; }
  bool is_finite() const { return finite_ != nullptr; }
  const FiniteGroupData& group() const { return *finite_; }
  const CatalogAction& action() const { return *catalog_; }
  int density() const { return density_; }
  /// Parameter spacing of the coarse grid (0 for finite groups).
  double grid_step() const { return step_; }
  std::size_t sample_count() const { return static_cast<std::size_t>(stacked_.rows() / std::max(dimension_, 1)); }

  QuotientPoint point(Vector v) const { return {std::move(v), id_}; }

  /// The point of the orbit G·b closest to a. With `refine` false the catalog
  /// search stops at the coarse grid.
  Vector closest_in_orbit(const Vector& a, const Vector& b, bool refine = true) const {
    const Eigen::Index n = dimension_;
    const Vector images = stacked_ * b;
    const auto count = images.size() / n;
    const Eigen::Map<const Matrix> cols(images.data(), n, count);
    const Vector scores = cols.transpose() * a;
    Eigen::Index best = 0;
    scores.maxCoeff(&best);
    if (is_finite() || !refine || lie_.empty()) {
      if (!is_finite()) return cols.col(best);
      // Exact minimum of the chordal distance (not the inner product) so norms need not match.
      double best_d = std::numeric_limits<double>::infinity();
      for (Eigen::Index k = 0; k < count; ++k) {
        const double d = (a - cols.col(k)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = k;
        }
      }
      return cols.col(best);
    }

    // Ascend from the three best grid points.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(count));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    const std::size_t starts = std::min<std::size_t>(3, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(starts), order.end(),
                      [&](Eigen::Index i, Eigen::Index j) { return scores(i) > scores(j); });
    Vector result = cols.col(order[0]);
    double result_score = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < starts; ++s) {
      Vector y = cols.col(order[s]);
      ascend(a, y);
      const double score = a.dot(y);
      if (score > result_score) {
        result_score = score;
        result = y;
      }
    }
    return result;
  }

  double distance(const Vector& a, const Vector& b, bool refine = true) const {
    return (a - closest_in_orbit(a, b, refine)).norm();
  }

 private:
  void stack(const std::vector<Matrix>& elements) {
    const Eigen::Index n = dimension_;
    stacked_.resize(static_cast<Eigen::Index>(elements.size()) * n, n);
    for (std::size_t k = 0; k < elements.size(); ++k)
      stacked_.middleRows(static_cast<Eigen::Index>(k) * n, n) = elements[k];
  }

  /// Coordinate ascent of ⟨a, y⟩ over y in the orbit. Along a circle
  /// generator X, ⟨a, exp(tX)y⟩ = c + p·sin t − q·cos t + q with p = ⟨a, Xy⟩
  /// and q = ⟨a, X²y⟩, maximized in closed form at t = atan2(p, −q).
  void ascend(const Vector& a, Vector& y) const {
    for (int sweep = 0; sweep < 2000; ++sweep) {
      double largest = 0.0;
      for (const auto& x : lie_) {
        const Vector xy = x * y;
        const Vector x2y = x * xy;
        const double p = a.dot(xy);
        const double q = a.dot(x2y);
        const double t = std::atan2(p, -q);
        if (t == 0.0) continue;
        y += std::sin(t) * xy + (1.0 - std::cos(t)) * x2y;
        largest = std::max(largest, std::abs(t));
      }
      if (largest < 1e-13) break;
    }
  }

  std::string id_;
  int dimension_ = 0;
  std::shared_ptr<const FiniteGroupData> finite_;
  std::shared_ptr<const CatalogAction> catalog_;
  std::vector<Matrix> lie_;
  Matrix stacked_;
  int density_ = 0;
  double step_ = 0.0;
};

inline void require_same_context(const OrbitSpace& space, const QuotientPoint& a, const QuotientPoint& b) {
  if (a.contextId != b.contextId || a.contextId != space.id())
    fail(ErrorKind::Validation, "quotient_distance",
         "mismatched contexts '" + a.contextId + "' / '" + b.contextId + "' for space '" + space.id() + "'");
  if (a.representative.size() != space.dimension() || b.representative.size() != space.dimension())
    fail(ErrorKind::Validation, "quotient_distance", "point dimension does not match the representation");
}

/// Quotient metric on V/G.
inline double quotient_distance(const OrbitSpace& space, const QuotientPoint& a, const QuotientPoint& b,
                                bool refine = true) {
  require_same_context(space, a, b);
  return space.distance(a.representative, b.representative, refine);
}

/// Intrinsic distance on SV/G: the smallest angle between a and the orbit of b.
inline double sphere_quotient_distance(const OrbitSpace& space, const Vector& a, const Vector& b,
                                       bool refine = true) {
  if (std::abs(a.norm() - 1.0) > 1e-9 || std::abs(b.norm() - 1.0) > 1e-9)
    fail(ErrorKind::Validation, "sphere_quotient_distance", "inputs must be unit vectors");
  if (a.size() != space.dimension() || b.size() != space.dimension())
    fail(ErrorKind::Validation, "sphere_quotient_distance", "point dimension does not match the representation");
  const double chord = space.distance(a, b, refine);
  return 2.0 * std::asin(std::min(1.0, chord / 2.0));
}

/// g is a hyperplane reflection: g − I has rank one.
inline bool is_reflection(const Matrix& g) {
  const Matrix d = g - Matrix::Identity(g.rows(), g.cols());
  Eigen::JacobiSVD<Matrix> svd(d);
  const Vector& s = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > 1e-6) ++rank;
  return rank == 1;
}

inline bool has_boundary(const FiniteGroupData& group) {
  for (const auto& g : group.elements)
    if (is_reflection(g)) return true;
  return false;
}

inline bool has_boundary(const CatalogAction& action) { return action.metadata().hasBoundary; }

inline bool has_boundary(const OrbitSpace& space) {
  return space.is_finite() ? has_boundary(space.group()) : has_boundary(space.action());
}

/// A point with trivial isotropy: for finite groups, resampled until every
/// nonidentity element moves it by at least 1e-4.
inline Vector generic_point(const OrbitSpace& space, Rng& rng) {
  while (true) {
    Vector x = random_unit_vector(rng, space.dimension());
    if (!space.is_finite()) return x;
    bool generic = true;
    const auto& elems = space.group().elements;
    for (std::size_t k = 0; k < elems.size() && generic; ++k) {
      if (k == space.group().identityIndex) continue;
      if ((elems[k] * x - x).norm() < 1e-4) generic = false;
    }
    if (generic) return x;
  }
}

/// True iff the candidate maps every sampled generic point into its own
/// orbit, i.e. acts trivially on V/G. Distances between 1e-7 and 1e-6 are
/// ambiguous and abort.
inline bool orbit_equivalence_test(const OrbitSpace& space, const Matrix& candidate, int sampleCount,
                                   std::uint64_t seed) {
  if (orthogonality_residual(candidate) > 1e-9)
    fail(ErrorKind::Validation, "orbit_equivalence_test", "candidate is not orthogonal");
  Rng rng = stage_rng(seed, 0x0e0e);
  for (int k = 0; k < sampleCount; ++k) {
    const Vector x = generic_point(space, rng);
    const double d = space.distance(candidate * x, x);
    if (d > 10.0 * kOrbitTrivialTol) return false;
    if (d > kOrbitTrivialTol) {
      std::ostringstream msg;
      msg << "orbit distance " << d << " inside guard band (1e-7, 1e-6]";
      fail(ErrorKind::Ambiguous, "orbit_equivalence_test", msg.str());
    }
  }
  return true;
}

struct SectorEstimate {
  /// Largest sampled distance before refinement.
  double raw = 0.0;
  /// After local refinement of the best pair; never below `raw`.
  double refined = 0.0;
  std::size_t evaluations = 0;
};

/// Diameter of SV/G (the angle of the planar sector) as the maximum of the
/// quotient distance over sampled unit-vector pairs, followed by a
/// shrinking-step hill climb from the best pair.
inline SectorEstimate sector_angle_search(const CatalogAction& action, int sampleCount, std::uint64_t seed,
                                          int density = kDefaultDensity, bool refine = true) {
  if (action.metadata().cohomogeneity != 2)
    fail(ErrorKind::Validation, "sector_angle_estimate", "action " + action.id() + " is not of cohomogeneity two");
  const OrbitSpace space = OrbitSpace::catalog(action, density);
  const Eigen::Index n = action.dimension();
  Rng rng = stage_rng(seed, 0x5ec7);

  SectorEstimate out;
  Vector best_a, best_b;
  double best = -1.0;
  for (int k = 0; k < sampleCount; ++k) {
    Vector a = random_unit_vector(rng, n);
    Vector b = random_unit_vector(rng, n);
    const double d = sphere_quotient_distance(space, a, b);
    ++out.evaluations;
    if (d > best) {
      best = d;
      best_a = std::move(a);
      best_b = std::move(b);
    }
  }
  out.raw = std::max(best, 0.0);
  out.refined = out.raw;
  if (!refine || sampleCount == 0) return out;

  Rng walk = stage_rng(seed, 0x5ec8);
  double step = 0.25;
  int failures = 0;
  std::size_t trial = 0;
  while (step > 1e-7 && trial < 40000) {
    Vector& moving = (trial++ % 2 == 0) ? best_a : best_b;
    const Vector saved = moving;
    Vector proposal = moving + step * gaussian_vector(walk, n);
    moving = proposal / proposal.norm();
    const double d = sphere_quotient_distance(space, best_a, best_b);
    ++out.evaluations;
    if (d > best) {
      best = d;
      failures = 0;
    } else {
      moving = saved;
      if (++failures >= 30) {
        step *= 0.5;
        failures = 0;
      }
    }
  }
  out.refined = best;
  return out;
}

inline double sector_angle_estimate(const CatalogAction& action, int sampleCount, std::uint64_t seed) {
  return sector_angle_search(action, sampleCount, seed).refined;
}

}  // namespace orbit_isom
