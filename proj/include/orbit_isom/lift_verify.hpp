#pragma once

// Numerical witnesses for the lifting statement: equivariant isometries
// descend (distance preservation), the Hopf quotient S³/U(1) is the sphere
// of radius 1/2 and every rotation of it lifts to U(2), normalizer checks
// for finite groups, and the sector reflections that do not lift.

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <string>

#include <Eigen/Geometry>

#include "orbit_isom/catalog.hpp"
#include "orbit_isom/commutant.hpp"
#include "orbit_isom/linalg.hpp"
#include "orbit_isom/orbit_geometry.hpp"
#include "orbit_isom/repr_model.hpp"

namespace orbit_isom {

/// h(z, w) = (Re(z·w̄), Im(z·w̄), (|z|² − |w|²)/2) with z = x1 + i·x2, w = x3 + i·x4.
inline Eigen::Vector3d hopf_map(const Vector& x) {
  return {x(0) * x(2) + x(1) * x(3), x(1) * x(2) - x(0) * x(3),
          0.5 * (x(0) * x(0) + x(1) * x(1) - x(2) * x(2) - x(3) * x(3))};
}

/// Angle between h(a) and h(b), halved: the distance on the sphere of radius 1/2.
inline double hopf_sphere_distance(const Vector& a, const Vector& b) {
  const Eigen::Vector3d ha = hopf_map(a), hb = hopf_map(b);
  const double c = ha.dot(hb) / (ha.norm() * hb.norm());
  return 0.5 * std::acos(std::clamp(c, -1.0, 1.0));
}

struct LiftWitness {
  Eigen::Matrix3d quotientIsometry;
  Matrix lift;
  double residual = 0.0;
};

/// Real 4×4 form of a complex 2×2 matrix acting on (Re z, Im z, Re w, Im w).
inline Matrix realify(const Eigen::Matrix2cd& u) {
  Matrix out(4, 4);
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) {
      const auto c = u(k, l);
      out.block(2 * k, 2 * l, 2, 2) << c.real(), -c.imag(), c.imag(), c.real();
    }
  return out;
}

/// Lift of a rotation of h(S³) to U(2). h is the spin-½ Bloch vector up to
/// D = diag(1, −1, 1), so the SU(2) element of D·R·D does the job.
inline LiftWitness lift_rotation(const Eigen::Matrix3d& r, int sampleCount = 100, std::uint64_t seed = kDefaultSeed) {
  const std::string stage = "lift_rotation";
  if ((r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-9)
    fail(ErrorKind::Validation, stage, "matrix is not orthogonal");
  if (r.determinant() < 0.0)
    fail(ErrorKind::Validation, stage, "det R = −1: orientation-reversing, no lift in the identity component");
  const Eigen::Matrix3d d = Eigen::Vector3d(1.0, -1.0, 1.0).asDiagonal();
  // Eigen's quaternion-from-matrix takes the largest-pivot branch.
  const Eigen::Quaterniond q(Eigen::Matrix3d(d * r * d));
  using C = std::complex<double>;
  const C i(0.0, 1.0);
  Eigen::Matrix2cd u;
  u << C(q.w(), 0.0) - i * q.z(), -i * q.x() - q.y(), -i * q.x() + q.y(), C(q.w(), 0.0) + i * q.z();

  LiftWitness w;
  w.quotientIsometry = r;
  w.lift = realify(u);
  Rng rng = stage_rng(seed, 0x11f7);
  for (int k = 0; k < sampleCount; ++k) {
    const Vector x = random_unit_vector(rng, 4);
    w.residual = std::max(w.residual, (hopf_map(w.lift * x) - r * hopf_map(x)).norm());
  }
  return w;
}

/// Largest change of the quotient distance under X over sampled pairs.
inline double descend_check(const Matrix& x, const OrbitSpace& space, int sampleCount, std::uint64_t seed) {
  const std::string stage = "descend_check";
  const auto generators = space.is_finite() ? space.group().generators : space.action().lie_basis();
  for (const auto& g : generators)
    if (commutator_residual(x, g) > 1e-8) fail(ErrorKind::Validation, stage, "X is not G-equivariant");
  Rng rng = stage_rng(seed, 0xde5c);
  double worst = 0.0;
  for (int k = 0; k < sampleCount; ++k) {
    const Vector a = gaussian_vector(rng, space.dimension());
    const Vector b = gaussian_vector(rng, space.dimension());
    worst = std::max(worst, std::abs(space.distance(x * a, x * b) - space.distance(a, b)));
  }
  return worst;
}

/// Max over sampled unit pairs of |d_{SV/G}(a, b) − ½·∠(h(a), h(b))|, with the
/// quotient distance taken on the bare grid of m circle elements.
inline double verify_hopf_metric(int sampleCount, std::uint64_t seed, int density = 4096) {
  const OrbitSpace space = OrbitSpace::catalog(hopf_action(), density);
  Rng rng = stage_rng(seed, 0x4091);
  double worst = 0.0;
  for (int k = 0; k < sampleCount; ++k) {
    const Vector a = random_unit_vector(rng, 4);
    const Vector b = random_unit_vector(rng, 4);
    worst = std::max(worst, std::abs(sphere_quotient_distance(space, a, b, false) - hopf_sphere_distance(a, b)));
  }
  return worst;
}

/// f·g·f⁻¹ ∈ G for every g.
inline bool normalizer_check(const FiniteGroupData& group, const Matrix& f) {
  if (orthogonality_residual(f) > 1e-9) fail(ErrorKind::Validation, "normalizer_check", "f is not orthogonal");
  for (const auto& g : group.elements)
    if (!find_element(group, f * g * f.transpose())) return false;
  return true;
}

struct NonLiftReport {
  std::string id;
  double angle = 0.0;
  double expectedAngle = 0.0;
  std::string reflection;
  std::string obstruction;
  std::string isotropy;

  std::string text() const {
    std::ostringstream out;
    out.precision(6);
    out << id << ": sector angle " << std::fixed << angle << " (expected " << expectedAngle << ")\n"
        << "  " << reflection << "\n"
        << "  obstruction: " << obstruction << "\n"
        << "  isotropy: " << isotropy << "\n";
    return out.str();
  }
};

inline NonLiftReport non_lift_demo(const std::string& id, int sampleCount = 5000, std::uint64_t seed = kDefaultSeed) {
  if (id != kProductId && id != kTensorId)
    fail(ErrorKind::Validation, "non_lift_demo", "unknown or unsupported action id '" + id + "'");
  const CatalogAction action = *find_catalog_action(id);
  NonLiftReport rep;
  rep.id = id;
  rep.angle = sector_angle_estimate(action, sampleCount, seed);
  rep.expectedAngle = *action.metadata().expectedSectorAngle;
  rep.reflection =
      "the reflection across the bisecting ray is an isometry of the sector swapping its two boundary rays";
  rep.obstruction = action.metadata().obstruction;
  rep.isotropy = action.metadata().singularIsotropyNote;
  return rep;
}

}  // namespace orbit_isom
