#include <gtest/gtest.h>

#include <numbers>

#include "orbit_isom/fixtures.hpp"
#include "orbit_isom/isom_quotient.hpp"
#include "orbit_isom/lift_verify.hpp"
#include "oracles.hpp"

using namespace orbit_isom;
using std::numbers::pi;

TEST(HopfMap, InvariantUnderTheCircle) {
  const Matrix j = hopf_action().lie_basis()[0];
  Rng rng(1);
  std::uniform_real_distribution<double> angle(0, 2 * pi);
  for (int k = 0; k < 100; ++k) {
    const Vector x = gaussian_vector(rng, 4);
    EXPECT_LE((hopf_map(circle_exp(j, angle(rng)) * x) - hopf_map(x)).norm(), 1e-12);
  }
}

TEST(HopfMap, NormIsHalfSquaredNorm) {
  Rng rng(2);
  for (int k = 0; k < 100; ++k) {
    const Vector x = gaussian_vector(rng, 4);
    EXPECT_NEAR(hopf_map(x).norm(), 0.5 * x.squaredNorm(), 1e-12);
  }
}

TEST(HopfMap, ComplexFormula) {
  // h(z, w) = (Re(z w̄), Im(z w̄), (|z|² − |w|²)/2) computed with std::complex.
  Rng rng(3);
  for (int k = 0; k < 20; ++k) {
    const Vector x = gaussian_vector(rng, 4);
    const std::complex<double> z(x(0), x(1)), w(x(2), x(3));
    const auto zw = z * std::conj(w);
    const Eigen::Vector3d ref(zw.real(), zw.imag(), 0.5 * (std::norm(z) - std::norm(w)));
    EXPECT_LE((hopf_map(x) - ref).norm(), 1e-14);
  }
}

TEST(Lift, Identity) {
  const auto w = lift_rotation(Eigen::Matrix3d::Identity());
  EXPECT_TRUE(oracle::close(w.lift, Matrix::Identity(4, 4), 1e-15) || oracle::close(w.lift, -Matrix::Identity(4, 4), 1e-15));
  EXPECT_LE(w.residual, 1e-15);
}

TEST(Lift, HalfTurnAboutZ) {
  const Eigen::Matrix3d r = Eigen::AngleAxisd(pi, Eigen::Vector3d::UnitZ()).toRotationMatrix();
  const auto w = lift_rotation(r);
  EXPECT_LE(w.residual, 1e-9);
  // The lift is ±diag(i, −i) on C², i.e. J on the z-plane and −J on the w-plane.
  const Matrix j = hopf_action().lie_basis()[0].topLeftCorner(2, 2);
  const Matrix ref = block_diag({j, Matrix(-j)});
  EXPECT_TRUE(oracle::close(w.lift, ref, 1e-12) || oracle::close(w.lift, -ref, 1e-12));
}

TEST(Lift, RandomRotationsEquivariantAndAccurate) {
  Rng rng(20);
  const Matrix j = hopf_action().lie_basis()[0];
  for (int k = 0; k < 50; ++k) {
    const auto w = lift_rotation(random_rotation3(rng), 100, static_cast<std::uint64_t>(k));
    EXPECT_LE(w.residual, 1e-8);
    EXPECT_LE(commutator_residual(w.lift, j), 1e-9);
    EXPECT_LE(orthogonality_residual(w.lift), 1e-12);
  }
}

TEST(Lift, DoubleCoverHomomorphism) {
  Rng rng(21);
  for (int k = 0; k < 20; ++k) {
    const Eigen::Matrix3d r1 = random_rotation3(rng), r2 = random_rotation3(rng);
    const Matrix l = lift_rotation(r1 * r2).lift;
    const Matrix p = lift_rotation(r1).lift * lift_rotation(r2).lift;
    EXPECT_LE(std::min(max_abs(l - p), max_abs(l + p)), 1e-8);
  }
}

TEST(Lift, NearTraceMinusOne) {
  // Half turns about random axes sit on the trace = −1 singularity of the naive formula.
  Rng rng(22);
  for (int k = 0; k < 20; ++k) {
    const Vector axis = random_unit_vector(rng, 3);
    const Eigen::Matrix3d r = Eigen::AngleAxisd(pi - 1e-12 * k, Eigen::Vector3d(axis(0), axis(1), axis(2))).toRotationMatrix();
    EXPECT_LE(lift_rotation(r).residual, 1e-9);
  }
}

TEST(Lift, ReflectionRejected) {
  try {
    lift_rotation(Eigen::Vector3d(1, 1, -1).asDiagonal().toDenseMatrix());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Validation);
  }
}

TEST(HopfMetric, AntipodalFibers) {
  const auto s = OrbitSpace::catalog(hopf_action(), 4096);
  Vector a = Vector::Zero(4), b = Vector::Zero(4);
  a(0) = 1;
  b(2) = 1;
  EXPECT_NEAR(hopf_map(a)(2), 0.5, 1e-15);
  EXPECT_NEAR(hopf_map(b)(2), -0.5, 1e-15);
  EXPECT_NEAR(sphere_quotient_distance(s, a, b), pi / 2, 1e-12);
  EXPECT_NEAR(hopf_sphere_distance(a, b), pi / 2, 1e-12);
  EXPECT_EQ(hopf_sphere_distance(a, a), 0.0);
}

TEST(HopfMetric, ResidualBoundAndConvergence) {
  const double r2048 = verify_hopf_metric(100, 5, 2048);
  const double r4096 = verify_hopf_metric(100, 5, 4096);
  EXPECT_LE(r4096, 1e-3);
  EXPECT_LT(r4096, r2048);
}

TEST(Descend, Examples) {
  const auto c5 = OrbitSpace::finite(enumerate_group(find_fixture("c5")->spec), "c5");
  EXPECT_EQ(descend_check(Matrix::Identity(2, 2), c5, 50, 1), 0.0);
  EXPECT_LE(descend_check(rotation2(1.234), c5, 100, 1), 1e-10);
  EXPECT_THROW(descend_check(Matrix(Eigen::Vector2d(1, -1).asDiagonal()), c5, 10, 1), Error);

  const auto an = analyze(find_fixture("pm_r4")->spec);
  const Matrix x = sample_equivariant_isometry(an.equivariant, 0.7, 17);
  EXPECT_LE(descend_check(x, *an.space, 100, 2), 1e-8);
}

TEST(Descend, AllFiniteFixtures) {
  for (const auto& fx : finite_fixtures()) {
    const auto an = analyze(fx.spec);
    const Matrix x = sample_equivariant_isometry(an.equivariant, 1.1, 31);
    EXPECT_LE(descend_check(x, *an.space, 100, 3), 1e-8) << fx.name;
  }
}

TEST(Normalizer, Examples) {
  const auto g = enumerate_group(find_fixture("c5")->spec);
  for (const auto& e : g.elements) EXPECT_TRUE(normalizer_check(g, e));
  EXPECT_TRUE(normalizer_check(g, rotation2(0.4321)));
  EXPECT_TRUE(normalizer_check(g, Matrix(Eigen::Vector2d(1, -1).asDiagonal())));
  const auto d4 = enumerate_group(find_fixture("d4")->spec);
  EXPECT_FALSE(normalizer_check(d4, rotation2(0.3)));
  EXPECT_TRUE(normalizer_check(d4, rotation2(pi / 4)));
}

TEST(NonLift, Demo) {
  const auto product = non_lift_demo(std::string(kProductId), 2000, 1);
  EXPECT_NEAR(product.angle, pi / 2, 0.01);
  EXPECT_NE(product.obstruction.find("2-sphere"), std::string::npos);
  EXPECT_NE(product.obstruction.find("circle"), std::string::npos);
  EXPECT_NE(product.text().find("sector angle"), std::string::npos);
  EXPECT_THROW(non_lift_demo("nope"), Error);
  EXPECT_THROW(non_lift_demo(std::string(kHopfId)), Error);
}
