#include <gtest/gtest.h>

#include <numbers>

#include "orbit_isom/commutant.hpp"
#include "orbit_isom/fixtures.hpp"
#include "orbit_isom/orbit_geometry.hpp"
#include "oracles.hpp"

using namespace orbit_isom;
using std::numbers::pi;

namespace {

OrbitSpace space_of(const char* fixture) {
  return OrbitSpace::finite(enumerate_group(find_fixture(fixture)->spec), fixture);
}

Vector vec2(double a, double b) { return (Vector(2) << a, b).finished(); }

Vector unit(Eigen::Index n, Eigen::Index i) {
  Vector v = Vector::Zero(n);
  v(i) = 1.0;
  return v;
}

}  // namespace

TEST(QuotientDistance, SameOrbitUnderMinusIdentity) {
  const auto s = space_of("pm_r2");
  EXPECT_EQ(quotient_distance(s, s.point(vec2(1, 0)), s.point(vec2(-1, 0))), 0.0);
}

TEST(QuotientDistance, C4HandOracle) {
  const auto s = space_of("c4");
  const Vector b = vec2(std::cos(pi / 8), std::sin(pi / 8));
  double ref = 1e9;
  for (int k = 0; k < 4; ++k) ref = std::min(ref, (vec2(1, 0) - oracle::rot(k * pi / 2) * b).norm());
  const double d = quotient_distance(s, s.point(vec2(1, 0)), s.point(b));
  EXPECT_NEAR(d, ref, 1e-14);
  EXPECT_NEAR(d, 2 * std::sin(pi / 16), 1e-12);
  EXPECT_NEAR(d, 0.390181, 1e-6);
}

TEST(QuotientDistance, HopfAntipodalFibers) {
  const auto s = OrbitSpace::catalog(hopf_action());
  EXPECT_NEAR(quotient_distance(s, s.point(unit(4, 0)), s.point(unit(4, 2))), std::sqrt(2.0), 1e-12);
}

TEST(QuotientDistance, HopfAgreesWithDenseCircleSampling) {
  const auto s = OrbitSpace::catalog(hopf_action());
  const Matrix j = hopf_action().lie_basis()[0];
  Rng rng(4);
  for (int k = 0; k < 10; ++k) {
    const Vector a = random_unit_vector(rng, 4), b = random_unit_vector(rng, 4);
    double ref = 1e9;
    for (int t = 0; t < 100000; ++t) ref = std::min(ref, (a - circle_exp(j, 2 * pi * t / 100000) * b).norm());
    const double d = s.distance(a, b);
    EXPECT_LE(d, ref + 1e-12);
    EXPECT_NEAR(d, ref, 1e-8);
  }
}

TEST(QuotientDistance, MismatchedContexts) {
  const auto s = space_of("c4");
  const auto t = space_of("c5");
  try {
    quotient_distance(s, s.point(vec2(1, 0)), t.point(vec2(0, 1)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Validation);
  }
}

TEST(QuotientDistance, PseudometricOnSampledTriples) {
  for (const char* name : {"d4", "q8", "c3xd4_r4", "s3_perm_r3"}) {
    const auto s = space_of(name);
    Rng rng(9);
    for (int k = 0; k < 100; ++k) {
      const Vector x = gaussian_vector(rng, s.dimension()), y = gaussian_vector(rng, s.dimension()),
                   z = gaussian_vector(rng, s.dimension());
      const double xy = s.distance(x, y), yx = s.distance(y, x), yz = s.distance(y, z), xz = s.distance(x, z);
      EXPECT_NEAR(xy, yx, 1e-12) << name;
      EXPECT_LE(xz, xy + yz + 1e-9) << name;
    }
  }
}

TEST(QuotientDistance, GroupElementsAreInvisible) {
  for (const auto& fx : finite_fixtures()) {
    const auto g = enumerate_group(fx.spec);
    const auto s = OrbitSpace::finite(g, fx.name);
    Rng rng(3);
    const Vector x = gaussian_vector(rng, s.dimension());
    for (const auto& e : g.elements) EXPECT_LE(s.distance(x, e * x), 1e-12) << fx.name;
  }
}

TEST(QuotientDistance, EquivariantIsometriesPreserveIt) {
  for (const char* name : {"c5", "pm_r4", "q8", "c3xd4_r4"}) {
    const auto spec = find_fixture(name)->spec;
    const auto g = enumerate_group(spec);
    const auto split = fixed_subspace(spec);
    const auto action = action_from_group(g).restricted(split.complementBasis);
    std::vector<IsotypicComponent> comps;
    for (const auto& p : isotypic_split(commutant_basis(action), action, 1)) comps.push_back(classify_component(p.basis, action));
    const auto eq = equivariant_isometry_group(comps, action, split);
    const auto s = OrbitSpace::finite(g, name);
    const Matrix x = sample_equivariant_isometry(eq, 0.9, 4);
    Rng rng(12);
    for (int k = 0; k < 100; ++k) {
      const Vector a = gaussian_vector(rng, s.dimension()), b = gaussian_vector(rng, s.dimension());
      EXPECT_NEAR(s.distance(x * a, x * b), s.distance(a, b), 1e-8) << name;
    }
  }
}

TEST(SphereDistance, TrivialGroup) {
  const auto s = OrbitSpace::finite(enumerate_group(find_fixture("trivial_r3")->spec), "t");
  EXPECT_EQ(sphere_quotient_distance(s, unit(3, 0), unit(3, 0)), 0.0);
  EXPECT_NEAR(sphere_quotient_distance(s, unit(3, 0), -unit(3, 0)), pi, 1e-12);
  EXPECT_THROW(sphere_quotient_distance(s, 2 * unit(3, 0), unit(3, 1)), Error);
}

TEST(SphereDistance, ProductActionBoundaryRays) {
  const auto s = OrbitSpace::catalog(product_action());
  Rng rng(6);
  for (int k = 0; k < 5; ++k) {
    Vector a = Vector::Zero(5), b = Vector::Zero(5);
    a.head(2) = random_unit_vector(rng, 2);
    b.tail(3) = random_unit_vector(rng, 3);
    EXPECT_NEAR(sphere_quotient_distance(s, a, b), pi / 2, 1e-9);
  }
}

TEST(Boundary, FiniteGroups) {
  for (int m = 2; m <= 8; ++m)
    EXPECT_FALSE(has_boundary(enumerate_group(make_finite_spec({rotation2(2 * pi / m)})))) << m;
  EXPECT_TRUE(has_boundary(enumerate_group(find_fixture("d4")->spec)));
  for (int m = 3; m <= 6; ++m)
    EXPECT_TRUE(has_boundary(enumerate_group(make_finite_spec({rotation2(2 * pi / m), Matrix(Eigen::Vector2d(1, -1).asDiagonal())}))));
  EXPECT_FALSE(has_boundary(enumerate_group(find_fixture("q8")->spec)));
  EXPECT_TRUE(has_boundary(enumerate_group(find_fixture("s3_perm_r3")->spec)));
  EXPECT_TRUE(has_boundary(enumerate_group(make_finite_spec({-Matrix::Identity(1, 1)}))));
  EXPECT_FALSE(has_boundary(enumerate_group(find_fixture("pm_r2")->spec)));
}

TEST(Boundary, CatalogMetadata) {
  EXPECT_FALSE(has_boundary(hopf_action()));
  EXPECT_TRUE(has_boundary(product_action()));
  EXPECT_TRUE(has_boundary(tensor_action()));
}

TEST(OrbitEquivalence, Examples) {
  const auto c5 = space_of("c5");
  for (const auto& e : c5.group().elements) EXPECT_TRUE(orbit_equivalence_test(c5, e, 8, 1));
  EXPECT_FALSE(orbit_equivalence_test(c5, rotation2(0.3), 8, 1));

  const auto pm = space_of("pm_r4");
  Matrix a = Matrix::Zero(4, 4);
  a(0, 1) = 1;
  a(1, 0) = -1;
  a(2, 3) = 0.5;
  a(3, 2) = -0.5;
  const Matrix r = expm(0.2 * a);
  EXPECT_FALSE(orbit_equivalence_test(pm, r, 8, 1));
  // Oracle: the minimum over ±I directly.
  Rng rng(2);
  const Vector x = random_unit_vector(rng, 4);
  EXPECT_GT(std::min((r * x - x).norm(), (r * x + x).norm()), 1e-3);

  const auto hopf = OrbitSpace::catalog(hopf_action());
  EXPECT_TRUE(orbit_equivalence_test(hopf, circle_exp(hopf_action().lie_basis()[0], 0.77), 8, 1));
  EXPECT_THROW(orbit_equivalence_test(c5, 2 * Matrix::Identity(2, 2), 8, 1), Error);
}

TEST(Sector, AnglesAndMonotonicity) {
  EXPECT_NEAR(sector_angle_estimate(product_action(), 2000, 1), pi / 2, 0.01);
  EXPECT_NEAR(sector_angle_estimate(trivial_plane_action(), 200, 1), pi, 1e-6);
  // Same seed, growing sample count: the first k pairs are shared, so the raw maximum can only grow.
  double previous = 0.0;
  for (int n : {10, 40, 160, 640}) {
    const auto est = sector_angle_search(product_action(), n, 77, kDefaultDensity, false);
    EXPECT_GE(est.raw, previous);
    previous = est.raw;
  }
  const auto est = sector_angle_search(product_action(), 200, 77);
  EXPECT_GE(est.refined, est.raw);
  EXPECT_THROW(sector_angle_estimate(hopf_action(), 10, 1), Error);
}

TEST(Catalog, SampledElementsOrthogonal) {
  for (const auto& id : catalog_ids()) {
    const auto a = *find_catalog_action(id);
    for (const auto& g : a.grid(256)) EXPECT_LE(orthogonality_residual(g), 1e-9) << id;
  }
  EXPECT_EQ(hopf_action().grid(2048).size(), 2048u);
}

TEST(Catalog, HaarQuadratureIntegratesCharacters) {
  // ∫ trace(g) over SO(3) in its defining representation is 0; the weights sum to 1.
  std::vector<Matrix> nodes;
  std::vector<double> w;
  product_action().haar_quadrature(6, nodes, w);
  double total = 0, trace3 = 0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    total += w[k];
    trace3 += w[k] * nodes[k].bottomRightCorner(3, 3).trace();
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_NEAR(trace3, 0.0, 1e-12);
}
