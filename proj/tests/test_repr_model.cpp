#include <gtest/gtest.h>

#include <numbers>

#include "orbit_isom/fixtures.hpp"
#include "orbit_isom/repr_model.hpp"
#include "oracles.hpp"

using namespace orbit_isom;
using std::numbers::pi;

namespace {

nlohmann::json finite_doc(const std::vector<std::vector<std::vector<std::string>>>& gens, int dim) {
  return {{"dimension", dim}, {"kind", "finite"}, {"generators", gens}};
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::Internal;
}

}  // namespace

TEST(ParseSpec, SignRepresentation) {
  const auto spec = parse_spec(finite_doc({{{"-1"}}}, 1));
  EXPECT_EQ(spec.dimension, 1);
  ASSERT_EQ(spec.generators.size(), 1u);
  EXPECT_EQ(spec.generators[0](0, 0), -1.0);
  EXPECT_EQ(spec.seed, kDefaultSeed);
  EXPECT_EQ(spec.groupSizeCap, 20000u);
}

TEST(ParseSpec, DecimalStringsAtFullPrecision) {
  const auto spec = parse_spec(finite_doc({{{"0.30901699437494745", "-0.9510565162951535"},
                                            {"0.9510565162951535", "0.30901699437494745"}}},
                                          2));
  const Matrix& g = spec.generators[0];
  EXPECT_LT((g.transpose() * g - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(g(0, 0), std::cos(2 * pi / 5), 1e-16);
}

TEST(ParseSpec, ShearRejectedWithResidual) {
  try {
    parse_spec(finite_doc({{{"1", "1"}, {"0", "1"}}}, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Validation);
    EXPECT_NE(std::string(e.what()).find("not orthogonal"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("= 1"), std::string::npos);  // max residual of the shear is 1
  }
}

TEST(ParseSpec, StructuralErrors) {
  EXPECT_EQ(kind_of([] { parse_spec(finite_doc({{{"1", "0"}, {"0"}}}, 2)); }), ErrorKind::Validation);
  EXPECT_EQ(kind_of([] { parse_spec(finite_doc({{{"1"}}}, 2)); }), ErrorKind::Validation);
  EXPECT_EQ(kind_of([] { parse_spec(std::string("{not json")); }), ErrorKind::Validation);
  EXPECT_EQ(kind_of([] { parse_spec(finite_doc({}, 2)); }), ErrorKind::Validation);
  EXPECT_EQ(kind_of([] { parse_spec(finite_doc({{{"x1"}}}, 1)); }), ErrorKind::Validation);
  EXPECT_EQ(kind_of([] { parse_spec(nlohmann::json{{"dimension", 4}, {"kind", "catalog:nope"}}); }),
            ErrorKind::Validation);
  EXPECT_EQ(kind_of([] { parse_spec(nlohmann::json{{"dimension", 3}, {"kind", "catalog:hopf-u1-r4"}}); }),
            ErrorKind::Validation);
}

TEST(ParseSpec, RoundTrip) {
  const auto spec = find_fixture("q8")->spec;
  const auto again = parse_spec(spec_to_json(spec));
  for (std::size_t k = 0; k < spec.generators.size(); ++k) EXPECT_EQ(spec.generators[k], again.generators[k]);
}

TEST(EnumerateGroup, CyclicThree) {
  const auto g = enumerate_group(make_finite_spec({rotation2(2 * pi / 3)}));
  EXPECT_EQ(g.order(), 3u);
  EXPECT_TRUE(g.cayleyClosed);
  EXPECT_EQ(g.elements[g.identityIndex], Matrix::Identity(2, 2));
}

TEST(EnumerateGroup, DihedralMatchesNaiveClosure) {
  const auto spec = find_fixture("d4")->spec;
  const auto g = enumerate_group(spec);
  const auto ref = oracle::naive_closure(spec.generators);
  EXPECT_EQ(g.order(), 8u);
  EXPECT_EQ(ref.size(), 8u);
  for (const auto& m : ref) EXPECT_TRUE(find_element(g, m));
}

TEST(EnumerateGroup, OrdersOfAllFixturesAgreeWithNaiveClosure) {
  for (const auto& fx : finite_fixtures()) {
    const auto g = enumerate_group(fx.spec);
    EXPECT_EQ(g.order(), oracle::naive_closure(fx.spec.generators).size()) << fx.name;
  }
}

TEST(EnumerateGroup, IrrationalRotationExceedsCap) {
  auto spec = make_finite_spec({rotation2(1.0)});
  spec.groupSizeCap = 500;
  try {
    enumerate_group(spec);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Validation);
    EXPECT_NE(std::string(e.what()).find("groupSizeCap"), std::string::npos);
  }
}

TEST(EnumerateGroup, DedupAmbiguityDetected) {
  MatrixIndex index;
  std::vector<Matrix> store{Matrix::Identity(2, 2)};
  index.insert(store[0], 0);
  Matrix near = Matrix::Identity(2, 2);
  near(0, 1) = 5e-8;
  EXPECT_TRUE(index.find(near, store).ambiguous);
  EXPECT_FALSE(index.find(near, store).match);
  near(0, 1) = 5e-9;
  EXPECT_TRUE(index.find(near, store).match);

  // A rotation by 5e-8 sits inside the guard band around the identity.
  EXPECT_EQ(kind_of([] { close_generators({rotation2(5e-8)}, 100); }), ErrorKind::Ambiguous);
}

TEST(EnumerateGroup, IndexFindsEntriesAcrossGridBoundary) {
  MatrixIndex index;
  Matrix a = Matrix::Identity(2, 2);
  a(0, 1) = 0.4999999e-6;  // just below a rounding boundary of the 1e-6 grid
  std::vector<Matrix> store{a};
  index.insert(a, 0);
  Matrix b = a;
  b(0, 1) = 0.5000001e-6;  // rounds the other way, 2e-13 apart
  EXPECT_TRUE(index.find(b, store).match);
}

TEST(EnumerateGroup, InvariantsOnRandomPairs) {
  const auto g = enumerate_group(find_fixture("c3xd4_r4")->spec);
  Rng rng(11);
  std::uniform_int_distribution<std::size_t> pick(0, g.order() - 1);
  for (const auto& e : g.elements) EXPECT_LE(orthogonality_residual(e), 1e-8);
  for (int k = 0; k < 200; ++k) EXPECT_TRUE(find_element(g, g.elements[pick(rng)] * g.elements[pick(rng)]));
  for (std::size_t i = 0; i < g.order(); ++i)
    for (std::size_t j = i + 1; j < g.order(); ++j) EXPECT_GT(max_abs(g.elements[i] - g.elements[j]), 1e-8);
}

TEST(EnumerateGroup, DeterministicOrder) {
  const auto a = enumerate_group(find_fixture("q8")->spec);
  const auto b = enumerate_group(find_fixture("q8")->spec);
  ASSERT_EQ(a.order(), b.order());
  for (std::size_t i = 0; i < a.order(); ++i) EXPECT_EQ(a.elements[i], b.elements[i]);
}

TEST(FixedSubspace, TrivialGroup) {
  const auto s = fixed_subspace(find_fixture("trivial_r3")->spec);
  EXPECT_EQ(s.fixed_dim(), 3);
  EXPECT_EQ(s.complement_dim(), 0);
}

TEST(FixedSubspace, MinusIdentity) {
  const auto s = fixed_subspace(find_fixture("pm_r2")->spec);
  EXPECT_EQ(s.fixed_dim(), 0);
  EXPECT_EQ(s.complement_dim(), 2);
}

TEST(FixedSubspace, RotationPlusLine) {
  const auto spec = find_fixture("rot3_plus_1_r3")->spec;
  const auto s = fixed_subspace(spec);
  ASSERT_EQ(s.fixed_dim(), 1);
  // Direct solve: (g − I) v = 0 has the solution e3.
  EXPECT_NEAR(std::abs(s.fixedBasis(2, 0)), 1.0, 1e-12);
  EXPECT_LT((spec.generators[0] * s.fixedBasis - s.fixedBasis).norm(), 1e-12);
  EXPECT_LT((s.fixedBasis.transpose() * s.complementBasis).norm(), 1e-12);
}

TEST(FixedSubspace, RestrictionIsIdempotent) {
  for (const auto& fx : finite_fixtures()) {
    const auto s = fixed_subspace(fx.spec);
    EXPECT_EQ(s.fixed_dim() + s.complement_dim(), fx.spec.dimension) << fx.name;
    if (s.complement_dim() == 0) continue;
    for (const auto& r : s.restrictedGenerators) EXPECT_LE(orthogonality_residual(r), 1e-9) << fx.name;
    const auto again = split_fixed(s.restrictedGenerators, s.complement_dim(), false, {});
    EXPECT_EQ(again.fixed_dim(), 0) << fx.name;
  }
}

TEST(FixedSubspace, PermutationRepresentationFixesDiagonal) {
  const auto s = fixed_subspace(find_fixture("s3_perm_r3")->spec);
  ASSERT_EQ(s.fixed_dim(), 1);
  EXPECT_NEAR(std::abs(s.fixedBasis.col(0).sum()), std::sqrt(3.0), 1e-12);
}
