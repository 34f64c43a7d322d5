#pragma once

// Named finite-group representations used by the acceptance suite and the
// tests. fixtures/*.json holds the same generators as decimal strings.

#include <numbers>
#include <string>
#include <vector>

#include "orbit_isom/linalg.hpp"
#include "orbit_isom/repr_model.hpp"

namespace orbit_isom {

struct Fixture {
  std::string name;
  RepresentationSpec spec;
};

namespace fixture_detail {

inline Matrix flip2() {
  Matrix s = Matrix::Identity(2, 2);
  s(1, 1) = -1.0;
  return s;
}

inline Matrix cols4(std::initializer_list<std::initializer_list<double>> columns) {
  Matrix m(4, 4);
  Eigen::Index c = 0;
  for (const auto& col : columns) {
    Eigen::Index r = 0;
    for (double v : col) m(r++, c) = v;
    ++c;
  }
  return m;
}

}  // namespace fixture_detail

/// Left multiplication by i and j on H = R⁴ with basis (1, i, j, k).
inline std::vector<Matrix> quaternion_group_generators() {
  using fixture_detail::cols4;
  const Matrix li = cols4({{0, 1, 0, 0}, {-1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, -1, 0}});
  const Matrix lj = cols4({{0, 0, 1, 0}, {0, 0, 0, -1}, {-1, 0, 0, 0}, {0, 1, 0, 0}});
  return {li, lj};
}

inline std::vector<Fixture> finite_fixtures(std::uint64_t seed = kDefaultSeed) {
  using std::numbers::pi;
  const Matrix i2 = Matrix::Identity(2, 2);
  const Matrix s = fixture_detail::flip2();
  Matrix cycle = Matrix::Zero(3, 3);
  cycle(1, 0) = cycle(2, 1) = cycle(0, 2) = 1.0;
  Matrix swap = Matrix::Zero(3, 3);
  swap(1, 0) = swap(0, 1) = swap(2, 2) = 1.0;
  const Matrix one = Matrix::Identity(1, 1);

  std::vector<Fixture> out;
  auto add = [&](std::string name, std::vector<Matrix> gens) {
    out.push_back({std::move(name), make_finite_spec(std::move(gens), seed)});
  };
  add("c3", {rotation2(2 * pi / 3)});
  add("c4", {rotation2(pi / 2)});
  add("c5", {rotation2(2 * pi / 5)});
  add("d4", {rotation2(pi / 2), s});
  add("pm_r2", {-Matrix::Identity(2, 2)});
  add("pm_r3", {-Matrix::Identity(3, 3)});
  add("pm_r4", {-Matrix::Identity(4, 4)});
  add("q8", quaternion_group_generators());
  add("trivial_r3", {Matrix::Identity(3, 3)});
  add("c3xd4_r4", {block_diag({rotation2(2 * pi / 3), i2}), block_diag({i2, rotation2(pi / 2)}), block_diag({i2, s})});
  add("rot3_plus_1_r3", {block_diag({rotation2(2 * pi / 3), one})});
  add("s3_perm_r3", {cycle, swap});
  return out;
}

inline std::optional<Fixture> find_fixture(const std::string& name, std::uint64_t seed = kDefaultSeed) {
  for (auto& f : finite_fixtures(seed))
    if (f.name == name) return f;
  return std::nullopt;
}

}  // namespace orbit_isom
