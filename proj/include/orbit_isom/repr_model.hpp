#pragma once

// Representation input: parsing and validation, finite-group enumeration by
// breadth-first closure, and the split V = F ⊕ F⊥ into the fixed subspace and
// its complement.

#include <nlohmann/json.hpp>

#include <cerrno>
#include <cstdint>
#include <cstdlib>
#include <deque>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "orbit_isom/catalog.hpp"
#include "orbit_isom/error.hpp"
#include "orbit_isom/linalg.hpp"

namespace orbit_isom {

inline constexpr std::uint64_t kDefaultSeed = 20190101;
inline constexpr double kDedupTolerance = 1e-8;
inline constexpr double kDedupGrid = 1e-6;

struct RepresentationSpec {
  int dimension = 0;
  std::vector<Matrix> generators;
  /// "finite" or "catalog:<id>".
  std::string kind = "finite";
  double tolerance = 1e-9;
  std::size_t groupSizeCap = 20000;
  std::uint64_t seed = kDefaultSeed;
  RankPolicy rank;

  bool is_finite() const { return kind == "finite"; }
  std::string catalog_id() const { return is_finite() ? std::string() : kind.substr(8); }
};

namespace detail {

inline double parse_decimal(const nlohmann::json& entry, const std::string& where) {
  if (entry.is_number()) return entry.get<double>();
  if (!entry.is_string()) fail(ErrorKind::Validation, "parse_spec", where + ": matrix entry is not a decimal string");
  const std::string text = entry.get<std::string>();
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  const double value = std::strtod(begin, &end);
  if (text.empty() || end != begin + text.size() || errno == ERANGE || !std::isfinite(value))
    fail(ErrorKind::Validation, "parse_spec", where + ": cannot parse decimal '" + text + "'");
  return value;
}

}  // namespace detail

/// Checks the invariants of a spec and replaces each generator by its polar
/// factor once the orthogonality residual is within tolerance.
inline RepresentationSpec validate_spec(RepresentationSpec spec) {
  const std::string stage = "parse_spec";
  if (spec.dimension < 1) fail(ErrorKind::Validation, stage, "dimension must be >= 1");
  if (!(spec.tolerance > 0.0)) fail(ErrorKind::Validation, stage, "tolerance must be positive");
  if (spec.groupSizeCap < 1) fail(ErrorKind::Validation, stage, "groupSizeCap must be positive");

  if (spec.is_finite()) {
    if (spec.generators.empty()) fail(ErrorKind::Validation, stage, "kind=finite needs at least one generator");
  } else {
    if (spec.kind.rfind("catalog:", 0) != 0) fail(ErrorKind::Validation, stage, "unknown kind '" + spec.kind + "'");
    const auto action = find_catalog_action(spec.catalog_id());
    if (!action) fail(ErrorKind::Validation, stage, "unknown catalog id '" + spec.catalog_id() + "'");
    if (action->dimension() != spec.dimension) {
      std::ostringstream msg;
      msg << "catalog action " << action->id() << " has dimension " << action->dimension() << ", spec says "
          << spec.dimension;
      fail(ErrorKind::Validation, stage, msg.str());
    }
  }

  for (std::size_t k = 0; k < spec.generators.size(); ++k) {
    Matrix& g = spec.generators[k];
    if (g.rows() != g.cols()) fail(ErrorKind::Validation, stage, "generator " + std::to_string(k) + " is not square");
    if (g.rows() != spec.dimension) {
      std::ostringstream msg;
      msg << "generator " << k << " is " << g.rows() << "x" << g.cols() << ", dimension is " << spec.dimension;
      fail(ErrorKind::Validation, stage, msg.str());
    }
    const double residual = orthogonality_residual(g);
    if (residual > spec.tolerance) {
      std::ostringstream msg;
      msg << "generator " << k << " is not orthogonal: max |g^T g - I| = " << residual << " > " << spec.tolerance;
      fail(ErrorKind::Validation, stage, msg.str());
    }
    g = nearest_orthogonal(g);
  }
  return spec;
}

inline RepresentationSpec parse_spec(const nlohmann::json& doc) {
  const std::string stage = "parse_spec";
  if (!doc.is_object()) fail(ErrorKind::Validation, stage, "document is not a JSON object");
  RepresentationSpec spec;
  try {
    if (!doc.contains("dimension") || !doc.at("dimension").is_number_integer())
      fail(ErrorKind::Validation, stage, "missing integer field 'dimension'");
    spec.dimension = doc.at("dimension").get<int>();
    if (!doc.contains("kind") || !doc.at("kind").is_string())
      fail(ErrorKind::Validation, stage, "missing string field 'kind'");
    spec.kind = doc.at("kind").get<std::string>();
    if (doc.contains("tolerance")) spec.tolerance = doc.at("tolerance").get<double>();
    if (doc.contains("groupSizeCap")) {
      const auto cap = doc.at("groupSizeCap").get<std::int64_t>();
      if (cap < 1) fail(ErrorKind::Validation, stage, "groupSizeCap must be positive");
      spec.groupSizeCap = static_cast<std::size_t>(cap);
    }
    if (doc.contains("seed")) spec.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("rankTolerance")) spec.rank.absolute = doc.at("rankTolerance").get<double>();

    if (doc.contains("generators")) {
      const auto& gens = doc.at("generators");
      if (!gens.is_array()) fail(ErrorKind::Validation, stage, "'generators' is not an array");
      for (std::size_t k = 0; k < gens.size(); ++k) {
        const auto& rows = gens[k];
        const std::string where = "generator " + std::to_string(k);
        if (!rows.is_array() || rows.empty()) fail(ErrorKind::Validation, stage, where + " is not a list of rows");
        const auto n = static_cast<Eigen::Index>(rows.size());
        Matrix g(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
          const auto& row = rows[static_cast<std::size_t>(i)];
          if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
            fail(ErrorKind::Validation, stage, where + " is not square");
          for (Eigen::Index j = 0; j < n; ++j)
            g(i, j) = detail::parse_decimal(row[static_cast<std::size_t>(j)], where);
        }
        spec.generators.push_back(std::move(g));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Validation, stage, std::string("malformed document: ") + e.what());
  }
  return validate_spec(std::move(spec));
}

inline RepresentationSpec parse_spec(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Validation, "parse_spec", std::string("malformed document: ") + e.what());
  }
  return parse_spec(doc);
}

/// Serializes a spec back to the input schema with round-trip decimal strings.
inline nlohmann::json spec_to_json(const RepresentationSpec& spec) {
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& g : spec.generators) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index j = 0; j < g.cols(); ++j) {
        std::ostringstream s;
        s.precision(17);
        s << g(i, j);
        row.push_back(s.str());
      }
      rows.push_back(row);
    }
    gens.push_back(rows);
  }
  nlohmann::json doc = {{"dimension", spec.dimension},
                        {"kind", spec.kind},
                        {"generators", gens},
                        {"tolerance", spec.tolerance},
                        {"groupSizeCap", spec.groupSizeCap},
                        {"seed", spec.seed}};
  return doc;
}

inline RepresentationSpec make_finite_spec(std::vector<Matrix> generators, std::uint64_t seed = kDefaultSeed) {
  RepresentationSpec spec;
  spec.dimension = generators.empty() ? 0 : static_cast<int>(generators.front().rows());
  spec.generators = std::move(generators);
  spec.seed = seed;
  return validate_spec(std::move(spec));
}

inline RepresentationSpec make_catalog_spec(std::string_view id, std::uint64_t seed = kDefaultSeed) {
  const auto action = find_catalog_action(id);
  if (!action) fail(ErrorKind::Validation, "parse_spec", "unknown catalog id '" + std::string(id) + "'");
  RepresentationSpec spec;
  spec.dimension = action->dimension();
  spec.kind = "catalog:" + std::string(id);
  spec.seed = seed;
  return validate_spec(std::move(spec));
}

struct FiniteGroupData {
  /// Breadth-first insertion order; element 0 is the identity.
  std::vector<Matrix> elements;
  std::vector<Matrix> generators;
  std::size_t identityIndex = 0;
  bool cayleyClosed = false;

  std::size_t order() const { return elements.size(); }
  int dimension() const { return elements.empty() ? 0 : static_cast<int>(elements.front().rows()); }
};

/// Hash index over orthogonal matrices: entries are rounded to a 1e-6 grid and
/// candidates are confirmed within 1e-8 in max norm. Entries lying near a
/// rounding boundary are probed on both sides so near-equal matrices are never
/// missed.
class MatrixIndex {
 public:
  explicit MatrixIndex(double match_tol = kDedupTolerance) : match_tol_(match_tol) {}

  struct Lookup {
    std::optional<std::size_t> match;
    /// Some stored element lies between the match tolerance and 10× it.
    bool ambiguous = false;
  };

  Lookup find(const Matrix& m, const std::vector<Matrix>& store) const {
    Lookup out;
    std::vector<std::int64_t> key(static_cast<std::size_t>(m.size()));
    std::vector<std::pair<std::size_t, std::int64_t>> alternates;
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      const double scaled = m.data()[i] / kDedupGrid;
      const double rounded = std::round(scaled);
      key[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(rounded);
      const double offset = scaled - rounded;
      // Ambiguity band reaches 1e-7, i.e. 0.1 grid units.
      if (std::abs(offset) > 0.4) alternates.emplace_back(static_cast<std::size_t>(i), offset > 0 ? 1 : -1);
    }
    const bool exhaustive = alternates.size() > 10;
    auto probe = [&](const std::vector<std::int64_t>& k) {
      const auto it = buckets_.find(k);
      if (it == buckets_.end()) return;
      for (std::size_t idx : it->second) inspect(m, store, idx, out);
    };
    if (exhaustive) {
      for (std::size_t idx = 0; idx < store.size(); ++idx) inspect(m, store, idx, out);
      return out;
    }
    const std::size_t combos = std::size_t{1} << alternates.size();
    for (std::size_t mask = 0; mask < combos; ++mask) {
      std::vector<std::int64_t> k = key;
      for (std::size_t b = 0; b < alternates.size(); ++b)
        if (mask & (std::size_t{1} << b)) k[alternates[b].first] += alternates[b].second;
      probe(k);
    }
    return out;
  }

  void insert(const Matrix& m, std::size_t index) {
    std::vector<std::int64_t> key(static_cast<std::size_t>(m.size()));
    for (Eigen::Index i = 0; i < m.size(); ++i)
      key[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(std::round(m.data()[i] / kDedupGrid));
    buckets_[key].push_back(index);
  }

 private:
  struct KeyHash {
    std::size_t operator()(const std::vector<std::int64_t>& k) const noexcept {
      std::uint64_t h = 1469598103934665603ULL;
      for (auto v : k) {
        h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h *= 1099511628211ULL;
      }
      return static_cast<std::size_t>(h);
    }
  };

  void inspect(const Matrix& m, const std::vector<Matrix>& store, std::size_t idx, Lookup& out) const {
    const double d = max_abs(store[idx] - m);
    if (d <= match_tol_) {
      if (!out.match) out.match = idx;
    } else if (d <= 10.0 * match_tol_) {
      out.ambiguous = true;
    }
  }

  double match_tol_;
  std::unordered_map<std::vector<std::int64_t>, std::vector<std::size_t>, KeyHash> buckets_;
};

/// Closure of a generator list under right multiplication, breadth-first by
/// word length with generators in input order.
inline FiniteGroupData close_generators(const std::vector<Matrix>& generators, std::size_t cap,
                                        const std::string& stage = "enumerate_group") {
  if (generators.empty()) fail(ErrorKind::Validation, stage, "no generators to close");
  const Eigen::Index n = generators.front().rows();
  FiniteGroupData group;
  group.generators = generators;
  MatrixIndex index;
  group.elements.push_back(Matrix::Identity(n, n));
  index.insert(group.elements.back(), 0);

  for (std::size_t head = 0; head < group.elements.size(); ++head) {
    for (const auto& gen : generators) {
      Matrix product = group.elements[head] * gen;
      const auto hit = index.find(product, group.elements);
      if (hit.ambiguous)
        fail(ErrorKind::Ambiguous, stage,
             "dedup ambiguity: a product lies between 1e-8 and 1e-7 of a stored element; check tolerances");
      if (hit.match) continue;
      if (group.elements.size() >= cap) {
        std::ostringstream msg;
        msg << "closure exceeds groupSizeCap = " << cap << " (likely an infinite or continuous group)";
        fail(ErrorKind::Validation, stage, msg.str());
      }
      index.insert(product, group.elements.size());
      group.elements.push_back(std::move(product));
    }
  }
  group.cayleyClosed = true;
  return group;
}

inline FiniteGroupData enumerate_group(const RepresentationSpec& spec) {
  if (!spec.is_finite()) fail(ErrorKind::Validation, "enumerate_group", "spec kind is not 'finite'");
  return close_generators(spec.generators, spec.groupSizeCap);
}

/// Index of the stored element matching m within dedup tolerance, if any.
inline std::optional<std::size_t> find_element(const FiniteGroupData& group, const Matrix& m) {
  for (std::size_t i = 0; i < group.elements.size(); ++i)
    if (max_abs(group.elements[i] - m) <= kDedupTolerance) return i;
  return std::nullopt;
}

struct TrivialSplit {
  Matrix fixedBasis;       // n × dim F
  Matrix complementBasis;  // n × dim F⊥
  std::vector<Matrix> restrictedGenerators;

  int fixed_dim() const { return static_cast<int>(fixedBasis.cols()); }
  int complement_dim() const { return static_cast<int>(complementBasis.cols()); }
  Matrix restrict(const Matrix& m) const { return complementBasis.transpose() * m * complementBasis; }
  /// Block C·A·Cᵀ acting on F⊥ and as zero on F.
  Matrix embed(const Matrix& a) const { return complementBasis * a * complementBasis.transpose(); }
  /// Block C·A·Cᵀ plus the identity on F, for group-like maps.
  Matrix embed_isometry(const Matrix& a) const {
    return fixedBasis * fixedBasis.transpose() + complementBasis * a * complementBasis.transpose();
  }
};

/// F is the common kernel of (M − I) over the generators (or of X over Lie
/// algebra generators, via `infinitesimal`).
inline TrivialSplit split_fixed(std::span<const Matrix> constraints, Eigen::Index n, bool infinitesimal,
                                const RankPolicy& policy) {
  Matrix system(static_cast<Eigen::Index>(constraints.size()) * n, n);
  const Matrix id = Matrix::Identity(n, n);
  for (std::size_t k = 0; k < constraints.size(); ++k)
    system.middleRows(static_cast<Eigen::Index>(k) * n, n) = infinitesimal ? constraints[k] : constraints[k] - id;
  const RankSplit split = rank_split(system, policy, "fixed_subspace");
  TrivialSplit out{split.null, split.row, {}};
  for (const auto& m : constraints) out.restrictedGenerators.push_back(out.restrict(m));
  return out;
}

/// For catalog actions the restricted generators are the restricted Lie
/// algebra basis.
inline TrivialSplit fixed_subspace(const RepresentationSpec& spec) {
  const Eigen::Index n = spec.dimension;
  if (spec.is_finite()) return split_fixed(spec.generators, n, false, spec.rank);
  const auto action = find_catalog_action(spec.catalog_id());
  const auto basis = action->lie_basis();
  return split_fixed(basis, n, true, spec.rank);
}

}  // namespace orbit_isom
