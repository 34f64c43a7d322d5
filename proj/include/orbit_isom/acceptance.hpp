#pragma once

// The acceptance criteria as executable checks. Each produces one verdict
// line; the serialized suite carries no timings so reruns compare byte for
// byte.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "orbit_isom/fixtures.hpp"
#include "orbit_isom/isom_quotient.hpp"
#include "orbit_isom/lift_verify.hpp"
#include "orbit_isom/report_io.hpp"

namespace orbit_isom {

struct CriterionResult {
  int id = 0;
  std::string key;
  bool pass = false;
  std::string detail;
};

struct SuiteOptions {
  std::uint64_t seed = kDefaultSeed;
  /// Criterion ids, keys or tags to run; empty runs everything.
  std::vector<std::string> only;
};

namespace acceptance_detail {

inline std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Criterion {
  int id;
  std::string key;
  std::vector<std::string> tags;
  std::function<CriterionResult(const SuiteOptions&)> run;
};

inline CriterionResult make(int id, const std::string& key, bool pass, std::string detail) {
  return {id, key, pass, std::move(detail)};
}

inline CriterionResult hopf_pipeline(const SuiteOptions& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = quotient_isometry_group(make_catalog_spec(kHopfId, o.seed), {kDefaultDensity, "catalog:hopf-u1-r4"});
  const bool fast = seconds_since(t0) < 30.0;
  const bool ok = r.compactFactors.size() == 1 && r.compactFactors[0].name == "U(2)" && r.equivariantDim == 4 &&
                  !r.boundary && r.kernelCircleDirections == 1 && r.kernelFiniteOrder == 1 &&
                  r.identifiedAs == "SO(3)" && r.rank == 1 && fast;
  return make(1, "hopf-pipeline", ok,
              "Isom_G(V)_0 = " + (r.compactFactors.empty() ? std::string("?") : r.compactFactors[0].name) +
                  " dim " + std::to_string(r.equivariantDim) + ", boundary " + (r.boundary ? "true" : "false") +
                  ", kernel circles " + std::to_string(r.kernelCircleDirections) + ", quotient " + r.quotientGroup +
                  " = " + r.identifiedAs + ", rank " + std::to_string(r.rank) +
                  ", runtime " + (fast ? "< 30 s" : ">= 30 s"));
}

inline CriterionResult hopf_metric(const SuiteOptions& o) {
  const double r2048 = verify_hopf_metric(100, o.seed, 2048);
  const double r4096 = verify_hopf_metric(100, o.seed, 4096);
  const bool ok = r4096 <= 1e-3 && r4096 < r2048;
  return make(2, "hopf-metric", ok,
              "max residual " + fmt("%.3e", r4096) + " at m=4096, " + fmt("%.3e", r2048) + " at m=2048");
}

inline CriterionResult hopf_lift(const SuiteOptions& o) {
  Rng rng = stage_rng(o.seed, 0xacc3);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) worst = std::max(worst, lift_rotation(random_rotation3(rng), 100, o.seed + k).residual);
  double cover = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Eigen::Matrix3d r1 = random_rotation3(rng), r2 = random_rotation3(rng);
    const Matrix l12 = lift_rotation(r1 * r2).lift;
    const Matrix prod = lift_rotation(r1).lift * lift_rotation(r2).lift;
    cover = std::max(cover, std::min(max_abs(l12 - prod), max_abs(l12 + prod)));
  }
  const bool ok = worst <= 1e-8 && cover <= 1e-8;
  return make(3, "hopf-lift", ok,
              "50 lifts max residual " + fmt("%.3e", worst) + ", 20 double-cover pairs max " + fmt("%.3e", cover));
}

inline CriterionResult sector_angles(const SuiteOptions& o) {
  std::string detail;
  bool ok = true;
  for (auto id : {kProductId, kTensorId}) {
    const CatalogAction action = *find_catalog_action(id);
    const auto t0 = std::chrono::steady_clock::now();
    const double angle = sector_angle_estimate(action, 5000, o.seed);
    const bool fast = seconds_since(t0) < 60.0;
    const double expected = *action.metadata().expectedSectorAngle;
    const bool good = std::abs(angle - expected) <= 0.01 && fast;
    ok = ok && good;
    detail += std::string(detail.empty() ? "" : "; ") + std::string(id) + " " + fmt("%.5f", angle) + " vs " +
              fmt("%.5f", expected) + (fast ? "" : " (slow)");
  }
  return make(4, "sector-angles", ok, detail);
}

inline CriterionResult trichotomy(const SuiteOptions& o) {
  struct Case {
    const char* fixture;
    IrreducibleClass cls;
    const char* identified;
    int rank;
  };
  const Case cases[] = {{"d4", IrreducibleClass::FiniteGroup, "trivial", 0},
                        {"c5", IrreducibleClass::TrivialOrU1, "U(1)", 1},
                        {"q8", IrreducibleClass::TrivialOrSp1OrSO3, "SO(3)", 1}};
  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    const auto r = quotient_isometry_group(find_fixture(c.fixture, o.seed)->spec);
    const auto cls = classify_irreducible(r);
    const bool good = cls == c.cls && r.identifiedAs == c.identified && r.rank == c.rank &&
                      r.theoremC == Verdict::Pass;
    ok = ok && good;
    detail += std::string(detail.empty() ? "" : "; ") + c.fixture + " -> " + to_string(cls) + " (" + r.identifiedAs +
              ", rank " + std::to_string(r.rank) + ")";
  }
  return make(5, "irreducible-trichotomy", ok, detail);
}

inline CriterionResult proposition_41(const SuiteOptions& o) {
  bool ok = true;
  int boundary_free = 0;
  std::string failures;
  for (const auto& fx : finite_fixtures(o.seed)) {
    const Analysis an = analyze(fx.spec, {kDefaultDensity, fx.name});
    bool good = an.kernel.continuousPart.empty() && an.kernel.wholeFactors.empty();
    const auto& kernel = an.kernel.finitePart;
    auto in_kernel = [&](const Matrix& z) {
      for (const auto& e : kernel)
        if (max_abs(e - z) <= kDedupTolerance) return true;
      return false;
    };
    for (const auto& z : an.centerInComponent) {
      good = good && in_kernel(z) && orbit_equivalence_test(*an.space, z, kKernelSamples, o.seed);
    }
    if (!an.boundary) {
      ++boundary_free;
      good = good && kernel.size() == an.centerInComponent.size();
    }
    if (!good) {
      ok = false;
      failures += " " + fx.name;
    }
  }
  return make(6, "proposition-4.1", ok,
              std::to_string(finite_fixtures().size()) + " finite fixtures (" + std::to_string(boundary_free) +
                  " boundary-free): kernel contains Z(G)∩Isom_G(V)_0, equality without boundary, no circle directions" +
                  (failures.empty() ? "" : "; failing:" + failures));
}

inline CriterionResult descend(const SuiteOptions& o) {
  std::vector<Analysis> pool;
  for (const auto& fx : finite_fixtures(o.seed)) {
    Analysis an = analyze(fx.spec, {kDefaultDensity, fx.name});
    if (!an.equivariant.lieBasis.empty()) pool.push_back(std::move(an));
  }
  double worst = 0.0;
  Rng rng = stage_rng(o.seed, 0xde57);
  std::uniform_real_distribution<double> times(0.0, 2.0);
  for (int k = 0; k < 100; ++k) {
    const Analysis& an = pool[static_cast<std::size_t>(k) % pool.size()];
    const Matrix x = sample_equivariant_isometry(an.equivariant, times(rng), o.seed + static_cast<std::uint64_t>(k));
    worst = std::max(worst, descend_check(x, *an.space, 100, o.seed + 1000 + static_cast<std::uint64_t>(k)));
  }
  return make(7, "descend", worst <= 1e-8, "100 equivariant isometries over " + std::to_string(pool.size()) +
                                               " fixtures, max distance change " + fmt("%.3e", worst));
}

inline CriterionResult structural(const SuiteOptions& o) {
  std::vector<RepresentationSpec> specs;
  for (const auto& fx : finite_fixtures(o.seed)) specs.push_back(fx.spec);
  for (const auto& id : catalog_ids()) specs.push_back(make_catalog_spec(id, o.seed));
  bool ok = true;
  for (const auto& s : specs) {
    const Analysis an = analyze(s);
    int identity = 0;
    for (const auto& c : an.components) identity += c.multiplicity * c.multiplicity * skew_field_dim(c.schurType);
    ok = ok && identity == static_cast<int>(an.commutant.size());
    for (const auto& f : an.equivariant.factors)
      ok = ok && static_cast<int>(f.lieBasis.size()) == factor_dimension(f.schurType, f.multiplicity);
    ok = ok && verify_theorem_B(an.report) == Verdict::Pass && an.report.theoremB == Verdict::Pass;
  }
  return make(8, "structural-validators", ok,
              std::to_string(specs.size()) + " reports: theorem B, commutant identity, skew dimensions");
}

inline std::vector<Criterion> criteria_1_to_8() {
  return {{1, "hopf-pipeline", {"hopf"}, hopf_pipeline},
          {2, "hopf-metric", {"hopf"}, hopf_metric},
          {3, "hopf-lift", {"hopf", "lift"}, hopf_lift},
          {4, "sector-angles", {"sector"}, sector_angles},
          {5, "irreducible-trichotomy", {"trichotomy", "irreducible"}, trichotomy},
          {6, "proposition-4.1", {"kernel", "prop41"}, proposition_41},
          {7, "descend", {"descend"}, descend},
          {8, "structural-validators", {"structure"}, structural}};
}

inline bool selected(const std::vector<std::string>& only, int id, const std::string& key,
                     const std::vector<std::string>& tags) {
  if (only.empty()) return true;
  for (const auto& s : only) {
    if (s == std::to_string(id) || s == key) return true;
    for (const auto& t : tags)
      if (s == t) return true;
  }
  return false;
}

}  // namespace acceptance_detail

inline std::string format_result(const CriterionResult& r) {
  return std::string(r.pass ? "PASS" : "FAIL") + "  [" + std::to_string(r.id) + "] " + r.key + ": " + r.detail;
}

/// Every analyze report over the fixtures and the catalog, one JSON per line.
inline std::string serialized_reports(std::uint64_t seed) {
  std::string out;
  for (const auto& fx : finite_fixtures(seed))
    out += report_to_json(quotient_isometry_group(fx.spec, {kDefaultDensity, fx.name})).dump() + "\n";
  for (const auto& id : catalog_ids())
    out += report_to_json(quotient_isometry_group(make_catalog_spec(id, seed), {kDefaultDensity, "catalog:" + id})).dump() +
           "\n";
  return out;
}

inline std::vector<CriterionResult> run_acceptance(const SuiteOptions& options) {
  using namespace acceptance_detail;
  std::vector<CriterionResult> results;
  std::string first;
  for (const auto& c : criteria_1_to_8()) {
    if (!selected(options.only, c.id, c.key, c.tags)) continue;
    CriterionResult r;
    try {
      r = c.run(options);
    } catch (const Error& e) {
      r = make(c.id, c.key, false, std::string("error: ") + e.what());
    }
    first += format_result(r) + "\n";
    results.push_back(std::move(r));
  }
  if (selected(options.only, 9, "determinism", {"determinism"})) {
    // Rerun the selected criteria and every report; both must match byte for byte.
    std::string second;
    for (const auto& c : criteria_1_to_8()) {
      if (!selected(options.only, c.id, c.key, c.tags)) continue;
      try {
        second += format_result(c.run(options)) + "\n";
      } catch (const Error& e) {
        second += format_result(make(c.id, c.key, false, std::string("error: ") + e.what())) + "\n";
      }
    }
    const std::string reports_a = serialized_reports(options.seed);
    const std::string reports_b = serialized_reports(options.seed);
    const bool ok = first == second && reports_a == reports_b;
    results.push_back(make(9, "determinism", ok,
                           "suite output and " + std::to_string(finite_fixtures().size() + catalog_ids().size()) +
                               " reports identical across two runs with seed " + std::to_string(options.seed)));
  }
  return results;
}

}  // namespace orbit_isom
