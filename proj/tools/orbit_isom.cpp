// orbit_isom: analyze representations, measure quotient distances, witness
// the Hopf lift, list the catalog, and run the acceptance suite.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "orbit_isom/orbit_isom.hpp"

namespace {

using namespace orbit_isom;

struct RunConfig {
  std::string input;
  std::string output;
  std::uint64_t seed = kDefaultSeed;
  int samples = 200;
  std::string format = "json";
  std::vector<std::string> only;
  int density = kDefaultDensity;
  std::string pointA, pointB;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("ORBIT_ISOM_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring unparsable ORBIT_ISOM_SEED='" << env << "'\n";
    }
  }
  return kDefaultSeed;
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.output.empty() || cfg.output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.output);
  if (!out) fail(ErrorKind::Validation, "cli", "cannot write '" + cfg.output + "'");
  out << text;
}

Vector parse_point(const std::string& s) {
  std::vector<double> v;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    char* end = nullptr;
    const double x = std::strtod(item.c_str(), &end);
    if (end == item.c_str()) fail(ErrorKind::Validation, "metric", "cannot parse coordinate '" + item + "'");
    v.push_back(x);
  }
  return Eigen::Map<Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void require_input(const RunConfig& cfg, const char* cmd) {
  if (cfg.input.empty()) fail(ErrorKind::Validation, cmd, "no input given (use --input or a positional path/id)");
}

int cmd_analyze(const RunConfig& cfg) {
  require_input(cfg, "analyze");
  const auto spec = load_spec(cfg.input, cfg.seed);
  const auto report = quotient_isometry_group(spec, {cfg.density, cfg.input});
  emit(cfg, cfg.format == "text" ? report_to_text(report) : report_to_json(report).dump(2) + "\n");
  return 0;
}

int cmd_metric(const RunConfig& cfg) {
  require_input(cfg, "metric");
  const auto spec = load_spec(cfg.input, cfg.seed);
  const OrbitSpace space = spec.is_finite() ? OrbitSpace::finite(enumerate_group(spec), cfg.input)
                                            : OrbitSpace::catalog(*find_catalog_action(spec.catalog_id()), cfg.density);
  const Vector a = parse_point(cfg.pointA), b = parse_point(cfg.pointB);
  if (a.size() != spec.dimension || b.size() != spec.dimension)
    fail(ErrorKind::Validation, "metric", "point dimension does not match dim V = " + std::to_string(spec.dimension));
  const double d = quotient_distance(space, space.point(a), space.point(b));
  nlohmann::json out = {{"distance", d},
                        {"method", space.is_finite() ? "exact minimum over all group elements"
                                                     : "coarse grid plus circle-coordinate ascent"},
                        {"groupElements", space.sample_count()}};
  if (!space.is_finite()) out["gridStep"] = space.grid_step();
  if (cfg.format == "text") {
    std::ostringstream s;
    s.precision(12);
    s << "d(Ga, Gb) = " << d << "  (" << out["method"].get<std::string>() << ", " << space.sample_count()
      << " elements)\n";
    emit(cfg, s.str());
  } else {
    emit(cfg, out.dump(2) + "\n");
  }
  return 0;
}

int cmd_lift(const RunConfig& cfg) {
  if (!cfg.input.empty() && cfg.input != "hopf-u1-r4" && cfg.input != "catalog:hopf-u1-r4") {
    std::string id = cfg.input.rfind("catalog:", 0) == 0 ? cfg.input.substr(8) : cfg.input;
    const auto demo = non_lift_demo(id, cfg.samples, cfg.seed);
    if (cfg.format == "text") {
      emit(cfg, demo.text());
    } else {
      emit(cfg, nlohmann::json{{"id", demo.id},
                               {"sectorAngle", demo.angle},
                               {"expectedSectorAngle", demo.expectedAngle},
                               {"reflection", demo.reflection},
                               {"obstruction", demo.obstruction},
                               {"isotropy", demo.isotropy}}
                        .dump(2) +
                    "\n");
    }
    return 0;
  }
  Rng rng = stage_rng(cfg.seed, 0x11f0);
  double worst = 0.0;
  for (int k = 0; k < cfg.samples; ++k)
    worst = std::max(worst, lift_rotation(random_rotation3(rng), 100, cfg.seed + static_cast<std::uint64_t>(k)).residual);
  const double metric = verify_hopf_metric(100, cfg.seed, 4096);
  nlohmann::json out = {{"action", "hopf-u1-r4"},
                        {"rotations", cfg.samples},
                        {"maxLiftResidual", worst},
                        {"hopfMetricResidual", metric},
                        {"hopfMetricDensity", 4096},
                        {"seed", cfg.seed}};
  if (cfg.format == "text") {
    std::ostringstream s;
    s << "Hopf lift: " << cfg.samples << " random rotations of S^2(1/2) lifted to U(2), max residual " << worst
      << "\nHopf metric: max |d_quot - d_sphere| = " << metric << " at m = 4096\n";
    emit(cfg, s.str());
  } else {
    emit(cfg, out.dump(2) + "\n");
  }
  return 0;
}

int cmd_catalog(const RunConfig& cfg) {
  nlohmann::json list = nlohmann::json::array();
  std::ostringstream text;
  for (const auto& id : catalog_ids()) {
    const auto a = *find_catalog_action(id);
    const auto& m = a.metadata();
    nlohmann::json entry = {{"id", id},
                            {"dimension", a.dimension()},
                            {"hasBoundary", m.hasBoundary},
                            {"cohomogeneity", m.cohomogeneity},
                            {"singularIsotropyNote", m.singularIsotropyNote}};
    if (m.expectedSectorAngle) entry["expectedSectorAngle"] = *m.expectedSectorAngle;
    list.push_back(entry);
    text << id << "  dim " << a.dimension() << ", boundary " << (m.hasBoundary ? "yes" : "no") << ", cohomogeneity "
         << m.cohomogeneity << "  -- " << m.singularIsotropyNote << "\n";
  }
  emit(cfg, cfg.format == "text" ? text.str() : list.dump(2) + "\n");
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  SuiteOptions options;
  options.seed = cfg.seed;
  options.only = cfg.only;
  const auto results = run_acceptance(options);
  std::string out;
  bool all = !results.empty();
  for (const auto& r : results) {
    out += format_result(r) + "\n";
    all = all && r.pass;
  }
  out += std::string(all ? "ALL PASS" : "FAILURES PRESENT") + " (" + std::to_string(results.size()) + " criteria, seed " +
         std::to_string(cfg.seed) + ")\n";
  emit(cfg, out);
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Identity component of the isometry group of an orbit space V/G"};
  app.require_subcommand(1);
  RunConfig cfg;
  cfg.seed = default_seed();

  auto common = [&](CLI::App* sub, bool with_input) {
    if (with_input) {
      sub->add_option("input,--input", cfg.input, "spec JSON path or catalog id (catalog:<id>)");
    }
    sub->add_option("--output", cfg.output, "output path (default stdout)");
    sub->add_option("--seed", cfg.seed, "seed for every random draw");
    sub->add_option("--samples", cfg.samples, "sample count")->check(CLI::PositiveNumber);
    sub->add_option("--format", cfg.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  };
  auto* analyze = app.add_subcommand("analyze", "compute Isom(V/G)_0 and print the report");
  common(analyze, true);
  analyze->add_option("--density", cfg.density, "catalog grid size m")->check(CLI::PositiveNumber);
  auto* metric = app.add_subcommand("metric", "quotient distance between two points");
  metric->add_option("--input", cfg.input, "spec JSON path or catalog id");
  metric->add_option("a", cfg.pointA, "first point, comma separated")->required();
  metric->add_option("b", cfg.pointB, "second point, comma separated")->required();
  metric->add_option("--output", cfg.output, "output path (default stdout)");
  metric->add_option("--seed", cfg.seed, "seed");
  metric->add_option("--samples", cfg.samples, "unused")->check(CLI::PositiveNumber);
  metric->add_option("--format", cfg.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  metric->add_option("--density", cfg.density, "catalog grid size m")->check(CLI::PositiveNumber);
  auto* lift = app.add_subcommand("lift", "Hopf lift witnesses, or the non-lift demo for a sector action");
  common(lift, true);
  auto* catalog = app.add_subcommand("catalog", "list catalog actions");
  common(catalog, false);
  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  common(verify, false);
  verify->add_option("--only", cfg.only, "criterion ids, keys or tags")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*analyze) return cmd_analyze(cfg);
    if (*metric) return cmd_metric(cfg);
    if (*lift) {
      // The sector demo needs many more pairs than the lift needs rotations.
      if (lift->count("--samples") == 0 && !cfg.input.empty()) cfg.samples = 5000;
      return cmd_lift(cfg);
    }
    if (*catalog) return cmd_catalog(cfg);
    if (*verify) return cmd_verify(cfg);
  } catch (const Error& e) {
    std::cerr << "error [" << e.stage() << "]: " << e.what() << "\n";
    return e.kind() == ErrorKind::Ambiguous ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
