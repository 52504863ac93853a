#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "crofton/crofton.hpp"

namespace {

using json = nlohmann::json;
using crofton::CatalogSurface;
using crofton::CloudPoint;
using crofton::ImplicitSamplerConfig;
using crofton::ImplicitSurface;
using crofton::ParametricSurface;
using crofton::ScalarSource;
using crofton::TriangulatedSurface;
using crofton::Vec3;

enum ExitCode : int { kOk = 0, kUsage = 1, kNumeric = 2, kAuditFailed = 3 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string num(double x, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

struct CommonOptions {
  std::string surface;
  std::uint64_t seed = 0;
  double r = 0.0;  // 0: surface default
  int scan_steps = 256;
  double root_tol = 1e-10;
  int resolution = crofton::kDefaultCatalogResolution;
  bool json = false;

  ImplicitSamplerConfig sampler_config() const {
    ImplicitSamplerConfig cfg;
    cfg.scan_steps = scan_steps;
    cfg.root_tol = root_tol;
    return cfg;
  }
};

void add_common(CLI::App& cmd, CommonOptions& o, bool surface_required = true) {
  auto* s = cmd.add_option("--surface", o.surface,
                           "catalog name (" + [] {
                             std::string names;
                             for (const auto& n : crofton::catalog_names()) names += (names.empty() ? "" : ", ") + n;
                             return names;
                           }() + "), an expression in x, y, z, or an .off/.stl mesh path");
  if (surface_required) s->required();
  cmd.add_option("--seed", o.seed, "random seed")->capture_default_str();
  cmd.add_option("--r", o.r, "clip radius of the line ball (default: per surface)")->check(CLI::PositiveNumber);
  cmd.add_option("--scan-steps", o.scan_steps, "sign-scan steps per line")->check(CLI::Range(2, 1 << 24))
      ->capture_default_str();
  cmd.add_option("--root-tol", o.root_tol, "root bracket tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  cmd.add_option("--res", o.resolution, "grid resolution for catalog charts and meshes")->check(CLI::Range(2, 1 << 14))
      ->capture_default_str();
  cmd.add_flag("--json", o.json, "print line-delimited JSON records instead of text");
}

// A surface spec resolved into whichever representations it has.
struct LoadedSurface {
  std::string spec;
  std::optional<CatalogSurface> catalog;
  std::optional<ImplicitSurface> implicit;
  std::optional<ParametricSurface> parametric;
  std::optional<TriangulatedSurface> mesh;
  double clip_radius = 2.0;
};

bool is_mesh_path(const std::string& spec) {
  auto ext = std::filesystem::path(spec).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".off" || ext == ".stl";
}

LoadedSurface load_surface(const std::string& spec, double r, int resolution) {
  LoadedSurface out;
  out.spec = spec;
  const auto names = crofton::catalog_names();
  if (std::find(names.begin(), names.end(), spec) != names.end()) {
    out.catalog = crofton::catalog_surface(spec, resolution);
    out.implicit = out.catalog->implicit;
    out.parametric = out.catalog->parametric;
    out.mesh = out.catalog->mesh;
    out.clip_radius = out.catalog->clip_radius;
  } else if (is_mesh_path(spec)) {
    out.mesh = crofton::load_mesh(spec);
    double far = 0.0;
    for (const auto& t : out.mesh->triangles()) {
      for (const Vec3* v : {&t.v1, &t.v2, &t.v3}) far = std::max(far, crofton::norm(*v));
    }
    out.clip_radius = far > 0.0 ? 1.05 * far : 1.0;
  } else {
    out.implicit = crofton::implicit_from_expression(spec, 2.0);
  }
  if (r > 0.0) out.clip_radius = r;
  if (out.implicit) out.implicit->clip_radius = out.clip_radius;
  return out;
}

std::size_t thread_count() {
  const char* v = std::getenv("CROFTON_THREADS");
  if (!v || !*v) return 1;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1) throw UsageError("CROFTON_THREADS must be a positive integer");
  return static_cast<std::size_t>(n);
}

void emit(const CommonOptions& o, const json& record, const std::string& text) {
  if (o.json) {
    std::cout << record.dump() << '\n';
  } else {
    std::cout << text << '\n';
  }
}

// ---- generate ----

struct GenerateOptions {
  CommonOptions common;
  std::string sampler = "crofton";
  std::size_t n = 100000;
  std::size_t shards = 1;
  std::string output;
  std::string format;
};

crofton::CloudFormat output_format(const GenerateOptions& o) {
  std::string f = o.format;
  if (f.empty()) {
    auto ext = std::filesystem::path(o.output).extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".ply") return crofton::CloudFormat::PlyAscii;
    if (ext == ".xyz" || ext == ".txt") return crofton::CloudFormat::Xyz;
    throw UsageError("cannot infer the format of '" + o.output + "'; pass --format");
  }
  if (f == "xyz") return crofton::CloudFormat::Xyz;
  if (f == "ply") return crofton::CloudFormat::PlyAscii;
  return crofton::CloudFormat::PlyBinary;
}

struct Shard {
  std::vector<CloudPoint> points;
  std::size_t lines = 0;
};

Shard run_shard(const LoadedSurface& s, const GenerateOptions& o, const crofton::ParametricTriangulation* tri,
                std::uint64_t seed, std::size_t target) {
  auto src = ScalarSource::pseudo(seed);
  Shard out;
  if (o.sampler == "crofton" || o.sampler == "axis-aligned") {
    const auto cfg = o.common.sampler_config();
    auto res = o.sampler == "crofton" ? crofton::cloud_implicit(*s.implicit, src, target, cfg)
                                      : crofton::cloud_axis_aligned(*s.implicit, src, target, cfg);
    out.points = std::move(res.points);
    out.lines = res.lines_used;
  } else if (o.sampler == "triangulated") {
    out.points = crofton::cloud_triangulated(*s.mesh, src, target);
  } else {
    out.points = crofton::cloud_parametric(*s.parametric, *tri, src, target);
  }
  return out;
}

int cmd_generate(const GenerateOptions& o) {
  const auto start = std::chrono::steady_clock::now();
  const auto s = load_surface(o.common.surface, o.common.r, o.common.resolution);
  const bool lines = o.sampler == "crofton" || o.sampler == "axis-aligned";
  if (lines && !s.implicit) throw UsageError("sampler '" + o.sampler + "' needs an implicit surface");
  if (o.sampler == "triangulated" && !s.mesh) throw UsageError("sampler 'triangulated' needs a mesh");
  if (o.sampler == "parametric" && !s.parametric) throw UsageError("sampler 'parametric' needs a parametric chart");
  if (o.shards < 1 || o.shards > o.n) throw UsageError("--shards must lie in [1, n]");
  const auto format = output_format(o);

  std::optional<crofton::ParametricTriangulation> tri;
  if (o.sampler == "parametric") tri = crofton::triangulate_parametric(*s.parametric);

  // shard i draws from seed + i; concatenation in shard order
  std::vector<Shard> shards(o.shards);
  std::vector<std::exception_ptr> errors(o.shards);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < o.shards; i = next++) {
      const std::size_t target = o.n / o.shards + (i < o.n % o.shards ? 1 : 0);
      try {
        shards[i] = run_shard(s, o, tri ? &*tri : nullptr, o.common.seed + i, target);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min(thread_count(), o.shards);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<CloudPoint> cloud;
  std::size_t lines_used = 0;
  for (auto& sh : shards) {
    cloud.insert(cloud.end(), sh.points.begin(), sh.points.end());
    lines_used += sh.lines;
  }

  std::vector<std::string> comments{"crofton point cloud",
                                    "surface " + s.spec,
                                    "sampler " + o.sampler,
                                    "seed " + std::to_string(o.common.seed),
                                    "target " + std::to_string(o.n),
                                    "shards " + std::to_string(o.shards),
                                    "points " + std::to_string(cloud.size())};
  if (lines) {
    comments.push_back("r " + num(s.clip_radius, 17));
    comments.push_back("scan_steps " + std::to_string(o.common.scan_steps));
    comments.push_back("root_tol " + num(o.common.root_tol, 17));
    comments.push_back("lines " + std::to_string(lines_used));
  }
  const auto data = crofton::to_cloud_data(cloud, comments);
  std::ofstream out(o.output, std::ios::binary);
  if (!out) throw UsageError("cannot open '" + o.output + "' for writing");
  crofton::write_cloud(out, data, format);
  out.close();
  if (!out) throw UsageError("failed writing '" + o.output + "'");

  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json rec{{"command", "generate"}, {"surface", s.spec},         {"sampler", o.sampler},
           {"seed", o.common.seed}, {"points", cloud.size()},    {"normals", data.has_normals()},
           {"output", o.output},    {"elapsed_seconds", elapsed}};
  std::string text = "points " + std::to_string(cloud.size()) + "\n";
  if (lines) {
    const double mean = lines_used ? static_cast<double>(cloud.size()) / static_cast<double>(lines_used) : 0.0;
    rec["lines"] = lines_used;
    rec["mean_hits_per_line"] = mean;
    text += "lines " + std::to_string(lines_used) + "\nmean hits per line " + num(mean) + "\n";
  }
  text += "wrote " + o.output + "\nelapsed " + num(elapsed, 3) + " s";
  emit(o.common, rec, text);
  return kOk;
}

// ---- area / integrate ----

struct EstimateOptions {
  CommonOptions common;
  std::size_t m = 1000000;
  std::string representation;
  std::string f;
  std::string g;
};

crofton::Surface pick_representation(const LoadedSurface& s, const std::string& want) {
  if (want == "implicit" || (want.empty() && s.implicit)) {
    if (!s.implicit) throw UsageError("surface '" + s.spec + "' has no implicit form");
    return *s.implicit;
  }
  if (want == "parametric") {
    if (!s.parametric) throw UsageError("surface '" + s.spec + "' has no parametric chart");
    return *s.parametric;
  }
  if (!s.mesh) throw UsageError("surface '" + s.spec + "' has no mesh");
  return *s.mesh;
}

json estimate_record(const std::string& command, const LoadedSurface& s, const crofton::CroftonEstimate& e) {
  json hist = json::object();
  for (const auto& [k, count] : e.histogram) hist[std::to_string(k)] = count;
  return {{"command", command},
          {"surface", s.spec},
          {"value", e.value},
          {"standard_error", e.standard_error},
          {"lines", e.lines_used},
          {"mean_hits", e.mean_hits()},
          {"histogram", hist},
          {"warnings", e.warnings}};
}

std::string estimate_text(const std::string& label, const crofton::CroftonEstimate& e) {
  std::string text = label + " " + num(e.value, 10) + " +- " + num(e.standard_error, 4) + "\n";
  text += "lines " + std::to_string(e.lines_used) + "\nhistogram";
  for (const auto& [k, count] : e.histogram) text += " " + std::to_string(k) + ":" + std::to_string(count);
  for (const auto& w : e.warnings) text += "\nwarning: " + w;
  return text;
}

int cmd_area(const EstimateOptions& o) {
  const auto s = load_surface(o.common.surface, o.common.r, o.common.resolution);
  const auto surface = pick_representation(s, o.representation);
  auto src = ScalarSource::pseudo(o.common.seed);
  const auto e = crofton::estimate_area(surface, src, o.m, s.clip_radius, o.common.sampler_config());
  auto rec = estimate_record("area", s, e);
  auto text = estimate_text("area", e);
  if (s.catalog) {
    const bool smooth = std::holds_alternative<ImplicitSurface>(surface) || !s.catalog->face_areas.empty();
    const double exact = smooth ? s.catalog->area : s.mesh->total_area();
    rec["exact"] = exact;
    text += "\nexact " + num(exact, 10) + " (z " + num((e.value - exact) / e.standard_error, 3) + ")";
  }
  emit(o.common, rec, text);
  return kOk;
}

int cmd_integrate(const EstimateOptions& o) {
  const auto s = load_surface(o.common.surface, o.common.r, o.common.resolution);
  const auto surface = pick_representation(s, o.representation);
  const auto f = crofton::Expression::parse(o.f);
  auto src = ScalarSource::pseudo(o.common.seed);
  crofton::CroftonEstimate e;
  if (o.g.empty()) {
    e = crofton::estimate_surface_integral(surface, [&](const Vec3& x) { return f(x); }, src, o.m, s.clip_radius,
                                           o.common.sampler_config());
  } else {
    const auto g = crofton::Expression::parse(o.g);
    e = crofton::estimate_double_integral(surface, [&](const Vec3& x, const Vec3& y) { return f(x) * g(y); }, src,
                                          o.m, s.clip_radius, o.common.sampler_config());
  }
  auto rec = estimate_record("integrate", s, e);
  rec["f"] = o.f;
  if (!o.g.empty()) rec["g"] = o.g;
  emit(o.common, rec, estimate_text("integral", e));
  return kOk;
}

// ---- audit ----

struct AuditOptions {
  CommonOptions common;
  std::string cloud;
  std::size_t max_k = 2;
};

struct Audit {
  bool pass = true;
  void add(const CommonOptions& o, json rec, const std::string& text) {
    if (rec.contains("pass") && !rec["pass"].get<bool>()) pass = false;
    emit(o, rec, text);
  }
};

std::string verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

void audit_ktuple(Audit& audit, const CommonOptions& o, const std::vector<std::size_t>& labels,
                  const std::vector<double>& probs, std::size_t max_k, const std::string& cells) {
  for (std::size_t k = 1; k <= max_k; ++k) {
    const auto r = crofton::label_ktuple_test(labels, probs, k);
    audit.add(o,
              {{"test", "ktuple"}, {"cells", cells}, {"k", k}, {"windows", r.windows}, {"statistic", r.statistic},
               {"dof", r.dof}, {"threshold", r.threshold}, {"pass", r.pass}},
              "ktuple " + cells + " k=" + std::to_string(k) + " chi2 " + num(r.statistic) + " dof " + num(r.dof) +
                  " threshold " + num(r.threshold) + " " + verdict(r.pass));
  }
}

int cmd_audit(const AuditOptions& o) {
  std::ifstream in(o.cloud, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + o.cloud + "'");
  const auto data = crofton::read_cloud(in);
  if (data.points.empty()) throw UsageError("'" + o.cloud + "' holds no points");
  const auto& pts = data.points;

  std::string spec = o.common.surface;
  if (spec.empty()) {
    for (const auto& c : data.comments) {
      if (c.rfind("surface ", 0) == 0) spec = c.substr(8);
    }
  }
  const auto names = crofton::catalog_names();
  const bool known = std::find(names.begin(), names.end(), spec) != names.end();

  Audit audit;
  audit.add(o.common, {{"test", "summary"}, {"points", pts.size()}, {"surface", spec}, {"normals", data.has_normals()}},
            "points " + std::to_string(pts.size()) + (spec.empty() ? "" : "\nsurface " + spec));

  if (!known) {
    // serial test only: octant labels against their own observed frequencies
    std::vector<std::size_t> raw;
    std::map<std::size_t, std::size_t> seen;
    for (const auto& p : pts) ++seen[crofton::detail::octant_of(p)];
    std::map<std::size_t, std::size_t> remap;
    std::vector<double> probs;
    for (const auto& [label, count] : seen) {
      remap[label] = probs.size();
      probs.push_back(static_cast<double>(count) / static_cast<double>(pts.size()));
    }
    emit(o.common, {{"test", "note"}, {"message", "no catalog surface: region and density tests skipped"}},
         "no catalog surface: region and density tests skipped");
    if (probs.size() >= 2 && pts.size() > o.max_k) {
      for (const auto& p : pts) raw.push_back(remap[crofton::detail::octant_of(p)]);
      audit_ktuple(audit, o.common, raw, probs, o.max_k, "octants (observed frequencies)");
    }
  } else {
    const auto s = crofton::catalog_surface(spec, 9);
    for (const auto& r : crofton::region_test(pts, s.regions)) {
      audit.add(o.common,
                {{"test", "region"}, {"name", r.name}, {"count", r.count}, {"expected", r.fraction * r.n},
                 {"z", r.z}, {"pass", r.pass}},
                "region " + r.name + " count " + std::to_string(r.count) + " expected " + num(r.fraction * r.n) +
                    " z " + num(r.z, 3) + " " + verdict(r.pass));
    }
    std::vector<std::size_t> labels;
    labels.reserve(pts.size());
    for (const auto& p : pts) labels.push_back(s.cell_of(p));
    if (pts.size() > o.max_k) audit_ktuple(audit, o.common, labels, s.cell_fractions, o.max_k, "cells");

    if (s.bin_of) {
      std::vector<std::size_t> bins;
      bins.reserve(pts.size());
      for (const auto& p : pts) bins.push_back(s.bin_of(p));
      const auto d = crofton::density_variation(bins, s.bin_areas, o.common.seed);
      // each bin's count against its area share
      bool pass = true;
      json per_bin = json::array();
      std::string text;
      const double n = static_cast<double>(pts.size());
      for (std::size_t b = 0; b < s.bin_areas.size(); ++b) {
        const double p = s.bin_areas[b] / s.area;
        const double z = (static_cast<double>(d.counts[b]) - n * p) / std::sqrt(n * p * (1.0 - p));
        pass = pass && std::abs(z) < crofton::kZThreshold;
        per_bin.push_back({{"count", d.counts[b]}, {"density", d.densities[b]}, {"z", z}});
        text += " bin" + std::to_string(b) + " z " + num(z, 3);
      }
      audit.add(o.common,
                {{"test", "density"}, {"ratio", d.ratio}, {"standard_error", d.standard_error}, {"bins", per_bin},
                 {"pass", pass}},
                "density ratio " + num(d.ratio, 4) + " +- " + num(d.standard_error, 2) + text + " " + verdict(pass));
    }
  }
  emit(o.common, {{"test", "verdict"}, {"pass", audit.pass}}, "audit " + verdict(audit.pass));
  return audit.pass ? kOk : kAuditFailed;
}

// ---- bench ----

struct BenchOptions {
  std::string fixture = "cos-product";
  int dim = 6;
  std::vector<std::size_t> budgets{100, 1000, 10000, 100000, 1000000};
  std::size_t seeds = 32;
  std::uint64_t seed = 0;
  bool json = false;
};

int cmd_bench(const BenchOptions& o) {
  crofton::BenchConfig cfg;
  cfg.budgets = o.budgets;
  cfg.seeds = o.seeds;
  cfg.seed = o.seed;
  crofton::BenchResult r;
  if (o.fixture == "cos-product") {
    const auto f = [](std::span<const double> x) {
      double p = 1.0;
      for (double v : x) p *= std::cos(v);
      return p;
    };
    r = crofton::curse_benchmark(f, o.dim, std::pow(std::sin(1.0), o.dim), cfg);
  } else {
    r = crofton::curse_benchmark([](std::span<const double>) { return 1.0; }, o.dim, 1.0, cfg);
  }
  CommonOptions out;
  out.json = o.json;
  emit(out, {{"command", "bench"}, {"fixture", o.fixture}, {"dim", r.dim}, {"truth", r.truth}},
       "fixture " + o.fixture + " dim " + std::to_string(r.dim) + " truth " + num(r.truth, 12) +
           "\nmethod        evaluations      error        bias +- se");
  for (const auto& row : r.rows) {
    json rec{{"method", row.method}, {"evaluations", row.evaluations}, {"error", row.error}};
    char line[160];
    if (row.method == "monte-carlo") {
      rec["bias"] = row.bias;
      rec["bias_se"] = row.bias_se;
      std::snprintf(line, sizeof line, "%-12s %12zu %12.4e %12.4e +- %.2e", row.method.c_str(), row.evaluations,
                    row.error, row.bias, row.bias_se);
    } else {
      std::snprintf(line, sizeof line, "%-12s %12zu %12.4e", row.method.c_str(), row.evaluations, row.error);
    }
    emit(out, rec, line);
  }
  emit(out, {{"mc_slope", r.mc_slope}}, "mc slope " + num(r.mc_slope, 4));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Point clouds and surface integrals from random lines"};
  app.require_subcommand(1);

  GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "write a point cloud");
  add_common(*generate, gen.common);
  generate->add_option("--sampler", gen.sampler, "crofton, axis-aligned, triangulated or parametric")
      ->check(CLI::IsMember({"crofton", "axis-aligned", "triangulated", "parametric"}))
      ->capture_default_str();
  generate->add_option("--n", gen.n, "target point count")->check(CLI::PositiveNumber)->capture_default_str();
  generate->add_option("--shards", gen.shards, "independent streams seeded seed, seed+1, ...")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  generate->add_option("-o,--output", gen.output, "output file")->required();
  generate->add_option("--format", gen.format, "xyz, ply or ply-binary (default: from the file extension)")
      ->check(CLI::IsMember({"xyz", "ply", "ply-binary"}));

  EstimateOptions area;
  auto* area_cmd = app.add_subcommand("area", "estimate surface area");
  add_common(*area_cmd, area.common);
  area_cmd->add_option("--m", area.m, "number of lines")->check(CLI::PositiveNumber)->capture_default_str();
  area_cmd->add_option("--representation", area.representation, "implicit, parametric or mesh")
      ->check(CLI::IsMember({"implicit", "parametric", "mesh"}));

  EstimateOptions integ;
  auto* integ_cmd = app.add_subcommand("integrate", "estimate the surface integral of f, or of f(x) g(y) over pairs");
  add_common(*integ_cmd, integ.common);
  integ_cmd->add_option("--m", integ.m, "number of lines (line pairs with --g)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  integ_cmd->add_option("--representation", integ.representation, "implicit, parametric or mesh")
      ->check(CLI::IsMember({"implicit", "parametric", "mesh"}));
  integ_cmd->add_option("--f", integ.f, "integrand in x, y, z")->required();
  integ_cmd->add_option("--g", integ.g, "second factor for the double integral");

  AuditOptions aud;
  auto* audit = app.add_subcommand("audit", "equidistribution tests on a cloud file");
  add_common(*audit, aud.common, false);
  audit->add_option("cloud", aud.cloud, "XYZ or PLY file")->required();
  audit->add_option("--k", aud.max_k, "largest tuple length for the serial test")
      ->check(CLI::Range(1, 3))
      ->capture_default_str();

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Monte Carlo against the midpoint rule on [0,1]^n");
  bench_cmd->add_option("--fixture", bench.fixture, "cos-product or constant")
      ->check(CLI::IsMember({"cos-product", "constant"}))
      ->capture_default_str();
  bench_cmd->add_option("--dim", bench.dim, "dimension")->check(CLI::Range(1, 12))->capture_default_str();
  bench_cmd->add_option("--budgets", bench.budgets, "evaluation budgets")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seeds", bench.seeds, "Monte Carlo repetitions")->check(CLI::Range(2, 100000))
      ->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "first seed")->capture_default_str();
  bench_cmd->add_flag("--json", bench.json, "print line-delimited JSON records instead of text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*generate) return cmd_generate(gen);
    if (*area_cmd) return cmd_area(area);
    if (*integ_cmd) return cmd_integrate(integ);
    if (*audit) return cmd_audit(aud);
    if (*bench_cmd) return cmd_bench(bench);
  } catch (const crofton::NumericError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
