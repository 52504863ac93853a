#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "crofton/catalog.hpp"
#include "crofton/cloud_io.hpp"
#include "crofton/mesh_io.hpp"

#ifndef CROFTON_CLI_PATH
#error "CROFTON_CLI_PATH must name the CLI binary"
#endif

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / ("crofton_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  static void TearDownTestSuite() { fs::remove_all(dir_); }

  static std::string path(const std::string& name) { return (dir_ / name).string(); }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

  static CliRun run(const std::string& args, const std::string& env = "") {
    const std::string out = path("stdout.txt");
    const std::string err = path("stderr.txt");
    const std::string cmd = env + (env.empty() ? "" : " ") + std::string(CROFTON_CLI_PATH) + " " + args + " >" +
                            out + " 2>" + err;
    const int status = std::system(cmd.c_str());
    CliRun r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  static crofton::CloudData read(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return crofton::read_cloud(in);
  }

  static inline fs::path dir_;
};

TEST_F(Cli, GenerateIsByteIdentical) {
  for (const std::string fmt : {"xyz", "ply", "ply-binary"}) {
    const std::string a = path("a." + fmt);
    const std::string b = path("b." + fmt);
    const std::string args = "generate --surface sphere --sampler crofton --n 5000 --seed 7 --r 2 --format " + fmt;
    ASSERT_EQ(run(args + " -o " + a).code, 0) << fmt;
    ASSERT_EQ(run(args + " -o " + b).code, 0) << fmt;
    EXPECT_EQ(slurp(a), slurp(b)) << fmt;
    EXPECT_FALSE(slurp(a).empty());
  }
  ASSERT_EQ(run("generate --surface sphere --n 5000 --seed 8 --format xyz -o " + path("c.xyz")).code, 0);
  EXPECT_NE(slurp(path("a.xyz")), slurp(path("c.xyz")));
}

TEST_F(Cli, ShardOutputIndependentOfThreads) {
  const std::string args = "generate --surface torus --n 6000 --shards 4 --seed 3 --format ply-binary -o ";
  ASSERT_EQ(run(args + path("one.ply"), "CROFTON_THREADS=1").code, 0);
  ASSERT_EQ(run(args + path("four.ply"), "CROFTON_THREADS=4").code, 0);
  EXPECT_EQ(slurp(path("one.ply")), slurp(path("four.ply")));
  EXPECT_EQ(run(args + path("bad.ply"), "CROFTON_THREADS=zero").code, 1);
}

TEST_F(Cli, GenerateHeaderAndContents) {
  const CliRun r = run("generate --surface sphere --sampler crofton --n 20000 --seed 7 --r 2 -o " + path("s.ply"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("mean hits per line"), std::string::npos);
  const auto d = read(path("s.ply"));
  EXPECT_EQ(d.seed(), 7u);
  EXPECT_GE(d.points.size(), 20000u);
  ASSERT_TRUE(d.has_normals());
  for (std::size_t i = 0; i < d.points.size(); i += 97) {
    EXPECT_NEAR(crofton::norm(d.points[i]), 1.0, 1e-9);
    EXPECT_NEAR(crofton::dot(d.points[i], d.normals[i]), 1.0, 1e-9);
  }
}

TEST_F(Cli, EverySamplerWrites) {
  for (const std::string sampler : {"crofton", "axis-aligned", "triangulated", "parametric"}) {
    const CliRun r =
        run("generate --surface sphere --res 65 --sampler " + sampler + " --n 2000 -o " + path(sampler + ".xyz"));
    ASSERT_EQ(r.code, 0) << sampler << ": " << r.err;
    EXPECT_GE(read(path(sampler + ".xyz")).points.size(), 2000u);
  }
  EXPECT_EQ(run("generate --surface plane --sampler crofton --n 10 -o " + path("x.xyz")).code, 1);
  EXPECT_EQ(run("generate --surface sphere --sampler nope --n 10 -o " + path("x.xyz")).code, 1);
  EXPECT_EQ(run("generate --surface sphere --n 10 -o " + path("x.unknown")).code, 1);
}

TEST_F(Cli, ExpressionSurfaceMatchesCatalogSphere) {
  ASSERT_EQ(run("generate --surface sphere --n 3000 --seed 11 -o " + path("cat.xyz")).code, 0);
  ASSERT_EQ(run("generate --surface \"x^2+y^2+z^2-1\" --n 3000 --seed 11 -o " + path("expr.xyz")).code, 0);
  const auto a = read(path("cat.xyz"));
  const auto b = read(path("expr.xyz"));
  ASSERT_EQ(a.points.size(), b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    ASSERT_LT(crofton::norm(a.points[i] - b.points[i]), 1e-9) << i;
  }
}

TEST_F(Cli, AreaAndIntegrate) {
  const CliRun area = run("area --surface sphere --r 2 --m 100000 --seed 5 --json");
  ASSERT_EQ(area.code, 0) << area.err;
  const auto a = json::parse(area.out);
  EXPECT_LT(std::abs(a["value"].get<double>() - 4 * std::numbers::pi), 3 * a["standard_error"].get<double>());
  EXPECT_EQ(a["lines"].get<std::size_t>(), 100000u);
  EXPECT_EQ(a["histogram"]["0"].get<std::size_t>() + a["histogram"]["2"].get<std::size_t>(), 100000u);

  const CliRun integ = run("integrate --surface sphere --f \"z^2\" --m 100000 --json");
  ASSERT_EQ(integ.code, 0) << integ.err;
  const auto i = json::parse(integ.out);
  EXPECT_LT(std::abs(i["value"].get<double>() - 4 * std::numbers::pi / 3), 3 * i["standard_error"].get<double>());

  const CliRun text = run("area --surface tetrahedron --m 1000");
  ASSERT_EQ(text.code, 0);
  EXPECT_EQ(text.out.rfind("area ", 0), 0u);
  EXPECT_NE(text.out.find("exact"), std::string::npos);
}

TEST_F(Cli, MeshFileSurface) {
  const auto tetra = crofton::catalog_surface("tetrahedron");
  {
    std::ofstream out(path("tetra.off"));
    crofton::write_off(out, *tetra.mesh);
  }
  const CliRun area = run("area --surface " + path("tetra.off") + " --m 100000 --json");
  ASSERT_EQ(area.code, 0) << area.err;
  const auto a = json::parse(area.out);
  EXPECT_LT(std::abs(a["value"].get<double>() - tetra.mesh->total_area()), 3 * a["standard_error"].get<double>());
  EXPECT_EQ(run("generate --surface " + path("tetra.off") + " --sampler triangulated --n 100 -o " + path("t.xyz")).code,
            0);
  {
    std::ofstream out(path("broken.off"));
    out << "OFF\n3 1 0\n0 0 0\n1 0 0\n";
  }
  const CliRun broken = run("area --surface " + path("broken.off"));
  EXPECT_EQ(broken.code, 1);
  EXPECT_NE(broken.err.find("line"), std::string::npos) << broken.err;
}

TEST_F(Cli, AuditPassesCroftonAndFlagsAxisAligned) {
  ASSERT_EQ(run("generate --surface sphere --n 100000 --seed 1 -o " + path("good.ply")).code, 0);
  const CliRun good = run("audit " + path("good.ply"));
  EXPECT_EQ(good.code, 0) << good.out;
  EXPECT_NE(good.out.find("audit PASS"), std::string::npos);

  ASSERT_EQ(run("generate --surface pyramid --sampler axis-aligned --n 100000 --seed 1 -o " + path("bad.ply")).code, 0);
  const CliRun bad = run("audit " + path("bad.ply") + " --json");
  EXPECT_EQ(bad.code, 3);
  bool saw_density = false;
  std::istringstream lines(bad.out);
  for (std::string line; std::getline(lines, line);) {
    const auto rec = json::parse(line);
    if (rec["test"] == "density") {
      saw_density = true;
      EXPECT_FALSE(rec["pass"].get<bool>());
      EXPECT_NEAR(rec["ratio"].get<double>(), std::sqrt(3.0), 0.05 * std::sqrt(3.0));
    }
  }
  EXPECT_TRUE(saw_density);
}

TEST_F(Cli, AuditErrors) {
  ASSERT_EQ(run("generate --surface sphere --n 1000 --format ply-binary -o " + path("full.ply")).code, 0);
  const std::string bytes = slurp(path("full.ply"));
  {
    std::ofstream out(path("cut.ply"), std::ios::binary);
    out << bytes.substr(0, bytes.size() - 100);
  }
  const CliRun cut = run("audit " + path("cut.ply"));
  EXPECT_EQ(cut.code, 1);
  EXPECT_NE(cut.err.find("byte offset"), std::string::npos) << cut.err;

  {
    std::ofstream out(path("bad.xyz"));
    out << "0 0 1\n0 1\n";
  }
  const CliRun bad = run("audit " + path("bad.xyz"));
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("line 2"), std::string::npos) << bad.err;
  EXPECT_EQ(run("audit " + path("missing.xyz")).code, 1);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("--help").code, 0);
  EXPECT_EQ(run("area").code, 1);
  EXPECT_EQ(run("area --surface sphere --m 0").code, 1);
  EXPECT_EQ(run("area --surface \"x^\"").code, 1);
  const CliRun numeric = run("generate --surface \"x^2+y^2+z^2+1\" --n 10 -o " + path("none.xyz"));
  EXPECT_EQ(numeric.code, 2);
  EXPECT_NE(numeric.err.find("surface not found"), std::string::npos);
}

TEST_F(Cli, Bench) {
  const CliRun r = run("bench --fixture constant --dim 3 --budgets 100 1000 --seeds 2 --json");
  ASSERT_EQ(r.code, 0);
  std::istringstream lines(r.out);
  std::size_t rows = 0;
  for (std::string line; std::getline(lines, line);) {
    const auto rec = json::parse(line);
    if (!rec.contains("method")) continue;
    ++rows;
    EXPECT_LE(rec["error"].get<double>(), 1e-14);
  }
  EXPECT_EQ(rows, 4u);
  const CliRun text = run("bench --dim 2 --budgets 100 10000 --seeds 4");
  EXPECT_NE(text.out.find("mc slope"), std::string::npos);
  EXPECT_NE(text.out.find("riemann"), std::string::npos);
}

}  // namespace
