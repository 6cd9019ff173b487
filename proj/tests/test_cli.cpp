#include "nanoforce/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>

using namespace nanoforce;
namespace fs = std::filesystem;

namespace {

struct Invocation {
  int code;
  std::string out, err;
};

fs::path write_config(const std::string& name, const std::string& body) {
  const fs::path p = fs::temp_directory_path() / ("nanoforce_cli_" + name + ".json");
  std::ofstream(p, std::ios::binary) << body;
  return p;
}

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "nanoforce");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> data_rows(const std::string& csv) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(csv);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

const char* kCp = R"({
  "temperature": 1.0,
  "wall": {"type": "drude", "omega_p": 5.0, "gamma": 0.1},
  "particle": {"type": "isotropic", "alpha0": 1.0, "omega0": 1.0, "gamma": 0.1},
  "sweep": {"axis": "z", "min": 0.2, "max": 4.0, "points": 5}
})";

}  // namespace

TEST(Cli, VacuumWallGivesZeroForce) {
  const auto p = write_config("vacuum", R"({"temperature": 0.5, "wall": {"type": "vacuum"},
    "particle": {"type": "static", "alpha0": 1.0},
    "sweep": {"axis": "z", "min": 0.5, "max": 2, "points": 4}})");
  const Invocation r = invoke({"cp", "--config", p.string()});
  EXPECT_EQ(r.code, cli::ok) << r.err;
  const auto rows = data_rows(r.out);
  ASSERT_EQ(rows.size(), 4u);
  for (const auto& row : rows) {
    EXPECT_EQ(std::stod(row[1]), 0.0);
    EXPECT_EQ(row[4], "1");
  }
}

TEST(Cli, CpRowsMatchLibrary) {
  const auto p = write_config("cp", kCp);
  const Invocation r = invoke({"cp", "--config", p.string()});
  ASSERT_EQ(r.code, cli::ok) << r.err;
  const auto rows = data_rows(r.out);
  ASSERT_EQ(rows.size(), 5u);
  HalfSpaceScene scene;
  scene.temperature = 1.0;
  scene.wall = PermittivityModel::drude(5.0, 0.1);
  scene.particle = PolarizabilityModel::isotropic(1.0, 1.0, 0.1);
  for (const auto& row : rows) {
    scene.distance = std::stod(row[0]);
    const auto direct = cp_force(scene);
    EXPECT_EQ(row[1], cli::num(direct.force));
    EXPECT_EQ(std::stoul(row[3]), direct.s_terms_used);
  }
  EXPECT_EQ(rows.front()[0], cli::num(0.2));
  EXPECT_EQ(rows.back()[0], cli::num(4.0));
}

TEST(Cli, FrictionRowsMatchLibrary) {
  const auto p = write_config("friction", R"({"speed": 1e-4, "direction": [1, 0, 0],
    "particle": {"type": "isotropic", "alpha0": 1.0, "omega0": 1.0, "gamma": 0.1},
    "sweep": {"axis": "T", "min": 0.2, "max": 2.0, "points": 3}})");
  const Invocation r = invoke({"friction", "--config", p.string()});
  ASSERT_EQ(r.code, cli::ok) << r.err;
  const auto rows = data_rows(r.out);
  ASSERT_EQ(rows.size(), 3u);
  FrictionScene scene;
  scene.speed = 1e-4;
  scene.direction = {1.0, 0.0, 0.0};
  scene.particle = PolarizabilityModel::isotropic(1.0, 1.0, 0.1);
  for (const auto& row : rows) {
    scene.temperature = std::stod(row[0]);
    const auto direct = friction_force(scene);
    for (int i = 0; i < 3; ++i) EXPECT_EQ(row[1 + i], cli::num(direct.force[i]));
  }
  EXPECT_NE(r.out.find("# convention:"), std::string::npos);
}

TEST(Cli, OutputIsByteIdenticalOnRerun) {
  const auto p = write_config("rerun", kCp);
  const Invocation a = invoke({"cp", "--config", p.string()});
  const Invocation b = invoke({"cp", "--config", p.string()});
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, OutFileMatchesStdout) {
  const auto p = write_config("outfile", kCp);
  const fs::path csv = fs::temp_directory_path() / "nanoforce_cli_out.csv";
  const Invocation a = invoke({"cp", "--config", p.string(), "--out", csv.string()});
  ASSERT_EQ(a.code, cli::ok);
  EXPECT_TRUE(a.out.empty());
  std::ifstream in(csv, std::ios::binary);
  std::ostringstream file;
  file << in.rdbuf();
  EXPECT_EQ(file.str(), invoke({"cp", "--config", p.string()}).out);
}

TEST(Cli, DigestTracksFileBytes) {
  // FNV-1a 64 reference values.
  EXPECT_EQ(cli::fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(cli::fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  const auto a = cli::parse_config(kCp);
  const auto b = cli::parse_config(std::string(kCp) + "\n");
  EXPECT_NE(a.digest, b.digest);
  EXPECT_EQ(a.digest, cli::parse_config(kCp).digest);
}

TEST(Cli, NegativeDistanceNamesTheKey) {
  const auto p = write_config("negative", R"({"temperature": 1, "distance": -1,
    "wall": {"type": "constant", "eps0": 3}, "particle": {"type": "static", "alpha0": 1}})");
  const Invocation r = invoke({"cp", "--config", p.string()});
  EXPECT_EQ(r.code, cli::config_error);
  EXPECT_NE(r.err.find("distance"), std::string::npos) << r.err;
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, ErrorsCarryNestedKeyPath) {
  try {
    cli::parse_config(R"({"sweep": {"axis": "z", "min": -1, "max": 2, "points": 3}})");
    FAIL();
  } catch (const cli::ConfigError& e) {
    EXPECT_EQ(e.key, "sweep.min");
  }
  try {
    cli::parse_config(R"({"particle": {"type": "diagonal", "xx": {"alpha0": 1}, "yy": {"alpha0": 1},
                                       "zz": {"alpha0": 1, "gamma": 0.1}}})");
    FAIL();
  } catch (const cli::ConfigError& e) {
    EXPECT_EQ(e.key, "particle.zz.gamma");
  }
  EXPECT_THROW(cli::parse_config(R"({"speed": 1.5})"), cli::ConfigError);
  EXPECT_THROW(cli::parse_config(R"({"units": "SI"})"), cli::ConfigError);
  EXPECT_THROW(cli::parse_config("{not json"), cli::ConfigError);
}

TEST(Cli, UnknownKeysRejected) {
  try {
    cli::parse_config(R"({"wall": {"type": "constant", "eps0": 2, "eps": 3}})");
    FAIL();
  } catch (const cli::ConfigError& e) {
    EXPECT_EQ(e.key, "wall.eps");
  }
  const auto p = write_config("unknown", R"({"temprature": 1})");
  EXPECT_EQ(invoke({"cp", "--config", p.string()}).code, cli::config_error);
}

TEST(Cli, MissingInputsAreConfigErrors) {
  const auto p = write_config("missing", R"({"temperature": 1, "particle": {"type": "static", "alpha0": 1}})");
  const Invocation r = invoke({"cp", "--config", p.string()});
  EXPECT_EQ(r.code, cli::config_error);
  EXPECT_NE(r.err.find("wall"), std::string::npos);
  EXPECT_EQ(invoke({"cp", "--config", "/nonexistent/x.json"}).code, cli::config_error);
  EXPECT_EQ(invoke({"cp"}).code, cli::config_error);
  EXPECT_EQ(invoke({"bogus"}).code, cli::config_error);
  EXPECT_EQ(invoke({"validate", "--suite", "nope"}).code, cli::config_error);
}

TEST(Cli, NonConvergenceExitCode) {
  const auto p = write_config("budget", R"({"temperature": 0.01, "distance": 1,
    "wall": {"type": "constant", "eps0": 3}, "particle": {"type": "isotropic", "alpha0": 1, "omega0": 1},
    "numerics": {"matsubara_max_terms": 2}})");
  const Invocation r = invoke({"cp", "--config", p.string()});
  EXPECT_EQ(r.code, cli::not_converged);
  const auto rows = data_rows(r.out);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0][4], "0");
}

TEST(Cli, MaterialTableDefaultsAndValues) {
  const auto p = write_config("material", R"({"wall": {"type": "constant", "eps0": 4},
    "particle": {"type": "static", "alpha0": 2}})");
  const Invocation r = invoke({"material", "--config", p.string()});
  ASSERT_EQ(r.code, cli::ok);
  const auto rows = data_rows(r.out);
  ASSERT_EQ(rows.size(), 61u);
  EXPECT_EQ(rows.front()[0], cli::num(1e-3));
  EXPECT_EQ(rows.back()[0], cli::num(1e3));
  for (const auto& row : rows) {
    EXPECT_EQ(std::stod(row[1]), 4.0);
    EXPECT_EQ(std::stod(row[4]), 2.0);
  }
}

TEST(Cli, ValidateSuitePrintsOneLinePerCheck) {
  const Invocation r = invoke({"validate", "--suite", "keldysh"});
  EXPECT_EQ(r.code, cli::ok);
  EXPECT_NE(r.out.find("[PASS] C9"), std::string::npos);
  EXPECT_NE(r.out.find("summary: suite=keldysh passed=1 failed=0"), std::string::npos);
}
