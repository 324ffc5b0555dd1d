#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "incdyn/cli.hpp"
#include "test_helpers.hpp"

using namespace incdyn;
namespace fs = std::filesystem;

namespace {

const std::string kRpsConfig = R"({
  "game": {"populations": 1, "matrix": [[0,-1,2],[2,0,-1],[-1,2,0]]},
  "incentive": {"kind": "replicator"},
  "initial_states": [[0.6, 0.2, 0.2]],
  "solver": {"method": "rk4-fixed", "step": 1e-3, "t_end": 5, "record_every": 10},
  "target": [1, 1, 1],
  "check": {"radius": 0.1, "samples": 200, "seed": 7},
  "output": {"prefix": "rps"}
})";

/// Fresh scratch directory under the test working directory.
fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::path("cli_scratch") / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string write_config(const fs::path& dir, const std::string& body,
                         const std::string& name = "config.json") {
  const fs::path path = dir / name;
  testutil::write_file(path.string(), body);
  return path.string();
}

CliOptions opts(const fs::path& out_dir) {
  CliOptions o;
  o.out_dir = out_dir.string();
  o.quiet = true;
  return o;
}

}  // namespace

TEST_CASE("cmd_simulate writes a monitored trajectory CSV and summary") {
  const fs::path dir = scratch_dir("simulate");
  const std::string config = write_config(dir, kRpsConfig);
  REQUIRE(cmd_simulate(config, opts(dir)) == 0);

  const fs::path csv = dir / "rps_traj_0.csv";
  REQUIRE(fs::exists(csv));
  REQUIRE(fs::exists(dir / "rps_summary.txt"));

  const CsvTable table = read_csv(csv.string());
  CHECK(table.columns ==
        std::vector<std::string>{"t", "x0_0", "x0_1", "x0_2", "V", "Vdot"});
  CHECK(table.rows.front()[0] == 0.0);
  // V decreases along the stable run.
  const std::size_t cv = table.column_index("V");
  CHECK(table.rows.back()[cv] < table.rows.front()[cv]);
}

TEST_CASE("cmd_simulate output is byte-reproducible") {
  const fs::path dir_a = scratch_dir("repro_a");
  const fs::path dir_b = scratch_dir("repro_b");
  const std::string config_a = write_config(dir_a, kRpsConfig);
  const std::string config_b = write_config(dir_b, kRpsConfig);
  REQUIRE(cmd_simulate(config_a, opts(dir_a)) == 0);
  REQUIRE(cmd_simulate(config_b, opts(dir_b)) == 0);
  const std::string csv_a = testutil::read_file((dir_a / "rps_traj_0.csv").string());
  const std::string csv_b = testutil::read_file((dir_b / "rps_traj_0.csv").string());
  REQUIRE_FALSE(csv_a.empty());
  CHECK(csv_a == csv_b);
  CHECK(testutil::read_file((dir_a / "rps_summary.txt").string()) ==
        testutil::read_file((dir_b / "rps_summary.txt").string()));
}

TEST_CASE("cmd_simulate rejects a mismatched matrix with exit 2") {
  const fs::path dir = scratch_dir("badmatrix");
  const std::string config = write_config(dir, R"({
    "game": {"populations": 1, "matrix": [[0,-1],[2,0],[-1,2]]},
    "incentive": {"kind": "replicator"},
    "initial_states": [[0.6, 0.2, 0.2]]
  })");
  CHECK(cmd_simulate(config, opts(dir)) == 2);

  const std::string config2 = write_config(dir, R"({
    "game": {"populations": 1, "matrix": [[0,-1,2],[2,0,-1],[-1,2,0]]},
    "incentive": {"kind": "replicator"},
    "initial_states": [[0.6, 0.4]]
  })",
                                            "config2.json");
  CHECK(cmd_simulate(config2, opts(dir)) == 2);
  CHECK(cmd_simulate((dir / "missing.json").string(), opts(dir)) == 2);
  const std::string config3 = write_config(dir, "{not json", "config3.json");
  CHECK(cmd_simulate(config3, opts(dir)) == 2);
}

TEST_CASE("cmd_simulate reports integration failure with exit 3") {
  // Projection dynamics on a coordination game exit the simplex; the reject
  // policy turns that into a runtime failure.
  const fs::path dir = scratch_dir("leftsimplex");
  const std::string config = write_config(dir, R"({
    "game": {"populations": 1, "matrix": [[1,0],[0,1]]},
    "incentive": {"kind": "projection"},
    "initial_states": [[0.2, 0.8]],
    "solver": {"method": "euler-fixed", "step": 0.5, "t_end": 5,
               "boundary_policy": "reject"}
  })");
  CHECK(cmd_simulate(config, opts(dir)) == 3);
}

TEST_CASE("cmd_check honors the verdict exit contract") {
  const fs::path dir = scratch_dir("check");
  const std::string positive = write_config(dir, kRpsConfig, "pos.json");
  CHECK(cmd_check(positive, "iss", opts(dir)) == 0);
  REQUIRE(fs::exists(dir / "rps_iss_certificate.txt"));
  const std::string cert = testutil::read_file((dir / "rps_iss_certificate.txt").string());
  CHECK(cert.find("verdict: true") != std::string::npos);
  CHECK(cert.find("kind: iss") != std::string::npos);
  CHECK(cert.find("seed: 7") != std::string::npos);

  const std::string negative = write_config(dir, R"({
    "game": {"populations": 1, "matrix": [[0,-2,1],[1,0,-2],[-2,1,0]]},
    "incentive": {"kind": "replicator"},
    "target": [1, 1, 1],
    "check": {"radius": 0.1, "samples": 200, "seed": 7},
    "output": {"prefix": "neg"}
  })",
                                            "neg.json");
  CHECK(cmd_check(negative, "iss", opts(dir)) == 1);
  const std::string neg_cert = testutil::read_file((dir / "neg_iss_certificate.txt").string());
  CHECK(neg_cert.find("verdict: false") != std::string::npos);

  CHECK(cmd_check(positive, "ess", opts(dir)) == 0);
  CHECK(cmd_check(positive, "validity", opts(dir)) == 0);
  CHECK(cmd_check(positive, "bogus", opts(dir)) == 2);

  // Sampling without a seed anywhere is a config error.
  const std::string seedless = write_config(dir, R"({
    "game": {"populations": 1, "matrix": [[0,-1,2],[2,0,-1],[-1,2,0]]},
    "incentive": {"kind": "replicator"},
    "target": [1, 1, 1],
    "check": {"radius": 0.1, "samples": 100}
  })",
                                            "seedless.json");
  CHECK(cmd_check(seedless, "iss", opts(dir)) == 2);
  CliOptions with_seed = opts(dir);
  with_seed.seed = 7;
  CHECK(cmd_check(seedless, "iss", with_seed) == 0);

  // A boundary candidate cannot be certified: config error.
  const std::string boundary = write_config(dir, R"({
    "game": {"populations": 1, "matrix": [[0,-1,2],[2,0,-1],[-1,2,0]]},
    "incentive": {"kind": "replicator"},
    "target": [1, 0, 0],
    "check": {"radius": 0.1, "samples": 100, "seed": 7}
  })",
                                            "boundary.json");
  CHECK(cmd_check(boundary, "iss", opts(dir)) == 2);
}

TEST_CASE("cmd_check certificates are byte-reproducible") {
  const fs::path dir_a = scratch_dir("cert_a");
  const fs::path dir_b = scratch_dir("cert_b");
  const std::string config_a = write_config(dir_a, kRpsConfig);
  const std::string config_b = write_config(dir_b, kRpsConfig);
  REQUIRE(cmd_check(config_a, "iss", opts(dir_a)) == 0);
  REQUIRE(cmd_check(config_b, "iss", opts(dir_b)) == 0);
  CHECK(testutil::read_file((dir_a / "rps_iss_certificate.txt").string()) ==
        testutil::read_file((dir_b / "rps_iss_certificate.txt").string()));
}

TEST_CASE("cmd_plotdata round-trips simulate output") {
  const fs::path dir = scratch_dir("plot");
  const std::string config = write_config(dir, kRpsConfig);
  REQUIRE(cmd_simulate(config, opts(dir)) == 0);
  const fs::path csv = dir / "rps_traj_0.csv";
  REQUIRE(cmd_plotdata(csv.string(), opts(dir)) == 0);

  const fs::path ternary = dir / "rps_traj_0_ternary.dat";
  const fs::path vfile = dir / "rps_traj_0_v.dat";
  REQUIRE(fs::exists(ternary));
  REQUIRE(fs::exists(vfile));

  // First data row of the ternary file is the affine image of x0.
  const CsvTable table = read_csv(csv.string());
  const double u = table.rows[0][2] + 0.5 * table.rows[0][3];
  const double v = 0.86602540378443865 * table.rows[0][3];
  std::istringstream tern(testutil::read_file(ternary.string()));
  std::string header;
  std::getline(tern, header);
  double tu = 0.0, tv = 0.0;
  tern >> tu >> tv;
  CHECK(tu == Catch::Approx(u).margin(1e-15));
  CHECK(tv == Catch::Approx(v).margin(1e-15));
}

TEST_CASE("cmd_plotdata gates the ternary file on dimension") {
  const fs::path dir = scratch_dir("plot2d");
  const std::string config = write_config(dir, R"({
    "game": {"populations": 1, "matrix": [[2,0],[0,1]]},
    "incentive": {"kind": "best-reply"},
    "initial_states": [[0.9, 0.1]],
    "solver": {"step": 0.01, "t_end": 1},
    "output": {"prefix": "two"}
  })");
  REQUIRE(cmd_simulate(config, opts(dir)) == 0);
  REQUIRE(cmd_plotdata((dir / "two_traj_0.csv").string(), opts(dir)) == 0);
  CHECK_FALSE(fs::exists(dir / "two_traj_0_ternary.dat"));
  CHECK_FALSE(fs::exists(dir / "two_traj_0_v.dat"));  // unmonitored run
}

TEST_CASE("two-population configs drive the full pipeline") {
  const fs::path dir = scratch_dir("twopop");
  const std::string config = write_config(dir, R"({
    "game": {"populations": 2,
             "matrix_a": [[1,-1],[-1,1]],
             "matrix_b": [[-1,1],[1,-1]]},
    "incentive": {"kind": "best-reply", "tiebreak": "uniform-mixture"},
    "initial_states": [[[0.6, 0.4], [0.45, 0.55]]],
    "solver": {"step": 0.01, "t_end": 2},
    "target": [[0.5, 0.5], [0.5, 0.5]],
    "check": {"radius": 0.05, "samples": 200, "seed": 9},
    "output": {"prefix": "mp"}
  })");
  REQUIRE(cmd_simulate(config, opts(dir)) == 0);
  const CsvTable table = read_csv((dir / "mp_traj_0.csv").string());
  CHECK(table.columns ==
        std::vector<std::string>{"t", "x0_0", "x0_1", "x1_0", "x1_1", "V", "Vdot"});

  // Matching pennies has no incentive stable state: verdict false, exit 1.
  CHECK(cmd_check(config, "iss", opts(dir)) == 1);
  CHECK(cmd_check(config, "validity", opts(dir)) == 0);

  // plotdata still consumes the CSV; the ternary table is gated off.
  REQUIRE(cmd_plotdata((dir / "mp_traj_0.csv").string(), opts(dir)) == 0);
  CHECK_FALSE(fs::exists(dir / "mp_traj_0_ternary.dat"));
  CHECK(fs::exists(dir / "mp_traj_0_v.dat"));
}

TEST_CASE("cmd_plotdata rejects malformed CSV with exit 2") {
  const fs::path dir = scratch_dir("plotbad");
  const fs::path bad = dir / "bad.csv";
  testutil::write_file(bad.string(), "a,b\n1,2\n");
  CHECK(cmd_plotdata(bad.string(), opts(dir)) == 2);
  const fs::path ragged = dir / "ragged.csv";
  testutil::write_file(ragged.string(), "t,x0_0\n0.0,1.0\n0.1\n");
  CHECK(cmd_plotdata(ragged.string(), opts(dir)) == 2);
  const fs::path nonnum = dir / "nonnum.csv";
  testutil::write_file(nonnum.string(), "t,x0_0\n0.0,zebra\n");
  CHECK(cmd_plotdata(nonnum.string(), opts(dir)) == 2);
  CHECK(cmd_plotdata((dir / "missing.csv").string(), opts(dir)) == 2);
}

#ifdef INCDYN_CLI_PATH
TEST_CASE("the installed binary honors the exit-code contract") {
  const fs::path dir = scratch_dir("binary");
  const std::string config = write_config(dir, kRpsConfig);
  const std::string base = std::string(INCDYN_CLI_PATH);

  auto run = [](const std::string& command) {
    const int status = std::system(command.c_str());
    return WEXITSTATUS(status);
  };

  CHECK(run(base + " simulate --quiet --out-dir " + dir.string() + " " + config) == 0);
  CHECK(run(base + " check --mode iss --quiet --out-dir " + dir.string() + " " + config) == 0);
  CHECK(run(base + " plotdata --quiet --out-dir " + dir.string() + " " +
            (dir / "rps_traj_0.csv").string()) == 0);
  CHECK(run(base + " check --mode bogus --quiet --out-dir " + dir.string() + " " + config) == 2);
  CHECK(run(base + " simulate --quiet " + (dir / "missing.json").string()) == 2);
  CHECK(run(base + " frobnicate 2>/dev/null") == 2);
}
#endif
