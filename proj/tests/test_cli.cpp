#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::string binary_path() {
  if (const char* env = std::getenv("SIPDG_BIN")) return env;
  for (const char* guess : {"./sipdg", "../sipdg"}) {
    if (std::filesystem::exists(guess)) return guess;
  }
  return "sipdg";
}

struct RunResult {
  int code = -1;
  std::string out;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RunResult run(const std::string& args) {
  const std::string out_path = "cli_stdout.txt";
  std::string cmd = "\"" + binary_path() + "\" " + args + " > " + out_path + " 2> cli_stderr.txt";
  int status = std::system(cmd.c_str());
  RunResult result;
  if (status != -1 && WIFEXITED(status)) result.code = WEXITSTATUS(status);
  result.out = read_file(out_path);
  return result;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

}  // namespace

TEST_CASE("penalty command") {
  SUBCASE("1D p1 flux-trace penalty is 2 per element") {
    RunResult r = run("penalty --mesh 1D --p 1 --variant star2");
    REQUIRE(r.code == 0);
    auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 3);  // header + 2 elements
    CHECK(lines[0] == "element,kappa,eta,rank");
    for (int e = 1; e <= 2; ++e) {
      auto cells = split_cells(lines[e]);
      REQUIRE(cells.size() == 4);
      CHECK(std::abs(std::stod(cells[1]) - 2.0) <= 1e-12);
      CHECK(std::abs(std::stod(cells[2]) - 2.0) <= 1e-12);
    }
    CHECK(run("penalty --mesh 1D --p 1 --variant star2").out == r.out);  // deterministic
  }
  SUBCASE("piecewise constants need no penalty") {
    RunResult r = run("penalty --mesh tetrahedral --p 0");
    REQUIRE(r.code == 0);
    auto lines = split_lines(r.out);
    REQUIRE(lines.size() > 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
      auto cells = split_cells(lines[i]);
      CHECK(std::stod(cells[1]) == 0.0);
      CHECK(std::stod(cells[2]) == 0.0);
      CHECK(cells[3] == "0");
    }
  }
  SUBCASE("out-of-range deformation is a mapping failure") {
    CHECK(run("penalty --mesh hexahedral --param 0.7").code == 4);
    CHECK(run("penalty --mesh quadrilateral --param 0.8").code == 4);
  }
  SUBCASE("json format") {
    RunResult r = run("penalty --mesh square --p 1 --format json");
    REQUIRE(r.code == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["variant"] == "star2");
    CHECK(j["elements"].size() == 4);  // 2x2 cells
  }
}

TEST_CASE("timestep command") {
  SUBCASE("square p1 estimate") {
    RunResult r = run("timestep --mesh square --p 1");
    REQUIRE(r.code == 0);
    auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "lambda_bar,dt,c_method,lambda_exact,dt_exact");
    auto cells = split_cells(lines[1]);
    REQUIRE(cells.size() == 5);
    CHECK(std::abs(std::stod(cells[1]) - 0.4082) <= 5e-4);
    CHECK(cells[3].empty());
    CHECK(cells[4].empty());
  }
  SUBCASE("cubic p3 estimate") {
    RunResult r = run("timestep --mesh cubic --p 3");
    REQUIRE(r.code == 0);
    auto cells = split_cells(split_lines(r.out)[1]);
    CHECK(std::abs(std::stod(cells[1]) - 0.0885) <= 5e-4);
  }
  SUBCASE("trivial decomposition equals the exact spectrum") {
    RunResult r = run("timestep --mesh 1D --p 1 --decomposition trivial --exact");
    REQUIRE(r.code == 0);
    auto cells = split_cells(split_lines(r.out)[1]);
    REQUIRE(cells.size() == 5);
    double dt_est = std::stod(cells[1]);
    double dt_exact = std::stod(cells[4]);
    CHECK(std::abs(dt_est - dt_exact) <= 1e-6 * dt_exact);
  }
  SUBCASE("json format exposes submeshes") {
    RunResult r = run("timestep --mesh 1D --p 1 --format json --exact");
    REQUIRE(r.code == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["lambda_bar"].get<double>() > 0.0);
    CHECK(j["submeshes"].size() > 0);
    CHECK(!j["exact"].is_null());
  }
  SUBCASE("unknown decomposition is a usage error") {
    CHECK(run("timestep --mesh 1D --decomposition bogus").code == 2);
  }
}

TEST_CASE("simulate command") {
  SUBCASE("stable at the localized bound") {
    RunResult r = run("simulate --mesh triangular --p 2 --dt-scale 1.0");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("verdict,stable") != std::string::npos);
  }
  SUBCASE("unstable just above the exact limit") {
    RunResult r = run("simulate --mesh triangular --p 2 --dt-scale 1.02 --dt-ref exact");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("verdict,unstable") != std::string::npos);
    CHECK(r.out.find("failure_step,") != std::string::npos);
  }
  SUBCASE("zero steps gives an empty trace and a stable verdict") {
    RunResult r = run("simulate --mesh 1D --p 1 --steps 0 --trace cli_trace.csv");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("verdict,stable") != std::string::npos);
    CHECK(read_file("cli_trace.csv") == "step,time,energy\n");
  }
  SUBCASE("trace rows cover every step") {
    RunResult r = run("simulate --mesh 1D --p 1 --steps 5 --trace cli_trace5.csv");
    REQUIRE(r.code == 0);
    auto lines = split_lines(read_file("cli_trace5.csv"));
    CHECK(lines.size() == 1 + 5);
  }
  SUBCASE("unknown dt reference is a usage error") {
    CHECK(run("simulate --mesh 1D --dt-ref bogus").code == 2);
  }
}

TEST_CASE("table command") {
  SUBCASE("comparison table matches the printed reference row") {
    RunResult r = run("table 3");
    REQUIRE(r.code == 0);
    auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 1 + 18);
    CHECK(lines[0] == "mesh,p,variant,c_min,dt_eta_min,dt_eta,dt_est,ratio1,ratio2");
    bool found = false;
    for (const std::string& line : lines) {
      auto cells = split_cells(line);
      if (cells.size() == 9 && cells[0] == "tetrahedral" && cells[1] == "2" &&
          cells[2] == "mulder") {
        found = true;
        CHECK(std::abs(std::stod(cells[5]) - 0.0327) <= 5e-4);
        CHECK(std::abs(std::stod(cells[8]) - 1.56) <= 0.02);
      }
    }
    CHECK(found);
  }
  SUBCASE("subset runs are byte-deterministic") {
    RunResult a = run("table 4 --subset");
    RunResult b = run("table 4 --subset");
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(split_lines(a.out).size() == 3);
  }
  SUBCASE("listing and bad ids") {
    RunResult r = run("table --list");
    REQUIRE(r.code == 0);
    CHECK(split_lines(r.out).size() == 6);
    CHECK(run("table 9").code == 2);
    CHECK(run("table").code == 2);
  }
}

TEST_CASE("mesh commands") {
  SUBCASE("generate then validate") {
    RunResult gen = run("mesh generate --mesh quadrilateral[0.6] --p 2 --cells 2 -o cli_mesh.json");
    REQUIRE(gen.code == 0);
    RunResult val = run("mesh validate -i cli_mesh.json");
    CHECK(val.code == 0);
    CHECK(val.out == "ok\n");
    RunResult pen = run("penalty --mesh-file cli_mesh.json");
    CHECK(pen.code == 0);
    CHECK(split_lines(pen.out).size() == 1 + 16);  // 2x2 cells of 4 quads
  }
  SUBCASE("corrupt file fails validation with exit 4") {
    std::ofstream("cli_bad.json") << "not a mesh";
    CHECK(run("mesh validate -i cli_bad.json").code == 4);
    CHECK(run("penalty --mesh-file cli_bad.json").code == 4);
  }
  SUBCASE("generator range failures map to exit 4") {
    CHECK(run("mesh generate --mesh hexahedral --param 0.7 -o cli_nope.json").code == 4);
  }
  SUBCASE("missing input is a usage error") {
    CHECK(run("mesh validate").code == 2);
  }
}

TEST_CASE("fourier and matrices commands") {
  SUBCASE("phase scan") {
    RunResult r = run("fourier --mesh square --p 1 --grid 2 -o cli_scan.csv");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("spectral_radius,") != std::string::npos);
    auto lines = split_lines(read_file("cli_scan.csv"));
    REQUIRE(lines.size() == 1 + 4);  // 2^2 phase points
    CHECK(lines[0] == "z0,z1,lambda_min,lambda_max");
    // radius 24 on the 2-tiling -> dt 0.4082
    auto cells = split_cells(split_lines(r.out)[0]);
    CHECK(std::abs(std::stod(cells[1]) - 24.0) <= 1e-9);
  }
  SUBCASE("matrix export") {
    RunResult r = run("matrices --mesh 1D --p 1 -o cli_sys");
    REQUIRE(r.code == 0);
    CHECK(std::filesystem::exists("cli_sys.mass.mtx"));
    CHECK(std::filesystem::exists("cli_sys.stiffness.mtx"));
    nlohmann::json j = nlohmann::json::parse(read_file("cli_sys.dofmap.json"));
    CHECK(!j.empty());
  }
}

TEST_CASE("global usage errors") {
  CHECK(run("").code == 2);
  CHECK(run("bogus-subcommand").code == 2);
  CHECK(run("penalty --no-such-flag 1").code == 2);
  CHECK(run("penalty").code == 2);  // neither --mesh nor --mesh-file
  CHECK(run("penalty --mesh nosuchfamily").code == 2);
  CHECK(run("--help").code == 0);
}
