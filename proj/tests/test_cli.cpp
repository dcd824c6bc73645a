#include <doctest.h>

#include <unistd.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "mubforge/search.hpp"

namespace fs = std::filesystem;

namespace {

struct CmdResult {
  int exit_code;
  std::string output;  // stdout + stderr
};

CmdResult run_cli(const std::string& args) {
  const std::string cmd = std::string(MUBFORGE_CLI_PATH) + " " + args + " 2>&1";
  std::array<char, 4096> buf;
  std::string output;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (fgets(buf.data(), buf.size(), pipe)) output += buf.data();
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, output};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("mubforge_cli_" + std::to_string(::getpid()) + "_" +
                                        std::to_string(rand()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("count classifies specs and rejects bad ones") {
  const auto good = run_cli("count d=6:5,4^2,2");
  CHECK(good.exit_code == 0);
  CHECK(good.output.find("p (parameters)       = 45") != std::string::npos);
  CHECK(good.output.find("critical") != std::string::npos);

  const auto overdet = run_cli("count d=5:4,4,4,4");
  CHECK(overdet.exit_code == 0);
  CHECK(overdet.output.find("= 44") != std::string::npos);
  CHECK(overdet.output.find("overdetermined") != std::string::npos);

  CHECK(run_cli("count d=6:5").exit_code != 0);   // bare basis
  CHECK(run_cli("count d=6:9").exit_code != 0);   // count > d-1
  CHECK(run_cli("count nonsense").exit_code != 0);
}

TEST_CASE("construct emits verifiable state sets") {
  TempDir tmp;
  const std::string file = (tmp.path / "set.json").string();
  CHECK(run_cli("construct prime 5 --out " + file).exit_code == 0);
  CHECK(run_cli("verify " + file + " --tol 1e-10").exit_code == 0);

  CHECK(run_cli("construct tensor 2 3 --out " + file).exit_code == 0);
  const auto verify = run_cli("verify " + file);
  CHECK(verify.exit_code == 0);
  CHECK(verify.output.find("PASS") != std::string::npos);

  CHECK(run_cli("construct prime 6").exit_code != 0);
}

TEST_CASE("verify flags a corrupted amplitude and names the pair") {
  TempDir tmp;
  const std::string file = (tmp.path / "set.json").string();
  REQUIRE(run_cli("construct qubit --out " + file).exit_code == 0);
  nlohmann::json j;
  {
    std::ifstream in(file);
    in >> j;
  }
  j["groups"][1][0][0][0] = j["groups"][1][0][0][0].get<double>() * 1.01;
  {
    std::ofstream out(file);
    out << j.dump();
  }
  const auto res = run_cli("verify " + file + " --tol 1e-8");
  CHECK(res.exit_code == 1);
  CHECK(res.output.find("FAIL") != std::string::npos);
  CHECK(res.output.find("group 1") != std::string::npos);
}

TEST_CASE("dephase canonicalizes and is idempotent at the file level") {
  TempDir tmp;
  const std::string raw = (tmp.path / "raw.json").string();
  const std::string once = (tmp.path / "once.json").string();
  const std::string twice = (tmp.path / "twice.json").string();
  REQUIRE(run_cli("construct prime 3 --out " + raw).exit_code == 0);
  CHECK(run_cli("dephase " + raw + " --out " + once).exit_code == 0);

  nlohmann::json j1;
  {
    std::ifstream in(once);
    in >> j1;
  }
  // canonical form: first vector of the second group is flat
  for (const auto& comp : j1["groups"][1][0]) {
    CHECK(comp[0].get<double>() == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-9));
    CHECK(comp[1].get<double>() == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
  }
  CHECK(run_cli("dephase " + once + " --out " + twice).exit_code == 0);
  nlohmann::json j2;
  {
    std::ifstream in(twice);
    in >> j2;
  }
  for (size_t g = 0; g < j1["groups"].size(); ++g)
    for (size_t v = 0; v < j1["groups"][g].size(); ++v)
      for (size_t k = 0; k < j1["groups"][g][v].size(); ++k)
        for (int part = 0; part < 2; ++part)
          CHECK(j2["groups"][g][v][k][part].get<double>() ==
                doctest::Approx(j1["groups"][g][v][k][part].get<double>()).scale(1.0).epsilon(1e-12));

  // a set that is not unbiased against its first group cannot be dephased
  const std::string bad = (tmp.path / "bad.json").string();
  {
    nlohmann::json b;
    {
      std::ifstream in(raw);
      in >> b;
    }
    b["groups"][2][0] = b["groups"][0][0];
    std::ofstream out(bad);
    out << b.dump();
  }
  CHECK(run_cli("dephase " + bad).exit_code != 0);
}

TEST_CASE("search writes records, reports, and prints a rate line") {
  TempDir tmp;
  const std::string out = (tmp.path / "campaign").string();
  const auto res =
      run_cli("search d=2:1,1,1 --trials 25 --seed 7 --workers 2 --out " + out);
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("rate=100.0000%") != std::string::npos);
  CHECK(fs::exists(out + "/records.ndjson"));
  CHECK(fs::exists(out + "/report.json"));
  CHECK(mubforge::search::read_records(out + "/records.ndjson").size() == 25);

  CHECK(run_cli("search d=2:1,1,1 --trials 0").exit_code != 0);
}

TEST_CASE("sweep emits the family table and the lattice tally") {
  TempDir tmp;
  const std::string out = (tmp.path / "sweep").string();
  const auto res = run_cli("sweep d=3:2,2,2 --trials 2 --seed 3 --out " + out);
  CHECK(res.exit_code == 0);
  std::ifstream table(out + "/table.csv");
  REQUIRE(table.good());
  std::string header;
  std::getline(table, header);
  CHECK(header == "x,y,z,p,kind,rate,min_f");
  int rows = 0;
  for (std::string line; std::getline(table, line);)
    if (!line.empty()) ++rows;
  CHECK(rows == 3);
  CHECK(fs::exists(out + "/tally.json"));
  CHECK(fs::exists(out + "/reports.json"));
}

TEST_CASE("hist bins a records file by decade") {
  TempDir tmp;
  const std::string records = (tmp.path / "r.ndjson").string();
  {
    std::ofstream out(records);
    out << R"({"trial":0,"seed":"1","final_f":1e-9,"iters":3,"term":"success","ms":0.1})" << "\n";
    out << R"({"trial":1,"seed":"2","final_f":2e-3,"iters":9,"term":"max_iter","ms":0.2})" << "\n";
  }
  const auto res = run_cli("hist " + records);
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("-9,-8,1") != std::string::npos);
  CHECK(res.output.find("-3,-2,1") != std::string::npos);

  const auto empty = run_cli("hist /dev/null");
  CHECK(empty.exit_code == 0);
}
