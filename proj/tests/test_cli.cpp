#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"
#include "opoly/io.hpp"

using opoly::cli::run_cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::vector<std::string> cells(const std::string& line) {
  std::vector<std::string> v;
  std::istringstream in(line);
  for (std::string c; std::getline(in, c, ',');) v.push_back(c);
  return v;
}

std::vector<std::vector<std::string>> data_rows(const std::string& csv) {
  std::vector<std::vector<std::string>> rows;
  const auto ls = lines(csv);
  for (std::size_t i = 1; i < ls.size(); ++i) {
    if (!ls[i].empty() && ls[i][0] != '#') rows.push_back(cells(ls[i]));
  }
  return rows;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("opoly_test_" + name);
}

}  // namespace

TEST_CASE("coeffs") {
  const auto r = run({"coeffs", "--family", "gen-hermite", "--gamma", "1.5", "-n", "8",
                      "--format", "csv"});
  CHECK(r.code == 0);
  const auto ls = lines(r.out);
  CHECK(ls.front() == "i,b_i,a_i");
  CHECK(data_rows(r.out).size() == 8);
  CHECK(ls.back().rfind("# ", 0) == 0);

  const auto s = run({"coeffs", "--family", "sieved-first", "--alpha", "0.3", "--gamma", "0.8",
                      "-k", "3", "-n", "12"});
  CHECK(s.code == 0);
  CHECK(lines(s.out).front() == "i,b_i,a_i,p_2i");
  for (const auto& row : data_rows(s.out)) {
    const int i = std::stoi(row[0]);
    if (i % 3 != 0) CHECK(std::stod(row[3]) == 0.5);
    if (i % 3 == 0) CHECK(std::stod(row[3]) != 0.5);
  }
}

TEST_CASE("json output loads back as a measure") {
  const auto r = run({"coeffs", "--family", "gen-ultraspherical", "--alpha", "0.3", "--gamma",
                      "0.8", "-n", "7", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto m = opoly::measure_from_json(r.out);
  const auto z = run({"zeros", "--family", "gen-ultraspherical", "--alpha", "0.3", "--gamma",
                      "0.8", "-n", "7", "--format", "json"});
  REQUIRE(z.code == 0);
  const auto mz = opoly::measure_from_json(z.out);
  REQUIRE(m.size() == mz.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    CHECK(m.points[i] == doctest::Approx(mz.points[i]).epsilon(1e-14));
    CHECK(m.masses[i] == doctest::Approx(mz.masses[i]).epsilon(1e-12));
  }
}

TEST_CASE("zeros and reversed") {
  const auto r = run({"reversed", "--family", "gen-hermite", "--gamma", "2", "-n", "4"});
  REQUIRE(r.code == 0);
  const auto rows = data_rows(r.out);
  REQUIRE(rows.size() == 5);
  CHECK(std::abs(std::stod(rows[2][0])) < 1e-12);
  CHECK(std::stod(rows[2][1]) == doctest::Approx(3.0 / 7).epsilon(1e-12));
  const auto footer = lines(r.out).back();
  CHECK(footer.rfind("# mass_sum=", 0) == 0);
  CHECK(std::stod(footer.substr(11)) == doctest::Approx(1.0).epsilon(1e-12));

  for (const std::string fam : {"gen-ultraspherical", "sieved-first", "sieved-second"}) {
    const auto a = data_rows(
        run({"zeros", "--family", fam, "--alpha", "0.4", "--gamma", "1.1", "-k", "3", "-n", "13"})
            .out);
    const auto b = data_rows(run({"reversed", "--family", fam, "--alpha", "0.4", "--gamma", "1.1",
                                  "-k", "3", "-n", "13"})
                                 .out);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(std::abs(std::stod(a[i][0]) - std::stod(b[i][0])) < 1e-10);
      if (i > 0) CHECK(std::stod(a[i][0]) > std::stod(a[i - 1][0]));
    }
  }
}

TEST_CASE("check") {
  const auto a = run({"check", "--theorem", "3.1", "--alpha", "0.5", "--gamma", "1", "-k", "2",
                      "-m", "3"});
  CHECK(a.code == 0);
  CHECK(lines(a.out).back() == "# PASS pattern 3.1");

  const auto b = run({"check", "--theorem", "2.2", "--gamma", "0.8", "-m", "5"});
  CHECK(b.code == 0);
  const auto rows = data_rows(b.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][1] == "origin");
  CHECK(std::stod(rows[0][6]) == doctest::Approx(1.8).epsilon(1e-10));

  const auto c = run({"check", "--theorem", "2.2", "--gamma", "0.8", "-m", "5", "--perturb",
                      "3:0.01"});
  CHECK(c.code == 1);
  CHECK(lines(c.out).back() == "# FAIL pattern 2.2");

  for (const std::string id : {"2.1", "2.3", "3.2", "3.3a", "3.3b", "hermite", "sieved-second"}) {
    CHECK(run({"check", "--theorem", id, "--alpha", "0.7", "--gamma", "1.3", "-k", "3", "-m",
               "2"})
              .code == 0);
  }
  const auto j = run({"check", "--theorem", "3.2", "--alpha", "0.7", "--gamma", "1.3", "-k", "3",
                      "-m", "2", "--format", "json"});
  CHECK(nlohmann::json::parse(j.out)["pass"] == true);
}

TEST_CASE("density") {
  const auto r = run({"density", "--a", "0", "--c", "0", "-k", "1"});
  REQUIRE(r.code == 0);
  const auto rows = data_rows(r.out);
  CHECK(rows.size() == 1000);
  for (const auto& row : rows) {
    const double x = std::stod(row[0]);
    const double want = 1 / (std::numbers::pi * std::sqrt(1 - x * x));
    CHECK(std::abs(std::stod(row[1]) - want) < 1e-12 * want);
  }

  const auto h = run({"density", "--hermite", "--c", "0", "--points", "400"});
  REQUIRE(h.code == 0);
  for (const auto& row : data_rows(h.out)) {
    const double x = std::stod(row[0]);
    CHECK(std::abs(std::stod(row[1]) - std::sqrt(2 - x * x) / std::numbers::pi) < 1e-12);
  }

  const auto g = run({"density", "--g", "0.7", "--h", "0.6", "-k", "3", "--points", "50"});
  REQUIRE(g.code == 0);
  CHECK(g.out.find("# point_mass") != std::string::npos);
  const auto total = lines(g.out).back();
  const double t = std::stod(total.substr(total.find("total_mass=") + 11));
  CHECK(t == doctest::Approx(1.0).epsilon(1e-8));

  CHECK(run({"density", "--g", "0.7", "-k", "3"}).code == 2);
}

TEST_CASE("cdf-compare") {
  const auto r = run({"cdf-compare", "--family", "gen-hermite", "--c", "0", "-l", "100,200,400"});
  REQUIRE(r.code == 0);
  const auto rows = data_rows(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0][0] == "100");
  CHECK(rows[2][0] == "400");
  CHECK(rows[0].size() == 13);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::stod(rows[i][1]) < std::stod(rows[i - 1][1]));
  }
  CHECK(lines(r.out).back() == "# nonincreasing=yes");

  const auto sched = temp_file("schedule.txt");
  {
    std::ofstream f(sched);
    for (int n = 0; n <= 120; ++n) f << n << ' ' << 0.5 * n << ' ' << 1.0 * n << '\n';
  }
  const auto a = run({"cdf-compare", "--family", "sieved-first", "--a", "0.5", "--c", "1", "-k",
                      "2", "-l", "120", "--grid", "301", "--bins", "4"});
  const auto b = run({"cdf-compare", "--family", "sieved-first", "--a", "0.5", "--c", "1", "-k",
                      "2", "-l", "120", "--grid", "301", "--bins", "4", "--schedule-file",
                      sched.string()});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  std::filesystem::remove(sched);
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == 2);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"zeros", "--family", "nope", "-n", "3"}).code == 2);
  CHECK(run({"zeros", "--family", "gen-hermite", "--gamma", "-1", "-n", "3"}).code == 2);
  CHECK(run({"zeros", "--family", "gen-hermite", "-n", "0"}).code == 2);
  CHECK(run({"check", "--theorem", "3.1", "-k", "2", "-m", "-1"}).code == 2);
  CHECK(run({"check", "--theorem", "2.2", "-m", "2", "--perturb", "9:0.1"}).code == 2);
  CHECK(run({"check", "--theorem", "2.2", "-m", "2", "--perturb", "x"}).code == 2);
  CHECK(run({"cdf-compare", "--family", "gen-hermite", "-l", "50", "--schedule-file",
             "/nonexistent/file"})
            .code == 2);
  const auto e = run({"zeros", "--family", "gen-hermite", "--gamma", "-3", "-n", "3"});
  CHECK(e.err.find("gamma") != std::string::npos);
}

TEST_CASE("output file and thread cap") {
  const auto path = temp_file("zeros.csv");
  CHECK(run({"zeros", "--family", "gen-hermite", "-n", "5", "-o", path.string()}).code == 0);
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == run({"zeros", "--family", "gen-hermite", "-n", "5"}).out);
  std::filesystem::remove(path);

  ::setenv("OPOLY_THREADS", "1", 1);
  CHECK(opoly::cli::worker_threads() == 1);
  const auto one = run({"cdf-compare", "--family", "gen-hermite", "--c", "1", "-l", "60,80"});
  ::setenv("OPOLY_THREADS", "0", 1);
  CHECK(run({"cdf-compare", "--family", "gen-hermite", "-l", "60"}).code == 2);
  ::setenv("OPOLY_THREADS", "3", 1);
  const auto three = run({"cdf-compare", "--family", "gen-hermite", "--c", "1", "-l", "60,80"});
  ::unsetenv("OPOLY_THREADS");
  CHECK(one.out == three.out);
}

TEST_CASE("binary is deterministic") {
  const auto a = temp_file("det_a.csv");
  const auto b = temp_file("det_b.csv");
  const std::string cmd = std::string(OPOLY_BINARY) +
                          " cdf-compare --family sieved-second --a 0.5 --c 1 -k 2 -l 50,90 -o ";
  REQUIRE(std::system((cmd + a.string()).c_str()) == 0);
  REQUIRE(std::system((cmd + b.string()).c_str()) == 0);
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  std::stringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  CHECK(!sa.str().empty());
  CHECK(sa.str() == sb.str());
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}
