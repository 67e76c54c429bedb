#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dprime/cli.hpp"
#include "dprime/error.hpp"
#include "dprime/spec_io.hpp"
#include "dprime/table.hpp"

using namespace dprime;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "dprime");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write_spec(const std::string& name, const std::string& text) {
  const auto dir = fs::temp_directory_path() / "dprime_cli_test";
  fs::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path) << text;
  return path.string();
}

double cell(const Table& t, std::size_t row, const std::string& col) {
  for (std::size_t c = 0; c < t.columns.size(); ++c)
    if (t.columns[c] == col) return std::get<double>(t.rows[row][c]);
  FAIL("missing column " << col);
  return 0.0;
}

Table parse_single(const std::string& csv) {
  std::istringstream in(csv);
  auto tables = read_csv(in);
  REQUIRE(tables.size() == 1);
  return tables.front();
}

}  // namespace

TEST_CASE("potential specs") {
  auto p = parse_potential_spec(R"({"kind":"square","params":{"left":-1,"right":1,"height":2}})");
  CHECK(p(0.0) == 2.0);
  CHECK(p(1.5) == 0.0);
  p = parse_potential_spec(
      R"({"kind":"piecewise","params":[{"left":0,"right":1,"height":1},{"left":1,"right":2,"height":-3}]})");
  CHECK(p(1.5) == -3.0);
  p = parse_potential_spec(R"({"kind":"table","params":{"x":[0,1],"v":[0,2]},"coupling":0.5})");
  CHECK(p(0.5) == doctest::Approx(0.5));
  p = parse_potential_spec(R"({"kind":"exp_decay","params":{"amplitude":3,"rate":2}})");
  CHECK(p(1.0) == doctest::Approx(3.0 * std::exp(-2.0)));
  CHECK(parse_potential_spec(R"({"kind":"zero"})")(0.0) == 0.0);

  CHECK_THROWS_AS(parse_potential_spec("{bad"), SpecError);
  CHECK_THROWS_AS(parse_potential_spec(R"({"kind":"sombrero"})"), SpecError);
  CHECK_THROWS_AS(parse_potential_spec(R"({"kind":"square","params":{"left":0}})"), SpecError);
  CHECK_THROWS_AS(parse_potential_spec(R"({"kind":"square","params":{"left":1,"right":0,"height":1}})"),
                  SpecError);
  CHECK_THROWS_AS(parse_potential_spec(R"([1,2])"), SpecError);
}

TEST_CASE("scatter command") {
  const auto zero = write_spec("zero.json", R"({"kind":"zero"})");
  auto r = run({"scatter", "--potential", zero, "--k", "1,0"});
  REQUIRE(r.code == 0);
  const auto t = parse_single(r.out);
  CHECK(cell(t, 0, "r_re") == 0.0);
  CHECK(cell(t, 0, "r_im") == 0.0);
  CHECK(cell(t, 0, "t_re") == 1.0);
  CHECK(cell(t, 0, "t_im") == 0.0);
  CHECK(cell(t, 0, "unitarity_defect") == 0.0);

  const auto bar =
      write_spec("barrier.json", R"({"kind":"square","params":{"left":-1,"right":1,"height":1}})");
  r = run({"scatter", "--potential", bar, "--k-list", "0.5,0;1,0;2,0;3.5,0;5,0"});
  REQUIRE(r.code == 0);
  const auto b = parse_single(r.out);
  REQUIRE(b.rows.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(cell(b, i, "unitarity_defect") < 1e-8);

  const auto bad = write_spec("bad.json", "{ not json");
  r = run({"scatter", "--potential", bad, "--k", "1"});
  CHECK(r.code == 2);
  CHECK_FALSE(r.err.empty());

  CHECK(run({"scatter", "--potential", bar, "--k", "1,-1"}).code == 2);
  CHECK(run({"scatter", "--potential", bar}).code == 2);
  CHECK(run({"scatter", "--potential", "/nonexistent/spec.json", "--k", "1"}).code == 2);
  CHECK(run({"scatter", "--k", "1"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
}

TEST_CASE("numerical failures exit with 3") {
  // -chi_[-1,1] has its even bound state at kappa = 0.673612...; at eps = 0.5 the
  // truncated construction at k = 2 i kappa divides by D(eps k) = 0.
  const auto well =
      write_spec("deep.json", R"({"kind":"square","params":{"left":-1,"right":1,"height":-1}})");
  const auto r = run({"converge", "--potential", well, "--k", "0,1.3472240583664296", "--eps",
                      "0.5", "--n", "4"});
  CHECK(r.code == 3);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("resonance commands") {
  const auto well =
      write_spec("well.json", R"({"kind":"square","params":{"left":-1,"right":1,"height":-1}})");
  auto r = run({"resonance", "sweep", "--potential", well, "--alpha-min", "0", "--alpha-max",
                "25", "--grid", "100"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  const auto tables = read_csv(in);
  REQUIRE(tables.size() == 2);
  CHECK(tables[0].name == "sweep");
  CHECK(tables[0].rows.size() == 101);
  REQUIRE(tables[1].rows.size() == 3);
  CHECK(cell(tables[1], 0, "alpha") == doctest::Approx(2.4674011).epsilon(1e-8));
  CHECK(cell(tables[1], 1, "alpha") == doctest::Approx(9.8696044).epsilon(1e-8));
  CHECK(cell(tables[1], 2, "alpha") == doctest::Approx(22.2066099).epsilon(1e-8));

  r = run({"resonance", "sweep", "--potential", well, "--alpha-min", "0", "--alpha-max", "2",
           "--grid", "10"});
  REQUIRE(r.code == 0);
  std::istringstream in2(r.out);
  const auto empty = read_csv(in2);
  REQUIRE(empty.size() == 2);
  CHECK(empty[1].rows.empty());

  const auto res = write_spec(
      "res.json",
      R"({"kind":"square","params":{"left":-1,"right":1,"height":-1},"coupling":2.4674011002723395})");
  r = run({"resonance", "theta", "--potential", res, "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["theta"][0]["resonant"].get<double>() == 1.0);
  CHECK(j["theta"][0]["theta"].get<double>() == doctest::Approx(-1.0).epsilon(1e-8));
  CHECK(j["theta"][0]["ddot_gap"].get<double>() < 1e-5);

  r = run({"resonance", "theta", "--potential", well});
  REQUIRE(r.code == 0);
  const auto t = parse_single(r.out);
  CHECK(cell(t, 0, "resonant") == 0.0);
  CHECK(std::isnan(cell(t, 0, "theta")));
}

TEST_CASE("converge command") {
  const auto bar =
      write_spec("bar.json", R"({"kind":"square","params":{"left":-1,"right":1,"height":1}})");
  auto r = run({"converge", "--potential", bar, "--k", "1,1", "--eps", "0.2,0.1", "--n", "40"});
  REQUIRE(r.code == 0);
  auto t = parse_single(r.out);
  REQUIRE(t.rows.size() == 2);
  CHECK(std::get<std::string>(t.rows[0].back()) == "dirichlet");

  const auto zero = write_spec("zero2.json", R"({"kind":"zero"})");
  r = run({"converge", "--potential", zero, "--k", "1,1", "--eps", "0.2,0.1,0.05", "--n", "40"});
  REQUIRE(r.code == 0);
  t = parse_single(r.out);
  for (std::size_t i = 0; i < t.rows.size(); ++i) CHECK(cell(t, i, "kernel_distance") <= 1e-10);

  const auto res = write_spec(
      "res2.json",
      R"({"kind":"square","params":{"left":-1,"right":1,"height":-2.4674011002723395}})");
  r = run({"converge", "--potential", res, "--k", "1,1", "--eps", "0.2,0.1,0.05,0.025,0.0125",
           "--n", "40"});
  REQUIRE(r.code == 0);
  t = parse_single(r.out);
  const std::size_t last = t.rows.size() - 1;
  const double dt = std::hypot(cell(t, last, "t_re") - cell(t, last, "limit_t_re"),
                               cell(t, last, "t_im") - cell(t, last, "limit_t_im"));
  CHECK(dt < 0.05);
  CHECK(std::get<std::string>(t.rows[last].back()) == "interface");

  CHECK(run({"converge", "--potential", bar, "--k", "1,1", "--eps", "0.1,0.2"}).code == 2);
  CHECK(run({"converge", "--potential", bar, "--k", "1,1", "--eps", "0.1,-0.2"}).code == 2);
  CHECK(run({"converge", "--potential", bar, "--k", "1,1", "--eps", "0.1,abc"}).code == 2);
  CHECK(run({"converge", "--potential", bar, "--k", "1,-1", "--eps", "0.1"}).code == 2);
}

TEST_CASE("output file and json format") {
  const auto zero = write_spec("zero3.json", R"({"kind":"zero"})");
  const auto out = (fs::temp_directory_path() / "dprime_cli_test" / "out.json").string();
  const auto r = run({"scatter", "--potential", zero, "--k", "2,0", "--format", "json", "--out", out});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(out);
  const auto j = nlohmann::json::parse(in);
  CHECK(j["scatter"][0]["t_re"].get<double>() == 1.0);
}

TEST_CASE("help lists tolerance defaults") {
  const auto r = run({"converge", "--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("--quad-tol") != std::string::npos);
  CHECK(r.out.find("1e-12") != std::string::npos);
  CHECK(r.out.find("--alpha-weight") != std::string::npos);
}

TEST_CASE("property: CSV output round-trips bit-exactly") {
  const std::uint64_t seed = 8675309;
  CAPTURE(seed);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(-300, 300);
  Table t{"random", {"a", "b", "label"}, {}};
  for (int i = 0; i < 500; ++i) {
    t.rows.push_back({std::ldexp(mant(rng), expo(rng)), mant(rng) * 1e-3,
                      std::string(i % 7 == 0 ? "with, comma" : "plain")});
  }
  t.rows.push_back({std::nan(""), HUGE_VAL, std::string("x")});
  t.rows.push_back({-0.0, 5e-324, std::string("\"quoted\"")});
  std::ostringstream out;
  write_csv(out, std::vector<Table>{t});
  std::istringstream in(out.str());
  const auto back = read_csv(in);
  REQUIRE(back.size() == 1);
  CHECK(back[0].name == t.name);
  CHECK(back[0].columns == t.columns);
  REQUIRE(back[0].rows.size() == t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    for (std::size_t c = 0; c < 3; ++c) {
      if (c == 2) {
        CHECK(std::get<std::string>(back[0].rows[i][c]) == std::get<std::string>(t.rows[i][c]));
        continue;
      }
      const double x = std::get<double>(t.rows[i][c]), y = std::get<double>(back[0].rows[i][c]);
      if (std::isnan(x)) {
        CHECK(std::isnan(y));
      } else {
        CHECK(std::memcmp(&x, &y, sizeof x) == 0);
      }
    }
  }

  // A real command's output survives the same round trip.
  const auto bar =
      write_spec("bar_rt.json", R"({"kind":"square","params":{"left":-1,"right":1,"height":1}})");
  const auto r = run({"scatter", "--potential", bar, "--k-list", "0.5,0;1.25,0.5"});
  REQUIRE(r.code == 0);
  std::istringstream in2(r.out);
  const auto tables = read_csv(in2);
  std::ostringstream again;
  write_csv(again, tables);
  CHECK(again.str() == r.out);
}
