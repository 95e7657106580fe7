#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "varembed/cli.hpp"
#include "varembed/json_io.hpp"

using namespace varembed;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
  fs::path dir;
  TempDir() {
    dir = fs::temp_directory_path() / ("varembed_test_" + std::to_string(::getpid()) + "_" +
                                       std::to_string(counter()++));
    fs::create_directories(dir);
  }
  ~TempDir() { fs::remove_all(dir); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  fs::path write(const std::string& name, const std::string& content) {
    fs::path p = dir / name;
    std::ofstream(p) << content;
    return p;
  }
  std::string read(const std::string& name) {
    std::ifstream in(dir / name);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }
};

json load(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

}  // namespace

TEST_CASE("round-trip: parse, serialize, parse is value-identical") {
  const char* samples[] = {
      R"({"kind":"power_log","alpha":0.5,"beta":0.25})",
      R"({"kind":"constant","c":2.5})",
      R"({"kind":"explicit_prefix","values":[1.0,2.0,3.0],"tail":{"kind":"power_log","alpha":1.0,"beta":0.0}})",
  };
  for (const char* s : samples) {
    auto w1 = io::weights_from_json(json::parse(s), "$");
    auto w2 = io::weights_from_json(io::to_json(w1), "$");
    CHECK(io::to_json(w1) == io::to_json(w2));
    CHECK(w1 == w2);
  }

  auto h = io::modulus_from_json(
      json::parse(R"({"kind":"ratio_modulus","lambda":{"kind":"power_log","alpha":1.0,"beta":0.0}})"),
      "$");
  CHECK(io::modulus_from_json(io::to_json(h), "$") == h);

  auto phi = io::schramm_from_json(
      json::parse(
          R"({"kind":"scaled","phi":{"kind":"power","p":2.0},"lambda":{"kind":"constant","c":1.0}})"),
      "$");
  CHECK(io::schramm_from_json(io::to_json(phi), "$") == phi);

  auto pl = io::gauge_from_json(
      json::parse(R"({"kind":"explicit","breakpoints":[[0.0,0.0],[1.0,0.5],[2.0,2.0]]})"), "$");
  CHECK(io::gauge_from_json(io::to_json(pl), "$") == pl);

  auto f = io::function_from_json(json::parse(R"({"grid":[0.0,0.5,1.0],"values":[0.0,1.0,0.5]})"),
                                  "$");
  CHECK(io::to_json(io::function_from_json(io::to_json(f), "$")) == io::to_json(f));

  auto spec = io::class_from_json(
      json::parse(R"({"class":"wiener","lambda":{"kind":"constant","c":1.0},"p_seq":[1.0,1.5]})"),
      "$");
  CHECK(io::to_json(io::class_from_json(io::to_json(spec), "$")) == io::to_json(spec));
}

TEST_CASE("schema errors carry the offending path") {
  try {
    io::weights_from_json(json::parse(R"({"kind":"power_log","alpha":"x"})"), "$.lambda");
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(e.path() == "$.lambda.alpha");
  }
  try {
    io::class_from_json(json::parse(R"({"class":"nope"})"), "$.source");
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(e.path() == "$.source.class");
  }
  // Construction-level rejections surface as schema errors with the path.
  CHECK_THROWS_AS(io::weights_from_json(json::parse(R"({"kind":"power_log","alpha":2.0,"beta":0.0})"),
                                        "$.lambda"),
                  SchemaError);
}

TEST_CASE("variation command emits a deterministic run record") {
  TempDir tmp;
  auto job = tmp.write("job.json", R"({
    "function": {"grid": [0, 0.25, 0.5, 0.75, 1], "values": [0, 1, 0, 1, 0]},
    "class": {"class": "waterman_shiba", "lambda": {"kind": "power_log", "alpha": 1.0, "beta": 0.0}, "p": 1.0}
  })");
  auto out1 = tmp.dir / "out1.json";
  auto out2 = tmp.dir / "out2.json";
  CHECK(cli::run({"variation", "--job", job.string(), "--out", out1.string()}) == cli::kExitOk);
  CHECK(cli::run({"variation", "--job", job.string(), "--out", out2.string()}) == cli::kExitOk);

  auto r1 = load(out1), r2 = load(out2);
  CHECK(r1["result"]["value"].get<double>() == doctest::Approx(25.0 / 12.0).epsilon(1e-13));
  // Determinism outside the metadata block.
  r1.erase("meta");
  r2.erase("meta");
  CHECK(r1.dump() == r2.dump());
  // Record round-trip.
  CHECK(json::parse(load(out1).dump()) == load(out1));
}

TEST_CASE("embed-check exit codes encode the verdict") {
  TempDir tmp;
  auto holds = tmp.write("holds.json", R"({
    "source": {"class": "chanturiya", "h": {"kind": "constant_one"}},
    "target": {"class": "waterman", "lambda": {"kind": "power_log", "alpha": 1.0, "beta": 0.0}},
    "K": 10000
  })");
  CHECK(cli::run({"embed-check", "--job", holds.string(), "--out",
                  (tmp.dir / "h.json").string()}) == cli::kExitOk);
  auto rec = load(tmp.dir / "h.json");
  CHECK(rec["result"]["outcome"] == "holds_by_condition");
  CHECK(rec["result"]["condition_applied"] == "chanturiya_to_waterman_series");
  CHECK(rec["result"]["certificate"]["value"].get<double>() ==
        doctest::Approx(1.0 - 1.0 / 10001.0).epsilon(1e-12));

  auto fails = tmp.write("fails.json", R"({
    "source": {"class": "waterman", "lambda": {"kind": "power_log", "alpha": 1.0, "beta": 0.0}},
    "target": {"class": "waterman", "lambda": {"kind": "constant", "c": 1.0}},
    "K": 1000
  })");
  CHECK(cli::run({"embed-check", "--job", fails.string(), "--out",
                  (tmp.dir / "f.json").string()}) == cli::kExitFails);

  auto inconclusive = tmp.write("inc.json", R"({
    "source": {"class": "phi_bv", "phi": {"kind": "explicit", "gauges": [
        {"kind": "explicit", "breakpoints": [[0.0,0.0],[1.0,1.0]]}]}},
    "target": {"class": "waterman", "lambda": {"kind": "power_log", "alpha": 1.0, "beta": 0.0}},
    "K": 1000
  })");
  CHECK(cli::run({"embed-check", "--job", inconclusive.string(), "--out",
                  (tmp.dir / "i.json").string()}) == cli::kExitInconclusive);

  auto uncovered = tmp.write("uncov.json", R"({
    "source": {"class": "wiener", "lambda": {"kind": "constant", "c": 1.0}, "p_seq": [1.0]},
    "target": {"class": "chanturiya", "h": {"kind": "constant_one"}}
  })");
  CHECK(cli::run({"embed-check", "--job", uncovered.string()}) == cli::kExitData);
}

TEST_CASE("malformed input: data exit code and no partial output") {
  TempDir tmp;
  auto bad = tmp.write("bad.json", "{ not json");
  auto out = tmp.dir / "out.json";
  CHECK(cli::run({"embed-check", "--job", bad.string(), "--out", out.string()}) == cli::kExitData);
  CHECK(!fs::exists(out));

  auto missing = tmp.write("missing.json", R"({"source": {"class": "waterman"}})");
  CHECK(cli::run({"embed-check", "--job", missing.string(), "--out", out.string()}) ==
        cli::kExitData);
  CHECK(!fs::exists(out));

  CHECK(cli::run({"embed-check"}) == cli::kExitUsage);
  CHECK(cli::run({"verify", "--suite", "nonsense"}) == cli::kExitUsage);
  CHECK(cli::run({"frobnicate"}) == cli::kExitUsage);
}

TEST_CASE("verify command reports and exit codes") {
  TempDir tmp;
  auto out = tmp.dir / "rep.json";
  CHECK(cli::run({"verify", "--suite", "abel", "--trials", "100", "--seed", "7", "--out",
                  out.string()}) == cli::kExitOk);
  auto rec = load(out);
  CHECK(rec["result"]["trials"].get<long long>() == 100);
  CHECK(rec["result"]["violations"].get<long long>() == 0);

  // Conjecture runs are experimental and never gate.
  CHECK(cli::run({"verify", "--suite", "conjecture", "--max-teeth", "8", "--out",
                  (tmp.dir / "c.json").string()}) == cli::kExitOk);

  // Explicit weight/modulus inputs for the search via a job file.
  auto cjob = tmp.write("cjob.json", R"({
    "lambda": {"kind": "power_log", "alpha": 1.0, "beta": 0.0},
    "h": {"kind": "constant_one"}
  })");
  auto cout_path = tmp.dir / "c2.json";
  CHECK(cli::run({"verify", "--suite", "conjecture", "--job", cjob.string(), "--max-teeth", "8",
                  "--out", cout_path.string()}) == cli::kExitOk);
  auto crec = load(cout_path);
  CHECK(crec["result"]["applicable"].get<bool>());
  CHECK(crec["result"]["entries"].size() >= 2);
}

TEST_CASE("thread cap from the environment keeps reports identical") {
  TempDir tmp;
  auto o1 = tmp.dir / "t1.json";
  auto o2 = tmp.dir / "t2.json";
  ::setenv("VAREMBED_THREADS", "1", 1);
  CHECK(cli::run({"verify", "--suite", "ineq3", "--trials", "3000", "--seed", "5", "--out",
                  o1.string()}) == cli::kExitOk);
  ::setenv("VAREMBED_THREADS", "4", 1);
  CHECK(cli::run({"verify", "--suite", "ineq3", "--trials", "3000", "--seed", "5", "--out",
                  o2.string()}) == cli::kExitOk);
  ::unsetenv("VAREMBED_THREADS");
  auto r1 = load(o1), r2 = load(o2);
  CHECK(r1["result"].dump() == r2["result"].dump());
}

TEST_CASE("gen command: determinism and CSV export") {
  TempDir tmp;
  auto job = tmp.write("gen.json",
                       R"({"generate": {"kind": "oscillator", "a": 1.0, "b": 1.0, "points": 33}})");
  auto o1 = tmp.dir / "f1.json";
  auto o2 = tmp.dir / "f2.json";
  CHECK(cli::run({"gen", "--job", job.string(), "--out", o1.string(), "--csv",
                  (tmp.dir / "f.csv").string()}) == cli::kExitOk);
  CHECK(cli::run({"gen", "--job", job.string(), "--out", o2.string()}) == cli::kExitOk);
  auto r1 = load(o1), r2 = load(o2);
  CHECK(r1["result"] == r2["result"]);
  CHECK(r1["result"]["grid"].size() == 33);

  auto csv = tmp.read("f.csv");
  CHECK(csv.substr(0, 4) == "t,f\n");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 34);  // header + 33 rows

  auto rjob = tmp.write("gen2.json",
                        R"({"generate": {"kind": "random_piecewise_linear", "points": 9,
                            "amplitude": 2.0}, "seed": 11})");
  auto o3 = tmp.dir / "f3.json";
  auto o4 = tmp.dir / "f4.json";
  CHECK(cli::run({"gen", "--job", rjob.string(), "--out", o3.string()}) == cli::kExitOk);
  CHECK(cli::run({"gen", "--job", rjob.string(), "--out", o4.string()}) == cli::kExitOk);
  CHECK(load(o3)["result"] == load(o4)["result"]);
}

TEST_CASE("report command: tidy CSV per record kind") {
  TempDir tmp;
  auto job = tmp.write("job.json", R"({
    "function": {"grid": [0, 0.25, 0.5, 0.75, 1], "values": [0, 1, 0, 1, 0]},
    "class": {"class": "chanturiya", "h": {"kind": "power", "gamma": 0.5}}
  })");
  auto rec1 = tmp.dir / "r1.json";
  REQUIRE(cli::run({"variation", "--job", job.string(), "--out", rec1.string()}) == cli::kExitOk);

  auto csv_path = tmp.dir / "trace.csv";
  CHECK(cli::run({"report", rec1.string(), "--out", csv_path.string()}) == cli::kExitOk);
  auto csv = tmp.read("trace.csv");
  CHECK(csv.rfind("record,n,v_n,v_n_over_h_n\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);  // header + 4 trace rows

  // Empty input: header only.
  auto empty_csv = tmp.dir / "empty.csv";
  CHECK(cli::run({"report", "--kind", "variation", "--out", empty_csv.string()}) == cli::kExitOk);
  CHECK(tmp.read("empty.csv") == "record,n,v_n,v_n_over_h_n\n");

  // Mixed kinds are refused.
  auto ejob = tmp.write("e.json", R"({
    "source": {"class": "chanturiya", "h": {"kind": "constant_one"}},
    "target": {"class": "waterman", "lambda": {"kind": "power_log", "alpha": 1.0, "beta": 0.0}},
    "K": 1000
  })");
  auto rec2 = tmp.dir / "r2.json";
  REQUIRE(cli::run({"embed-check", "--job", ejob.string(), "--out", rec2.string()}) == cli::kExitOk);
  CHECK(cli::run({"report", rec1.string(), rec2.string(), "--out",
                  (tmp.dir / "mix.csv").string()}) == cli::kExitData);

  // Verdict-grid CSV from embedding records.
  auto grid_csv = tmp.dir / "grid.csv";
  CHECK(cli::run({"report", rec2.string(), "--out", grid_csv.string()}) == cli::kExitOk);
  CHECK(tmp.read("grid.csv").rfind("record,source,target,condition,outcome,value,truncation\n",
                                   0) == 0);
}
