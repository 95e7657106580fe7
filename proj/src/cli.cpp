#include "varembed/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "varembed/json_io.hpp"
#include "varembed/verify.hpp"

namespace varembed::cli {
namespace {

constexpr const char* kToolVersion = "0.1.0";

int env_threads() {
  const char* v = std::getenv("VAREMBED_THREADS");
  if (v == nullptr || *v == '\0') return 0;
  return std::atoi(v);
}

nlohmann::json load_json_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw Error("cannot open file: " + file);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, true, false);
  if (j.is_discarded()) throw SchemaError("$", "malformed JSON in " + file);
  return j;
}

// Atomic write: temp file in the target directory, then rename.
void write_file_atomic(const std::string& file, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(file);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error("cannot write file: " + file);
    out << content;
    out.flush();
    if (!out) throw Error("write failed: " + file);
  }
  fs::rename(tmp, target);
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content << "\n";
  } else {
    write_file_atomic(out_path, content);
  }
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

std::string timestamp_utc() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

// RunRecord envelope; everything outside "meta" is deterministic for a given
// job and seed.
nlohmann::json run_record(const std::string& command, const nlohmann::json& job,
                          nlohmann::json result, std::vector<std::string> warnings,
                          const Timer& timer) {
  nlohmann::json meta{{"timestamp_utc", timestamp_utc()}, {"wall_ms", timer.ms()}};
  return {{"tool", "varembed"}, {"version", kToolVersion},  {"command", command},
          {"job", job},         {"result", std::move(result)}, {"warnings", warnings},
          {"meta", meta}};
}

// --- variation ---------------------------------------------------------------

int cmd_variation(const std::string& job_file, const std::string& out_path) {
  Timer timer;
  nlohmann::json job = load_json_file(job_file);
  auto f = io::function_or_generate(io::require_field(job, "function", "$"), "$.function");
  auto spec = io::class_from_json(io::require_field(job, "class", "$"), "$.class");
  SearchMode mode = SearchMode::exact;
  if (job.contains("mode")) {
    std::string m = job["mode"].get<std::string>();
    if (m == "heuristic") {
      mode = SearchMode::heuristic;
    } else if (m != "exact") {
      throw SchemaError("$.mode", "expected \"exact\" or \"heuristic\"");
    }
  }
  std::uint64_t seed = job.contains("seed") ? job["seed"].get<std::uint64_t>() : 0;
  long long n_max = job.contains("n_max") ? job["n_max"].get<long long>() : 0;

  VariationResult result;
  switch (spec.kind) {
    case ClassSpec::Kind::schramm:
      result = schramm_variation(f, *spec.phi, *spec.h, mode, {}, seed, n_max);
      break;
    case ClassSpec::Kind::phi_bv:
      result = schramm_variation(f, *spec.phi, VariationModulus::constant_one(), mode, {}, seed,
                                 n_max);
      break;
    case ClassSpec::Kind::chanturiya:
      result = schramm_variation(f, SchrammSequence::uniform(ConvexGauge::power(1.0)), *spec.h,
                                 mode, {}, seed, n_max);
      break;
    case ClassSpec::Kind::waterman:
      result = lambda_p_variation(f, *spec.lambda, 1.0, mode, {}, seed, n_max);
      break;
    case ClassSpec::Kind::waterman_shiba:
      result = lambda_p_variation(f, *spec.lambda, spec.p, mode, {}, seed, n_max);
      break;
    case ClassSpec::Kind::wiener:
      result = wiener_variation(f, *spec.lambda, spec.p_seq, mode, {}, seed);
      break;
  }

  std::vector<std::string> warnings;
  if (result.mode == ResultMode::lower_bound)
    warnings.push_back("heuristic search: value is a lower bound");
  auto record = run_record("variation", job, io::to_json(result), std::move(warnings), timer);
  emit(out_path, record.dump(2));
  return kExitOk;
}

// --- embed-check ---------------------------------------------------------------

int cmd_embed_check(const std::string& job_file, const std::string& out_path) {
  Timer timer;
  nlohmann::json job = load_json_file(job_file);
  auto source = io::class_from_json(io::require_field(job, "source", "$"), "$.source");
  auto target = io::class_from_json(io::require_field(job, "target", "$"), "$.target");
  EvalOptions opts;
  if (job.contains("K")) opts.truncation = job["K"].get<long long>();
  if (job.contains("n_max")) opts.n_max = job["n_max"].get<long long>();
  if (job.contains("tol")) opts.tol = job["tol"].get<double>();
  std::string forced = job.contains("condition") ? job["condition"].get<std::string>() : "";

  auto dispatch = evaluate_embedding(source, target, opts, forced);
  nlohmann::json result = io::to_json(dispatch.verdict);
  result["condition_applied"] = dispatch.condition;
  auto record = run_record("embed-check", job, std::move(result), {}, timer);
  emit(out_path, record.dump(2));

  switch (dispatch.verdict.outcome) {
    case Outcome::holds_by_condition:
      return kExitOk;
    case Outcome::condition_fails:
      return kExitFails;
    case Outcome::inconclusive:
      return kExitInconclusive;
  }
  return kExitInconclusive;
}

// --- verify ---------------------------------------------------------------------

int cmd_verify(const std::string& suite, long long trials, std::uint64_t seed, double tol,
               int max_teeth, const std::string& out_path) {
  Timer timer;
  int threads = env_threads();
  nlohmann::json job{{"suite", suite}, {"trials", trials}, {"seed", seed}, {"tol", tol}};

  nlohmann::json result;
  bool violations = false;
  auto absorb = [&](const verify::CheckReport& rep) {
    result = io::to_json(rep);
    if (!rep.experimental && rep.violations > 0) violations = true;
    std::cerr << rep.suite << ": " << rep.trials << " trials, " << rep.violations
              << " violations, worst slack " << rep.worst_slack << "\n";
  };

  if (suite == "ineq3") {
    absorb(verify::run_prefix_ratio_suite(trials, seed, tol, threads));
  } else if (suite == "lemma2") {
    absorb(verify::run_prefix_ratio_sub_one_suite(trials, seed, tol, threads));
  } else if (suite == "abel") {
    absorb(verify::run_abel_suite(trials, seed, 1e-12, threads));
  } else if (suite == "lemma1") {
    absorb(verify::run_variation_bound_suite(trials, seed, tol, threads));
  } else if (suite == "rearrangement") {
    absorb(verify::run_rearrangement_suite(trials, seed, tol, threads));
  } else if (suite == "witnesses") {
    absorb(verify::run_witness_suite(trials, seed, tol, threads));
  } else if (suite == "conjecture") {
    auto rep = verify::conjecture_search(WeightSequence::power_log(1.0, 0.0),
                                         VariationModulus::constant_one(), max_teeth, seed);
    result = io::to_json(rep);
    std::cerr << "conjecture: " << (rep.applicable ? "search ran" : "not applicable") << ", "
              << rep.entries.size() << " sizes (experimental, never gates)\n";
  } else {
    throw CLI::ValidationError("--suite", "unknown suite: " + suite);
  }

  auto record = run_record("verify", job, std::move(result), {}, timer);
  emit(out_path, record.dump(2));
  return violations ? kExitFails : kExitOk;
}

// Conjecture search with explicit weight/modulus inputs via job file.
int cmd_verify_conjecture_job(const std::string& job_file, std::uint64_t seed, int max_teeth,
                              const std::string& out_path) {
  Timer timer;
  nlohmann::json job = load_json_file(job_file);
  auto lambda = io::weights_from_json(io::require_field(job, "lambda", "$"), "$.lambda");
  auto h = io::modulus_from_json(io::require_field(job, "h", "$"), "$.h");
  auto rep = verify::conjecture_search(lambda, h, max_teeth, seed);
  auto record = run_record("verify", job, io::to_json(rep), {}, timer);
  emit(out_path, record.dump(2));
  std::cerr << "conjecture: " << (rep.applicable ? "search ran" : "not applicable")
            << " (experimental, never gates)\n";
  return kExitOk;
}

// --- gen -------------------------------------------------------------------------

int cmd_gen(const std::string& job_file, const std::string& out_path, const std::string& csv_path) {
  Timer timer;
  nlohmann::json job = load_json_file(job_file);
  auto f = io::function_or_generate(job, "$");
  if (!csv_path.empty()) write_file_atomic(csv_path, io::function_to_csv(f));
  auto record = run_record("gen", job, io::to_json(f), {}, timer);
  emit(out_path, record.dump(2));
  return kExitOk;
}

}  // namespace

// --- report ------------------------------------------------------------------------

std::string make_report_csv(const std::vector<nlohmann::json>& records,
                            const std::string& kind_hint) {
  std::string kind = kind_hint;
  for (const auto& r : records) {
    std::string c = r.contains("command") ? r["command"].get<std::string>() : "";
    if (kind.empty()) kind = c;
    if (!c.empty() && c != kind)
      throw MixedSchemas("records mix commands '" + kind + "' and '" + c + "'");
  }
  std::ostringstream os;
  os.precision(17);
  if (kind.empty() || kind == "variation") {
    os << "record,n,v_n,v_n_over_h_n\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto& result = records[i].at("result");
      for (const auto& t : result.at("trace"))
        os << i << "," << t.at("n").get<long long>() << "," << t.at("value").get<double>() << ","
           << t.at("ratio").get<double>() << "\n";
    }
    return os.str();
  }
  if (kind == "embed-check") {
    os << "record,source,target,condition,outcome,value,truncation\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto& rec = records[i];
      const auto& result = rec.at("result");
      const auto& cert = result.at("certificate");
      os << i << "," << rec.at("job").at("source").at("class").get<std::string>() << ","
         << rec.at("job").at("target").at("class").get<std::string>() << ","
         << cert.at("condition").get<std::string>() << ","
         << result.at("outcome").get<std::string>() << "," << cert.at("value").get<double>() << ","
         << cert.at("truncation").get<long long>() << "\n";
    }
    return os.str();
  }
  if (kind == "verify") {
    os << "record,suite,trials,violations,worst_slack\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto& result = records[i].at("result");
      if (!result.contains("suite")) continue;  // conjecture reports have no trial schema
      os << i << "," << result.at("suite").get<std::string>() << ","
         << result.at("trials").get<long long>() << "," << result.at("violations").get<long long>()
         << "," << result.at("worst_slack").get<double>() << "\n";
    }
    return os.str();
  }
  throw MixedSchemas("no report schema for command '" + kind + "'");
}

namespace {

int cmd_report(const std::vector<std::string>& files, const std::string& kind,
               const std::string& out_path) {
  std::vector<nlohmann::json> records;
  records.reserve(files.size());
  for (const auto& f : files) records.push_back(load_json_file(f));
  std::string csv = make_report_csv(records, kind);
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    write_file_atomic(out_path, csv);
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"generalized-variation functionals, embedding conditions, and their test harness"};
  app.require_subcommand(1);

  std::string job_file, out_path, csv_path, suite, report_kind;
  std::vector<std::string> report_files;
  long long trials = 10'000;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  int max_teeth = 32;

  auto* variation = app.add_subcommand("variation", "evaluate a variation functional");
  variation->add_option("--job", job_file, "JSON job {function, class, mode?, seed?}")->required();
  variation->add_option("--out", out_path, "output file (default: stdout)");

  auto* embed = app.add_subcommand("embed-check", "evaluate an embedding condition");
  embed->add_option("--job", job_file, "JSON job {source, target, K?, n_max?, tol?, condition?}")
      ->required();
  embed->add_option("--out", out_path, "output file (default: stdout)");

  auto* ver = app.add_subcommand("verify", "run a property-test suite");
  ver->add_option("--suite", suite,
                  "ineq3 | lemma2 | abel | lemma1 | rearrangement | witnesses | conjecture")
      ->required();
  ver->add_option("--trials", trials, "trial count (default 10000)");
  ver->add_option("--seed", seed, "master seed (default 0)");
  ver->add_option("--tol", tol, "violation threshold (default 1e-9)");
  ver->add_option("--max-teeth", max_teeth, "conjecture search size cap (default 32)");
  ver->add_option("--job", job_file, "conjecture only: JSON job {lambda, h}");
  ver->add_option("--out", out_path, "output file (default: stdout)");

  auto* gen = app.add_subcommand("gen", "generate a sampled test function");
  gen->add_option("--job", job_file, "JSON generator spec {generate: {...}, seed?}")->required();
  gen->add_option("--out", out_path, "output file (default: stdout)");
  gen->add_option("--csv", csv_path, "also write a t,f CSV");

  auto* report = app.add_subcommand("report", "tidy CSV from run records");
  report->add_option("files", report_files, "run-record JSON files");
  report->add_option("--kind", report_kind, "record kind for empty input");
  report->add_option("--out", out_path, "output file (default: stdout)");

  std::vector<const char*> argv;
  argv.push_back("varembed");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (variation->parsed()) return cmd_variation(job_file, out_path);
    if (embed->parsed()) return cmd_embed_check(job_file, out_path);
    if (ver->parsed()) {
      if (suite == "conjecture" && !job_file.empty())
        return cmd_verify_conjecture_job(job_file, seed, max_teeth, out_path);
      return cmd_verify(suite, trials, seed, tol, max_teeth, out_path);
    }
    if (gen->parsed()) return cmd_gen(job_file, out_path, csv_path);
    if (report->parsed()) return cmd_report(report_files, report_kind, out_path);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SchemaError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const MixedSchemas& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const NotApplicable& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const Error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace varembed::cli
