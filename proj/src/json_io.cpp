#include "varembed/json_io.hpp"

#include <sstream>

namespace varembed::io {

// ---------------------------------------------------------------------------
// Field access
// ---------------------------------------------------------------------------

const json& require_field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path + "." + key, "missing required field");
  return *it;
}

double require_number(const json& obj, const char* key, const std::string& path) {
  const json& v = require_field(obj, key, path);
  if (!v.is_number()) throw SchemaError(path + "." + key, "expected a number");
  return v.get<double>();
}

long long require_integer(const json& obj, const char* key, const std::string& path) {
  const json& v = require_field(obj, key, path);
  if (!v.is_number_integer()) throw SchemaError(path + "." + key, "expected an integer");
  return v.get<long long>();
}

std::string require_string(const json& obj, const char* key, const std::string& path) {
  const json& v = require_field(obj, key, path);
  if (!v.is_string()) throw SchemaError(path + "." + key, "expected a string");
  return v.get<std::string>();
}

std::vector<double> require_number_array(const json& obj, const char* key,
                                         const std::string& path) {
  const json& v = require_field(obj, key, path);
  if (!v.is_array()) throw SchemaError(path + "." + key, "expected an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number())
      throw SchemaError(path + "." + key + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

json to_json(const WeightSequence& w) {
  switch (w.family()) {
    case WeightSequence::Family::constant:
      return {{"kind", "constant"}, {"c", w.const_value()}};
    case WeightSequence::Family::power_log:
      return {{"kind", "power_log"}, {"alpha", w.alpha()}, {"beta", w.beta()}};
    case WeightSequence::Family::explicit_prefix:
      return {{"kind", "explicit_prefix"},
              {"values", w.prefix_values()},
              {"tail", to_json(w.tail())}};
  }
  return {};
}

json to_json(const VariationModulus& h) {
  switch (h.family()) {
    case VariationModulus::Family::power:
      return {{"kind", "power"}, {"gamma", h.gamma()}};
    case VariationModulus::Family::log:
      return {{"kind", "log"}};
    case VariationModulus::Family::ratio:
      return {{"kind", "ratio_modulus"}, {"lambda", to_json(h.lambda())}};
    case VariationModulus::Family::constant_one:
      return {{"kind", "constant_one"}};
    case VariationModulus::Family::explicit_prefix:
      return {{"kind", "explicit_prefix"}, {"values", h.prefix_values()}};
  }
  return {};
}

json to_json(const ConvexGauge& g) {
  switch (g.family()) {
    case ConvexGauge::Family::power:
      return {{"kind", "power"}, {"p", g.power_exponent()}};
    case ConvexGauge::Family::exp_minus_one:
      return {{"kind", "exp_minus_one"}};
    case ConvexGauge::Family::piecewise_linear: {
      json bps = json::array();
      for (std::size_t i = 0; i < g.breakpoints_x().size(); ++i)
        bps.push_back({g.breakpoints_x()[i], g.breakpoints_y()[i]});
      return {{"kind", "explicit"}, {"breakpoints", bps}};
    }
  }
  return {};
}

json to_json(const SchrammSequence& phi) {
  switch (phi.rule()) {
    case SchrammSequence::Rule::scaled:
      return {{"kind", "scaled"},
              {"phi", to_json(phi.base_gauge())},
              {"lambda", to_json(phi.scale_weights())}};
    case SchrammSequence::Rule::uniform:
      return {{"kind", "uniform"}, {"phi", to_json(phi.base_gauge())}};
    case SchrammSequence::Rule::explicit_list: {
      json list = json::array();
      for (const auto& g : phi.gauges()) list.push_back(to_json(g));
      return {{"kind", "explicit"}, {"gauges", list}};
    }
  }
  return {};
}

json to_json(const SampledFunction& f) { return {{"grid", f.grid}, {"values", f.values}}; }

json to_json(const IntervalFamily& fam) {
  json pairs = json::array();
  for (const auto& [a, b] : fam.pairs) pairs.push_back({a, b});
  return {{"pairs", pairs}};
}

json to_json(const ClassSpec& spec) {
  json j{{"class", to_string(spec.kind)}};
  switch (spec.kind) {
    case ClassSpec::Kind::schramm:
      j["phi"] = to_json(*spec.phi);
      j["h"] = to_json(*spec.h);
      break;
    case ClassSpec::Kind::waterman_shiba:
      j["lambda"] = to_json(*spec.lambda);
      j["p"] = spec.p;
      break;
    case ClassSpec::Kind::chanturiya:
      j["h"] = to_json(*spec.h);
      break;
    case ClassSpec::Kind::waterman:
      j["lambda"] = to_json(*spec.lambda);
      break;
    case ClassSpec::Kind::wiener:
      j["lambda"] = to_json(*spec.lambda);
      j["p_seq"] = spec.p_seq;
      break;
    case ClassSpec::Kind::phi_bv:
      j["phi"] = to_json(*spec.phi);
      break;
  }
  return j;
}

json to_json(const TracePoint& t) {
  return {{"n", t.n}, {"value", t.value}, {"scale", t.scale}, {"ratio", t.ratio}};
}

json to_json(const VariationResult& r) {
  json trace = json::array();
  for (const auto& t : r.trace) trace.push_back(to_json(t));
  return {{"value", r.value},
          {"arg_n", r.arg_n},
          {"witness", to_json(r.witness)},
          {"trace", trace},
          {"mode", r.mode == ResultMode::exact ? "exact" : "lower_bound"},
          {"unbounded", r.unbounded}};
}

json to_json(const ModulusResult& r) {
  return {{"n", r.n},
          {"value", r.value},
          {"witness", to_json(r.witness)},
          {"mode", r.mode == ResultMode::exact ? "exact" : "lower_bound"}};
}

json to_json(const EmbeddingVerdict& v) {
  const auto& c = v.certificate;
  json checks = json::array();
  for (const auto& hc : c.hypothesis_checks)
    checks.push_back({{"name", hc.name}, {"pass", hc.pass}, {"note", hc.note}});
  json trace = json::array();
  for (const auto& t : c.trace) trace.push_back(to_json(t));
  json cert{{"condition", c.condition},
            {"value", c.value},
            {"truncation", c.truncation},
            {"last_term", c.last_term},
            {"tail_class", c.tail_class},
            {"trace", trace},
            {"hypothesis_checks", checks},
            {"note", c.note}};
  cert["tail_estimate"] = c.tail_estimate ? json(*c.tail_estimate) : json(nullptr);
  return {{"outcome", to_string(v.outcome)}, {"certificate", cert}};
}

json to_json(const verify::CheckReport& r) {
  return {{"suite", r.suite},
          {"trials", r.trials},
          {"violations", r.violations},
          {"worst_slack", r.worst_slack},
          {"max_ratio", r.max_ratio},
          {"seed", r.seed},
          {"tol", r.tol},
          {"params", r.params},
          {"violating_trials", r.violating_trials},
          {"experimental", r.experimental}};
}

json to_json(const verify::WitnessReport& r) {
  json links = json::array();
  for (const auto& l : r.links)
    links.push_back({{"name", l.name}, {"lhs", l.lhs}, {"rhs", l.rhs}, {"slack", l.slack}});
  return {{"condition", r.condition}, {"links", links}, {"violations", r.violations}};
}

json to_json(const verify::SearchReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries)
    entries.push_back({{"teeth", e.teeth},
                       {"waterman_variation", e.waterman_variation},
                       {"max_ratio", e.max_ratio},
                       {"arg_n", e.arg_n}});
  return {{"applicable", r.applicable},
          {"reason", r.reason},
          {"entries", entries},
          {"growth_trend", r.growth_trend}};
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

WeightSequence weights_from_json(const json& j, const std::string& path) {
  std::string kind = require_string(j, "kind", path);
  try {
    if (kind == "constant") return WeightSequence::constant(require_number(j, "c", path));
    if (kind == "power_log") {
      // Sequenced loads keep the reported schema path deterministic.
      double alpha = require_number(j, "alpha", path);
      double beta = require_number(j, "beta", path);
      return WeightSequence::power_log(alpha, beta);
    }
    if (kind == "explicit_prefix") {
      auto values = require_number_array(j, "values", path);
      auto tail = weights_from_json(require_field(j, "tail", path), path + ".tail");
      return WeightSequence::explicit_prefix(std::move(values), std::move(tail));
    }
  } catch (const InvalidParams& e) {
    throw SchemaError(path, e.what());
  }
  throw SchemaError(path + ".kind", "unknown weight-sequence kind: " + kind);
}

VariationModulus modulus_from_json(const json& j, const std::string& path) {
  std::string kind = require_string(j, "kind", path);
  try {
    if (kind == "power") return VariationModulus::power(require_number(j, "gamma", path));
    if (kind == "log") return VariationModulus::log();
    if (kind == "ratio_modulus")
      return VariationModulus::ratio(
          weights_from_json(require_field(j, "lambda", path), path + ".lambda"));
    if (kind == "constant_one") return VariationModulus::constant_one();
    if (kind == "explicit_prefix")
      return VariationModulus::explicit_prefix(require_number_array(j, "values", path));
  } catch (const InvalidParams& e) {
    throw SchemaError(path, e.what());
  }
  throw SchemaError(path + ".kind", "unknown modulus kind: " + kind);
}

ConvexGauge gauge_from_json(const json& j, const std::string& path) {
  std::string kind = require_string(j, "kind", path);
  try {
    if (kind == "power") return ConvexGauge::power(require_number(j, "p", path));
    if (kind == "exp_minus_one") return ConvexGauge::exp_minus_one();
    if (kind == "explicit") {
      const json& bps = require_field(j, "breakpoints", path);
      if (!bps.is_array()) throw SchemaError(path + ".breakpoints", "expected an array");
      std::vector<double> xs, ys;
      for (std::size_t i = 0; i < bps.size(); ++i) {
        const json& bp = bps[i];
        if (!bp.is_array() || bp.size() != 2 || !bp[0].is_number() || !bp[1].is_number())
          throw SchemaError(path + ".breakpoints[" + std::to_string(i) + "]",
                            "expected a [x, y] number pair");
        xs.push_back(bp[0].get<double>());
        ys.push_back(bp[1].get<double>());
      }
      return ConvexGauge::piecewise_linear(std::move(xs), std::move(ys));
    }
  } catch (const InvalidParams& e) {
    throw SchemaError(path, e.what());
  } catch (const LengthMismatch& e) {
    throw SchemaError(path, e.what());
  }
  throw SchemaError(path + ".kind", "unknown gauge kind: " + kind);
}

SchrammSequence schramm_from_json(const json& j, const std::string& path) {
  std::string kind = require_string(j, "kind", path);
  try {
    if (kind == "scaled") {
      auto phi = gauge_from_json(require_field(j, "phi", path), path + ".phi");
      auto lambda = weights_from_json(require_field(j, "lambda", path), path + ".lambda");
      return SchrammSequence::scaled(std::move(phi), std::move(lambda));
    }
    if (kind == "uniform")
      return SchrammSequence::uniform(gauge_from_json(require_field(j, "phi", path), path + ".phi"));
    if (kind == "explicit") {
      const json& list = require_field(j, "gauges", path);
      if (!list.is_array()) throw SchemaError(path + ".gauges", "expected an array");
      std::vector<ConvexGauge> gauges;
      for (std::size_t i = 0; i < list.size(); ++i)
        gauges.push_back(gauge_from_json(list[i], path + ".gauges[" + std::to_string(i) + "]"));
      return SchrammSequence::explicit_list(std::move(gauges));
    }
  } catch (const InvalidParams& e) {
    throw SchemaError(path, e.what());
  }
  throw SchemaError(path + ".kind", "unknown gauge-sequence kind: " + kind);
}

SampledFunction function_from_json(const json& j, const std::string& path) {
  try {
    auto grid = require_number_array(j, "grid", path);
    auto values = require_number_array(j, "values", path);
    return SampledFunction(std::move(grid), std::move(values));
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(path, e.what());
  }
}

IntervalFamily family_from_json(const json& j, const std::string& path) {
  const json& pairs = require_field(j, "pairs", path);
  if (!pairs.is_array()) throw SchemaError(path + ".pairs", "expected an array");
  std::vector<std::pair<int, int>> out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const json& p = pairs[i];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer())
      throw SchemaError(path + ".pairs[" + std::to_string(i) + "]",
                        "expected an [a, b] integer pair");
    out.emplace_back(p[0].get<int>(), p[1].get<int>());
  }
  try {
    return IntervalFamily::from_pairs(std::move(out));
  } catch (const InvalidParams& e) {
    throw SchemaError(path + ".pairs", e.what());
  }
}

ClassSpec class_from_json(const json& j, const std::string& path) {
  std::string kind = require_string(j, "class", path);
  try {
    if (kind == "schramm") {
      auto phi = schramm_from_json(require_field(j, "phi", path), path + ".phi");
      auto h = modulus_from_json(require_field(j, "h", path), path + ".h");
      return ClassSpec::schramm(std::move(phi), std::move(h));
    }
    if (kind == "waterman_shiba") {
      auto lambda = weights_from_json(require_field(j, "lambda", path), path + ".lambda");
      double p = require_number(j, "p", path);
      return ClassSpec::waterman_shiba(std::move(lambda), p);
    }
    if (kind == "chanturiya")
      return ClassSpec::chanturiya(modulus_from_json(require_field(j, "h", path), path + ".h"));
    if (kind == "waterman")
      return ClassSpec::waterman(
          weights_from_json(require_field(j, "lambda", path), path + ".lambda"));
    if (kind == "wiener") {
      auto lambda = weights_from_json(require_field(j, "lambda", path), path + ".lambda");
      auto p_seq = require_number_array(j, "p_seq", path);
      return ClassSpec::wiener(std::move(lambda), std::move(p_seq));
    }
    if (kind == "phi_bv")
      return ClassSpec::phi_bv(schramm_from_json(require_field(j, "phi", path), path + ".phi"));
  } catch (const InvalidParams& e) {
    throw SchemaError(path, e.what());
  }
  throw SchemaError(path + ".class", "unknown class kind: " + kind);
}

SampledFunction function_or_generate(const json& j, const std::string& path) {
  if (j.is_object() && j.contains("generate")) {
    const json& gen = j["generate"];
    std::uint64_t seed = 0;
    if (j.contains("seed")) {
      if (!j["seed"].is_number_integer()) throw SchemaError(path + ".seed", "expected an integer");
      seed = j["seed"].get<std::uint64_t>();
    }
    std::string kind = require_string(gen, "kind", path + ".generate");
    try {
      if (kind == "step") {
        auto sizes = require_number_array(gen, "sizes", path + ".generate");
        int points = static_cast<int>(require_integer(gen, "points", path + ".generate"));
        if (gen.contains("sites")) {
          const json& sj = gen["sites"];
          if (!sj.is_array()) throw SchemaError(path + ".generate.sites", "expected an array");
          std::vector<int> sites;
          for (const auto& s : sj) sites.push_back(s.get<int>());
          return generate_step(points, sizes, sites);
        }
        return generate_step_random_sites(points, sizes, seed);
      }
      if (kind == "oscillator") {
        double a = require_number(gen, "a", path + ".generate");
        double b = require_number(gen, "b", path + ".generate");
        int points = static_cast<int>(require_integer(gen, "points", path + ".generate"));
        return generate_oscillator(a, b, points);
      }
      if (kind == "random_piecewise_linear") {
        int points = static_cast<int>(require_integer(gen, "points", path + ".generate"));
        double amplitude = require_number(gen, "amplitude", path + ".generate");
        return generate_random_piecewise_linear(points, amplitude, seed);
      }
    } catch (const SchemaError&) {
      throw;
    } catch (const Error& e) {
      throw SchemaError(path + ".generate", e.what());
    }
    throw SchemaError(path + ".generate.kind", "unknown generator kind: " + kind);
  }
  return function_from_json(j, path);
}

std::string function_to_csv(const SampledFunction& f) {
  std::ostringstream os;
  os.precision(17);
  os << "t,f\n";
  for (std::size_t i = 0; i < f.grid.size(); ++i) os << f.grid[i] << "," << f.values[i] << "\n";
  return os.str();
}

}  // namespace varembed::io
