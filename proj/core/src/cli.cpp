#include "typeproj/cli.hpp"

#include <CLI11.hpp>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "typeproj/bayes.hpp"
#include "typeproj/divergences.hpp"
#include "typeproj/estimators.hpp"
#include "typeproj/json_io.hpp"
#include "typeproj/projections.hpp"
#include "typeproj/typespace.hpp"

namespace typeproj::cli {

namespace {

using nlohmann::json;

const std::set<std::string> kKinds = {
    "enumerate",      "maxprob",      "project_i",          "project_l",
    "sanov",          "clln",         "posterior",          "bst",
    "blln",           "estimate_el",  "estimate_emme",      "estimate_maxmaxent",
    "estimate_lproj"};

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json json_real(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : "-inf";
}

double enumeration_cap() {
  if (const char* env = std::getenv("TYPEPROJ_CAP")) {
    char* end = nullptr;
    const double cap = std::strtod(env, &end);
    if (end != env && cap > 0.0) return cap;
  }
  return 1e8;
}

struct KindSpec {
  std::set<std::string> required;
  std::set<std::string> optional;
};

const std::map<std::string, KindSpec>& kind_specs() {
  static const std::map<std::string, KindSpec> specs = {
      {"enumerate", {{"alphabet", "n"}, {}}},
      {"maxprob", {{"alphabet", "q", "constraints", "n"}, {}}},
      {"project_i", {{"alphabet", "q", "constraints"}, {}}},
      {"project_l", {{"alphabet", "r", "constraints"}, {}}},
      {"sanov", {{"alphabet", "q", "constraints", "n_list"}, {}}},
      {"clln", {{"alphabet", "q", "constraints", "n_list", "eps"}, {}}},
      {"posterior", {{"alphabet", "prior", "r", "n", "seed"}, {}}},
      {"bst", {{"alphabet", "prior", "r", "subset", "n_list", "mode"}, {"seed"}}},
      {"blln",
       {{"alphabet", "prior", "r", "n_list", "eps", "mode"}, {"seed", "center"}}},
      {"estimate_el", {{"alphabet", "model"}, {"draws", "r", "n", "seed"}}},
      {"estimate_emme", {{"alphabet", "model"}, {"draws", "r", "n", "seed"}}},
      {"estimate_maxmaxent", {{"alphabet", "r", "model"}, {}}},
      {"estimate_lproj", {{"alphabet", "r", "model"}, {}}},
  };
  return specs;
}

std::int64_t int_field(const json& cfg, const std::string& key) {
  const auto& j = cfg.at(key);
  if (!j.is_number_integer() || j.get<std::int64_t>() < 1)
    throw ValidationError("field \"" + key + "\" must be a positive integer");
  return j.get<std::int64_t>();
}

std::vector<std::int64_t> n_list_field(const json& cfg) {
  const auto& j = cfg.at("n_list");
  if (!j.is_array() || j.empty())
    throw ValidationError("field \"n_list\" must be a nonempty integer array");
  std::vector<std::int64_t> out;
  for (const auto& e : j) {
    if (!e.is_number_integer() || e.get<std::int64_t>() < 1)
      throw ValidationError("field \"n_list\" must contain positive integers");
    out.push_back(e.get<std::int64_t>());
  }
  return out;
}

SampleMode mode_field(const json& cfg) {
  const auto s = cfg.at("mode").get<std::string>();
  if (s == "exact") return SampleMode::Exact;
  if (s == "path") return SampleMode::Path;
  throw ValidationError("field \"mode\" must be \"exact\" or \"path\"");
}

std::uint64_t seed_field(const json& cfg) {
  const auto& j = cfg.at("seed");
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0)
    throw ValidationError("field \"seed\" must be a nonnegative integer");
  return j.get<std::uint64_t>();
}

Sample sample_for_estimator(const json& cfg, const Alphabet& alphabet) {
  const bool has_draws = cfg.contains("draws");
  const bool has_gen = cfg.contains("r") || cfg.contains("n") || cfg.contains("seed");
  if (has_draws && has_gen)
    throw ValidationError("give either \"draws\" or \"r\"/\"n\"/\"seed\", not both");
  if (has_draws) {
    std::vector<std::size_t> d;
    for (const auto& e : cfg.at("draws")) {
      if (!e.is_number_integer() || e.get<std::int64_t>() < 0)
        throw ValidationError("field \"draws\" must contain 0-based indices");
      d.push_back(e.get<std::size_t>());
    }
    return Sample(alphabet, std::move(d));
  }
  for (const char* k : {"r", "n", "seed"}) {
    if (!cfg.contains(k))
      throw ValidationError(std::string("missing field \"") + k +
                            "\" (required without \"draws\")");
  }
  return draw_iid(pmf_from_json(alphabet, cfg.at("r")), int_field(cfg, "n"),
                  seed_field(cfg));
}

// dotted-path override assignment, value parsed as JSON when possible
void apply_override(json& cfg, const std::string& key, const std::string& value) {
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::parse_error&) {
    parsed = value;  // plain string
  }
  json* node = &cfg;
  std::size_t pos = 0;
  std::string path = key;
  for (;;) {
    const std::size_t dot = path.find('.', pos);
    const std::string part = path.substr(pos, dot - pos);
    if (part.empty()) throw ValidationError("bad --set key \"" + key + "\"");
    if (dot == std::string::npos) {
      (*node)[part] = parsed;
      return;
    }
    node = &(*node)[part];
    pos = dot + 1;
  }
}

void check_fields(const json& cfg, const std::string& kind) {
  const auto& spec = kind_specs().at(kind);
  for (const auto& req : spec.required) {
    if (!cfg.contains(req))
      throw ValidationError("missing field \"" + req + "\" for kind " + kind);
  }
  for (const auto& [key, _] : cfg.items()) {
    if (key == "kind" || key == "out") continue;
    if (!spec.required.count(key) && !spec.optional.count(key))
      throw ValidationError("unexpected field \"" + key + "\" for kind " + kind);
  }
}

struct CsvWriter {
  std::ostringstream out;

  void comment(const std::string& line) { out << "# " << line << "\n"; }
  void header(const std::vector<std::string>& cols) { row_raw(cols); }
  void row_raw(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      out << (i ? "," : "") << cells[i];
    out << "\n";
  }
};

json projection_json(const ProjectionResult& res, bool l_mode) {
  json out;
  out["pmf"] = res.pmf.probs();
  out["multipliers"] =
      std::vector<double>(res.multipliers.data(),
                          res.multipliers.data() + res.multipliers.size());
  out["divergence"] = json_real(res.divergence);
  out["dual_value"] = json_real(res.dual_value);
  out["iterations"] = res.iterations;
  out["residual"] = res.residual;
  if (l_mode) {
    out["raw_l_divergence"] = json_real(res.raw_dual);
    out["boundary_proximity"] = res.boundary_proximity;
  }
  return out;
}

json estimate_json(const EstimateReport& rep) {
  json out;
  out["theta_hat"] = rep.theta_hat;
  out["lambda_hat"] = rep.lambda_hat;
  out["weights"] = rep.weights;
  out["objective"] = json_real(rep.objective);
  out["grid_tie"] = rep.grid_tie;
  out["min_domain_slack"] = rep.min_domain_slack;
  json profile = json::array();
  for (const auto& pt : rep.profile) {
    json row;
    row["theta"] = pt.theta;
    row["value"] = json_real(pt.value);
    if (pt.hull_failed) row["hull_failed"] = true;
    profile.push_back(row);
  }
  out["profile"] = profile;
  return out;
}

}  // namespace

void validate_config(const json& config) {
  if (!config.is_object()) throw ValidationError("config must be a JSON object");
  if (!config.contains("kind"))
    throw ValidationError("missing field \"kind\"");
  const auto kind = config.at("kind").get<std::string>();
  if (!kKinds.count(kind)) throw ValidationError("unknown kind \"" + kind + "\"");
  check_fields(config, kind);

  // shape checks without computation
  const bool needs_alphabet = config.contains("alphabet");
  Alphabet alphabet = needs_alphabet ? alphabet_from_json(config.at("alphabet"))
                                     : Alphabet({0.0, 1.0});
  if (config.contains("q")) pmf_from_json(alphabet, config.at("q"));
  if (config.contains("r")) pmf_from_json(alphabet, config.at("r"));
  if (config.contains("center")) pmf_from_json(alphabet, config.at("center"));
  if (config.contains("constraints"))
    region_from_json(alphabet, config.at("constraints"));
  if (config.contains("prior")) prior_from_json(alphabet, config.at("prior"));
  if (config.contains("model")) model_from_json(config.at("model"));
  if (config.contains("n")) int_field(config, "n");
  if (config.contains("n_list")) n_list_field(config);
  if (config.contains("seed")) seed_field(config);
  if (config.contains("mode")) mode_field(config);
  if (config.contains("eps") &&
      !(config.at("eps").is_number() && config.at("eps").get<double>() > 0.0))
    throw ValidationError("field \"eps\" must be a positive number");
  if (kind == "estimate_el" || kind == "estimate_emme")
    sample_for_estimator(config, alphabet);
  if (kind == "bst") {
    if (!config.at("subset").is_array() || config.at("subset").empty())
      throw ValidationError("field \"subset\" must be a nonempty index array");
  }
}

RunOutput run_config(const json& config, int threads) {
  validate_config(config);
  const auto kind = config.at("kind").get<std::string>();
  EnumerationOptions opts;
  opts.cap = enumeration_cap();
  opts.threads = threads;

  RunOutput out;
  json result;

  const Alphabet alphabet = alphabet_from_json(config.at("alphabet"));

  if (kind == "enumerate") {
    CsvWriter csv;
    std::vector<std::string> cols;
    for (std::size_t i = 1; i <= alphabet.size(); ++i)
      cols.push_back("n_" + std::to_string(i));
    csv.header(cols);
    for_each_type(alphabet, int_field(config, "n"),
                  [&](const EmpiricalType& t) {
                    std::vector<std::string> cells;
                    for (std::size_t i = 0; i < t.size(); ++i)
                      cells.push_back(std::to_string(t[i]));
                    csv.row_raw(cells);
                  },
                  opts.cap);
    out.payload = csv.out.str();
    out.is_csv = true;
  } else if (kind == "maxprob") {
    const Pmf q = pmf_from_json(alphabet, config.at("q"));
    const auto region = region_from_json(alphabet, config.at("constraints"));
    const auto types =
        maxprob_types(int_field(config, "n"), q, region_predicate(region), opts);
    json jt = json::array();
    for (const auto& t : types) {
      json row;
      row["counts"] = t.counts();
      row["log_prob"] = json_real(log_type_prob(t, q));
      jt.push_back(row);
    }
    result["types"] = jt;
    result["count"] = types.size();
  } else if (kind == "project_i" || kind == "project_l") {
    const auto region = region_from_json(alphabet, config.at("constraints"));
    if (kind == "project_i") {
      const Pmf q = pmf_from_json(alphabet, config.at("q"));
      result = projection_json(i_projection(q, region), false);
    } else {
      const Pmf r = pmf_from_json(alphabet, config.at("r"));
      result = projection_json(l_projection(r, region), true);
    }
  } else if (kind == "sanov") {
    const Pmf q = pmf_from_json(alphabet, config.at("q"));
    const auto region = region_from_json(alphabet, config.at("constraints"));
    const double iproj_rate = i_projection(q, region).divergence;
    const auto curve =
        sanov_rate_curve(n_list_field(config), q, region_predicate(region), opts);
    CsvWriter csv;
    csv.header({"n", "log_prob", "rate", "i_projection_rate", "gap"});
    for (const auto& pt : curve) {
      csv.row_raw({std::to_string(pt.n), fmt17(pt.log_prob), fmt17(pt.rate),
                   fmt17(iproj_rate), fmt17(pt.rate - iproj_rate)});
    }
    out.payload = csv.out.str();
    out.is_csv = true;
  } else if (kind == "clln") {
    const Pmf q = pmf_from_json(alphabet, config.at("q"));
    const auto region = region_from_json(alphabet, config.at("constraints"));
    const Pmf center = i_projection(q, region).pmf;
    const double eps = config.at("eps").get<double>();
    CsvWriter csv;
    csv.header({"n", "ball_mass"});
    for (std::int64_t n : n_list_field(config)) {
      const double mass =
          clln_ball_mass(n, q, region_predicate(region), center, eps, opts);
      csv.row_raw({std::to_string(n), fmt17(mass)});
    }
    out.payload = csv.out.str();
    out.is_csv = true;
  } else if (kind == "posterior") {
    const auto prior = prior_from_json(alphabet, config.at("prior"));
    const Pmf r = pmf_from_json(alphabet, config.at("r"));
    const auto t =
        draw_iid(r, int_field(config, "n"), seed_field(config)).type();
    const auto rep = posterior(prior, t);
    result["counts"] = t.counts();
    json lp = json::array();
    for (double v : rep.log_posterior) lp.push_back(json_real(v));
    result["log_posterior"] = lp;
    result["map_indices"] = rep.map_indices;
    result["mnpl_indices"] = rep.mnpl_indices;
  } else if (kind == "bst") {
    const auto prior = prior_from_json(alphabet, config.at("prior"));
    const Pmf r = pmf_from_json(alphabet, config.at("r"));
    const SampleMode mode = mode_field(config);
    const std::uint64_t seed =
        config.contains("seed") ? seed_field(config) : 0;
    std::vector<std::size_t> subset;
    for (const auto& e : config.at("subset")) subset.push_back(e.get<std::size_t>());
    CsvWriter csv;
    csv.header({"n", "empirical_rate", "theoretical_rate", "gap"});
    for (std::int64_t n : n_list_field(config)) {
      const auto res = bst_rate(prior, subset, r, n, mode, seed, opts);
      csv.row_raw({std::to_string(n), fmt17(res.empirical_rate),
                   fmt17(res.theoretical_rate),
                   fmt17(res.empirical_rate - res.theoretical_rate)});
    }
    out.payload = csv.out.str();
    out.is_csv = true;
  } else if (kind == "blln") {
    const auto prior = prior_from_json(alphabet, config.at("prior"));
    const Pmf r = pmf_from_json(alphabet, config.at("r"));
    const SampleMode mode = mode_field(config);
    const std::uint64_t seed =
        config.contains("seed") ? seed_field(config) : 0;
    std::optional<Pmf> center;
    if (config.contains("center"))
      center = pmf_from_json(alphabet, config.at("center"));
    const double eps = config.at("eps").get<double>();
    CsvWriter csv;
    csv.header({"n", "ball_mass"});
    for (std::int64_t n : n_list_field(config)) {
      const double mass = blln_ball_mass(prior, r, n, eps, center, mode, seed, opts);
      csv.row_raw({std::to_string(n), fmt17(mass)});
    }
    out.payload = csv.out.str();
    out.is_csv = true;
  } else if (kind == "estimate_el" || kind == "estimate_emme") {
    const auto model = model_from_json(config.at("model"));
    const Sample sample = sample_for_estimator(config, alphabet);
    result = estimate_json(kind == "estimate_el" ? el_estimate(sample, model)
                                                 : emme_estimate(sample, model));
  } else {  // estimate_maxmaxent / estimate_lproj
    const auto model = model_from_json(config.at("model"));
    const Pmf r = pmf_from_json(alphabet, config.at("r"));
    result = estimate_json(kind == "estimate_maxmaxent"
                               ? maxmaxent_estimate(r, model)
                               : lprojection_estimate(r, model));
  }

  // envelope
  json echo = config;
  if (!out.is_csv) {
    json envelope;
    envelope["config_echo"] = echo;
    envelope["diagnostics"] = out.diagnostics;
    envelope["result"] = result;
    if (std::getenv("TYPEPROJ_TIMESTAMP")) {
      char buf[32];
      const std::time_t now = std::time(nullptr);
      std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&now));
      envelope["produced_at"] = buf;
    }
    out.payload = envelope.dump(2) + "\n";
  } else {
    std::string prefix = "# config: " + echo.dump() + "\n";
    for (const auto& d : out.diagnostics) prefix += "# diagnostic: " + d + "\n";
    if (std::getenv("TYPEPROJ_TIMESTAMP")) {
      char buf[32];
      const std::time_t now = std::time(nullptr);
      std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&now));
      prefix += std::string("# produced_at: ") + buf + "\n";
    }
    out.payload = prefix + out.payload;
  }
  return out;
}

int main(int argc, const char* const* argv) {
  CLI::App app{"type-lattice and information-projection experiments"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  std::vector<std::string> overrides;
  int threads = 1;
  std::int64_t seed = -1;

  std::vector<CLI::App*> subs;
  for (const auto& kind : kKinds) {
    auto* sub = app.add_subcommand(kind, "run a " + kind + " experiment");
    subs.push_back(sub);
  }
  auto* val = app.add_subcommand("validate", "schema-check a config file");
  subs.push_back(val);
  for (auto* sub : subs) {
    sub->add_option("--config", config_path, "experiment config (JSON)")
        ->required();
    sub->add_option("--set", overrides, "override config fields, key=value");
    sub->add_option("--out", out_path, "output file path");
    sub->add_option("--threads", threads, "worker threads for lattice sums");
    sub->add_option("--seed", seed, "override the config seed");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  auto emit_error = [](const std::string& type, const std::string& what) {
    json err{{"error", what}, {"type", type}};
    std::cerr << err.dump() << "\n";
  };

  std::ifstream in(config_path);
  if (!in) {
    emit_error("io", "cannot read config file " + config_path);
    return 2;
  }
  json config;
  try {
    config = json::parse(in);
  } catch (const json::parse_error& e) {
    emit_error("parse", e.what());  // includes byte position
    return 2;
  }

  const std::string sub = app.get_subcommands().front()->get_name();

  try {
    for (const auto& ov : overrides) {
      const auto eq = ov.find('=');
      if (eq == std::string::npos)
        throw ValidationError("--set expects key=value, got \"" + ov + "\"");
      apply_override(config, ov.substr(0, eq), ov.substr(eq + 1));
    }
    if (seed >= 0) config["seed"] = seed;
    if (!out_path.empty()) config["out"] = out_path;

    if (sub == "validate") {
      validate_config(config);
      std::cout << "ok\n";
      return 0;
    }

    if (config.contains("kind")) {
      if (config.at("kind").get<std::string>() != sub)
        throw ValidationError("config kind \"" +
                              config.at("kind").get<std::string>() +
                              "\" does not match subcommand \"" + sub + "\"");
    } else {
      config["kind"] = sub;
    }

    RunOutput result = run_config(config, threads);
    if (config.contains("out")) {
      const std::string path = config.at("out").get<std::string>();
      std::ofstream of(path, std::ios::binary);
      if (!of) {
        emit_error("io", "cannot write output file " + path);
        return 1;
      }
      of << result.payload;
    } else {
      std::cout << result.payload;
    }
    return 0;
  } catch (const ValidationError& e) {
    emit_error("validation", e.what());
    return 2;
  } catch (const nlohmann::json::exception& e) {
    emit_error("validation", e.what());
    return 2;
  } catch (const InfeasibleError& e) {
    emit_error("infeasible", e.what());
    return 3;
  } catch (const EmptySetError& e) {
    emit_error("infeasible", e.what());
    return 3;
  } catch (const DomainBoundaryError& e) {
    emit_error("infeasible", e.what());
    return 3;
  } catch (const ResourceCapError& e) {
    emit_error("resource_cap", e.what());
    return 4;
  } catch (const std::exception& e) {
    emit_error("internal", e.what());
    return 1;
  }
}

}  // namespace typeproj::cli
