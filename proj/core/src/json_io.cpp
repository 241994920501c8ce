#include "typeproj/json_io.hpp"

#include <cmath>
#include <string>

namespace typeproj {

namespace {

using nlohmann::json;

std::vector<double> real_list(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty())
    throw ValidationError(what + " must be a nonempty array of reals");
  std::vector<double> v;
  v.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_number()) throw ValidationError(what + " must contain only numbers");
    v.push_back(e.get<double>());
  }
  return v;
}

double bound_value(const json& j, const std::string& what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  throw ValidationError(what + " must be a number or \"inf\"/\"-inf\"");
}

}  // namespace

Alphabet alphabet_from_json(const json& j) {
  return Alphabet(real_list(j, "alphabet"));
}

Pmf pmf_from_json(const Alphabet& alphabet, const json& j) {
  auto v = real_list(j, "pmf");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < 0.0)
      throw ValidationError("pmf entry at index " + std::to_string(i) +
                            " is negative");
  }
  return Pmf(alphabet, std::move(v));
}

ConstraintRegion region_from_json(const Alphabet& alphabet, const json& j) {
  if (!j.is_object() || !j.contains("u"))
    throw ValidationError("constraints must be an object with a \"u\" matrix");
  const auto& ju = j.at("u");
  if (!ju.is_array() || ju.empty())
    throw ValidationError("constraints.u must be a nonempty matrix");
  const int J = static_cast<int>(ju.size());
  const int m = static_cast<int>(alphabet.size());
  Eigen::MatrixXd u(J, m);
  for (int r = 0; r < J; ++r) {
    auto row = real_list(ju.at(r), "constraints.u row " + std::to_string(r));
    if (static_cast<int>(row.size()) != m)
      throw ValidationError("constraints.u row " + std::to_string(r) +
                            " has wrong length");
    for (int c = 0; c < m; ++c) u(r, c) = row[c];
  }
  Eigen::VectorXd lower(J), upper(J);
  if (j.contains("target")) {
    if (j.contains("lower") || j.contains("upper"))
      throw ValidationError("constraints: give either target or lower/upper");
    const auto& jt = j.at("target");
    for (int r = 0; r < J; ++r)
      lower(r) = upper(r) = bound_value(jt.at(r), "constraints.target");
  } else {
    if (!j.contains("lower") || !j.contains("upper"))
      throw ValidationError("constraints need lower and upper (or target)");
    const auto &jl = j.at("lower"), &jh = j.at("upper");
    if (static_cast<int>(jl.size()) != J || static_cast<int>(jh.size()) != J)
      throw ValidationError("constraints bound lengths must match row count");
    for (int r = 0; r < J; ++r) {
      lower(r) = bound_value(jl.at(r), "constraints.lower");
      upper(r) = bound_value(jh.at(r), "constraints.upper");
    }
  }
  for (const auto& [key, _] : j.items()) {
    if (key != "u" && key != "lower" && key != "upper" && key != "target")
      throw ValidationError("constraints: unknown field \"" + key + "\"");
  }
  return ConstraintRegion(alphabet, std::move(u), std::move(lower), std::move(upper));
}

PriorGrid prior_from_json(const Alphabet& alphabet, const json& j) {
  if (!j.is_object() || !j.contains("candidates"))
    throw ValidationError("prior must be an object with a \"candidates\" list");
  std::vector<Pmf> cands;
  for (const auto& e : j.at("candidates")) cands.push_back(pmf_from_json(alphabet, e));
  if (j.contains("log_weights")) {
    auto lw = real_list(j.at("log_weights"), "prior.log_weights");
    return PriorGrid(std::move(cands), std::move(lw));
  }
  return PriorGrid::uniform(std::move(cands));
}

EEModel model_from_json(const json& j) {
  if (!j.is_object() || !j.contains("u") || !j.contains("theta_grid"))
    throw ValidationError("model needs \"u\" (list of forms) and \"theta_grid\"");

  struct Form {
    int power;
    double offset;
  };
  std::vector<Form> forms;
  for (const auto& e : j.at("u")) {
    if (!e.is_object() || !e.contains("form"))
      throw ValidationError("each model.u entry needs a \"form\"");
    const auto name = e.at("form").get<std::string>();
    Form f{1, 0.0};
    if (e.contains("power")) f.power = e.at("power").get<int>();
    if (name == "moment") {
      // u(x; theta) = x^p - theta^p
    } else if (name == "centered_power") {
      if (!e.contains("offset"))
        throw ValidationError("centered_power form needs an \"offset\"");
      f.offset = e.at("offset").get<double>();
    } else {
      throw ValidationError("unknown estimating-function form \"" + name + "\"");
    }
    if (f.power < 1 || f.power > 8)
      throw ValidationError("form power must lie in [1, 8]");
    forms.push_back(f);
  }
  if (forms.empty()) throw ValidationError("model.u is empty");

  EEModel model;
  model.num_functions = static_cast<int>(forms.size());
  model.num_params = 1;
  model.u = [forms](double x, std::span<const double> theta,
                    std::span<double> out) {
    for (std::size_t k = 0; k < forms.size(); ++k) {
      out[k] = std::pow(x, forms[k].power) - std::pow(theta[0], forms[k].power) -
               forms[k].offset;
    }
  };

  const auto& tg = j.at("theta_grid");
  if (tg.is_object()) {
    const double lo = tg.at("min").get<double>();
    const double hi = tg.at("max").get<double>();
    const double step = tg.at("step").get<double>();
    if (!(step > 0.0) || !(hi >= lo))
      throw ValidationError("theta_grid needs step > 0 and max >= min");
    for (double t = lo; t <= hi + 0.5 * step; t += step)
      model.theta_grid.push_back({std::min(t, hi)});
  } else if (tg.is_array()) {
    for (const auto& e : tg) {
      if (e.is_number())
        model.theta_grid.push_back({e.get<double>()});
      else
        model.theta_grid.push_back(real_list(e, "theta_grid entry"));
    }
  } else {
    throw ValidationError("theta_grid must be an array or a {min,max,step} object");
  }
  if (model.theta_grid.empty()) throw ValidationError("theta_grid is empty");
  for (const auto& th : model.theta_grid)
    if (static_cast<int>(th.size()) != model.num_params)
      throw ValidationError("theta_grid entries must have length 1");
  return model;
}

nlohmann::json pmf_to_json(const Pmf& p) { return nlohmann::json(p.probs()); }

nlohmann::json region_to_json(const ConstraintRegion& region) {
  json ju = json::array();
  for (int r = 0; r < region.num_rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < region.m(); ++c) row.push_back(region.u()(r, c));
    ju.push_back(row);
  }
  auto bound = [](double v) -> json {
    if (v == kInf) return "inf";
    if (v == -kInf) return "-inf";
    return v;
  };
  json jl = json::array(), jh = json::array();
  for (int r = 0; r < region.num_rows(); ++r) {
    jl.push_back(bound(region.lower()(r)));
    jh.push_back(bound(region.upper()(r)));
  }
  return json{{"u", ju}, {"lower", jl}, {"upper", jh}};
}

}  // namespace typeproj
