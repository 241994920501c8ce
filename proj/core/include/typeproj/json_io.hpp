#pragma once

#include <json.hpp>

#include "typeproj/bayes.hpp"
#include "typeproj/constraint.hpp"
#include "typeproj/estimators.hpp"
#include "typeproj/pmf.hpp"

namespace typeproj {

/// JSON schemas used by the CLI configs:
///   alphabet:  [x_1, ..., x_m]            (strictly increasing reals)
///   pmf:       [p_1, ..., p_m]
///   region:    {"u": [[...]], "lower": [...], "upper": [...]}
///              bounds accept numbers or the strings "inf" / "-inf";
///              "lower"/"upper" may be omitted together with a "target"
///              list for pure equality constraints
///   prior:     {"candidates": [[...], ...], "log_weights": [...]}
///              log_weights optional (uniform when absent)
///   model:     {"u": [{"form": "moment", "power": p} |
///                     {"form": "centered_power", "power": p, "offset": c}],
///               "theta_grid": [[t], ...] | {"min": a, "max": b, "step": h}}

Alphabet alphabet_from_json(const nlohmann::json& j);
Pmf pmf_from_json(const Alphabet& alphabet, const nlohmann::json& j);
ConstraintRegion region_from_json(const Alphabet& alphabet, const nlohmann::json& j);
PriorGrid prior_from_json(const Alphabet& alphabet, const nlohmann::json& j);
EEModel model_from_json(const nlohmann::json& j);

nlohmann::json pmf_to_json(const Pmf& p);
nlohmann::json region_to_json(const ConstraintRegion& region);

}  // namespace typeproj
