#include "tunebench/params_json.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "tunebench/errors.hpp"

namespace tunebench {

nlohmann::json params_to_json(const CalculusParams& params) {
  const Calculus calculus = calculus_of(params);
  const auto names = parameter_names(calculus);
  const auto values = to_vector(params);
  nlohmann::json fields = nlohmann::json::object();
  for (std::size_t i = 0; i < names.size(); ++i) fields[std::string(names[i])] = values[i];
  return {{"calculus", std::string(to_string(calculus))}, {"values", fields}};
}

CalculusParams params_from_json(const nlohmann::json& doc) {
  try {
    const Calculus calculus = parse_calculus(doc.at("calculus").get<std::string>());
    const auto& fields = doc.at("values");
    const auto names = parameter_names(calculus);
    if (fields.size() != names.size()) {
      throw FormatError(std::string(to_string(calculus)) + " parameters need exactly " +
                        std::to_string(names.size()) + " fields");
    }
    std::vector<double> values;
    for (auto name : names) {
      const std::string key(name);
      const double v = fields.at(key).get<double>();
      if (!std::isfinite(v)) throw FormatError("parameter " + key + " is not finite");
      const bool is_cf = key.rfind("cf", 0) == 0;
      const bool is_probability = calculus != Calculus::Linear && !is_cf;
      if ((is_cf && (v < -1.0 || v > 1.0)) || (is_probability && (v < 0.0 || v > 1.0))) {
        throw FormatError("parameter " + key + " = " + std::to_string(v) + " out of range");
      }
      values.push_back(v);
    }
    return from_vector(calculus, values);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed parameter JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

}  // namespace tunebench
