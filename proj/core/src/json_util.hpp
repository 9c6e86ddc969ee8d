#pragma once

// Private helpers for JSON parsing with schema-style error messages.

#include <json.hpp>

#include <Eigen/Core>
#include <string>

#include "physdyn/errors.hpp"

namespace physdyn::detail {

using nlohmann::json;

inline const json& require(const json& j, const std::string& key,
                           const std::string& context) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw SchemaError(context + ": missing required field \"" + key + "\"");
  }
  return *it;
}

inline Eigen::Vector3d as_vec3(const json& j, const std::string& context) {
  if (!j.is_array() || j.size() != 3) {
    throw SchemaError(context + ": expected a 3-element array");
  }
  Eigen::Vector3d v;
  for (int k = 0; k < 3; ++k) {
    if (!j[k].is_number()) {
      throw SchemaError(context + ": expected numeric entries");
    }
    v[k] = j[k].get<double>();
  }
  return v;
}

inline json vec3_to_json(const Eigen::Vector3d& v) {
  return json::array({v.x(), v.y(), v.z()});
}

}  // namespace physdyn::detail
