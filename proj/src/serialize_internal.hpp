#pragma once

#include <string>

#include "tga/errors.hpp"
#include "tga/serialize.hpp"

namespace tga::detail {

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  return j.at(key);
}

template <class T>
T get_as(const Json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InputError(std::string("field '") + what + "' has the wrong type");
  }
}

}  // namespace tga::detail
