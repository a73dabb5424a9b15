#pragma once

// Strict JSON object reading: unknown keys and type errors become InvalidConfig.

#include <functional>
#include <initializer_list>
#include <string>
#include <string_view>

#include "json.hpp"
#include "pixelgrasp/error.hpp"

namespace pixelgrasp::cfg {

using Json = nlohmann::json;

struct Field {
  std::string_view key;
  std::function<void(const Json&)> read;
};

inline void read_object(const Json& j, std::string_view section,
                        std::initializer_list<Field> fields) {
  if (!j.is_object())
    throw Error(ErrorCode::InvalidConfig, "section '" + std::string(section) + "' must be an object");
  for (const auto& [key, value] : j.items()) {
    const Field* match = nullptr;
    for (const Field& f : fields)
      if (f.key == key) match = &f;
    if (!match)
      throw Error(ErrorCode::InvalidConfig,
                  "unknown key '" + key + "' in section '" + std::string(section) + "'");
    try {
      match->read(value);
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::InvalidConfig,
                  std::string(section) + "." + key + ": " + e.what());
    }
  }
}

template <typename T>
std::function<void(const Json&)> into(T& target) {
  return [&target](const Json& v) { target = v.get<T>(); };
}

}  // namespace pixelgrasp::cfg
