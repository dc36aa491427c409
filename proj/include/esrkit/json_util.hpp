/* Copyright 2026 The Esrkit Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef ESRKIT_JSON_UTIL_HPP
#define ESRKIT_JSON_UTIL_HPP

#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

namespace esrkit {

/// Malformed or schema-violating configuration input.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// File system / stream failure while reading or writing artifacts.
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace jsonutil {

inline void require_object(const nlohmann::json& j, const std::string& ctx) {
  if (!j.is_object()) throw config_error(ctx + ": expected a JSON object");
}

/// Rejects keys outside the allowed set. Unknown keys fail fast so typos in
/// configs never silently fall back to defaults.
inline void check_keys(const nlohmann::json& j,
                       std::initializer_list<std::string_view> allowed,
                       const std::string& ctx) {
  require_object(j, ctx);
  for (const auto& item : j.items()) {
    bool known = false;
    for (std::string_view a : allowed) {
      if (item.key() == a) {
        known = true;
        break;
      }
    }
    if (!known) throw config_error(ctx + ": unknown key '" + item.key() + "'");
  }
}

template <typename T>
T get_required(const nlohmann::json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key)) throw config_error(ctx + ": missing key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw config_error(ctx + ": bad value for '" + key + "': " + e.what());
  }
}

template <typename T>
T get_or(const nlohmann::json& j, const char* key, T fallback, const std::string& ctx) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw config_error(ctx + ": bad value for '" + key + "': " + e.what());
  }
}

}  // namespace jsonutil
}  // namespace esrkit

#endif  // ESRKIT_JSON_UTIL_HPP
