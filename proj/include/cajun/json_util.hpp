#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include <json.hpp>

#include "cajun/errors.hpp"
#include "cajun/types.hpp"

// Strict JSON access helpers. Configs reject unknown keys so that typos fail
// loudly instead of silently falling back to defaults; every error message
// carries the full field path.

namespace cajun {

using Json = nlohmann::json;

inline std::string join_path(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

inline void require_object(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
}

inline void reject_unknown_keys(const Json& obj, const std::string& path,
                                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) { known = true; break; }
    }
    if (!known) throw ConfigError(join_path(path, item.key()) + ": unknown key");
  }
}

inline double get_number(const Json& obj, const std::string& key, const std::string& path,
                         double fallback) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(join_path(path, key) + ": expected a number");
  return v.get<double>();
}

inline int get_int(const Json& obj, const std::string& key, const std::string& path,
                   int fallback) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(join_path(path, key) + ": expected an integer");
  return v.get<int>();
}

inline bool get_bool(const Json& obj, const std::string& key, const std::string& path,
                     bool fallback) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_boolean()) throw ConfigError(join_path(path, key) + ": expected a boolean");
  return v.get<bool>();
}

inline std::string get_string(const Json& obj, const std::string& key, const std::string& path,
                              const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(join_path(path, key) + ": expected a string");
  return v.get<std::string>();
}

inline std::vector<double> get_number_array(const Json& obj, const std::string& key,
                                            const std::string& path, size_t expected_size,
                                            const std::vector<double>& fallback) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_array()) throw ConfigError(join_path(path, key) + ": expected an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(join_path(path, key) + ": expected numeric entries");
    out.push_back(e.get<double>());
  }
  if (expected_size != 0 && out.size() != expected_size) {
    throw ConfigError(join_path(path, key) + ": expected " + std::to_string(expected_size) +
                      " entries, got " + std::to_string(out.size()));
  }
  return out;
}

inline Vec3 get_vec3(const Json& obj, const std::string& key, const std::string& path,
                     const Vec3& fallback) {
  auto a = get_number_array(obj, key, path, 3,
                            {fallback.x(), fallback.y(), fallback.z()});
  return Vec3(a[0], a[1], a[2]);
}

// FNV-1a 64-bit over the canonical (sorted-key) JSON dump. Stable across runs
// and platforms, which std::hash does not guarantee.
inline uint64_t fnv1a_hash(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline uint64_t config_hash(const Json& j) { return fnv1a_hash(j.dump()); }

}  // namespace cajun
