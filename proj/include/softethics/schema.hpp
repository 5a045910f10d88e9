#pragma once

// Path-tracking helpers for decoding persisted JSON documents.

#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "softethics/model.hpp"

namespace softethics {

class SchemaViolation : public std::runtime_error {
 public:
  SchemaViolation(std::string path, const std::string& message)
      : std::runtime_error((path.empty() ? std::string("/") : path) + ": " + message), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

namespace schema {

inline json parse(std::string_view bytes) {
  try {
    return json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw SchemaViolation("", std::string("malformed JSON: ") + e.what());
  }
}

inline std::string child(const std::string& path, std::string_view key) {
  return path + "/" + std::string(key);
}

inline std::string child(const std::string& path, std::size_t index) { return path + "/" + std::to_string(index); }

inline const json& field(const json& obj, std::string_view key, const std::string& path) {
  if (!obj.is_object()) throw SchemaViolation(path, "expected an object");
  auto it = obj.find(std::string(key));
  if (it == obj.end()) throw SchemaViolation(child(path, key), "missing field");
  return *it;
}

inline const json& array(const json& obj, std::string_view key, const std::string& path) {
  const auto& v = field(obj, key, path);
  if (!v.is_array()) throw SchemaViolation(child(path, key), "expected an array");
  return v;
}

inline std::string string(const json& obj, std::string_view key, const std::string& path) {
  const auto& v = field(obj, key, path);
  if (!v.is_string()) throw SchemaViolation(child(path, key), "expected a string");
  return v.get<std::string>();
}

inline std::uint64_t unsigned_integer(const json& obj, std::string_view key, const std::string& path) {
  const auto& v = field(obj, key, path);
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw SchemaViolation(child(path, key), "expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

inline ScaleValue scale(const json& obj, std::string_view key, const std::string& path) {
  const auto& v = field(obj, key, path);
  auto sv = v.is_number_integer() ? ScaleValue::make(v.get<int>()) : std::nullopt;
  if (!sv) throw SchemaViolation(child(path, key), "expected an integer in 1..5");
  return *sv;
}

/// Decodes `parse(obj[key])` with `parse` returning std::optional<T>.
template <typename Parse>
auto enumerated(const json& obj, std::string_view key, const std::string& path, Parse parse) {
  auto s = string(obj, key, path);
  auto v = parse(s);
  if (!v) throw SchemaViolation(child(path, key), "unexpected value '" + s + "'");
  return *v;
}

/// Category as a sorted array of parameter ids.
inline Category category(const json& obj, std::string_view key, const std::string& path) {
  const auto& arr = array(obj, key, path);
  const auto base = child(path, key);
  std::vector<ParameterId> params;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    auto p = arr[i].is_string() ? parse_parameter(arr[i].get<std::string>()) : std::nullopt;
    if (!p) throw SchemaViolation(child(base, i), "expected a parameter id P1..P4");
    if (!params.empty() && index_of(*p) <= index_of(params.back())) {
      throw SchemaViolation(child(base, i), "parameter ids must be sorted and unique");
    }
    params.push_back(*p);
  }
  return Category::of(params);
}

/// Wraps decoders that throw std::exception into SchemaViolation at `path`.
template <typename F>
auto at_path(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const SchemaViolation&) {
    throw;
  } catch (const std::exception& e) {
    throw SchemaViolation(path, e.what());
  }
}

}  // namespace schema
}  // namespace softethics
