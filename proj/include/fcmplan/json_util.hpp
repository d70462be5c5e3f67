// SPDX-FileCopyrightText: 2026 fcmplan contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include <json.hpp>

#include "fcmplan/error.hpp"
#include "fcmplan/validation.hpp"

namespace fcmplan {

using Json = nlohmann::json;

// Strict object reader: every key must be consumed through one of the
// accessors, and finish() reports leftovers as validation issues. Failed
// lookups record an issue and return a fallback so one pass can collect
// every problem in a document instead of stopping at the first.
class JsonReader {
 public:
  JsonReader(const Json& j, std::string path, ValidationReport& report)
      : j_(j), path_(std::move(path)), report_(report) {
    if (!j_.is_object()) report_.add(path_, "expected a JSON object");
  }

  bool has(const char* key) const { return j_.is_object() && j_.contains(key); }

  double number(const char* key, double fallback = 0.0) {
    const Json* v = take(key, "missing required number");
    if (v == nullptr) return fallback;
    if (!v->is_number()) {
      report_.add(member(key), "expected a number");
      return fallback;
    }
    return v->get<double>();
  }

  double number_or(const char* key, double fallback) {
    if (!has(key)) return fallback;
    return number(key, fallback);
  }

  std::int64_t integer(const char* key, std::int64_t fallback = 0) {
    const Json* v = take(key, "missing required integer");
    if (v == nullptr) return fallback;
    if (!v->is_number_integer()) {
      report_.add(member(key), "expected an integer");
      return fallback;
    }
    return v->get<std::int64_t>();
  }

  std::int64_t integer_or(const char* key, std::int64_t fallback) {
    if (!has(key)) return fallback;
    return integer(key, fallback);
  }

  bool boolean(const char* key, bool fallback = false) {
    const Json* v = take(key, "missing required boolean");
    if (v == nullptr) return fallback;
    if (!v->is_boolean()) {
      report_.add(member(key), "expected a boolean");
      return fallback;
    }
    return v->get<bool>();
  }

  std::string text(const char* key, const std::string& fallback = "") {
    const Json* v = take(key, "missing required string");
    if (v == nullptr) return fallback;
    if (!v->is_string()) {
      report_.add(member(key), "expected a string");
      return fallback;
    }
    return v->get<std::string>();
  }

  // Returns nullptr (and records an issue) when absent or not the
  // requested container kind.
  const Json* array(const char* key) {
    const Json* v = take(key, "missing required array");
    if (v == nullptr) return nullptr;
    if (!v->is_array()) {
      report_.add(member(key), "expected an array");
      return nullptr;
    }
    return v;
  }

  const Json* object(const char* key) {
    const Json* v = take(key, "missing required object");
    if (v == nullptr) return nullptr;
    if (!v->is_object()) {
      report_.add(member(key), "expected an object");
      return nullptr;
    }
    return v;
  }

  const Json* object_or_null(const char* key) {
    if (!has(key)) return nullptr;
    return object(key);
  }

  void finish() {
    if (!j_.is_object()) return;
    for (const auto& item : j_.items()) {
      if (seen_.count(item.key()) == 0) {
        report_.add(member(item.key().c_str()), "unknown key");
      }
    }
  }

  std::string member(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  const Json* take(const char* key, const char* missing_msg) {
    seen_.insert(key);
    if (!j_.is_object() || !j_.contains(key)) {
      report_.add(member(key), missing_msg);
      return nullptr;
    }
    return &j_.at(key);
  }

  const Json& j_;
  std::string path_;
  ValidationReport& report_;
  std::set<std::string> seen_;
};

inline Json parse_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

inline Json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, origin + ": " + e.what());
  }
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "short write to " + path.string());
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Canonical serialization used for every artifact this tool writes:
// two-space indent, keys sorted (nlohmann object order), trailing newline.
// Rerunning with identical inputs reproduces files byte for byte.
inline std::string dump_canonical(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace fcmplan
