// SPDX-FileCopyrightText: 2026 fcmplan contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "fcmplan/error.hpp"

namespace fcmplan {

struct ValidationIssue {
  std::string field_path;  // e.g. "hubs[2].capacity_units"
  std::string message;
};

class ValidationReport {
 public:
  void add(std::string field_path, std::string message) {
    issues_.push_back({std::move(field_path), std::move(message)});
  }

  bool ok() const { return issues_.empty(); }
  const std::vector<ValidationIssue>& issues() const { return issues_; }

  std::string to_string() const {
    std::ostringstream out;
    for (const auto& issue : issues_) {
      out << issue.field_path << ": " << issue.message << "\n";
    }
    return out.str();
  }

  // Throws Error(kValidation) listing every collected violation.
  void throw_if_failed() const {
    if (!ok()) throw Error(ErrorCode::kValidation, "\n" + to_string());
  }

 private:
  std::vector<ValidationIssue> issues_;
};

}  // namespace fcmplan
