// SPDX-FileCopyrightText: 2026 fcmplan contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace fcmplan {

enum class ErrorCode {
  kValidation,    // instance/model data violates an invariant
  kParse,         // malformed input file
  kConfig,        // inconsistent generator/run configuration
  kDisconnected,  // network graph has unreachable buses
  kDomain,        // argument outside the documented domain
  kShape,         // mismatched collection sizes
  kCapExceeded,   // enumeration budget exhausted
  kNumerics,      // solver could not make numeric progress
  kTimeout,       // wall-clock budget exhausted
  kIo,            // file system failure
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kValidation: return "VALIDATION";
    case ErrorCode::kParse: return "PARSE";
    case ErrorCode::kConfig: return "CONFIG";
    case ErrorCode::kDisconnected: return "DISCONNECTED";
    case ErrorCode::kDomain: return "DOMAIN";
    case ErrorCode::kShape: return "SHAPE";
    case ErrorCode::kCapExceeded: return "CAP_EXCEEDED";
    case ErrorCode::kNumerics: return "NUMERICS";
    case ErrorCode::kTimeout: return "TIMEOUT";
    case ErrorCode::kIo: return "IO";
  }
  return "UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fcmplan
