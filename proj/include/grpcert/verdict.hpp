#pragma once

#include <string>
#include <utility>

namespace grpcert {

/// Outcome of one exact check. `detail` says what was verified or what failed.
struct Verdict {
  bool passed = false;
  std::string detail;

  static Verdict pass(std::string detail) { return {true, std::move(detail)}; }
  static Verdict fail(std::string detail) { return {false, std::move(detail)}; }
};

}  // namespace grpcert
