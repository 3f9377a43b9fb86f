#pragma once

#include <stdexcept>
#include <string>

namespace ow {

// Exit codes used by the CLI: 0 ok, 2 config, 3 numeric instability,
// 4 resource cap, 5 verification failure.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
  static constexpr int exit_code = 2;
};

struct instability_error : std::runtime_error {
  using std::runtime_error::runtime_error;
  static constexpr int exit_code = 3;
};

struct resource_error : std::runtime_error {
  using std::runtime_error::runtime_error;
  static constexpr int exit_code = 4;
};

struct domain_error : std::runtime_error {
  using std::runtime_error::runtime_error;
  static constexpr int exit_code = 3;
};

}  // namespace ow
