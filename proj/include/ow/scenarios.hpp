#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace ow {

inline constexpr const char* kVersion = "0.1.0";

// Parses, validates and executes one scenario config, writing all artifacts
// plus manifest.json into out_dir. Returns the process exit code (0 ok, 2
// config error, 3 numeric instability, 4 resource cap, 5 verification
// failure). seed_override replaces the config seed when present.
int run_scenario_file(const std::string& config_path, const std::string& out_dir,
                      std::optional<std::uint64_t> seed_override = {},
                      const std::string& filter = "");

// FNV-1a 64-bit, hex string; used for config hashes and output checksums.
std::string fnv1a_hex(const std::string& bytes);
std::string file_checksum(const std::string& path);

}  // namespace ow
