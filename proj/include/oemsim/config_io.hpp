#pragma once

#include <cstdint>
#include <string>

#include "oemsim/physics.hpp"

namespace oemsim {

/// Parses a JSON config document. Numeric fields accept either plain
/// numbers (base SI units; frequencies as ordinary Hz) or strings with a
/// unit suffix ("10 MHz", "30 mW", "100 nm", "15 mK", "10 ng") and, for
/// rates and detunings, the mechanical-relative form "0.5 omega_m".
/// Schema and unit rules are documented in the README. Throws
/// validation_error on malformed documents.
SystemConfig parse_config_json(const std::string& text);

/// Reads and parses a config file; filesystem problems raise io_error.
SystemConfig load_config_file(const std::string& path);

/// Serializes a config back to JSON (plain SI numbers, full precision).
std::string config_to_json(const SystemConfig& config);

/// Canonical one-line-per-field rendering with %.17g formatting; the
/// basis of config hashing, so any parameter change alters it.
std::string canonical_config_string(const SystemConfig& config);

/// FNV-1a 64-bit hash.
std::uint64_t fnv1a64(const std::string& text);

/// Hash of canonical_config_string(config).
std::uint64_t config_hash(const SystemConfig& config);

}  // namespace oemsim
