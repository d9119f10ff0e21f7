#pragma once

#include <cstdint>
#include <string>

namespace fracdnl {

// Decimal, 17 significant digits, '.' separator: bit-stable across runs.
std::string format_g17(double x);

// Write via temp file + rename in the target directory.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

// FNV-1a, used for the config hash in run manifests.
std::uint64_t fnv1a_hash(const std::string& s);

// Verbosity from the FRACDNL_LOG environment variable (0 = quiet).
int log_level();
void log_line(int level, const std::string& msg);

}  // namespace fracdnl
