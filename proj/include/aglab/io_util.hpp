#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace aglab {

/// Write-temp-then-rename so partially written artifacts never appear
/// under their final name.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Whole-file read; throws std::runtime_error naming the path on failure.
std::string read_file(const std::filesystem::path& path);

std::string hex64(std::uint64_t v);

/// FNV-1a over raw bytes, used for artifact checksums and config hashes.
std::uint64_t fnv1a64_bytes(const void* data, std::size_t n);

}  // namespace aglab
