#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace alsr {

/// Decimal text at 12 significant digits, the precision of every numeric CSV cell.
std::string format_real(double value);

std::vector<std::string> split_csv_line(std::string_view line);

/// Whole-file read; throws IoError.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

/// Lower-case hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

/// Writes `manifest.json` in `dir` listing every other regular file below it
/// (sorted relative paths) with its byte size and SHA-256.
void write_manifest(const std::filesystem::path& dir);

}  // namespace alsr
