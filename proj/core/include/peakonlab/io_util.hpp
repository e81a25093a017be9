#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace peakonlab {

// Shortest round-trip decimal (17 significant digits); used for every number
// written to CSV or JSON so identical runs produce identical bytes.
std::string fmt17(double v);

// FNV-1a 64-bit content hash, 16 lowercase hex digits.
std::uint64_t fnv1a64(const std::string& bytes);
std::string fnv1a64_hex(const std::string& bytes);

// Whole-file helpers; both throw std::runtime_error on I/O failure.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// Comma-separated table with a header row, all numbers via fmt17.
std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows);

} // namespace peakonlab
