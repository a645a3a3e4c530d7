#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "levy/simulate.hpp"

namespace levy {

// Shortest decimal that parses back to the same bits (std::to_chars).
std::string format_double(double x);

std::uint64_t fnv1a64(std::string_view s);
std::string hex64(std::uint64_t v);

// Writes content to path via a .tmp sibling and rename, so readers never see
// a partial file. Throws std::runtime_error on I/O failure.
void atomic_write_file(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

// Skeleton table, header "t,value[,value2,...]".
std::string skeleton_csv(const PathSample& p);
// Jump table, header "jump_time,jump_size[,...]".
std::string jumps_csv(const PathSample& p);
// One named column.
std::string column_csv(const std::string& name, const std::vector<double>& xs);
// Arbitrary numeric table; all columns must share a length.
std::string table_csv(const std::vector<std::string>& headers,
                      const std::vector<std::vector<double>>& columns);

// First column of a CSV (or plain list) of numbers; a non-numeric first line
// is treated as a header. Throws std::invalid_argument on malformed rows.
std::vector<double> read_csv_column(const std::string& path);

}  // namespace levy
