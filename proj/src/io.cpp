#include "levy/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace levy {

std::string format_double(double x) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return std::string(buf);
}

void atomic_write_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("rename failed: " + path);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string skeleton_csv(const PathSample& p) {
  std::string out = "t,value";
  for (int j = 1; j < p.dim(); ++j) out += ",value" + std::to_string(j + 1);
  out += '\n';
  for (std::size_t i = 0; i < p.grid.size(); ++i) {
    out += format_double(p.grid[i]);
    for (int j = 0; j < p.dim(); ++j) {
      out += ',';
      out += format_double(p.skeleton[i][j]);
    }
    out += '\n';
  }
  return out;
}

std::string jumps_csv(const PathSample& p) {
  std::string out = "jump_time,jump_size";
  for (int j = 1; j < p.dim(); ++j) out += ",jump_size" + std::to_string(j + 1);
  out += '\n';
  for (const Jump& jp : p.jumps) {
    out += format_double(jp.time);
    for (int j = 0; j < p.dim(); ++j) {
      out += ',';
      out += format_double(jp.size[j]);
    }
    out += '\n';
  }
  return out;
}

std::string column_csv(const std::string& name, const std::vector<double>& xs) {
  std::string out = name + "\n";
  for (double x : xs) {
    out += format_double(x);
    out += '\n';
  }
  return out;
}

std::string table_csv(const std::vector<std::string>& headers,
                      const std::vector<std::vector<double>>& columns) {
  if (headers.size() != columns.size())
    throw std::invalid_argument("table_csv: header/column count mismatch");
  std::string out;
  for (std::size_t c = 0; c < headers.size(); ++c) {
    if (c) out += ',';
    out += headers[c];
  }
  out += '\n';
  const std::size_t rows = columns.empty() ? 0 : columns[0].size();
  for (const auto& col : columns)
    if (col.size() != rows) throw std::invalid_argument("table_csv: ragged columns");
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out += ',';
      out += format_double(columns[c][r]);
    }
    out += '\n';
  }
  return out;
}

std::vector<double> read_csv_column(const std::string& path) {
  const std::string text = read_file(path);
  std::vector<double> xs;
  std::size_t pos = 0;
  bool first_line = true;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::size_t cell_end = text.find(',', pos);
    if (cell_end == std::string::npos || cell_end > end) cell_end = end;
    std::string_view cell(text.data() + pos, cell_end - pos);
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' '))
      cell.remove_suffix(1);
    while (!cell.empty() && cell.front() == ' ') cell.remove_prefix(1);
    pos = end + 1;
    if (cell.empty()) continue;
    double v = 0.0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
      if (first_line) {  // header row
        first_line = false;
        continue;
      }
      throw std::invalid_argument("read_csv_column: malformed number '" +
                                  std::string(cell) + "'");
    }
    first_line = false;
    xs.push_back(v);
  }
  return xs;
}

}  // namespace levy
