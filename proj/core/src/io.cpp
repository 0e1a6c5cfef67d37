#include "cdflow/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cdflow/errors.hpp"

namespace cdflow {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_table(const std::string& path, std::uint64_t config_hash,
                 const std::vector<std::string>& columns,
                 const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write table '" + path + "'");
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016" PRIx64, config_hash);
  out << "# config " << hash << "\n";
  for (size_t c = 0; c < columns.size(); ++c)
    out << columns[c] << (c + 1 < columns.size() ? "\t" : "\n");
  for (const auto& row : rows) {
    if (row.size() != columns.size())
      throw DomainError("table row width does not match the header");
    for (size_t c = 0; c < row.size(); ++c)
      out << format_double(row[c]) << (c + 1 < row.size() ? "\t" : "\n");
  }
  if (!out) throw ConfigError("short write on table '" + path + "'");
}

Table read_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open table '" + path + "'");
  Table t;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# config ", 0) != 0)
    throw ConfigError("table '" + path + "' is missing the hash comment");
  t.config_hash = std::strtoull(line.c_str() + 9, nullptr, 16);
  if (!std::getline(in, line))
    throw ConfigError("table '" + path + "' is missing the header");
  {
    std::istringstream hs(line);
    std::string col;
    while (std::getline(hs, col, '\t')) t.columns.push_back(col);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream rs(line);
    std::string cell;
    while (std::getline(rs, cell, '\t')) {
      char* end = nullptr;
      row.push_back(std::strtod(cell.c_str(), &end));
      if (end == cell.c_str() || *end != '\0')
        throw ConfigError("table '" + path + "': bad number '" + cell + "'");
    }
    if (row.size() != t.columns.size())
      throw ConfigError("table '" + path + "': ragged row");
    t.rows.push_back(std::move(row));
  }
  return t;
}

struct ReportWriter::Impl {
  std::ofstream out;
};

ReportWriter::ReportWriter(const std::string& path, std::uint64_t config_hash)
    : impl_(new Impl) {
  impl_->out.open(path, std::ios::binary);
  if (!impl_->out) {
    delete impl_;
    throw ConfigError("cannot write report '" + path + "'");
  }
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016" PRIx64, config_hash);
  impl_->out << "# config " << hash << "\n";
}

ReportWriter::~ReportWriter() { delete impl_; }

void ReportWriter::put(const std::string& key, double value) {
  impl_->out << key << " = " << format_double(value) << "\n";
}

void ReportWriter::put(const std::string& key, const std::string& value) {
  impl_->out << key << " = " << value << "\n";
}

}  // namespace cdflow
