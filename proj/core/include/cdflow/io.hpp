#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cdflow {

// Delimited numeric table: one comment line carrying the config hash, one
// header line with column names, then tab-separated %.17g rows. read_table
// reproduces the written doubles bit-exactly.
struct Table {
  std::uint64_t config_hash = 0;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::string format_double(double v);  // %.17g

void write_table(const std::string& path, std::uint64_t config_hash,
                 const std::vector<std::string>& columns,
                 const std::vector<std::vector<double>>& rows);

Table read_table(const std::string& path);

// Diagnostics sink: ordered key = value lines under the same hash comment.
// Values are either %.17g numbers or verbatim strings.
class ReportWriter {
 public:
  ReportWriter(const std::string& path, std::uint64_t config_hash);
  ~ReportWriter();
  ReportWriter(const ReportWriter&) = delete;
  ReportWriter& operator=(const ReportWriter&) = delete;

  void put(const std::string& key, double value);
  void put(const std::string& key, const std::string& value);

 private:
  struct Impl;
  Impl* impl_;
};

}  // namespace cdflow
