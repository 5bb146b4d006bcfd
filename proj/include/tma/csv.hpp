#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tma {

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double v);

struct SeriesCsv {
  std::string column;
  std::vector<double> values;
  /// Set when extra columns were present and ignored.
  bool ignored_columns = false;
};

/// Reads a headed CSV whose first column holds the series. Further columns
/// are ignored. Throws ErrorKind::Parse with the offending line number.
SeriesCsv read_series_csv(std::istream& in);
SeriesCsv read_series_csv_file(const std::string& path);

/// Header `column`, one value per row, LF line endings.
void write_series_csv(std::ostream& out, const std::vector<double>& values,
                      const std::string& column = "y");

}  // namespace tma
