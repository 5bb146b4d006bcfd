#include "tma/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "tma/error.hpp"

namespace tma {

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

SeriesCsv read_series_csv(std::istream& in) {
  SeriesCsv out;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty()) continue;
    const auto comma = view.find(',');
    std::string_view first = trim(view.substr(0, comma));
    if (comma != std::string_view::npos) out.ignored_columns = true;
    if (!header_seen) {
      header_seen = true;
      out.column = std::string(first);
      double probe = 0.0;
      const auto res = std::from_chars(first.data(), first.data() + first.size(), probe);
      if (res.ec == std::errc() && res.ptr == first.data() + first.size()) {
        throw Error(ErrorKind::Parse, "line 1: header row required, found a number");
      }
      continue;
    }
    if (!first.empty() && first.front() == '+') first.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(first.data(), first.data() + first.size(), v);
    if (res.ec != std::errc() || res.ptr != first.data() + first.size() || !std::isfinite(v)) {
      throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": cannot parse '" +
                                        std::string(first) + "' as a finite number");
    }
    out.values.push_back(v);
  }
  if (!header_seen) throw Error(ErrorKind::Parse, "empty CSV input");
  return out;
}

SeriesCsv read_series_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "' for reading");
  try {
    return read_series_csv(in);
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

void write_series_csv(std::ostream& out, const std::vector<double>& values,
                      const std::string& column) {
  out << column << '\n';
  for (double v : values) out << format_double(v) << '\n';
}

}  // namespace tma
