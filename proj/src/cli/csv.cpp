#include "eplag/cli/csv.hpp"

#include <cstdio>
#include <fstream>

#include "eplag/error.hpp"

namespace eplag::cli {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

std::string format_real(double v) {
  if (v == 0.0) return "0";  // folds -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_row(const Row& row) {
  std::string line;
  for (std::size_t k = 0; k < row.size(); ++k) {
    if (k) line += ',';
    line += std::visit(overloaded{
                           [](double v) { return format_real(v); },
                           [](const std::optional<double>& v) { return v ? format_real(*v) : std::string(); },
                           [](long long v) { return std::to_string(v); },
                           [](std::size_t v) { return std::to_string(v); },
                           [](bool v) { return std::string(v ? "true" : "false"); },
                           [](const std::string& v) { return v; },
                       },
                       row[k]);
  }
  return line;
}

std::size_t emit_csv(const std::vector<std::string>& header, const std::vector<Row>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoFailure, "cannot open " + path + " for writing");
  for (std::size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << header[k];
  out << '\n';
  for (const Row& r : rows) {
    if (r.size() != header.size()) throw Error(Errc::InvalidArgument, "row width differs from header in " + path);
    out << format_row(r) << '\n';
  }
  out.flush();
  if (!out) throw Error(Errc::IoFailure, "write failed for " + path);
  return rows.size();
}

}  // namespace eplag::cli
