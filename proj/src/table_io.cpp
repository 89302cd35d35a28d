#include "vie/table_io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace vie {

std::string format_double(double value) {
  char buffer[40];
  const auto result =
      std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, 12);
  return std::string(buffer, result.ptr);
}

namespace {

std::string h_label(double h) {
  const double inv = 1.0 / h;
  const double rounded = std::round(inv);
  if (std::abs(inv - rounded) < 1e-6 * inv)
    return "1/" + std::to_string(static_cast<long>(rounded));
  return format_double(h);
}

}  // namespace

std::string to_csv(const ConvergenceReport& report) {
  std::string out = "h,eps,dn,pn\n";
  for (const auto& row : report.rows) {
    out += format_double(row.h);
    out += ',';
    if (row.eps) out += format_double(*row.eps);
    out += ',';
    if (row.dn) out += format_double(*row.dn);
    out += ',';
    if (row.pn) out += format_double(*row.pn);
    out += '\n';
  }
  return out;
}

std::string to_markdown(const ConvergenceReport& report) {
  std::ostringstream out;
  out << "### " << report.problem << " / " << report.method << "\n\n";
  out << "| h | eps | D_N | p_N |\n|---|-----|-----|-----|\n";
  for (const auto& row : report.rows) {
    out << "| " << h_label(row.h) << " | " << (row.eps ? format_double(*row.eps) : "")
        << " | " << (row.dn ? format_double(*row.dn) : "") << " | "
        << (row.pn ? format_double(*row.pn) : "") << " |\n";
  }
  return out.str();
}

std::string samples_csv(const std::vector<std::pair<double, double>>& samples) {
  std::string out = "t,x\n";
  for (const auto& [t, x] : samples) {
    out += format_double(t);
    out += ',';
    out += format_double(x);
    out += '\n';
  }
  return out;
}

}  // namespace vie
