#pragma once

#include <string>
#include <vector>

#include "vie/convergence.hpp"

namespace vie {

/// Locale-independent formatting with 12 significant digits.
std::string format_double(double value);

/// CSV with header `h,eps,dn,pn`, LF line endings, empty cells for absent
/// values.
std::string to_csv(const ConvergenceReport& report);

/// Markdown table mirroring the CSV columns; h rendered as 1/N.
std::string to_markdown(const ConvergenceReport& report);

/// CSV of (t, x) samples with header `t,x`.
std::string samples_csv(const std::vector<std::pair<double, double>>& samples);

}  // namespace vie
