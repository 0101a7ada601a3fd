#pragma once

#include "opspace/check.hpp"

#include <string>
#include <vector>

namespace opspace {

enum class ReportFormat { Json, Csv, Markdown };

// Throws std::invalid_argument for names other than json, csv, markdown.
ReportFormat parse_format(const std::string& name);
const char* format_name(ReportFormat f);

// Fixed-precision rendering shared by every format ("%.12e"; inf and nan spelled out).
std::string format_number(double x);

// Stable sort by module, then check name.
void sort_rows(std::vector<CheckRow>& rows);

// Sorted table with columns module, name, kind, lhs, rhs, slack, tolerance, pass, anchor.
std::string emit_table(std::vector<CheckRow> rows, ReportFormat format);

// Inverse of emit_table up to the printed precision.
std::vector<CheckRow> parse_table(const std::string& text, ReportFormat format);

}  // namespace opspace
