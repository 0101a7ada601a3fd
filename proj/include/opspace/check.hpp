#pragma once

#include <string>
#include <vector>

namespace opspace {

enum class CheckKind { LessEq, Equal };

// One verified relation lhs <= rhs (or lhs == rhs).  slack is rhs - lhs for LessEq and
// -|lhs - rhs| for Equal; the row passes when slack >= -tolerance.
struct CheckRow {
    std::string module;
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    double tolerance = 0.0;
    bool pass = true;
    std::string anchor;
    CheckKind kind = CheckKind::LessEq;
};

CheckRow check_le(std::string module, std::string name, double lhs, double rhs, double tol, std::string anchor);
CheckRow check_eq(std::string module, std::string name, double lhs, double rhs, double tol, std::string anchor);

// Recompute slack/pass with a different tolerance.
void retolerance(CheckRow& row, double tol);

bool all_pass(const std::vector<CheckRow>& rows);

}  // namespace opspace
