#include "opspace/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace opspace {

namespace {

void finish(CheckRow& row) {
    if (row.kind == CheckKind::Equal)
        row.slack = 0.0 - std::abs(row.lhs - row.rhs) + 0.0;  // avoid printing -0
    else
        row.slack = row.rhs - row.lhs;
    // a NaN slack never passes
    row.pass = row.slack >= -row.tolerance;
}

CheckRow make(std::string module, std::string name, double lhs, double rhs, double tol, std::string anchor,
              CheckKind kind) {
    CheckRow r;
    r.module = std::move(module);
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.tolerance = tol;
    r.anchor = std::move(anchor);
    r.kind = kind;
    finish(r);
    return r;
}

const char* kind_name(CheckKind k) { return k == CheckKind::Equal ? "eq" : "le"; }

CheckKind parse_kind(const std::string& s) {
    if (s == "eq") return CheckKind::Equal;
    if (s == "le") return CheckKind::LessEq;
    throw std::invalid_argument("unknown check kind: " + s);
}

double parse_number(const std::string& s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    return std::stod(s);
}

const std::vector<std::string> kColumns{"module", "name", "kind", "lhs", "rhs", "slack", "tolerance", "pass", "anchor"};

std::vector<std::string> fields(const CheckRow& r) {
    return {r.module,
            r.name,
            kind_name(r.kind),
            format_number(r.lhs),
            format_number(r.rhs),
            format_number(r.slack),
            format_number(r.tolerance),
            r.pass ? "pass" : "fail",
            r.anchor};
}

CheckRow from_fields(const std::vector<std::string>& f) {
    if (f.size() != kColumns.size()) throw std::invalid_argument("parse_table: wrong number of fields");
    CheckRow r;
    r.module = f[0];
    r.name = f[1];
    r.kind = parse_kind(f[2]);
    r.lhs = parse_number(f[3]);
    r.rhs = parse_number(f[4]);
    r.slack = parse_number(f[5]);
    r.tolerance = parse_number(f[6]);
    if (f[7] != "pass" && f[7] != "fail") throw std::invalid_argument("parse_table: bad pass field");
    r.pass = f[7] == "pass";
    r.anchor = f[8];
    return r;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string md_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '|' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

std::vector<std::string> md_split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (c == '\\' && i + 1 < line.size()) {
            cur += line[++i];
        } else if (c == '|') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    // drop the empty pieces outside the outer pipes, then trim the single padding spaces
    if (out.size() < 2) throw std::invalid_argument("parse_table: malformed markdown row");
    out.erase(out.begin());
    out.pop_back();
    for (auto& f : out) {
        if (!f.empty() && f.front() == ' ') f.erase(f.begin());
        if (!f.empty() && f.back() == ' ') f.pop_back();
    }
    return out;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) out.push_back(line);
    return out;
}

}  // namespace

CheckRow check_le(std::string module, std::string name, double lhs, double rhs, double tol, std::string anchor) {
    return make(std::move(module), std::move(name), lhs, rhs, tol, std::move(anchor), CheckKind::LessEq);
}

CheckRow check_eq(std::string module, std::string name, double lhs, double rhs, double tol, std::string anchor) {
    return make(std::move(module), std::move(name), lhs, rhs, tol, std::move(anchor), CheckKind::Equal);
}

void retolerance(CheckRow& row, double tol) {
    row.tolerance = tol;
    finish(row);
}

bool all_pass(const std::vector<CheckRow>& rows) {
    return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
}

ReportFormat parse_format(const std::string& name) {
    if (name == "json") return ReportFormat::Json;
    if (name == "csv") return ReportFormat::Csv;
    if (name == "markdown" || name == "md") return ReportFormat::Markdown;
    throw std::invalid_argument("unknown format: " + name);
}

const char* format_name(ReportFormat f) {
    switch (f) {
    case ReportFormat::Json: return "json";
    case ReportFormat::Csv: return "csv";
    case ReportFormat::Markdown: return "markdown";
    }
    return "json";
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12e", x);
    return buf;
}

void sort_rows(std::vector<CheckRow>& rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const CheckRow& a, const CheckRow& b) {
        return a.module != b.module ? a.module < b.module : a.name < b.name;
    });
}

std::string emit_table(std::vector<CheckRow> rows, ReportFormat format) {
    sort_rows(rows);
    std::ostringstream out;
    switch (format) {
    case ReportFormat::Csv:
        for (std::size_t i = 0; i < kColumns.size(); ++i) out << (i ? "," : "") << kColumns[i];
        out << "\n";
        for (const auto& r : rows) {
            const auto f = fields(r);
            for (std::size_t i = 0; i < f.size(); ++i) out << (i ? "," : "") << csv_quote(f[i]);
            out << "\n";
        }
        break;
    case ReportFormat::Markdown:
        out << "|";
        for (const auto& c : kColumns) out << " " << c << " |";
        out << "\n|";
        for (std::size_t i = 0; i < kColumns.size(); ++i) out << "---|";
        out << "\n";
        for (const auto& r : rows) {
            out << "|";
            for (const auto& f : fields(r)) out << " " << md_escape(f) << " |";
            out << "\n";
        }
        break;
    case ReportFormat::Json: {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& r : rows) {
            const auto f = fields(r);
            nlohmann::ordered_json o;
            for (std::size_t i = 0; i < f.size(); ++i) o[kColumns[i]] = f[i];
            arr.push_back(o);
        }
        nlohmann::ordered_json doc;
        doc["rows"] = arr;
        doc["all_pass"] = all_pass(rows);
        out << doc.dump(2) << "\n";
        break;
    }
    }
    return out.str();
}

std::vector<CheckRow> parse_table(const std::string& text, ReportFormat format) {
    std::vector<CheckRow> rows;
    if (format == ReportFormat::Json) {
        const auto doc = nlohmann::json::parse(text);
        for (const auto& o : doc.at("rows")) {
            std::vector<std::string> f;
            for (const auto& c : kColumns) f.push_back(o.at(c).get<std::string>());
            rows.push_back(from_fields(f));
        }
        return rows;
    }
    const auto lines = lines_of(text);
    const std::size_t skip = format == ReportFormat::Csv ? 1 : 2;
    if (lines.size() < skip) throw std::invalid_argument("parse_table: missing header");
    for (std::size_t i = skip; i < lines.size(); ++i)
        rows.push_back(from_fields(format == ReportFormat::Csv ? csv_split(lines[i]) : md_split(lines[i])));
    return rows;
}

}  // namespace opspace
