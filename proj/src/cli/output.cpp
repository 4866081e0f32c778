#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "invsq/cli.hpp"

namespace invsq::cli {

namespace {

std::string csv_cell(const Cell& cell) {
    struct Visitor {
        std::string operator()(std::monostate) const { return {}; }
        std::string operator()(double v) const { return format_number(v); }
        std::string operator()(long long v) const { return std::to_string(v); }
        std::string operator()(const std::string& s) const {
            if (s.find_first_of(",\"\n") == std::string::npos) {
                return s;
            }
            std::string q = "\"";
            for (char ch : s) {
                q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
            }
            return q + "\"";
        }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
    };
    return std::visit(Visitor{}, cell);
}

std::string json_cell(const Cell& cell) {
    struct Visitor {
        std::string operator()(std::monostate) const { return "null"; }
        std::string operator()(double v) const {
            return std::isfinite(v) ? format_number(v) : nlohmann::json(format_number(v)).dump();
        }
        std::string operator()(long long v) const { return std::to_string(v); }
        std::string operator()(const std::string& s) const { return nlohmann::json(s).dump(); }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
    };
    return std::visit(Visitor{}, cell);
}

} // namespace

std::string format_number(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    return fmt::format("{:.17g}", v);
}

void write_csv(std::ostream& os, const Table& table, const std::vector<std::string>& meta) {
    for (const std::string& m : meta) {
        os << "#meta " << m << '\n';
    }
    os << "# ";
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) {
            os << ',';
        }
        os << table.columns[i].name;
        if (!table.columns[i].unit.empty()) {
            os << '[' << table.columns[i].unit << ']';
        }
    }
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) {
                os << ',';
            }
            os << csv_cell(row[i]);
        }
        os << '\n';
    }
}

void write_json(std::ostream& os, const Table& table, const std::vector<std::string>& meta) {
    os << "{\n  \"command\": " << nlohmann::json(table.command).dump() << ",\n";
    os << "  \"columns\": [";
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        os << (i ? ", " : "") << nlohmann::json(table.columns[i].name).dump();
    }
    os << "],\n  \"units\": {";
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        os << (i ? ", " : "") << nlohmann::json(table.columns[i].name).dump() << ": "
           << nlohmann::json(table.columns[i].unit).dump();
    }
    os << "},\n";
    for (const auto& [key, value] : table.fields) {
        os << "  " << nlohmann::json(key).dump() << ": " << json_cell(value) << ",\n";
    }
    if (!meta.empty()) {
        os << "  \"meta\": [";
        for (std::size_t i = 0; i < meta.size(); ++i) {
            os << (i ? ", " : "") << nlohmann::json(meta[i]).dump();
        }
        os << "],\n";
    }
    os << "  \"rows\": [";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        os << (r ? ",\n    {" : "\n    {");
        const auto& row = table.rows[r];
        for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) {
            os << (i ? ", " : "") << nlohmann::json(table.columns[i].name).dump() << ": "
               << json_cell(row[i]);
        }
        os << "}";
    }
    os << (table.rows.empty() ? "]\n}\n" : "\n  ]\n}\n");
}

} // namespace invsq::cli
