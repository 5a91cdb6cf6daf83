#include "qwalk/table.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace qwalk {

int ResultTable::add_column(const std::string& name, ColumnKind kind) {
    if (!rows.empty())
        throw invalid_parameter("add_column: table already has rows");
    names.push_back(name);
    kinds.push_back(kind);
    return static_cast<int>(names.size()) - 1;
}

void ResultTable::add_complex_column(const std::string& name) {
    add_column(name + "_re", ColumnKind::real);
    add_column(name + "_im", ColumnKind::real);
}

void ResultTable::add_row(std::vector<Value> row) {
    if (row.size() != names.size())
        throw invalid_parameter("add_row: expected " +
                                std::to_string(names.size()) + " values, got " +
                                std::to_string(row.size()));
    for (size_t i = 0; i < row.size(); ++i) {
        const bool ok =
            (kinds[i] == ColumnKind::real && std::holds_alternative<double>(row[i])) ||
            (kinds[i] == ColumnKind::integer &&
             std::holds_alternative<long long>(row[i])) ||
            (kinds[i] == ColumnKind::text &&
             std::holds_alternative<std::string>(row[i]));
        if (!ok)
            throw invalid_parameter("add_row: value type mismatch in column '" +
                                    names[i] + "'");
    }
    rows.push_back(std::move(row));
}

int ResultTable::column_index(const std::string& name) const {
    for (size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<int>(i);
    return -1;
}

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        out += c;
        if (c == '"') out += '"';
    }
    out += '"';
    return out;
}

std::string cell_to_string(const Value& v) {
    if (const auto* d = std::get_if<double>(&v)) return format_real(*d);
    if (const auto* i = std::get_if<long long>(&v)) return std::to_string(*i);
    return std::get<std::string>(v);
}

} // namespace

std::string to_csv(const ResultTable& table) {
    std::string out;
    for (size_t i = 0; i < table.names.size(); ++i) {
        if (i) out += ',';
        out += csv_escape(table.names[i]);
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += csv_escape(cell_to_string(row[i]));
        }
        out += '\n';
    }
    return out;
}

std::string to_json(const ResultTable& table) {
    using json = nlohmann::ordered_json;
    json doc;
    doc["metadata"] = json::object();
    for (const auto& [k, v] : table.metadata) doc["metadata"][k] = v;

    doc["columns"] = json::array();
    for (size_t i = 0; i < table.names.size(); ++i) {
        const char* kind = table.kinds[i] == ColumnKind::real      ? "real"
                           : table.kinds[i] == ColumnKind::integer ? "integer"
                                                                   : "text";
        doc["columns"].push_back({{"name", table.names[i]}, {"kind", kind}});
    }

    doc["rows"] = json::array();
    for (const auto& row : table.rows) {
        json jrow = json::array();
        for (const auto& v : row) {
            if (const auto* d = std::get_if<double>(&v))
                jrow.push_back(*d);
            else if (const auto* i = std::get_if<long long>(&v))
                jrow.push_back(*i);
            else
                jrow.push_back(std::get<std::string>(v));
        }
        doc["rows"].push_back(std::move(jrow));
    }
    return doc.dump(2) + "\n";
}

void write_table(const ResultTable& table, Format format,
                 const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw io_error("cannot open '" + path + "' for writing");
    out << (format == Format::csv ? to_csv(table) : to_json(table));
    out.flush();
    if (!out)
        throw io_error("write to '" + path + "' failed");
}

ResultTable read_table_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw io_error("cannot open '" + path + "' for reading");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    // Minimal RFC-4180 reader: quoted fields may contain commas, quotes
    // (doubled), and newlines.
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == ',') {
            record.push_back(std::move(field));
            field.clear();
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            record.push_back(std::move(field));
            field.clear();
            records.push_back(std::move(record));
            record.clear();
        } else {
            field += c;
        }
        ++i;
    }
    if (!field.empty() || !record.empty()) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
    }
    if (quoted) throw io_error("unterminated quote in '" + path + "'");
    if (records.empty()) throw io_error("empty CSV file '" + path + "'");

    ResultTable table;
    for (const auto& name : records.front())
        table.add_column(name, ColumnKind::text);
    for (size_t r = 1; r < records.size(); ++r) {
        std::vector<Value> row;
        row.reserve(records[r].size());
        for (auto& cell : records[r]) row.emplace_back(std::move(cell));
        table.add_row(std::move(row));
    }
    return table;
}

} // namespace qwalk
