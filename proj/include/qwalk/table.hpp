#pragma once
// Columnar result tables with CSV/JSON serialization.
//
// Tables are the single exchange format between sweeps, the CLI, and the
// plot emitter.  Columns are typed (real / integer / text); complex
// quantities are split into _re/_im column pairs at table-building time so
// every serialized cell is scalar.  Serialization is deterministic:
// fixed row order, '.' decimal separator, 17 significant digits for
// reals, RFC-4180 quoting for CSV, and a single {metadata, columns,
// rows} object for JSON.

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "qwalk/errors.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

enum class ColumnKind { real, integer, text };

using Value = std::variant<double, long long, std::string>;

struct ResultTable {
    std::vector<std::string> names;
    std::vector<ColumnKind> kinds;
    std::vector<std::vector<Value>> rows;
    // Flat string map: parameters, grid shape, code version, tolerances.
    // Carried into JSON output; CSV holds data only.
    std::map<std::string, std::string> metadata;

    /// Append a column; returns its index.
    int add_column(const std::string& name, ColumnKind kind);
    /// Append name_re and name_im real columns for a complex quantity.
    void add_complex_column(const std::string& name);

    /// Append a row; throws invalid_parameter unless it has one value per
    /// column with kinds matching the declaration.
    void add_row(std::vector<Value> row);

    int column_index(const std::string& name) const; ///< -1 when absent
};

enum class Format { csv, json };

std::string to_csv(const ResultTable& table);
std::string to_json(const ResultTable& table);

/// Serialize to a file; failures surface as io_error with the path.
void write_table(const ResultTable& table, Format format,
                 const std::string& path);

/// Parse a CSV file produced by write_table back into an all-text table
/// (kind information is not encoded in CSV).  For round-trip checks.
ResultTable read_table_csv(const std::string& path);

/// Render a double exactly as serialization does (17 significant digits).
std::string format_real(double v);

} // namespace qwalk
