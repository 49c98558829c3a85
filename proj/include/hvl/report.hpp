#pragma once

#include "hvl/errors.hpp"
#include "hvl/fh.hpp"
#include "hvl/identities.hpp"
#include "hvl/state.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace hvl {

inline constexpr const char* kReportSchema = "hvl-report/1";

/// Serializes with every double printed as %.17g. Non-finite numbers become
/// the strings "inf", "-inf", "nan". Object keys keep insertion order.
std::string dump_report_json(const nlohmann::ordered_json& value, int indent = 2);

/// Formats one double the same way as dump_report_json.
std::string format_double(double value);

/// Writes through a temporary file in the target directory, then renames it.
/// Throws Io.
void write_file_atomic(const std::string& path, const std::string& content);

nlohmann::ordered_json state_to_json(const Eigenstate& state, int samples);
nlohmann::ordered_json identity_to_json(const IdentityReport& report);
nlohmann::ordered_json error_to_json(const Error& error);

/// Rows of a plot-ready table. Cells are numbers or strings.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<nlohmann::ordered_json>> rows;

    nlohmann::ordered_json to_json() const;
    /// Header line, then one line per row. Strings containing commas or quotes
    /// are quoted.
    std::string to_csv() const;
};

/// Evenly spaced grid indices (first and last included).
std::vector<std::size_t> sample_indices(std::size_t size, int samples);

} // namespace hvl
