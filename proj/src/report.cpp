#include "hvl/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unistd.h>

namespace hvl {

using nlohmann::ordered_json;

namespace {

void dump_into(const ordered_json& v, int indent, int depth, std::string& out)
{
    const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
    const std::string close_pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
    const char* nl = indent > 0 ? "\n" : "";
    const char* sep = indent > 0 ? ": " : ":";
    switch (v.type()) {
    case ordered_json::value_t::object: {
        if (v.empty()) {
            out += "{}";
            return;
        }
        out += "{";
        out += nl;
        bool first = true;
        for (auto it = v.begin(); it != v.end(); ++it) {
            if (!first) {
                out += ",";
                out += nl;
            }
            first = false;
            out += pad;
            out += ordered_json(it.key()).dump();
            out += sep;
            dump_into(it.value(), indent, depth + 1, out);
        }
        out += nl;
        out += close_pad;
        out += "}";
        return;
    }
    case ordered_json::value_t::array: {
        if (v.empty()) {
            out += "[]";
            return;
        }
        // Arrays of scalars stay on one line.
        bool flat = true;
        for (const auto& e : v) {
            flat = flat && !e.is_structured();
        }
        out += "[";
        if (!flat) {
            out += nl;
        }
        bool first = true;
        for (const auto& e : v) {
            if (!first) {
                out += flat ? ", " : ",";
                if (!flat) {
                    out += nl;
                }
            }
            first = false;
            if (!flat) {
                out += pad;
            }
            dump_into(e, indent, depth + 1, out);
        }
        if (!flat) {
            out += nl;
            out += close_pad;
        }
        out += "]";
        return;
    }
    case ordered_json::value_t::number_float: {
        const double d = v.get<double>();
        if (std::isfinite(d)) {
            out += format_double(d);
        } else {
            out += "\"" + format_double(d) + "\"";
        }
        return;
    }
    default:
        out += v.dump();
        return;
    }
}

std::string csv_cell(const ordered_json& v)
{
    if (v.is_number_float()) {
        return format_double(v.get<double>());
    }
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s.find_first_of(",\"\n") == std::string::npos) {
            return s;
        }
        std::string q = "\"";
        for (char c : s) {
            q += c == '"' ? std::string("\"\"") : std::string(1, c);
        }
        return q + "\"";
    }
    if (v.is_null()) {
        return "";
    }
    return v.dump();
}

} // namespace

std::string format_double(double value)
{
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string dump_report_json(const ordered_json& value, int indent)
{
    std::string out;
    dump_into(value, indent, 0, out);
    out += "\n";
    return out;
}

void write_file_atomic(const std::string& path, const std::string& content)
{
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path tmp = target.parent_path() / (target.filename().string() + ".tmp." + std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error(ErrorKind::Io, "cannot open '" + tmp.string() + "' for writing");
        }
        out << content;
        out.flush();
        if (!out) {
            throw Error(ErrorKind::Io, "write to '" + tmp.string() + "' failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(ErrorKind::Io, "cannot move output into '" + path + "'");
    }
}

std::vector<std::size_t> sample_indices(std::size_t size, int samples)
{
    std::vector<std::size_t> out;
    if (size == 0) {
        return out;
    }
    const std::size_t n = std::min<std::size_t>(size, static_cast<std::size_t>(std::max(samples, 2)));
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t i = n == 1 ? 0 : (k * (size - 1)) / (n - 1);
        if (out.empty() || out.back() != i) {
            out.push_back(i);
        }
    }
    return out;
}

ordered_json state_to_json(const Eigenstate& st, int samples)
{
    ordered_json j;
    j["provenance"] = st.provenance;
    j["equation"] = to_string(st.problem.equation.type);
    j["mass"] = st.problem.equation.m;
    j["potential"] = st.problem.potential.describe();
    j["l"] = st.l;
    j["classification"] = to_string(st.cls.kind);
    j["P"] = st.cls.P;
    ordered_json bc;
    bc["kind"] = to_string(st.bc.kind);
    bc["P"] = st.bc.P;
    bc["tau"] = st.bc.tau;
    j["bc"] = bc;
    j["eigenparameter"] = st.problem.eigenparameter_name();
    j["eigenvalue"] = st.eigenvalue;
    j["nodes"] = st.nodes;
    j["norm_check"] = st.norm_check;
    ordered_json fit;
    fit["a_st"] = st.origin.a_st;
    fit["a_add"] = st.origin.a_add;
    fit["r_lo"] = st.origin.r_lo;
    fit["r_hi"] = st.origin.r_hi;
    fit["residual"] = st.origin.residual;
    if (!st.origin.warning.empty()) {
        fit["warning"] = st.origin.warning;
    }
    if (st.exact_a_st) {
        fit["exact_a_st"] = *st.exact_a_st;
    }
    if (st.exact_a_add) {
        fit["exact_a_add"] = *st.exact_a_add;
    }
    j["origin_fit"] = fit;
    ordered_json grid;
    grid["r_min"] = st.grid.r_min();
    grid["r_max"] = st.grid.r_max();
    grid["switch_radius"] = st.grid.switch_radius();
    grid["points"] = st.grid.size();
    j["grid"] = grid;
    ordered_json r = ordered_json::array(), R = ordered_json::array();
    for (std::size_t i : sample_indices(st.grid.size(), samples)) {
        r.push_back(st.grid.r(i));
        R.push_back(st.R[i]);
    }
    ordered_json samples_j;
    samples_j["r"] = r;
    samples_j["R"] = R;
    j["samples"] = samples_j;
    return j;
}

ordered_json identity_to_json(const IdentityReport& rep)
{
    ordered_json j;
    j["tag"] = rep.tag;
    j["lhs"] = rep.lhs;
    j["rhs"] = rep.rhs;
    j["scale"] = rep.scale;
    j["residual"] = rep.residual;
    j["tolerance"] = rep.tolerance;
    j["pass"] = rep.pass;
    j["inputs"] = rep.inputs;
    ordered_json d = ordered_json::object();
    for (const auto& [k, v] : rep.details) {
        d[k] = v;
    }
    j["details"] = d;
    return j;
}

ordered_json error_to_json(const Error& error)
{
    ordered_json j;
    j["kind"] = std::string(to_string(error.kind()));
    j["message"] = error.what();
    return j;
}

ordered_json Table::to_json() const
{
    ordered_json j;
    j["columns"] = columns;
    ordered_json rs = ordered_json::array();
    for (const auto& row : rows) {
        rs.push_back(ordered_json(row));
    }
    j["rows"] = rs;
    return j;
}

std::string Table::to_csv() const
{
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        out += (i ? "," : "") + csv_cell(columns[i]);
    }
    out += "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out += (i ? "," : "") + csv_cell(row[i]);
        }
        out += "\n";
    }
    return out;
}

} // namespace hvl
