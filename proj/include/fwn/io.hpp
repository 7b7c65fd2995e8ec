#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fwn/core.hpp"
#include "fwn/inference.hpp"
#include "fwn/mc.hpp"
#include "fwn/simulate.hpp"
#include "fwn/version.hpp"

namespace fwn {

using Json = nlohmann::ordered_json;

/// Parse failure with the offending location spelled out.
class CsvError : public std::runtime_error {
public:
    explicit CsvError(const std::string& what) : std::runtime_error(what) {}
};

/**
 * @brief Read a T x G numeric matrix from CSV (comma separated, decimal
 *        point, no header by default). Rows are time, columns grid points.
 *        With `tolerate_header` a non-numeric first line is skipped.
 */
inline Matrix read_csv_matrix(const std::string& path, bool tolerate_header = true) {
    std::ifstream in(path);
    if (!in) throw CsvError("cannot open input file: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    bool first_data_line = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::size_t pos = 0, col = 0;
        bool bad = false;
        while (pos <= line.size()) {
            std::size_t comma = line.find(',', pos);
            if (comma == std::string::npos) comma = line.size();
            const std::string_view field(line.data() + pos, comma - pos);
            double value = 0.0;
            const auto* begin = field.data();
            const auto* end = field.data() + field.size();
            auto [ptr, ec] = std::from_chars(begin, end, value);
            if (ec != std::errc() || ptr != end) {
                bad = true;
                if (first_data_line && tolerate_header) break;
                throw CsvError("non-numeric field at row " + std::to_string(line_no) +
                               ", column " + std::to_string(col + 1));
            }
            row.push_back(value);
            ++col;
            pos = comma + 1;
            if (comma == line.size()) break;
        }
        if (bad) {  // header line skipped
            first_data_line = false;
            continue;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw CsvError("ragged row " + std::to_string(line_no) + ": expected " +
                           std::to_string(rows.front().size()) + " columns, got " +
                           std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
        first_data_line = false;
    }
    if (rows.empty()) throw CsvError("no data rows in " + path);
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return m;
}

/// Write a matrix as CSV with 17 significant digits (lossless round-trip).
inline void write_csv_matrix(const std::string& path, const Matrix& m) {
    std::ofstream out(path);
    if (!out) throw CsvError("cannot open output file: " + path);
    char buf[64];
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
            out << buf;
            if (j + 1 < m.cols()) out << ',';
        }
        out << '\n';
    }
    if (!out) throw CsvError("write failed: " + path);
}

inline Json to_json(const TestReport& r) {
    Json j;
    j["schema"] = "fwn.test_report/1";
    j["library_version"] = kVersion;
    j["mode"] = to_string(r.mode);
    j["T"] = r.t_len;
    j["m_hat_sq"] = r.m_hat_sq;
    j["v_h0"] = r.v_h0;
    j["null_sd"] = r.null_sd;
    j["adjustment"] = r.adjustment;
    if (r.v_h1) {
        j["v_h1"] = *r.v_h1;
        j["v_h1_gaussian_only"] = r.v_h1_gaussian_only;
    }
    j["alpha"] = r.alpha;
    if (r.mode != TestMode::classical) j["delta"] = r.delta;
    j["z"] = r.z;
    j["p_value"] = r.p_value;
    j["decision"] = to_string(r.decision);
    if (r.ci) j["ci"] = {r.ci->first, r.ci->second};
    return j;
}

inline Json to_json(const DgpSpec& s) {
    Json j;
    j["kind"] = to_string(s.kind);
    j["grid_size"] = s.grid_size;
    j["T"] = s.t_len;
    j["seed"] = s.seed;
    j["rng"] = kRngAlgorithm;
    if (s.kind == DgpKind::far1) {
        j["kernel"] = to_string(s.far_kernel);
        j["hs_norm"] = s.target_hs_norm;
        j["innovation"] = to_string(s.innovation);
        j["burn_in"] = s.burn_in;
    }
    if (s.kind == DgpKind::farch1) {
        j["c_psi"] = s.c_psi;
        j["burn_in"] = s.burn_in;
    }
    return j;
}

inline Json to_json(const ExperimentResult& r, const Experiment& e, bool with_timing = true) {
    Json j;
    j["schema"] = "fwn.experiment/1";
    j["library_version"] = kVersion;
    j["dgp"] = to_json(e.dgp);
    j["mode"] = to_string(e.mode);
    if (e.mode != TestMode::classical) j["delta"] = e.delta;
    j["n_reps"] = e.n_reps;
    j["master_seed"] = r.master_seed;
    j["grid_size"] = r.grid_size;
    j["threads"] = r.threads;
    j["rng"] = r.rng_algorithm;
    Json cells = Json::array();
    for (const auto& c : r.cells) {
        Json cj;
        cj["T"] = c.t_len;
        cj["alpha"] = c.alpha;
        cj["n"] = c.n_reps;
        cj["rejections"] = c.rejections;
        cj["rate"] = c.rate;
        cj["se"] = c.se;
        cj["z_mean"] = c.z_mean;
        cj["z_var"] = c.z_var;
        cj["ks_normal"] = c.ks_normal;
        if (c.ci_coverage) cj["ci_coverage"] = *c.ci_coverage;
        if (with_timing) cj["seconds"] = c.seconds;
        cells.push_back(std::move(cj));
    }
    j["cells"] = std::move(cells);
    if (with_timing) j["seconds"] = r.seconds;
    return j;
}

}  // namespace fwn
