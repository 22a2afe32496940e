#pragma once

#include "condcompat/conditional.hpp"
#include "condcompat/engine.hpp"
#include "condcompat/matrix.hpp"
#include "condcompat/report.hpp"
#include "condcompat/simplex.hpp"

#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace condcompat {

class ParseError : public Error {
  public:
    using Error::Error;
};

/** A parsed matrix file: entries plus optional category labels. */
struct InputDocument {
    RatMatrix matrix{0, 0};
    std::optional<std::vector<std::string>> row_labels;
    std::optional<std::vector<std::string>> col_labels;
};

namespace io_detail {

inline Rational entry_from_json(const nlohmann::json& cell, const std::string& where) {
    if (cell.is_string()) {
        try {
            return parse_rational(cell.get<std::string>());
        } catch (const Error& e) {
            throw ParseError(where + ": " + e.what());
        }
    }
    if (cell.is_number_integer()) return Rational(cell.get<long long>());
    if (cell.is_number_unsigned()) return Rational(cell.get<unsigned long long>());
    if (cell.is_number_float())
        throw ParseError(where + ": decimal entries must be quoted strings (e.g. \"0.25\") "
                                 "to preserve exactness");
    throw ParseError(where + ": expected a fraction string, decimal string or integer");
}

inline RatMatrix matrix_from_rows(const std::vector<std::vector<Rational>>& rows,
                                  const std::string& path) {
    if (rows.empty() || rows[0].empty()) throw ParseError(path + ": matrix is empty");
    const std::size_t cols = rows[0].size();
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].size() != cols)
            throw ParseError(path + ": row " + std::to_string(i) + " has " +
                             std::to_string(rows[i].size()) + " entries, expected " +
                             std::to_string(cols));
    RatMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    return m;
}

}  // namespace io_detail

/** Parses {"matrix": [[...]], "row_labels": [...], "col_labels": [...]}.
 *  Entries are fraction strings ("1/7"), decimal strings ("0.25") or bare
 *  integers; decimals convert exactly. */
inline InputDocument parse_matrix_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("matrix") || !doc["matrix"].is_array())
        throw ParseError(path + ": expected an object with a \"matrix\" array");

    std::vector<std::vector<Rational>> rows;
    for (std::size_t i = 0; i < doc["matrix"].size(); ++i) {
        const auto& row = doc["matrix"][i];
        if (!row.is_array())
            throw ParseError(path + ": matrix[" + std::to_string(i) + "] is not an array");
        std::vector<Rational> out_row;
        for (std::size_t j = 0; j < row.size(); ++j)
            out_row.push_back(io_detail::entry_from_json(
                row[j],
                path + ": matrix[" + std::to_string(i) + "][" + std::to_string(j) + "]"));
        rows.push_back(std::move(out_row));
    }

    InputDocument out{io_detail::matrix_from_rows(rows, path)};
    auto read_labels = [&](const char* key) -> std::optional<std::vector<std::string>> {
        if (!doc.contains(key)) return std::nullopt;
        if (!doc[key].is_array()) throw ParseError(path + ": \"" + key + "\" is not an array");
        return doc[key].get<std::vector<std::string>>();
    };
    out.row_labels = read_labels("row_labels");
    out.col_labels = read_labels("col_labels");
    return out;
}

/** Parses one matrix row per line, entries comma-separated. */
inline InputDocument parse_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    std::vector<std::vector<Rational>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string trimmed = line;
        trimmed.erase(0, trimmed.find_first_not_of(" \t\r"));
        if (trimmed.empty()) continue;
        std::vector<Rational> row;
        std::stringstream ss(line);
        std::string cell;
        std::size_t col = 0;
        while (std::getline(ss, cell, ',')) {
            cell.erase(0, cell.find_first_not_of(" \t\r"));
            cell.erase(cell.find_last_not_of(" \t\r") + 1);
            try {
                row.push_back(parse_rational(cell));
            } catch (const Error& e) {
                throw ParseError(path + ": line " + std::to_string(lineno) + ", column " +
                                 std::to_string(col) + ": " + e.what());
            }
            ++col;
        }
        rows.push_back(std::move(row));
    }
    return InputDocument{io_detail::matrix_from_rows(rows, path)};
}

inline InputDocument load_matrix(const std::string& path, bool csv) {
    return csv ? parse_matrix_csv(path) : parse_matrix_json(path);
}

struct LoadedPair {
    ConditionalPair pair;
    std::optional<std::vector<std::string>> x_labels;
    std::optional<std::vector<std::string>> y_labels;
    std::optional<RenormalizationInfo> renormalization;
};

/**
 * Loads and validates the pair of input files. With `renormalize`, each
 * column of A and row of B is rescaled exactly to sum 1 before validation
 * (tolerant decimal input); the factors applied are reported.
 */
inline LoadedPair load_pair(const std::string& path_a, const std::string& path_b, bool csv,
                            bool renormalize) {
    InputDocument doc_a = load_matrix(path_a, csv);
    InputDocument doc_b = load_matrix(path_b, csv);
    RatMatrix a = doc_a.matrix, b = doc_b.matrix;

    std::optional<RenormalizationInfo> renorm;
    if (renormalize) {
        RenormalizationInfo info;
        info.a_column_factors.assign(a.cols(), Rational(1));
        info.b_row_factors.assign(b.rows(), Rational(1));
        for (std::size_t j = 0; j < a.cols(); ++j) {
            Rational sum = 0;
            for (std::size_t i = 0; i < a.rows(); ++i) sum += a(i, j);
            if (sum != 0 && sum != 1) {
                info.a_column_factors[j] = Rational(1) / sum;
                for (std::size_t i = 0; i < a.rows(); ++i) a(i, j) /= sum;
            }
        }
        for (std::size_t i = 0; i < b.rows(); ++i) {
            Rational sum = 0;
            for (std::size_t j = 0; j < b.cols(); ++j) sum += b(i, j);
            if (sum != 0 && sum != 1) {
                info.b_row_factors[i] = Rational(1) / sum;
                for (std::size_t j = 0; j < b.cols(); ++j) b(i, j) /= sum;
            }
        }
        renorm = std::move(info);
    }

    try {
        ConditionalPair pair = validate_pair(a, b);
        LoadedPair out{std::move(pair),
                       doc_a.row_labels ? doc_a.row_labels : doc_b.row_labels,
                       doc_a.col_labels ? doc_a.col_labels : doc_b.col_labels,
                       std::move(renorm)};
        return out;
    } catch (const Error& e) {
        throw ParseError(path_a + ", " + path_b + ": " + e.what());
    }
}

struct CheckOptions {
    bool json = false;
    bool csv = false;
    bool renormalize = false;
};

/** `check A B`: classify and report. Exit 0 compatible, 1 incompatible,
 *  2 input error. */
inline int cmd_check(const std::string& path_a, const std::string& path_b,
                     const CheckOptions& opts, std::ostream& out, std::ostream& err) {
    ReportDocument doc;
    try {
        LoadedPair loaded = load_pair(path_a, path_b, opts.csv, opts.renormalize);
        auto t0 = std::chrono::steady_clock::now();
        doc.report = classify(loaded.pair);
        auto t1 = std::chrono::steady_clock::now();
        doc.timing_us = static_cast<std::uint64_t>(
            std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count());
        doc.x_labels = loaded.x_labels;
        doc.y_labels = loaded.y_labels;
        doc.renormalization = loaded.renormalization;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    if (opts.json)
        out << doc.to_json().dump(2) << "\n";
    else
        out << doc.to_text();
    return doc.report.compatible() ? 0 : 1;
}

struct DmatrixOptions {
    bool cmatrix = false;
    bool csv = false;
    bool renormalize = false;
};

namespace io_detail {

inline void print_matrix_grids(const RatMatrix& m, std::ostream& out) {
    std::size_t width = 0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            width = std::max(width, to_fraction_string(m(i, j)).size());
    out << "exact:\n";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        out << " ";
        for (std::size_t j = 0; j < m.cols(); ++j)
            out << " " << std::setw(static_cast<int>(width)) << to_fraction_string(m(i, j));
        out << "\n";
    }
    out << "decimal:\n";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        out << " ";
        for (std::size_t j = 0; j < m.cols(); ++j)
            out << " " << std::setw(11) << to_decimal_string(m(i, j));
        out << "\n";
    }
}

}  // namespace io_detail

/** `dmatrix A B [--cmatrix]`: dump D (and C) as exact fractions and 7-place
 *  decimals. Exit 0 on success, 2 on input error. */
inline int cmd_dmatrix(const std::string& path_a, const std::string& path_b,
                       const DmatrixOptions& opts, std::ostream& out, std::ostream& err) {
    try {
        LoadedPair loaded = load_pair(path_a, path_b, opts.csv, opts.renormalize);
        RatMatrix d = build_D(loaded.pair);
        out << "D (" << d.rows() << "x" << d.cols() << "):\n";
        io_detail::print_matrix_grids(d, out);
        if (opts.cmatrix) {
            RatMatrix c = build_C(loaded.pair);
            out << "C (" << c.rows() << "x" << c.cols() << "):\n";
            io_detail::print_matrix_grids(c, out);
        }
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

struct LpOptions {
    enum class Space { Joint, Eta };
    Space space = Space::Joint;
    bool csv = false;
    bool renormalize = false;
};

/** `lp A B [--space joint|eta]`: solve the chosen LP and report optimum,
 *  optimizer and the implied verdict. Exit codes as for check. */
inline int cmd_lp(const std::string& path_a, const std::string& path_b, const LpOptions& opts,
                  std::ostream& out, std::ostream& err) {
    try {
        LoadedPair loaded = load_pair(path_a, path_b, opts.csv, opts.renormalize);
        const bool joint = opts.space == LpOptions::Space::Joint;
        LPResult res = joint ? joint_lp(loaded.pair) : eta_lp(loaded.pair);
        out << "space: " << (joint ? "joint" : "eta") << "\n";
        out << "optimum: " << to_fraction_string(res.optimum) << " ("
            << to_decimal_string(res.optimum) << ")\n";
        out << "optimizer:";
        for (const auto& v : res.solution) out << " " << to_fraction_string(v);
        out << "\n";
        if (!joint && res.optimum > 0) {
            out << "normalized:";
            for (const auto& v : res.solution)
                out << " " << to_fraction_string(v / res.optimum);
            out << "\n";
        }
        const bool compatible = res.optimum > 0;
        out << "verdict: " << (compatible ? "compatible" : "incompatible") << "\n";
        return compatible ? 0 : 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace condcompat
