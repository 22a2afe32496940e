#pragma once

#include "condcompat/engine.hpp"
#include "condcompat/rational.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace condcompat {

using ordered_json = nlohmann::ordered_json;

/** Exact column rescaling factors applied by --renormalize (1 where a column
 *  or row already summed to 1). */
struct RenormalizationInfo {
    std::vector<Rational> a_column_factors;
    std::vector<Rational> b_row_factors;

    bool any() const {
        for (const auto& f : a_column_factors)
            if (f != 1) return true;
        for (const auto& f : b_row_factors)
            if (f != 1) return true;
        return false;
    }
};

/**
 * Serializable wrapper around a CompatReport. Keys are emitted in a fixed
 * order and fractions are rendered both exactly ("p/q") and as 7-place
 * decimals, so a report serializes deterministically and round-trips
 * byte-for-byte through a JSON parser.
 */
struct ReportDocument {
    CompatReport report;
    std::optional<std::vector<std::string>> x_labels;
    std::optional<std::vector<std::string>> y_labels;
    std::optional<RenormalizationInfo> renormalization;
    std::uint64_t timing_us = 0;

    ordered_json to_json() const;
    std::string to_text() const;
};

namespace detail {

inline ordered_json fraction_list(const std::vector<Rational>& values) {
    ordered_json out = ordered_json::array();
    for (const auto& v : values) out.push_back(to_fraction_string(v));
    return out;
}

inline ordered_json decimal_list(const std::vector<Rational>& values) {
    ordered_json out = ordered_json::array();
    for (const auto& v : values) out.push_back(to_decimal_string(v));
    return out;
}

inline ordered_json marginal_json(const std::optional<MarginalVector>& m) {
    if (!m) return nullptr;
    ordered_json out;
    out["fractions"] = fraction_list(m->values());
    out["decimals"] = decimal_list(m->values());
    return out;
}

inline ordered_json joint_json(const std::optional<JointMatrix>& joint) {
    if (!joint) return nullptr;
    const RatMatrix& p = joint->P();
    ordered_json fr = ordered_json::array(), de = ordered_json::array();
    for (std::size_t i = 0; i < p.rows(); ++i) {
        ordered_json fr_row = ordered_json::array(), de_row = ordered_json::array();
        for (std::size_t j = 0; j < p.cols(); ++j) {
            fr_row.push_back(to_fraction_string(p(i, j)));
            de_row.push_back(to_decimal_string(p(i, j)));
        }
        fr.push_back(fr_row);
        de.push_back(de_row);
    }
    ordered_json out;
    out["fractions"] = fr;
    out["decimals"] = de;
    return out;
}

}  // namespace detail

inline ordered_json ReportDocument::to_json() const {
    ordered_json j;
    j["verdict"] = verdict_name(report.verdict);
    j["I"] = report.I;
    j["J"] = report.J;
    j["rank_D"] = report.rank_D;
    j["degenerate"] = report.degenerate;
    j["eta"] = detail::marginal_json(report.eta);
    j["tau"] = detail::marginal_json(report.tau);
    j["joint"] = detail::joint_json(report.joint);

    ordered_json basis = ordered_json::array();
    for (const auto& v : report.nullspace_basis_D) {
        ordered_json vec = ordered_json::array();
        for (std::size_t i = 0; i < v.rows(); ++i) vec.push_back(to_fraction_string(v(i, 0)));
        basis.push_back(vec);
    }
    j["nullspace_basis_D"] = basis;

    ordered_json methods;
    methods["rank"] = {{"rank_D", report.methods.rank.rank},
                       {"compatible", report.methods.rank.compatible}};
    methods["joint_lp"] = {{"optimum", to_fraction_string(report.methods.joint_lp.optimum)},
                           {"compatible", report.methods.joint_lp.compatible}};
    methods["eta_lp"] = {{"optimum", to_fraction_string(report.methods.eta_lp.optimum)},
                         {"compatible", report.methods.eta_lp.compatible}};
    methods["solution_space"] = {
        {"rank_C", report.methods.solution_space.rank_C},
        {"basis_size", report.methods.solution_space.basis_size},
        {"optimum", to_fraction_string(report.methods.solution_space.optimum)},
        {"compatible", report.methods.solution_space.compatible}};
    if (report.methods.cross_ratio.applicable)
        methods["cross_ratio"] = {{"applicable", true},
                                  {"compatible", report.methods.cross_ratio.compatible}};
    else
        methods["cross_ratio"] = {{"applicable", false}, {"compatible", nullptr}};
    j["methods"] = methods;

    if (x_labels) j["x_labels"] = *x_labels;
    if (y_labels) j["y_labels"] = *y_labels;
    if (renormalization) {
        ordered_json r;
        r["A_column_factors"] = detail::fraction_list(renormalization->a_column_factors);
        r["B_row_factors"] = detail::fraction_list(renormalization->b_row_factors);
        j["renormalization"] = r;
    }
    j["timing_us"] = timing_us;
    return j;
}

inline std::string ReportDocument::to_text() const {
    std::ostringstream out;
    out << "verdict: " << verdict_name(report.verdict) << "\n";
    out << "rank(D): " << report.rank_D << "  (I = " << report.I << ", J = " << report.J << ")\n";
    if (report.degenerate) out << "degenerate: recovered marginal has a zero entry\n";

    auto print_marginal = [&](const char* name, const std::optional<MarginalVector>& m,
                              const std::optional<std::vector<std::string>>& labels) {
        if (!m) return;
        out << name << ":";
        for (std::size_t k = 0; k < m->size(); ++k) {
            out << " " << to_fraction_string((*m)[k]) << " (" << to_decimal_string((*m)[k]) << ")";
            if (labels && k < labels->size()) out << " [" << (*labels)[k] << "]";
        }
        out << "\n";
    };
    print_marginal("eta (marginal of X)", report.eta, x_labels);
    print_marginal("tau (marginal of Y)", report.tau, y_labels);

    if (report.joint) {
        out << "joint P:\n";
        const RatMatrix& p = report.joint->P();
        for (std::size_t i = 0; i < p.rows(); ++i) {
            out << " ";
            for (std::size_t j = 0; j < p.cols(); ++j)
                out << " " << to_fraction_string(p(i, j)) << " (" << to_decimal_string(p(i, j))
                    << ")";
            out << "\n";
        }
    }
    if (!report.nullspace_basis_D.empty()) {
        out << "nullspace basis of D:\n";
        for (const auto& v : report.nullspace_basis_D) {
            out << "  (";
            for (std::size_t i = 0; i < v.rows(); ++i)
                out << (i ? ", " : "") << to_fraction_string(v(i, 0));
            out << ")\n";
        }
    }

    out << "methods:\n";
    out << "  rank criterion: rank " << report.methods.rank.rank << " -> "
        << (report.methods.rank.compatible ? "compatible" : "incompatible") << "\n";
    out << "  joint LP: optimum " << to_fraction_string(report.methods.joint_lp.optimum) << " -> "
        << (report.methods.joint_lp.compatible ? "compatible" : "incompatible") << "\n";
    out << "  eta LP: optimum " << to_fraction_string(report.methods.eta_lp.optimum) << " -> "
        << (report.methods.eta_lp.compatible ? "compatible" : "incompatible") << "\n";
    out << "  solution space: rank(C) " << report.methods.solution_space.rank_C << ", basis size "
        << report.methods.solution_space.basis_size << ", optimum "
        << to_fraction_string(report.methods.solution_space.optimum) << " -> "
        << (report.methods.solution_space.compatible ? "compatible" : "incompatible") << "\n";
    if (report.methods.cross_ratio.applicable)
        out << "  cross-product ratio: "
            << (report.methods.cross_ratio.compatible ? "compatible" : "incompatible") << "\n";
    else
        out << "  cross-product ratio: not applicable\n";

    if (renormalization && renormalization->any()) {
        out << "renormalization factors:\n  A columns:";
        for (const auto& f : renormalization->a_column_factors)
            out << " " << to_fraction_string(f);
        out << "\n  B rows:";
        for (const auto& f : renormalization->b_row_factors) out << " " << to_fraction_string(f);
        out << "\n";
    }
    return out.str();
}

}  // namespace condcompat
