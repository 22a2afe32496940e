#pragma once

// Worked 2x2 and 3x3 instances from the compatibility literature, used across
// the unit and acceptance suites: conditional pairs, their published D
// matrices (7-decimal prints), and the recovered marginals/joints.

#include "condcompat/conditional.hpp"
#include "condcompat/matrix.hpp"
#include "condcompat/rational.hpp"

#include <cstddef>
#include <random>
#include <string>
#include <vector>

namespace fixtures {

using condcompat::ConditionalPair;
using condcompat::JointMatrix;
using condcompat::Rational;
using condcompat::RatMatrix;

inline Rational rat(const std::string& s) { return condcompat::parse_rational(s); }

inline RatMatrix mat(const std::vector<std::vector<std::string>>& rows) {
    RatMatrix m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rat(rows[i][j]);
    return m;
}

inline std::vector<Rational> vec(const std::vector<std::string>& entries) {
    std::vector<Rational> out;
    for (const auto& e : entries) out.push_back(rat(e));
    return out;
}

// --- 2x2, compatible, all entries positive -------------------------------
inline RatMatrix a_22_compat() { return mat({{"1/4", "2/3"}, {"3/4", "1/3"}}); }
inline RatMatrix b_22_compat() { return mat({{"1/3", "2/3"}, {"3/4", "1/4"}}); }
inline ConditionalPair pair_22_compat() {
    return condcompat::validate_pair(a_22_compat(), b_22_compat());
}
inline RatMatrix d_22_compat_exact() {
    return mat({{"-1/4", "3/16"}, {"-2/9", "1/6"}, {"1/4", "-3/16"}, {"2/9", "-1/6"}});
}
inline RatMatrix d_22_compat_printed() {
    return mat({{"-0.2500000", "0.1875000"},
                {"-0.2222222", "0.1666667"},
                {"0.2500000", "-0.1875000"},
                {"0.2222222", "-0.1666667"}});
}
inline RatMatrix p_22_compat() { return mat({{"1/7", "2/7"}, {"3/7", "1/7"}}); }
inline std::vector<Rational> eta_22_compat() { return vec({"3/7", "4/7"}); }

// --- 2x2, incompatible ----------------------------------------------------
inline RatMatrix a_22_incompat() { return mat({{"1/7", "3/4"}, {"6/7", "1/4"}}); }
inline RatMatrix b_22_incompat() { return mat({{"2/5", "3/5"}, {"3/8", "5/8"}}); }
inline ConditionalPair pair_22_incompat() {
    return condcompat::validate_pair(a_22_incompat(), b_22_incompat());
}
inline RatMatrix d_22_incompat_printed() {
    return mat({{"-0.3428571", "0.05357143"},
                {"-0.1500000", "0.46875000"},
                {"0.3428571", "-0.05357143"},
                {"0.1500000", "-0.46875000"}});
}

// --- 3x3 type 1 (all positive), compatible --------------------------------
inline RatMatrix a_33_type1_compat() {
    return mat({{"1/5", "2/7", "3/8"}, {"3/5", "2/7", "1/8"}, {"1/5", "3/7", "1/2"}});
}
inline RatMatrix b_33_type1_compat() {
    return mat({{"1/6", "1/3", "1/2"}, {"1/2", "1/3", "1/6"}, {"1/8", "3/8", "1/2"}});
}
inline ConditionalPair pair_33_type1_compat() {
    return condcompat::validate_pair(a_33_type1_compat(), b_33_type1_compat());
}
inline RatMatrix d_33_type1_compat_printed() {
    return mat({{"-0.13333333", "0.10000000", "0.0250000"},
                {"-0.23809524", "0.09523810", "0.1071429"},
                {"-0.31250000", "0.06250000", "0.1875000"},
                {"0.10000000", "-0.20000000", "0.0750000"},
                {"0.09523810", "-0.23809524", "0.1071429"},
                {"0.06250000", "-0.14583333", "0.0625000"},
                {"0.03333333", "0.10000000", "-0.1000000"},
                {"0.14285714", "0.14285714", "-0.2142857"},
                {"0.25000000", "0.08333333", "-0.2500000"}});
}
inline std::vector<Rational> eta_33_type1() { return vec({"3/10", "3/10", "2/5"}); }
inline std::vector<Rational> tau_33_type1() { return vec({"1/4", "7/20", "2/5"}); }

// --- 3x3 type 2 (matching zeros), compatible -------------------------------
inline RatMatrix a_33_type2_compat() {
    return mat({{"1/3", "0", "2/3"}, {"0", "1/2", "1/3"}, {"2/3", "1/2", "0"}});
}
inline RatMatrix b_33_type2_compat() {
    return mat({{"1/3", "0", "2/3"}, {"0", "1/2", "1/2"}, {"2/3", "1/3", "0"}});
}
inline ConditionalPair pair_33_type2_compat() {
    return condcompat::validate_pair(a_33_type2_compat(), b_33_type2_compat());
}
inline RatMatrix d_33_type2_compat_printed() {
    return mat({{"-0.2222222", "0.0000000", "0.2222222"},
                {"0.0000000", "0.0000000", "0.0000000"},
                {"-0.2222222", "0.3333333", "0.0000000"},
                {"0.0000000", "0.0000000", "0.0000000"},
                {"0.0000000", "-0.2500000", "0.1666667"},
                {"0.2222222", "-0.3333333", "0.0000000"},
                {"0.2222222", "0.0000000", "-0.2222222"},
                {"0.0000000", "0.2500000", "-0.1666667"},
                {"0.0000000", "0.0000000", "0.0000000"}});
}
inline std::vector<Rational> eta_33_type2() { return vec({"3/8", "1/4", "3/8"}); }
inline std::vector<Rational> tau_33_type2() { return vec({"3/8", "1/4", "3/8"}); }
inline RatMatrix p_33_type2() {
    return mat({{"1/8", "0", "1/4"}, {"0", "1/8", "1/8"}, {"1/4", "1/8", "0"}});
}

// --- 3x3 type 1, incompatible (also the supply/demand case study) ----------
inline RatMatrix a_33_type1_incompat() {
    return mat({{"0.2", "0.3", "0.1"}, {"0.1", "0.4", "0.4"}, {"0.7", "0.3", "0.5"}});
}
inline RatMatrix b_33_type1_incompat() {
    return mat({{"0.2", "0.1", "0.7"}, {"0.3", "0.4", "0.3"}, {"0.1", "0.4", "0.5"}});
}
inline ConditionalPair pair_33_type1_incompat() {
    return condcompat::validate_pair(a_33_type1_incompat(), b_33_type1_incompat());
}
inline RatMatrix d_33_type1_incompat_printed() {
    return mat({{"-0.16", "0.06", "0.02"},
                {"-0.07", "0.12", "0.12"},
                {"-0.63", "0.03", "0.05"},
                {"0.02", "-0.27", "0.01"},
                {"0.04", "-0.24", "0.16"},
                {"0.28", "-0.18", "0.20"},
                {"0.14", "0.21", "-0.03"},
                {"0.03", "0.12", "-0.28"},
                {"0.35", "0.15", "-0.25"}});
}
inline ConditionalPair pair_supply_demand() { return pair_33_type1_incompat(); }

// --- 3x3 type 2, incompatible ----------------------------------------------
inline RatMatrix a_33_type2_incompat() {
    return mat({{"0", "1/3", "0"}, {"1", "1/3", "1/2"}, {"0", "1/3", "1/2"}});
}
inline RatMatrix b_33_type2_incompat() {
    return mat({{"0", "1", "0"}, {"1/4", "1/2", "1/4"}, {"0", "1/5", "4/5"}});
}
inline ConditionalPair pair_33_type2_incompat() {
    return condcompat::validate_pair(a_33_type2_incompat(), b_33_type2_incompat());
}
inline RatMatrix d_33_type2_incompat_printed() {
    return mat({{"0.0000000", "0.0000000", "0.00000000"},
                {"-0.6666667", "0.1666667", "0.06666667"},
                {"0.0000000", "0.0000000", "0.00000000"},
                {"0.0000000", "0.0000000", "0.00000000"},
                {"0.3333333", "-0.3333333", "0.06666667"},
                {"0.0000000", "-0.1250000", "0.40000000"},
                {"0.0000000", "0.0000000", "0.00000000"},
                {"0.3333333", "0.1666667", "-0.13333333"},
                {"0.0000000", "0.1250000", "-0.40000000"}});
}

inline ConditionalPair pair_identity_2x2() {
    return condcompat::validate_pair(RatMatrix::identity(2), RatMatrix::identity(2));
}

/** Every named pair with its published rank(D) and verdict. */
struct Fixture {
    const char* name;
    ConditionalPair pair;
    RatMatrix d_printed;
    std::size_t rank_D;
    bool compatible;
};

inline std::vector<Fixture> all_fixtures() {
    return {
        {"2x2 compatible", pair_22_compat(), d_22_compat_printed(), 1, true},
        {"2x2 incompatible", pair_22_incompat(), d_22_incompat_printed(), 2, false},
        {"3x3 type-1 compatible", pair_33_type1_compat(), d_33_type1_compat_printed(), 2, true},
        {"3x3 type-2 compatible", pair_33_type2_compat(), d_33_type2_compat_printed(), 2, true},
        {"3x3 type-1 incompatible", pair_33_type1_incompat(), d_33_type1_incompat_printed(), 3,
         false},
        {"3x3 type-2 incompatible", pair_33_type2_incompat(), d_33_type2_incompat_printed(), 3,
         false},
        {"supply-demand", pair_supply_demand(), d_33_type1_incompat_printed(), 3, false},
    };
}

/** |value - printed| <= 5e-8 entrywise, in exact rational arithmetic. */
inline bool matches_printed(const RatMatrix& exact, const RatMatrix& printed) {
    if (exact.rows() != printed.rows() || exact.cols() != printed.cols()) return false;
    const Rational tol(1, 20000000);  // 5e-8
    for (std::size_t i = 0; i < exact.rows(); ++i)
        for (std::size_t j = 0; j < exact.cols(); ++j) {
            Rational diff = exact(i, j) - printed(i, j);
            if (diff < 0) diff = -diff;
            if (diff > tol) return false;
        }
    return true;
}

/** Deterministic random rational matrix for property tests; entries are
 *  k/denom with k in [0, denom], zeros included. */
inline RatMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                               unsigned denom = 12) {
    RatMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            m(i, j) = Rational(static_cast<long>(rng() % (denom + 1)), denom);
    return m;
}

}  // namespace fixtures
