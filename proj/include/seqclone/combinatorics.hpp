// combinatorics.hpp
// Exact integer and rational kernel: binomials, multinomials and the
// squared cloning coefficients.

#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "seqclone/types.hpp"

namespace seqclone {

using BigInt = boost::multiprecision::cpp_int;

// Lowest-terms fraction with positive denominator; zero is 0/1.
using ExactRational = boost::multiprecision::cpp_rational;

inline std::string to_string(const ExactRational& r) {
    if (boost::multiprecision::denominator(r) == 1) {
        return boost::multiprecision::numerator(r).str();
    }
    return boost::multiprecision::numerator(r).str() + "/" +
           boost::multiprecision::denominator(r).str();
}

inline double to_double(const ExactRational& r) { return r.convert_to<double>(); }

// sqrt is taken only here, at the boundary to machine floats.
inline double sqrt_to_double(const ExactRational& r) {
    if (r < 0) throw std::domain_error("sqrt_to_double: negative rational");
    return std::sqrt(to_double(r));
}

namespace detail {

// Pascal rows up to this n are memoized; larger n fall back to the product formula.
inline constexpr int kPascalRows = 160;

inline const std::vector<std::vector<BigInt>>& pascal_table() {
    static const std::vector<std::vector<BigInt>> table = [] {
        std::vector<std::vector<BigInt>> rows(kPascalRows + 1);
        for (int n = 0; n <= kPascalRows; ++n) {
            rows[n].assign(n + 1, BigInt(1));
            for (int k = 1; k < n; ++k) rows[n][k] = rows[n - 1][k - 1] + rows[n - 1][k];
        }
        return rows;
    }();
    return table;
}

}  // namespace detail

/// C(n, k). Zero outside 0 <= k <= n, so sums written with shifted lower
/// limits (k = -m) need no index juggling.
inline BigInt binom(int n, int k) {
    if (n < 0) throw std::invalid_argument("binom: negative n = " + std::to_string(n));
    if (k < 0 || k > n) return 0;
    if (n <= detail::kPascalRows) return detail::pascal_table()[n][k];
    k = std::min(k, n - k);
    BigInt r = 1;
    for (int i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

/// n! / prod(parts_i!). The parts must add up to n.
inline BigInt multinom(int n, std::span<const int> parts) {
    if (n < 0) throw std::invalid_argument("multinom: negative n");
    int sum = 0;
    for (int p : parts) {
        if (p < 0) throw std::invalid_argument("multinom: negative part");
        sum += p;
    }
    if (sum != n) {
        throw std::invalid_argument("multinom: parts sum to " + std::to_string(sum) +
                                    ", expected " + std::to_string(n));
    }
    // Product of binomials avoids the factorial blow-up.
    BigInt r = 1;
    int filled = 0;
    for (int p : parts) {
        filled += p;
        r *= binom(filled, p);
    }
    return r;
}

inline BigInt multinom(int n, std::initializer_list<int> parts) {
    return multinom(n, std::span<const int>(parts.begin(), parts.size()));
}

/// Squared qubit cloning coefficient
///   beta^2_{mj} = C(M-m-j, M-N-j) C(m+j, j) / C(M+1, N+1)
/// for input |(N-m)0, m1> gaining j extra ones. Zero for j outside [0, M-N].
inline ExactRational beta_squared(const CloneTask& task, int m, int j) {
    if (task.levels != 2) throw std::invalid_argument("beta_squared: qubit task required");
    if (m < 0 || m > task.inputs) {
        throw std::invalid_argument("beta_squared: m = " + std::to_string(m) + " outside [0, N]");
    }
    const int M = task.copies;
    const int N = task.inputs;
    if (j < 0 || j > M - N) return 0;
    return ExactRational(binom(M - m - j, M - N - j) * binom(m + j, j), binom(M + 1, N + 1));
}

/// Squared qudit cloning coefficient
///   beta^2 = prod_i C(m_i + j_i, j_i) / C(M + d - 1, M - N).
inline ExactRational beta_squared_qudit(const CloneTask& task, const OccupationVector& input,
                                        const OccupationVector& extra) {
    if (input.levels() != task.levels || extra.levels() != task.levels) {
        throw std::invalid_argument("beta_squared_qudit: level count mismatch");
    }
    if (input.site_span() != task.inputs) {
        throw std::invalid_argument("beta_squared_qudit: input occupation " + input.str() + " does not sum to N");
    }
    if (extra.site_span() != task.ancilla_sites()) {
        throw std::invalid_argument("beta_squared_qudit: extra occupation " + extra.str() + " does not sum to M-N");
    }
    BigInt num = 1;
    for (int i = 0; i < task.levels; ++i) num *= binom(input[i] + extra[i], extra[i]);
    return ExactRational(num, binom(task.copies + task.levels - 1, task.ancilla_sites()));
}

}  // namespace seqclone
