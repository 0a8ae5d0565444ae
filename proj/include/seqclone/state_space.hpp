// state_space.hpp
// Dense pure states over sequences of d-level sites.
//
// Index map: for sites 1..L with dimensions d_1..d_L the amplitude of
// |i_1, ..., i_L> lives at  i_1 + d_1 (i_2 + d_2 (i_3 + ...)), i.e. site 1
// varies fastest. Every routine in the engine uses this map.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <map>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "seqclone/combinatorics.hpp"
#include "seqclone/types.hpp"

namespace seqclone {

using Complex = std::complex<double>;

struct PureState {
    std::vector<int> site_dims;
    std::vector<Complex> amplitudes;

    PureState() = default;
    PureState(std::vector<int> dims, std::vector<Complex> amps)
        : site_dims(std::move(dims)), amplitudes(std::move(amps)) {
        if (amplitudes.size() != dimension_of(site_dims)) {
            throw std::invalid_argument("PureState: amplitude count does not match site dimensions");
        }
    }

    // All-zero vector over `sites` sites of dimension `d`.
    static PureState zero(int sites, int d) {
        std::vector<int> dims(sites, d);
        return PureState(dims, std::vector<Complex>(dimension_of(dims)));
    }

    int site_count() const { return static_cast<int>(site_dims.size()); }
    std::size_t size() const { return amplitudes.size(); }

    double norm() const {
        double s = 0;
        for (const auto& a : amplitudes) s += std::norm(a);
        return std::sqrt(s);
    }

    bool is_normalized(double tol = 1e-12) const { return std::abs(norm() - 1.0) <= tol; }

    PureState& operator+=(const PureState& other) {
        if (other.site_dims != site_dims) throw std::invalid_argument("PureState: shape mismatch in +=");
        for (std::size_t k = 0; k < amplitudes.size(); ++k) amplitudes[k] += other.amplitudes[k];
        return *this;
    }

    PureState& operator*=(Complex c) {
        for (auto& a : amplitudes) a *= c;
        return *this;
    }

    static std::size_t dimension_of(std::span<const int> dims) {
        std::size_t n = 1;
        for (int d : dims) {
            if (d < 1) throw std::invalid_argument("PureState: site dimension must be positive");
            n *= static_cast<std::size_t>(d);
        }
        return n;
    }
};

/// |first> (x) |second>, with the sites of `first` numbered before (and varying faster than) those of `second`.
inline PureState tensor_product(const PureState& first, const PureState& second) {
    std::vector<int> dims = first.site_dims;
    dims.insert(dims.end(), second.site_dims.begin(), second.site_dims.end());
    std::vector<Complex> amps(first.size() * second.size());
    for (std::size_t b = 0; b < second.size(); ++b) {
        if (second.amplitudes[b] == Complex{}) continue;
        for (std::size_t a = 0; a < first.size(); ++a) {
            amps[a + first.size() * b] = first.amplitudes[a] * second.amplitudes[b];
        }
    }
    return PureState(std::move(dims), std::move(amps));
}

/// Normalized symmetric state with occ[i] sites in level i.
inline PureState dicke_state(int sites, int d, const OccupationVector& occ) {
    if (sites < 0) throw std::invalid_argument("dicke_state: negative site count");
    if (occ.levels() != d) throw std::invalid_argument("dicke_state: occupation has wrong level count");
    if (occ.site_span() != sites) {
        throw std::invalid_argument("dicke_state: occupation " + occ.str() + " does not cover " +
                                    std::to_string(sites) + " sites");
    }
    PureState state = PureState::zero(sites, d);
    std::vector<int> digits;
    for (int level = 0; level < d; ++level) digits.insert(digits.end(), occ[level], level);
    const double amp = 1.0 / std::sqrt(multinom(sites, occ.counts()).convert_to<double>());
    do {
        std::size_t index = 0;
        for (int k = sites - 1; k >= 0; --k) index = index * d + digits[k];
        state.amplitudes[index] = amp;
    } while (std::next_permutation(digits.begin(), digits.end()));
    return state;
}

/// Product state x (x) x (x) ... over `sites` sites.
inline PureState tensor_power(std::span<const Complex> x, int sites) {
    const int d = static_cast<int>(x.size());
    PureState state({}, {Complex{1.0}});
    PureState single({d}, std::vector<Complex>(x.begin(), x.end()));
    for (int s = 0; s < sites; ++s) state = tensor_product(state, single);
    return state;
}

namespace detail {

inline void require_unit(std::span<const Complex> x, const char* who) {
    double s = 0;
    for (const auto& a : x) s += std::norm(a);
    if (x.size() < 2 || std::abs(std::sqrt(s) - 1.0) > 1e-12) {
        throw std::invalid_argument(std::string(who) + ": input amplitudes must be a unit vector of length >= 2");
    }
}

}  // namespace detail

/// Symmetric-subspace expansion of x^{(x)N}:
///   c_m = sqrt(N! / prod m_i!) prod x_i^{m_i}.
inline std::map<OccupationVector, Complex> dicke_coefficients(std::span<const Complex> x, int n_copies) {
    detail::require_unit(x, "dicke_coefficients");
    if (n_copies < 0) throw std::invalid_argument("dicke_coefficients: negative copy count");
    const int d = static_cast<int>(x.size());
    std::map<OccupationVector, Complex> out;
    for (const auto& occ : enumerate_occupations(n_copies, d)) {
        Complex c = std::sqrt(multinom(n_copies, occ.counts()).convert_to<double>());
        for (int i = 0; i < d; ++i) {
            for (int p = 0; p < occ[i]; ++p) c *= x[i];
        }
        out.emplace(occ, c);
    }
    return out;
}

/// Reduced density operator of one site (1-based).
inline Eigen::MatrixXcd reduced_single_site(const PureState& state, int site) {
    if (site < 1 || site > state.site_count()) {
        throw std::invalid_argument("reduced_single_site: site " + std::to_string(site) + " out of range");
    }
    std::size_t inner = 1;
    for (int s = 0; s < site - 1; ++s) inner *= state.site_dims[s];
    const int d = state.site_dims[site - 1];
    const std::size_t outer = state.size() / (inner * d);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t in = 0; in < inner; ++in) {
            const std::size_t base = in + inner * d * o;
            for (int a = 0; a < d; ++a) {
                const Complex va = state.amplitudes[base + inner * a];
                if (va == Complex{}) continue;
                for (int b = 0; b < d; ++b) {
                    rho(a, b) += va * std::conj(state.amplitudes[base + inner * b]);
                }
            }
        }
    }
    return rho;
}

/// <x| rho_site |x>.
inline double fidelity_single_copy(const PureState& state, std::span<const Complex> x, int site) {
    const Eigen::MatrixXcd rho = reduced_single_site(state, site);
    if (static_cast<Eigen::Index>(x.size()) != rho.rows()) {
        throw std::invalid_argument("fidelity_single_copy: input dimension does not match site dimension");
    }
    Eigen::VectorXcd v(rho.rows());
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = x[i];
    return (v.adjoint() * rho * v)(0, 0).real();
}

/// Largest elementwise |a - b|. With `fix_phase`, b is first rotated so its
/// largest-magnitude amplitude has the same phase as the matching entry of a.
inline double max_abs_difference(const PureState& a, const PureState& b, bool fix_phase = false) {
    if (a.site_dims != b.site_dims) throw std::invalid_argument("max_abs_difference: shape mismatch");
    Complex rot{1.0};
    if (fix_phase && b.size() > 0) {
        std::size_t k = 0;
        for (std::size_t i = 1; i < b.size(); ++i) {
            if (std::abs(b.amplitudes[i]) > std::abs(b.amplitudes[k])) k = i;
        }
        if (std::abs(a.amplitudes[k]) > 0 && std::abs(b.amplitudes[k]) > 0) {
            rot = (a.amplitudes[k] / std::abs(a.amplitudes[k])) / (b.amplitudes[k] / std::abs(b.amplitudes[k]));
        }
    }
    double worst = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a.amplitudes[i] - rot * b.amplitudes[i]));
    }
    return worst;
}

/// State dump: one "index re im" line per nonzero amplitude, indices ascending.
inline void write_state_dump(std::ostream& os, const PureState& state) {
    char buf[96];
    for (std::size_t i = 0; i < state.size(); ++i) {
        const Complex a = state.amplitudes[i];
        if (a == Complex{}) continue;
        std::snprintf(buf, sizeof buf, "%zu %.17g %.17g\n", i, a.real(), a.imag());
        os << buf;
    }
}

}  // namespace seqclone
