// mps_cloner.hpp
// Sequential (matrix-product) form of the cloning output for one symmetric
// input: exact Schmidt spectra at every cut, the site isometries built from
// them, and contraction back to a dense state.
//
// Conventions
//  - Cut n separates sites 1..n from n+1..2M-N. Cut 0 and cut 2M-N are the
//    trivial boundaries (one label, weight 1).
//  - For n <= M the Schmidt labels are the occupation of the left block
//    (its left Schmidt vectors are Dicke states over n sites). For n > M they
//    are the occupation of the remaining right block of ancilla sites.
//  - V^{[n]i} maps bond n-1 to bond n; entries are stored as [i][right][left]
//    and satisfy sum_i V^{i T} V^i = 1 on the left bond.
//  - Only labels with nonzero exact weight are kept (trimmed bonds).

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqclone/combinatorics.hpp"
#include "seqclone/direct_cloner.hpp"
#include "seqclone/state_space.hpp"
#include "seqclone/types.hpp"

namespace seqclone {

enum class CutRegion { clone, boundary, ancilla };

inline const char* to_string(CutRegion r) {
    switch (r) {
        case CutRegion::clone: return "clone";
        case CutRegion::boundary: return "boundary";
        case CutRegion::ancilla: return "ancilla";
    }
    return "?";
}

/// Squared Schmidt coefficients at one cut, nonzero entries only, canonical label order.
struct SchmidtSpectrum {
    int cut = 0;
    CutRegion region = CutRegion::clone;
    std::vector<OccupationVector> labels;
    std::vector<ExactRational> weights;

    std::size_t rank() const { return weights.size(); }

    ExactRational total() const {
        ExactRational s = 0;
        for (const auto& w : weights) s += w;
        return s;
    }

    std::optional<std::size_t> find(const OccupationVector& label) const {
        auto it = std::lower_bound(labels.begin(), labels.end(), label);
        if (it == labels.end() || *it != label) return std::nullopt;
        return static_cast<std::size_t>(it - labels.begin());
    }

    // lambda (not squared), label order
    std::vector<double> values() const {
        std::vector<double> out;
        out.reserve(weights.size());
        for (const auto& w : weights) out.push_back(sqrt_to_double(w));
        return out;
    }
};

/// Site isometry V^{[site]}. `exact_squared` (analytic chains only) holds the
/// exact square of every entry in the same layout.
template <class Scalar>
struct BasicSiteTensor {
    int site = 0;
    int physical_dim = 0;
    int left_dim = 0;
    int right_dim = 0;
    std::vector<Scalar> entries;
    std::vector<ExactRational> exact_squared;

    BasicSiteTensor() = default;
    BasicSiteTensor(int n, int d, int left, int right)
        : site(n), physical_dim(d), left_dim(left), right_dim(right),
          entries(static_cast<std::size_t>(d) * left * right) {}

    std::size_t offset(int i, int right, int left) const {
        return (static_cast<std::size_t>(i) * right_dim + right) * left_dim + left;
    }
    Scalar& operator()(int i, int right, int left) { return entries[offset(i, right, left)]; }
    const Scalar& operator()(int i, int right, int left) const { return entries[offset(i, right, left)]; }
};

using SiteTensor = BasicSiteTensor<double>;

/// Sequential machine for one symmetric input. spectra[k] is the cut k+1.
struct CloneChain {
    CloneTask task;
    OccupationVector input;
    std::vector<SiteTensor> tensors;
    std::vector<SchmidtSpectrum> spectra;
};

// ---------------------------------------------------------------------------
// Spectra

/// Qubit clone-region weight, written exactly as
///   lambda^2_{j+1} = C(n,j) sum_{k=-m}^{M-m-n} beta^2_{m(j+k)} C(M-n, m+k) / C(M, m+j+k)
/// with j the number of ones among the first n sites. Valid for 0 <= n <= M.
inline ExactRational lambda_squared_qubit(const CloneTask& task, int m, int n, int j) {
    const int M = task.copies;
    if (n < 0 || n > M) throw std::invalid_argument("lambda_squared_qubit: cut outside clone region");
    if (j < 0 || j > n) return 0;
    ExactRational sum = 0;
    for (int k = -m; k <= M - m - n; ++k) {
        const ExactRational b2 = beta_squared(task, m, j + k);
        if (b2 == 0) continue;
        sum += b2 * ExactRational(binom(M - n, m + k), binom(M, m + j + k));
    }
    return sum * ExactRational(binom(n, j));
}

/// Qudit clone-region weight for left occupation p over n sites:
///   sum_k beta^2_{m(p - m + k)} prod_i C(p_i + k_i, p_i) / C(M, n),
/// k running over occupations of the M-n remaining clone sites.
inline ExactRational lambda_squared_qudit(const CloneTask& task, const OccupationVector& input, int n,
                                          const OccupationVector& left) {
    const int M = task.copies;
    const int d = task.levels;
    if (n < 0 || n > M) throw std::invalid_argument("lambda_squared_qudit: cut outside clone region");
    if (left.site_span() != n) throw std::invalid_argument("lambda_squared_qudit: label does not cover n sites");
    ExactRational sum = 0;
    for (const auto& rest : enumerate_occupations(M - n, d)) {
        auto extra = left.plus(rest).minus(input);
        if (!extra) continue;  // beta vanishes for negative extra occupation
        const ExactRational b2 = beta_squared_qudit(task, input, *extra);
        BigInt w = 1;
        for (int i = 0; i < d; ++i) w *= binom(left[i] + rest[i], left[i]);
        sum += b2 * ExactRational(w);
    }
    return sum / ExactRational(binom(M, n));
}

/// Ancilla-region weight for right occupation r over the last 2M-N-n sites:
///   sum_j beta^2_{mj} prod_i C(a(j)_i, r_i) / C(M-N, 2M-N-n),
/// a(j) the ancilla occupation paired with extra occupation j.
inline ExactRational lambda_squared_ancilla(const CloneTask& task, const OccupationVector& input, int n,
                                            const OccupationVector& right) {
    const int L = task.site_count();
    const int K = task.ancilla_sites();
    if (n < task.copies || n > L) throw std::invalid_argument("lambda_squared_ancilla: cut outside ancilla region");
    if (right.site_span() != L - n) throw std::invalid_argument("lambda_squared_ancilla: label does not cover the right block");
    ExactRational sum = 0;
    for (const auto& extra : enumerate_occupations(K, task.levels)) {
        const OccupationVector anc = ancilla_occupation(task, extra);
        BigInt w = 1;
        for (int i = 0; i < task.levels; ++i) w *= binom(anc[i], right[i]);
        if (w == 0) continue;
        sum += beta_squared_for(task, input, extra) * ExactRational(w);
    }
    return sum / ExactRational(binom(K, L - n));
}

namespace detail {

// Any cut 0..2M-N, including the trivial ends.
inline SchmidtSpectrum spectrum_at(const CloneTask& task, const OccupationVector& input, int n) {
    detail::require_input_label(task, input);
    const int M = task.copies;
    const int L = task.site_count();
    if (n < 0 || n > L) throw std::invalid_argument("cut " + std::to_string(n) + " out of range");
    SchmidtSpectrum s;
    s.cut = n;
    s.region = n < M ? CutRegion::clone : (n == M ? CutRegion::boundary : CutRegion::ancilla);
    auto push = [&](const OccupationVector& label, ExactRational w) {
        if (w < 0) throw consistency_error("negative Schmidt weight at cut " + std::to_string(n));
        if (w == 0) return;
        s.labels.push_back(label);
        s.weights.push_back(std::move(w));
    };
    if (n <= M) {
        for (const auto& left : enumerate_occupations(n, task.levels)) {
            if (n == M) {
                auto extra = left.minus(input);
                push(left, extra && extra->site_span() == task.ancilla_sites()
                               ? beta_squared_for(task, input, *extra)
                               : ExactRational(0));
            } else if (task.is_qubit()) {
                push(left, lambda_squared_qubit(task, input[1], n, left[1]));
            } else {
                push(left, lambda_squared_qudit(task, input, n, left));
            }
        }
    } else {
        for (const auto& right : enumerate_occupations(L - n, task.levels)) {
            push(right, lambda_squared_ancilla(task, input, n, right));
        }
    }
    return s;
}

}  // namespace detail

/// Exact Schmidt spectrum at cut n, 1 <= n <= 2M-N-1.
inline SchmidtSpectrum lambda_spectrum(const CloneTask& task, const OccupationVector& input, int n) {
    if (n < 1 || n > task.site_count() - 1) {
        throw std::invalid_argument("lambda_spectrum: cut " + std::to_string(n) + " outside [1, 2M-N-1]");
    }
    return detail::spectrum_at(task, input, n);
}

// ---------------------------------------------------------------------------
// Site tensors

namespace detail {

inline SiteTensor site_tensor_from(const CloneTask& task, const OccupationVector& input, int n,
                                   const SchmidtSpectrum& prev, const SchmidtSpectrum& cur) {
    const int d = task.levels;
    const int M = task.copies;
    const int L = task.site_count();
    SiteTensor t(n, d, static_cast<int>(prev.rank()), static_cast<int>(cur.rank()));
    t.exact_squared.assign(t.entries.size(), ExactRational(0));

    for (std::size_t a = 0; a < prev.rank(); ++a) {
        const OccupationVector& from = prev.labels[a];
        if (prev.weights[a] == 0) throw consistency_error("zero Schmidt weight in denominator at cut " + std::to_string(n - 1));
        for (int i = 0; i < d; ++i) {
            ExactRational v2;
            std::optional<std::size_t> b;
            if (n <= M) {
                // Left Dicke vectors: <D_{n-1}(p), i | D_n(p + e_i)> = sqrt((p_i + 1) / n),
                // scaled by lambda^{[n]} / lambda^{[n-1]}.
                b = cur.find(from.with_added(i));
                if (!b) continue;  // target label has zero weight
                v2 = cur.weights[*b] / prev.weights[a] * ExactRational(from[i] + 1, n);
            } else {
                // Right Schmidt vectors are Dicke states of the remaining ancilla
                // sites, so V reduces to the right-split amplitude sqrt(r_i / (L-n+1)).
                OccupationVector right = from;
                if (n - 1 == M) {
                    auto extra = from.minus(input);
                    if (!extra) throw consistency_error("boundary label below input occupation");
                    right = ancilla_occupation(task, *extra);
                }
                if (right[i] == 0) continue;
                b = cur.find(right.with_added(i, -1));
                if (!b) throw consistency_error("ancilla split reaches a zero-weight label at cut " + std::to_string(n));
                v2 = ExactRational(right[i], L - n + 1);
            }
            t.exact_squared[t.offset(i, static_cast<int>(*b), static_cast<int>(a))] = v2;
            t(i, static_cast<int>(*b), static_cast<int>(a)) = sqrt_to_double(v2);
        }
    }
    return t;
}

}  // namespace detail

/// V^{[n]} for one symmetric input, 1 <= n <= 2M-N.
inline SiteTensor site_tensor(const CloneTask& task, const OccupationVector& input, int n) {
    if (n < 1 || n > task.site_count()) throw std::invalid_argument("site_tensor: site out of range");
    return detail::site_tensor_from(task, input, n, detail::spectrum_at(task, input, n - 1),
                                    detail::spectrum_at(task, input, n));
}

inline CloneChain build_chain(const CloneTask& task, const OccupationVector& input) {
    detail::require_input_label(task, input);
    const int L = task.site_count();
    std::vector<SchmidtSpectrum> all;
    all.reserve(L + 1);
    for (int n = 0; n <= L; ++n) all.push_back(detail::spectrum_at(task, input, n));

    CloneChain chain{task, input, {}, {}};
    for (int n = 1; n <= L; ++n) chain.tensors.push_back(detail::site_tensor_from(task, input, n, all[n - 1], all[n]));
    chain.spectra.assign(all.begin() + 1, all.end() - 1);
    return chain;
}

// ---------------------------------------------------------------------------
// Checks and contraction

template <class Scalar>
double isometry_deviation(const BasicSiteTensor<Scalar>& t) {
    double worst = 0;
    for (int a = 0; a < t.left_dim; ++a) {
        for (int a2 = 0; a2 < t.left_dim; ++a2) {
            std::complex<double> s = 0;
            for (int i = 0; i < t.physical_dim; ++i) {
                for (int b = 0; b < t.right_dim; ++b) s += std::conj(std::complex<double>(t(i, b, a))) * std::complex<double>(t(i, b, a2));
            }
            worst = std::max(worst, std::abs(s - (a == a2 ? 1.0 : 0.0)));
        }
    }
    return worst;
}

struct IsometryReport {
    std::vector<double> deviations;  // index k is site k+1
    double tolerance = 1e-12;
    std::vector<int> failing_sites;
    bool passed() const { return failing_sites.empty(); }
    double max_deviation() const {
        return deviations.empty() ? 0.0 : *std::max_element(deviations.begin(), deviations.end());
    }
};

template <class Scalar>
IsometryReport verify_isometry(const std::vector<BasicSiteTensor<Scalar>>& tensors, double tol = 1e-12) {
    IsometryReport r;
    r.tolerance = tol;
    for (const auto& t : tensors) {
        const double dev = isometry_deviation(t);
        r.deviations.push_back(dev);
        if (!(dev <= tol)) r.failing_sites.push_back(t.site);
    }
    return r;
}

inline IsometryReport verify_isometry(const CloneChain& chain, double tol = 1e-12) {
    return verify_isometry(chain.tensors, tol);
}

/// <phi_F| V^{[L]} ... V^{[1]} |phi_I> with one-dimensional boundaries.
template <class Scalar>
PureState contract_tensors(const std::vector<BasicSiteTensor<Scalar>>& tensors) {
    std::vector<Complex> cur{Complex{1.0}};  // index prefix * D + alpha
    std::vector<int> dims;
    std::size_t prefix = 1;
    int bond = 1;
    for (const auto& t : tensors) {
        if (t.left_dim != bond) {
            throw std::invalid_argument("contract: bond mismatch at site " + std::to_string(t.site));
        }
        const int d = t.physical_dim;
        const int R = t.right_dim;
        std::vector<Complex> next(prefix * d * R);
        for (std::size_t p = 0; p < prefix; ++p) {
            for (int a = 0; a < bond; ++a) {
                const Complex v = cur[p * bond + a];
                if (v == Complex{}) continue;
                for (int i = 0; i < d; ++i) {
                    for (int b = 0; b < R; ++b) {
                        const Complex w = t(i, b, a);
                        if (w == Complex{}) continue;
                        next[(p + prefix * i) * R + b] += w * v;
                    }
                }
            }
        }
        cur = std::move(next);
        prefix *= d;
        bond = R;
        dims.push_back(d);
    }
    if (bond != 1) throw std::invalid_argument("contract: right boundary is not one-dimensional");
    return PureState(std::move(dims), std::move(cur));
}

inline PureState contract_chain(const CloneChain& chain) {
    chain.task.require_dense();
    return contract_tensors(chain.tensors);
}

// ---------------------------------------------------------------------------
// Bond dimensions

/// Linear ancilla-dimension bound for qubits: M - N/2 + 1 (even N),
/// M - (N-1)/2 (odd N). No bound is stated for d > 2.
inline std::optional<int> linear_bond_bound(const CloneTask& task) {
    if (!task.is_qubit()) return std::nullopt;
    const int N = task.inputs;
    const int M = task.copies;
    return N % 2 == 0 ? M - N / 2 + 1 : M - (N - 1) / 2;
}

struct BondProfile {
    std::vector<int> ranks;  // cuts 1..2M-N-1
    int max_rank = 1;
    std::optional<int> bound;
    bool within_bound = true;
};

inline BondProfile bond_profile(const CloneChain& chain) {
    BondProfile p;
    for (const auto& s : chain.spectra) {
        p.ranks.push_back(static_cast<int>(s.rank()));
        p.max_rank = std::max(p.max_rank, p.ranks.back());
    }
    p.bound = linear_bond_bound(chain.task);
    p.within_bound = !p.bound || p.max_rank <= *p.bound;
    return p;
}

struct BondReport {
    CloneTask task;
    std::vector<OccupationVector> inputs;
    std::vector<BondProfile> profiles;
    int global_max = 1;
    std::optional<int> bound;
    bool within_bound = true;
    int sector_count = 0;
    int stacked_uniform = 0;  // sector_count * global_max
    int stacked_direct_sum = 0;  // max over cuts of the summed per-sector ranks
};

/// Exact bond ranks for every symmetric input. Needs no dense state.
inline BondReport bond_report(const CloneTask& task) {
    BondReport r;
    r.task = task;
    r.bound = linear_bond_bound(task);
    r.inputs = input_labels(task);
    r.sector_count = static_cast<int>(r.inputs.size());
    std::vector<int> summed(std::max(0, task.site_count() - 1), 0);
    for (const auto& in : r.inputs) {
        BondProfile p;
        p.bound = r.bound;
        for (int n = 1; n < task.site_count(); ++n) {
            p.ranks.push_back(static_cast<int>(lambda_spectrum(task, in, n).rank()));
            p.max_rank = std::max(p.max_rank, p.ranks.back());
            summed[n - 1] += p.ranks.back();
        }
        p.within_bound = !p.bound || p.max_rank <= *p.bound;
        r.global_max = std::max(r.global_max, p.max_rank);
        r.profiles.push_back(std::move(p));
    }
    r.within_bound = !r.bound || r.global_max <= *r.bound;
    r.stacked_uniform = r.sector_count * r.global_max;
    r.stacked_direct_sum = r.sector_count;
    for (int s : summed) r.stacked_direct_sum = std::max(r.stacked_direct_sum, s);
    return r;
}

// ---------------------------------------------------------------------------
// Dump

/// Per site a header "site n left L right R d" then "i alpha_n alpha_{n-1} value"
/// for each nonzero entry; bond indices are 0-based positions in canonical label order.
template <class Scalar>
void write_chain_dump(std::ostream& os, const std::vector<BasicSiteTensor<Scalar>>& tensors) {
    char buf[128];
    for (const auto& t : tensors) {
        std::snprintf(buf, sizeof buf, "site %d left %d right %d d %d\n", t.site, t.left_dim, t.right_dim, t.physical_dim);
        os << buf;
        for (int i = 0; i < t.physical_dim; ++i) {
            for (int b = 0; b < t.right_dim; ++b) {
                for (int a = 0; a < t.left_dim; ++a) {
                    const std::complex<double> v = t(i, b, a);
                    if (v == std::complex<double>{}) continue;
                    if (v.imag() == 0) {
                        std::snprintf(buf, sizeof buf, "%d %d %d %.17g\n", i, b, a, v.real());
                    } else {
                        std::snprintf(buf, sizeof buf, "%d %d %d %.17g %.17g\n", i, b, a, v.real(), v.imag());
                    }
                    os << buf;
                }
            }
        }
    }
}

}  // namespace seqclone
