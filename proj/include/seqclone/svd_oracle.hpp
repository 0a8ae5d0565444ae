// svd_oracle.hpp
// Numeric Schmidt spectra and left-to-right-generated chains obtained by plain
// SVDs of a dense state. Shares no code path with the analytic construction
// beyond the dense state layout.

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "seqclone/mps_cloner.hpp"
#include "seqclone/state_space.hpp"

namespace seqclone {

inline constexpr double kDefaultRankThreshold = 1e-10;

struct NumericSpectrum {
    int cut = 0;
    std::vector<double> values;  // descending

    // Number of values above threshold * largest.
    int rank_at(double threshold = kDefaultRankThreshold) const {
        if (values.empty() || values.front() <= 0) return 0;
        const double cutoff = threshold * values.front();
        return static_cast<int>(std::count_if(values.begin(), values.end(), [&](double v) { return v > cutoff; }));
    }
};

namespace detail {

inline Eigen::MatrixXcd cut_matrix(const PureState& state, int cut) {
    std::size_t rows = 1;
    for (int s = 0; s < cut; ++s) rows *= state.site_dims[s];
    const std::size_t cols = state.size() / rows;
    // Site 1 varies fastest, so the column-major view has the left block as rows.
    return Eigen::Map<const Eigen::MatrixXcd>(state.amplitudes.data(), static_cast<Eigen::Index>(rows),
                                              static_cast<Eigen::Index>(cols));
}

}  // namespace detail

/// Singular values of the amplitude matrix across sites 1..cut | cut+1..L.
inline NumericSpectrum schmidt_spectrum_numeric(const PureState& state, int cut) {
    if (cut < 1 || cut >= state.site_count()) {
        throw std::invalid_argument("schmidt_spectrum_numeric: cut " + std::to_string(cut) + " out of range");
    }
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(detail::cut_matrix(state, cut));
    NumericSpectrum s;
    s.cut = cut;
    const auto& sv = svd.singularValues();
    s.values.assign(sv.data(), sv.data() + sv.size());
    std::sort(s.values.begin(), s.values.end(), std::greater<>());
    return s;
}

using ComplexSiteTensor = BasicSiteTensor<Complex>;

struct NumericChain {
    std::vector<ComplexSiteTensor> tensors;
    std::vector<int> ranks;  // cuts 1..L-1
};

/// Successive SVDs from the last site backwards. Each V^{[n]} is built from
/// rows of a V^dagger factor, so sum_i V^{i dagger} V^i = 1 on the left bond,
/// the same isometry convention as the analytic chains.
inline NumericChain chain_from_state(const PureState& state, double threshold = kDefaultRankThreshold) {
    const int L = state.site_count();
    if (L < 1) throw std::invalid_argument("chain_from_state: empty state");
    NumericChain chain;
    chain.tensors.resize(L);
    chain.ranks.assign(L - 1, 0);

    // remainder: rows = sites 1..n, cols = bond alpha_n
    Eigen::MatrixXcd remainder = Eigen::Map<const Eigen::MatrixXcd>(state.amplitudes.data(),
                                                                    static_cast<Eigen::Index>(state.size()), 1);
    for (int n = L; n >= 1; --n) {
        const int d = state.site_dims[n - 1];
        const Eigen::Index bond_right = remainder.cols();
        const Eigen::Index rows = remainder.rows() / d;
        // (p' + rows * i, alpha) -> (p', i + d * alpha): a pure reinterpretation of column-major storage.
        Eigen::MatrixXcd reshaped = Eigen::Map<const Eigen::MatrixXcd>(remainder.data(), rows, d * bond_right);

        Eigen::BDCSVD<Eigen::MatrixXcd> svd(reshaped, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& sv = svd.singularValues();
        int rank = 0;
        if (n == 1) {
            rank = 1;
        } else {
            const double cutoff = sv.size() > 0 ? threshold * sv(0) : 0.0;
            for (Eigen::Index k = 0; k < sv.size(); ++k) rank += sv(k) > cutoff ? 1 : 0;
            rank = std::max(rank, 1);
            chain.ranks[n - 2] = rank;
        }
        Eigen::MatrixXcd vdag = svd.matrixV().leftCols(rank).adjoint();  // rank x (d * bond_right)
        Eigen::MatrixXcd us = svd.matrixU().leftCols(rank) * sv.head(rank).asDiagonal();
        if (n == 1) {
            // Fold the leftover scalar (norm and phase) into the first site.
            vdag *= us(0, 0);
        }
        ComplexSiteTensor t(n, d, rank, static_cast<int>(bond_right));
        for (int a = 0; a < rank; ++a) {
            for (int i = 0; i < d; ++i) {
                for (Eigen::Index b = 0; b < bond_right; ++b) t(i, static_cast<int>(b), a) = vdag(a, i + d * b);
            }
        }
        chain.tensors[n - 1] = std::move(t);
        remainder = std::move(us);
    }
    return chain;
}

struct CutComparison {
    int cut = 0;
    double max_delta = 0;
    int analytic_rank = 0;
    int numeric_rank = 0;
};

struct ComparisonReport {
    std::vector<CutComparison> cuts;
    double contraction_delta = 0;
    double tolerance = 0;
    std::vector<int> failing_cuts;
    bool ranks_match = true;
    bool pass = true;

    double max_spectrum_delta() const {
        double w = 0;
        for (const auto& c : cuts) w = std::max(w, c.max_delta);
        return w;
    }
};

/// Analytic chain against a dense state: per-cut sorted-spectrum deltas,
/// exact-vs-numeric rank equality and the elementwise contraction error.
inline ComparisonReport compare(const CloneChain& chain, const PureState& state, double tol,
                                bool fix_phase = false, double rank_threshold = kDefaultRankThreshold) {
    const int L = chain.task.site_count();
    if (state.site_count() != L || static_cast<int>(chain.spectra.size()) != L - 1) {
        throw std::invalid_argument("compare: chain and state have different site counts");
    }
    for (int dim : state.site_dims) {
        if (dim != chain.task.levels) throw std::invalid_argument("compare: site dimension mismatch");
    }
    ComparisonReport r;
    r.tolerance = tol;
    for (int n = 1; n < L; ++n) {
        std::vector<double> analytic = chain.spectra[n - 1].values();
        std::sort(analytic.begin(), analytic.end(), std::greater<>());
        const NumericSpectrum numeric = schmidt_spectrum_numeric(state, n);
        CutComparison c;
        c.cut = n;
        c.analytic_rank = static_cast<int>(chain.spectra[n - 1].rank());
        c.numeric_rank = numeric.rank_at(rank_threshold);
        const std::size_t len = std::max(analytic.size(), numeric.values.size());
        for (std::size_t k = 0; k < len; ++k) {
            const double a = k < analytic.size() ? analytic[k] : 0.0;
            const double b = k < numeric.values.size() ? numeric.values[k] : 0.0;
            c.max_delta = std::max(c.max_delta, std::abs(a - b));
        }
        if (c.analytic_rank != c.numeric_rank) r.ranks_match = false;
        if (!(c.max_delta <= tol) || c.analytic_rank != c.numeric_rank) r.failing_cuts.push_back(n);
        r.cuts.push_back(c);
    }
    r.contraction_delta = max_abs_difference(state, contract_tensors(chain.tensors), fix_phase);
    r.pass = r.failing_cuts.empty() && r.contraction_delta <= tol;
    return r;
}

}  // namespace seqclone
