// direct_cloner.hpp
// The cloning transformation built directly in the dense basis. This is the
// ground truth the sequential construction is checked against.

#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "seqclone/combinatorics.hpp"
#include "seqclone/state_space.hpp"
#include "seqclone/types.hpp"

namespace seqclone {

/// Occupation of the M-N ancilla sites paired with extra occupation j.
///
/// Qubits use R_j = |(M-N-j) ones, j zeros>, the qubit j being the number of
/// extra ones, so the label is the reversal of (M-N-j, j). Qudits use j itself.
inline OccupationVector ancilla_occupation(const CloneTask& task, const OccupationVector& extra) {
    return task.is_qubit() ? extra.reversed() : extra;
}

/// beta^2 for any level count; dispatches to the qubit formula when d = 2.
inline ExactRational beta_squared_for(const CloneTask& task, const OccupationVector& input,
                                      const OccupationVector& extra) {
    if (task.is_qubit()) {
        if (input.site_span() != task.inputs || extra.site_span() != task.ancilla_sites()) {
            throw std::invalid_argument("beta_squared_for: occupation sums do not match task");
        }
        return beta_squared(task, input[1], extra[1]);
    }
    return beta_squared_qudit(task, input, extra);
}

/// Valid symmetric input labels for the task, canonical order.
inline std::vector<OccupationVector> input_labels(const CloneTask& task) {
    return enumerate_occupations(task.inputs, task.levels);
}

namespace detail {

inline void require_input_label(const CloneTask& task, const OccupationVector& input) {
    if (input.levels() != task.levels) throw std::invalid_argument("input label " + input.str() + " has wrong level count");
    if (input.site_span() != task.inputs) {
        throw std::invalid_argument("input label " + input.str() + " does not sum to N = " + std::to_string(task.inputs));
    }
}

}  // namespace detail

/// Exact squared norm of the clone output for one symmetric input. Equals 1
/// whenever the coefficients are right; kept separate so tests can assert it
/// without touching floating point.
inline ExactRational clone_norm_squared(const CloneTask& task, const OccupationVector& input) {
    detail::require_input_label(task, input);
    ExactRational total = 0;
    for (const auto& extra : enumerate_occupations(task.ancilla_sites(), task.levels)) {
        total += beta_squared_for(task, input, extra);
    }
    return total;
}

/// sum_j beta_{mj} |Dicke_M(m + j)> (x) |Dicke_{M-N}(ancilla(j))>,
/// clones on sites 1..M and ancilla on sites M+1..2M-N.
inline PureState clone_symmetric(const CloneTask& task, const OccupationVector& input) {
    detail::require_input_label(task, input);
    task.require_dense();
    const int M = task.copies;
    const int K = task.ancilla_sites();
    const int d = task.levels;
    PureState out = PureState::zero(task.site_count(), d);
    for (const auto& extra : enumerate_occupations(K, d)) {
        const ExactRational b2 = beta_squared_for(task, input, extra);
        if (b2 == 0) continue;
        PureState term = tensor_product(dicke_state(M, d, input.plus(extra)),
                                        dicke_state(K, d, ancilla_occupation(task, extra)));
        term *= sqrt_to_double(b2);
        out += term;
    }
    return out;
}

/// Clone output for an arbitrary input x^{(x)N}, by linearity over the symmetric basis.
inline PureState clone_input(const CloneTask& task, std::span<const Complex> x) {
    if (static_cast<int>(x.size()) != task.levels) {
        throw std::invalid_argument("clone_input: input has " + std::to_string(x.size()) + " amplitudes, expected d");
    }
    task.require_dense();
    PureState out = PureState::zero(task.site_count(), task.levels);
    for (const auto& [label, coeff] : dicke_coefficients(x, task.inputs)) {
        if (coeff == Complex{}) continue;
        PureState term = clone_symmetric(task, label);
        term *= coeff;
        out += term;
    }
    return out;
}

/// Optimal single-copy fidelity (N(d+M) + M - N) / ((d+N) M); at d = 2 this is
/// (MN + M + N) / (M (N+2)).
inline ExactRational closed_form_fidelity(const CloneTask& task) {
    const BigInt N = task.inputs;
    const BigInt M = task.copies;
    const BigInt d = task.levels;
    return ExactRational(N * (d + M) + M - N, (d + N) * M);
}

struct FidelitySample {
    int input_index = 0;
    int site = 0;
    double value = 0;
};

struct FidelityReport {
    CloneTask task;
    ExactRational closed_form;
    std::vector<FidelitySample> measured;
    double max_abs_error = 0;
};

/// Fidelity of every clone site of clone_input(x) for each given input.
inline FidelityReport measure_fidelity(const CloneTask& task, std::span<const std::vector<Complex>> inputs) {
    FidelityReport report{task, closed_form_fidelity(task), {}, 0.0};
    const double expected = to_double(report.closed_form);
    for (std::size_t k = 0; k < inputs.size(); ++k) {
        const PureState out = clone_input(task, inputs[k]);
        for (int site = 1; site <= task.copies; ++site) {
            const double f = fidelity_single_copy(out, inputs[k], site);
            report.measured.push_back({static_cast<int>(k), site, f});
            report.max_abs_error = std::max(report.max_abs_error, std::abs(f - expected));
        }
    }
    return report;
}

}  // namespace seqclone
