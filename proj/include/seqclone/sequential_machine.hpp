// sequential_machine.hpp
// The arbitrary-input sequential cloner: one chain per symmetric input
// label, stacked block-diagonally, with the input loaded as symmetric-basis
// amplitudes.

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "seqclone/direct_cloner.hpp"
#include "seqclone/mps_cloner.hpp"
#include "seqclone/state_space.hpp"

namespace seqclone {

struct SectorChain {
    CloneTask task;
    std::vector<OccupationVector> labels;  // canonical order
    std::vector<CloneChain> sectors;       // parallel to labels
};

inline SectorChain build_sector_machine(const CloneTask& task) {
    SectorChain machine{task, input_labels(task), {}};
    machine.sectors.reserve(machine.labels.size());
    for (const auto& label : machine.labels) machine.sectors.push_back(build_chain(task, label));
    return machine;
}

/// Input loading: amplitude of each sector for x^{(x)N}. Normalized for unit x.
inline std::vector<Complex> sector_loading(const SectorChain& machine, std::span<const Complex> x) {
    const auto coeffs = dicke_coefficients(x, machine.task.inputs);
    std::vector<Complex> out;
    out.reserve(machine.labels.size());
    for (const auto& label : machine.labels) out.push_back(coeffs.at(label));
    return out;
}

/// Block-diagonal step operator (+)_m V^{[n]}(m).
inline SiteTensor stacked_step(const SectorChain& machine, int n) {
    if (n < 1 || n > machine.task.site_count()) throw std::invalid_argument("stacked_step: site out of range");
    int left = 0;
    int right = 0;
    for (const auto& s : machine.sectors) {
        left += s.tensors[n - 1].left_dim;
        right += s.tensors[n - 1].right_dim;
    }
    SiteTensor out(n, machine.task.levels, left, right);
    int left_off = 0;
    int right_off = 0;
    for (const auto& s : machine.sectors) {
        const SiteTensor& t = s.tensors[n - 1];
        for (int i = 0; i < t.physical_dim; ++i) {
            for (int b = 0; b < t.right_dim; ++b) {
                for (int a = 0; a < t.left_dim; ++a) out(i, right_off + b, left_off + a) = t(i, b, a);
            }
        }
        left_off += t.left_dim;
        right_off += t.right_dim;
    }
    return out;
}

/// Left (input-side) dimension of every stacked step, site 1 first.
inline std::vector<int> stacked_left_dims(const SectorChain& machine) {
    std::vector<int> dims(machine.task.site_count(), 0);
    for (const auto& s : machine.sectors) {
        for (std::size_t k = 0; k < s.tensors.size(); ++k) dims[k] += s.tensors[k].left_dim;
    }
    return dims;
}

inline IsometryReport verify_stacked_isometry(const SectorChain& machine, double tol = 1e-12) {
    std::vector<SiteTensor> steps;
    for (int n = 1; n <= machine.task.site_count(); ++n) steps.push_back(stacked_step(machine, n));
    return verify_isometry(steps, tol);
}

/// sum_m c_m(x) contract(sector m); sectors are contracted one at a time.
inline PureState run(const SectorChain& machine, std::span<const Complex> x) {
    const CloneTask& task = machine.task;
    if (static_cast<int>(x.size()) != task.levels) throw std::invalid_argument("run: input has wrong dimension");
    task.require_dense();
    const auto loading = sector_loading(machine, x);
    PureState out = PureState::zero(task.site_count(), task.levels);
    for (std::size_t k = 0; k < machine.sectors.size(); ++k) {
        if (loading[k] == Complex{}) continue;
        PureState part = contract_tensors(machine.sectors[k].tensors);
        part *= loading[k];
        out += part;
    }
    return out;
}

inline PureState run(const CloneTask& task, std::span<const Complex> x) {
    return run(build_sector_machine(task), x);
}

/// Haar-random unit vector in C^d.
template <class Rng>
std::vector<Complex> random_input(int d, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Complex> x(d);
    double norm = 0;
    do {
        norm = 0;
        for (auto& a : x) {
            a = Complex(gauss(rng), gauss(rng));
            norm += std::norm(a);
        }
    } while (norm < 1e-300);
    norm = std::sqrt(norm);
    for (auto& a : x) a /= norm;
    return x;
}

/// Seeded batch of random inputs; identical for identical (d, count, seed).
inline std::vector<std::vector<Complex>> random_inputs(int d, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::vector<Complex>> out;
    for (int k = 0; k < count; ++k) out.push_back(random_input(d, rng));
    return out;
}

struct UniversalityScan {
    CloneTask task;
    ExactRational closed_form;
    int samples = 0;
    std::uint64_t seed = 0;
    double min = 0;
    double max = 0;
    double spread = 0;
    double max_abs_error = 0;  // against closed_form
    std::vector<FidelitySample> measured;
};

/// Clone-site fidelities of the sequential machine over seeded random inputs.
inline UniversalityScan universality_scan(const CloneTask& task, int samples, std::uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("universality_scan: samples must be >= 1");
    const SectorChain machine = build_sector_machine(task);
    UniversalityScan scan{task, closed_form_fidelity(task), samples, seed, 0, 0, 0, 0, {}};
    const double expected = to_double(scan.closed_form);
    scan.min = std::numeric_limits<double>::infinity();
    scan.max = -std::numeric_limits<double>::infinity();
    const auto inputs = random_inputs(task.levels, samples, seed);
    for (int k = 0; k < samples; ++k) {
        const PureState out = run(machine, inputs[k]);
        for (int site = 1; site <= task.copies; ++site) {
            const double f = fidelity_single_copy(out, inputs[k], site);
            scan.measured.push_back({k, site, f});
            scan.min = std::min(scan.min, f);
            scan.max = std::max(scan.max, f);
            scan.max_abs_error = std::max(scan.max_abs_error, std::abs(f - expected));
        }
    }
    scan.spread = scan.max - scan.min;
    return scan;
}

}  // namespace seqclone
