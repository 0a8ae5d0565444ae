// types.hpp
// Problem instance, occupation labels and error types shared by every module.

#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace seqclone {

inline constexpr std::string_view kEngineVersion = "1.0.0";

// Largest output-copy count accepted anywhere in the engine.
inline constexpr int kMaxCopies = 64;

// Dense amplitude vectors larger than this are refused unless a task overrides it.
inline constexpr std::uint64_t kDefaultDenseCap = std::uint64_t{1} << 24;

// Thrown when a dense state would exceed the configured amplitude cap.
class too_large_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Thrown when an internal invariant of the analytic construction breaks.
class consistency_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// N identical d-level inputs cloned to M outputs.
///
/// Sites are numbered 1..2M-N: clones occupy 1..M, the machine's own
/// ancilla register occupies M+1..2M-N.
struct CloneTask {
    int inputs = 1;   // N
    int copies = 1;   // M
    int levels = 2;   // d
    std::uint64_t dense_cap = kDefaultDenseCap;

    CloneTask() = default;
    CloneTask(int n_inputs, int n_copies, int n_levels = 2)
        : inputs(n_inputs), copies(n_copies), levels(n_levels) {
        if (inputs < 1) throw std::invalid_argument("CloneTask: N must be >= 1");
        if (copies < inputs) throw std::invalid_argument("CloneTask: M must be >= N");
        if (copies > kMaxCopies) throw std::invalid_argument("CloneTask: M > 64 is not supported");
        if (levels < 2) throw std::invalid_argument("CloneTask: d must be >= 2");
    }

    int site_count() const { return 2 * copies - inputs; }
    int ancilla_sites() const { return copies - inputs; }
    bool is_qubit() const { return levels == 2; }

    // d^(2M-N), or nullopt when it does not fit in 64 bits.
    std::optional<std::uint64_t> dense_dimension() const {
        std::uint64_t dim = 1;
        for (int s = 0; s < site_count(); ++s) {
            if (dim > UINT64_MAX / static_cast<std::uint64_t>(levels)) return std::nullopt;
            dim *= static_cast<std::uint64_t>(levels);
        }
        return dim;
    }

    bool fits_dense() const {
        auto dim = dense_dimension();
        return dim && *dim <= dense_cap;
    }

    void require_dense() const {
        if (!fits_dense()) {
            throw too_large_error("dense dimension d^(2M-N) for N=" + std::to_string(inputs) +
                                  " M=" + std::to_string(copies) + " d=" + std::to_string(levels) +
                                  " exceeds cap " + std::to_string(dense_cap));
        }
    }

    std::string str() const {
        return std::to_string(inputs) + "->" + std::to_string(copies) + " d=" + std::to_string(levels);
    }
};

/// Symmetric-state label: counts[i] sites carry level i.
///
/// Canonical order (used for every enumeration and every bond layout):
/// lexicographic on the excited counts counts[1], counts[2], ...; for
/// qubits this is ascending number of ones.
class OccupationVector {
public:
    OccupationVector() = default;
    explicit OccupationVector(std::vector<int> counts) : counts_(std::move(counts)) {
        if (counts_.empty()) throw std::invalid_argument("OccupationVector: no levels");
        for (int c : counts_) {
            if (c < 0) throw std::invalid_argument("OccupationVector: negative count");
        }
    }
    OccupationVector(std::initializer_list<int> counts) : OccupationVector(std::vector<int>(counts)) {}

    // (sites - ones, ones)
    static OccupationVector qubit(int sites, int ones) {
        if (ones < 0 || ones > sites) throw std::invalid_argument("OccupationVector::qubit: ones out of range");
        return OccupationVector({sites - ones, ones});
    }

    static OccupationVector zeros(int levels) { return OccupationVector(std::vector<int>(levels, 0)); }

    int levels() const { return static_cast<int>(counts_.size()); }
    int site_span() const { return std::accumulate(counts_.begin(), counts_.end(), 0); }
    int operator[](int level) const { return counts_.at(level); }
    std::span<const int> counts() const { return counts_; }

    OccupationVector with_added(int level, int delta = 1) const {
        auto c = counts_;
        c.at(level) += delta;
        return OccupationVector(std::move(c));
    }

    // Elementwise difference; nullopt if any entry would go negative.
    std::optional<OccupationVector> minus(const OccupationVector& other) const {
        check_levels(other);
        std::vector<int> c(counts_.size());
        for (std::size_t i = 0; i < c.size(); ++i) {
            c[i] = counts_[i] - other.counts_[i];
            if (c[i] < 0) return std::nullopt;
        }
        return OccupationVector(std::move(c));
    }

    OccupationVector plus(const OccupationVector& other) const {
        check_levels(other);
        std::vector<int> c(counts_.size());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = counts_[i] + other.counts_[i];
        return OccupationVector(std::move(c));
    }

    OccupationVector reversed() const { return OccupationVector(std::vector<int>(counts_.rbegin(), counts_.rend())); }

    bool operator==(const OccupationVector&) const = default;

    std::strong_ordering operator<=>(const OccupationVector& other) const {
        const std::size_t n = std::min(counts_.size(), other.counts_.size());
        for (std::size_t i = 1; i < n; ++i) {
            if (auto c = counts_[i] <=> other.counts_[i]; c != 0) return c;
        }
        if (auto c = counts_.size() <=> other.counts_.size(); c != 0) return c;
        if (n > 0) return counts_[0] <=> other.counts_[0];
        return std::strong_ordering::equal;
    }

    std::string str() const {
        std::string s = "(";
        for (std::size_t i = 0; i < counts_.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(counts_[i]);
        }
        return s + ")";
    }

private:
    void check_levels(const OccupationVector& other) const {
        if (other.counts_.size() != counts_.size()) throw std::invalid_argument("OccupationVector: level mismatch");
    }

    std::vector<int> counts_;
};

/// Every occupation vector over `sites` sites with `levels` levels, in canonical order.
inline std::vector<OccupationVector> enumerate_occupations(int sites, int levels) {
    if (sites < 0 || levels < 1) throw std::invalid_argument("enumerate_occupations: bad arguments");
    std::vector<OccupationVector> out;
    std::vector<int> c(levels, 0);
    // Recursive composition generator over levels 1..d-1; level 0 takes the rest.
    auto rec = [&](auto&& self, int level, int remaining) -> void {
        if (level == levels) {
            c[0] = remaining;
            out.emplace_back(c);
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            c[level] = v;
            self(self, level + 1, remaining - v);
        }
        c[level] = 0;
    };
    if (levels == 1) {
        out.emplace_back(std::vector<int>{sites});
    } else {
        rec(rec, 1, sites);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace seqclone
