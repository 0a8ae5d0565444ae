#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "seqclone/sequential_machine.hpp"
#include "seqclone/state_space.hpp"

using namespace seqclone;

namespace {

double max_diff(const PureState& s, const std::vector<double>& ref) {
    double w = 0;
    for (std::size_t i = 0; i < ref.size(); ++i) w = std::max(w, std::abs(s.amplitudes[i] - Complex(ref[i])));
    return w;
}

std::vector<Complex> unit(std::initializer_list<Complex> v) { return std::vector<Complex>(v); }

}  // namespace

TEST(Dicke, TwoSiteSymmetric) {
    const PureState s = dicke_state(2, 2, {1, 1});
    const double h = 1 / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(s.amplitudes[1] - h), 0, 1e-15);
    EXPECT_NEAR(std::abs(s.amplitudes[2] - h), 0, 1e-15);
    EXPECT_EQ(s.amplitudes[0], Complex{});
    EXPECT_EQ(s.amplitudes[3], Complex{});
}

TEST(Dicke, AllZeros) {
    const PureState s = dicke_state(3, 2, {3, 0});
    EXPECT_EQ(s.amplitudes[0], Complex(1.0));
    EXPECT_NEAR(s.norm(), 1.0, 1e-15);
}

TEST(Dicke, SixPermutationsOfThreeLevels) {
    const PureState s = dicke_state(3, 3, {1, 1, 1});
    int nonzero = 0;
    for (const auto& a : s.amplitudes) {
        if (a == Complex{}) continue;
        ++nonzero;
        EXPECT_NEAR(a.real(), 1 / std::sqrt(6.0), 1e-15);
    }
    EXPECT_EQ(nonzero, 6);
}

TEST(Dicke, MatchesEnumerationOracle) {
    for (int d = 2; d <= 4; ++d) {
        for (int sites = 1; sites <= (d == 2 ? 8 : 4); ++sites) {
            for (const auto& occ : enumerate_occupations(sites, d)) {
                const auto ref = oracle::dicke(sites, d, std::vector<int>(occ.counts().begin(), occ.counts().end()));
                EXPECT_LT(max_diff(dicke_state(sites, d, occ), ref), 1e-14) << sites << " " << occ.str();
            }
        }
    }
}

TEST(Dicke, InvariantUnderSitePermutation) {
    std::mt19937 rng(3);
    for (const auto& occ : enumerate_occupations(4, 3)) {
        const PureState s = dicke_state(4, 3, occ);
        std::vector<int> perm{0, 1, 2, 3};
        std::shuffle(perm.begin(), perm.end(), rng);
        for (std::size_t i = 0; i < s.size(); ++i) {
            const auto dg = oracle::digits(i, 4, 3);
            std::size_t j = 0;
            for (int k = 3; k >= 0; --k) j = j * 3 + dg[perm[k]];
            EXPECT_EQ(s.amplitudes[i], s.amplitudes[j]);
        }
    }
}

TEST(Dicke, BadOccupationThrows) {
    EXPECT_THROW(dicke_state(3, 2, {1, 1}), std::invalid_argument);
    EXPECT_THROW(dicke_state(2, 3, {1, 1}), std::invalid_argument);
}

TEST(DickeCoefficients, HandValues) {
    auto c = dicke_coefficients(unit({1.0, 0.0}), 3);
    EXPECT_EQ(c.at({3, 0}), Complex(1.0));
    EXPECT_EQ(c.at({2, 1}), Complex{});
    const double h = std::sqrt(0.5);
    c = dicke_coefficients(unit({h, h}), 2);
    EXPECT_NEAR(std::abs(c.at({2, 0}) - 0.5), 0, 1e-15);
    EXPECT_NEAR(std::abs(c.at({1, 1}) - std::sqrt(2.0) / 2), 0, 1e-15);
    EXPECT_NEAR(std::abs(c.at({0, 2}) - 0.5), 0, 1e-15);
    const auto x = unit({Complex(0.6, 0), Complex(0, 0.48), Complex(0.64, 0)});
    c = dicke_coefficients(x, 1);
    EXPECT_EQ(c.at({1, 0, 0}), x[0]);
    EXPECT_EQ(c.at({0, 1, 0}), x[1]);
    EXPECT_EQ(c.at({0, 0, 1}), x[2]);
}

TEST(DickeCoefficients, ReconstructTensorPower) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const int d = 2 + trial % 3;
        const int N = 1 + trial % 4;
        const auto x = random_input(d, rng);
        PureState sum = PureState::zero(N, d);
        for (const auto& [occ, c] : dicke_coefficients(x, N)) {
            PureState part = dicke_state(N, d, occ);
            part *= c;
            sum += part;
        }
        EXPECT_LT(max_abs_difference(sum, tensor_power(x, N)), 1e-13);
        double total = 0;
        for (const auto& [occ, c] : dicke_coefficients(x, N)) total += std::norm(c);
        EXPECT_NEAR(total, 1.0, 1e-13);
    }
}

TEST(DickeCoefficients, NonUnitInputThrows) {
    EXPECT_THROW(dicke_coefficients(unit({1.0, 1.0}), 2), std::invalid_argument);
    EXPECT_THROW(dicke_coefficients(unit({1.0}), 2), std::invalid_argument);
}

TEST(ReducedState, ProductAndBell) {
    const double h = std::sqrt(0.5);
    const PureState prod = tensor_product(tensor_power(unit({1.0, 0.0}), 1), tensor_power(unit({h, h}), 1));
    const Eigen::MatrixXcd rho = reduced_single_site(prod, 1);
    EXPECT_NEAR(std::abs(rho(0, 0) - 1.0), 0, 1e-15);
    EXPECT_NEAR(std::abs(rho(1, 1)), 0, 1e-15);
    EXPECT_NEAR(std::abs(rho(0, 1)), 0, 1e-15);

    const PureState bell({2, 2}, {h, 0, 0, h});
    for (int site = 1; site <= 2; ++site) {
        const Eigen::MatrixXcd r = reduced_single_site(bell, site);
        EXPECT_LT((r - 0.5 * Eigen::MatrixXcd::Identity(2, 2)).norm(), 1e-15);
        EXPECT_NEAR(fidelity_single_copy(bell, unit({1.0, 0.0}), site), 0.5, 1e-15);
    }
}

TEST(ReducedState, DickeMarginal) {
    const Eigen::MatrixXcd rho = reduced_single_site(dicke_state(3, 2, {2, 1}), 1);
    EXPECT_NEAR(rho(0, 0).real(), 2.0 / 3, 1e-15);
    EXPECT_NEAR(rho(1, 1).real(), 1.0 / 3, 1e-15);
    EXPECT_NEAR(std::abs(rho(0, 1)), 0, 1e-15);
}

TEST(ReducedState, MatchesPartialTraceOracle) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const int d = 2 + trial % 2;
        const int sites = 3;
        PureState s = PureState::zero(sites, d);
        double n = 0;
        std::normal_distribution<double> g;
        for (auto& a : s.amplitudes) {
            a = Complex(g(rng), g(rng));
            n += std::norm(a);
        }
        s *= 1 / std::sqrt(n);
        for (int site = 1; site <= sites; ++site) {
            const auto ref = oracle::reduced(s.amplitudes, sites, d, site);
            EXPECT_LT((reduced_single_site(s, site) - ref).norm(), 1e-14);
        }
    }
}

TEST(Fidelity, CopiesOfInputAndMixed) {
    std::mt19937_64 rng(1);
    const auto x = random_input(3, rng);
    const PureState s = tensor_product(tensor_power(x, 2), dicke_state(2, 3, {0, 1, 1}));
    EXPECT_NEAR(fidelity_single_copy(s, x, 1), 1.0, 1e-14);
    EXPECT_NEAR(fidelity_single_copy(s, x, 2), 1.0, 1e-14);
    // Maximally mixed single site from a maximally entangled pair.
    const double r = 1 / std::sqrt(3.0);
    PureState ent({3, 3}, std::vector<Complex>(9));
    for (int i = 0; i < 3; ++i) ent.amplitudes[i * 4] = r;
    EXPECT_NEAR(fidelity_single_copy(ent, x, 1), 1.0 / 3, 1e-14);
}

TEST(StateOps, TensorProductLayoutAndErrors) {
    const PureState a({2}, {0.0, 1.0});
    const PureState b({3}, {1.0, 0.0, 0.0});
    const PureState ab = tensor_product(a, b);
    EXPECT_EQ(ab.site_dims, (std::vector<int>{2, 3}));
    EXPECT_EQ(ab.amplitudes[1], Complex(1.0));  // site 1 varies fastest
    EXPECT_THROW(PureState({2, 2}, {1.0}), std::invalid_argument);
    EXPECT_THROW(reduced_single_site(a, 2), std::invalid_argument);
    EXPECT_THROW(max_abs_difference(a, b), std::invalid_argument);
    EXPECT_THROW(fidelity_single_copy(a, unit({1.0, 0.0, 0.0}), 1), std::invalid_argument);
}

TEST(StateOps, PhaseFixedDifference) {
    const PureState a({2}, {0.6, 0.8});
    PureState b = a;
    b *= Complex(0, 1);
    EXPECT_GT(max_abs_difference(a, b), 1.0);
    EXPECT_LT(max_abs_difference(a, b, true), 1e-15);
}

TEST(StateOps, DumpListsNonzeroAmplitudes) {
    std::ostringstream os;
    write_state_dump(os, PureState({2, 2}, {0.0, 0.6, 0.0, 0.8}));
    EXPECT_EQ(os.str(), "1 0.59999999999999998 0\n3 0.80000000000000004 0\n");
}
