#include <gtest/gtest.h>

#include "seqclone/sequential_machine.hpp"

using namespace seqclone;

TEST(Machine, OneToTwoStackedDims) {
    const SectorChain m = build_sector_machine(CloneTask(1, 2));
    EXPECT_EQ(m.sectors.size(), 2u);
    EXPECT_EQ(stacked_left_dims(m), (std::vector<int>{2, 4, 4}));
    EXPECT_TRUE(verify_stacked_isometry(m).passed());
}

TEST(Machine, SectorCountForQubits) {
    for (int M = 1; M <= 6; ++M) {
        for (int N = 1; N <= M; ++N) EXPECT_EQ(build_sector_machine(CloneTask(N, M)).sectors.size(), static_cast<std::size_t>(N + 1));
    }
    EXPECT_EQ(build_sector_machine(CloneTask(2, 3, 3)).sectors.size(), 6u);
}

TEST(Machine, IdentityTaskHasProductSectors) {
    const SectorChain m = build_sector_machine(CloneTask(3, 3, 3));
    for (const auto& s : m.sectors) {
        for (const auto& p : s.spectra) EXPECT_GE(p.rank(), 1u);
    }
    // Stacking N+1 product-like chains: each sector's first tensor has left dim 1.
    for (const auto& s : m.sectors) EXPECT_EQ(s.tensors[0].left_dim, 1);
}

TEST(Machine, StackedStepIsBlockDiagonal) {
    const SectorChain m = build_sector_machine(CloneTask(2, 3));
    const SiteTensor st = stacked_step(m, 2);
    const SiteTensor& first = m.sectors[0].tensors[1];
    for (int i = 0; i < 2; ++i) {
        for (int b = first.right_dim; b < st.right_dim; ++b) {
            for (int a = 0; a < first.left_dim; ++a) EXPECT_EQ(st(i, b, a), 0.0);
        }
    }
    EXPECT_THROW(stacked_step(m, 0), std::invalid_argument);
    EXPECT_THROW(stacked_step(m, 5), std::invalid_argument);
}

TEST(Machine, LoadingIsUnitNorm) {
    const SectorChain m = build_sector_machine(CloneTask(3, 4, 3));
    for (const auto& x : random_inputs(3, 10, 8)) {
        double total = 0;
        for (const auto& c : sector_loading(m, x)) total += std::norm(c);
        EXPECT_NEAR(total, 1.0, 1e-13);
    }
}

TEST(Machine, BasisInputGivesSymmetricClone) {
    const CloneTask t(2, 3);
    const PureState out = run(t, std::vector<Complex>{1.0, 0.0});
    EXPECT_LT(max_abs_difference(out, clone_symmetric(t, {2, 0})), 1e-12);
}

TEST(Machine, RunEqualsDirectClone) {
    for (const CloneTask t : {CloneTask(2, 3), CloneTask(1, 4), CloneTask(1, 2, 3), CloneTask(2, 3, 3)}) {
        const SectorChain m = build_sector_machine(t);
        for (const auto& x : random_inputs(t.levels, 20, 123)) {
            EXPECT_LT(max_abs_difference(run(m, x), clone_input(t, x)), 1e-10) << t.str();
        }
    }
}

TEST(Machine, LinearInInputSuperposition) {
    // Output for x is sum_m c_m(x) times the symmetric outputs.
    const CloneTask t(2, 3);
    const SectorChain m = build_sector_machine(t);
    const auto x = random_inputs(2, 1, 55)[0];
    PureState combo = PureState::zero(t.site_count(), 2);
    const auto loading = sector_loading(m, x);
    for (std::size_t k = 0; k < m.labels.size(); ++k) {
        PureState part = clone_symmetric(t, m.labels[k]);
        part *= loading[k];
        combo += part;
    }
    EXPECT_LT(max_abs_difference(run(m, x), combo), 1e-12);
}

TEST(Machine, WrongInputDimensionThrows) {
    EXPECT_THROW(run(CloneTask(1, 2), std::vector<Complex>{1.0, 0.0, 0.0}), std::invalid_argument);
}

TEST(Universality, FlatFidelities) {
    UniversalityScan s = universality_scan(CloneTask(1, 2), 50, 0);
    EXPECT_EQ(to_string(s.closed_form), "5/6");
    EXPECT_LT(s.spread, 1e-12);
    EXPECT_LT(s.max_abs_error, 1e-12);

    s = universality_scan(CloneTask(2, 4), 50, 1);
    EXPECT_EQ(to_string(s.closed_form), "7/8");
    EXPECT_LT(s.max_abs_error, 1e-12);

    s = universality_scan(CloneTask(3, 3), 10, 2);
    EXPECT_EQ(to_string(s.closed_form), "1");
    EXPECT_NEAR(s.min, 1.0, 1e-12);

    s = universality_scan(CloneTask(1, 2, 3), 20, 3);
    EXPECT_EQ(to_string(s.closed_form), "3/4");
    EXPECT_LT(s.max_abs_error, 1e-12);

    EXPECT_THROW(universality_scan(CloneTask(1, 2), 0, 0), std::invalid_argument);
}

TEST(Universality, SeedDeterminesInputs) {
    const auto a = random_inputs(3, 5, 99);
    const auto b = random_inputs(3, 5, 99);
    const auto c = random_inputs(3, 5, 100);
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
    for (const auto& x : a) {
        double n = 0;
        for (const auto& v : x) n += std::norm(v);
        EXPECT_NEAR(n, 1.0, 1e-14);
    }
}
