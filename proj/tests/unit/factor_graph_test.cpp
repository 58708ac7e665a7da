#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

#include "scma/errors.hpp"
#include "scma/factor_graph.hpp"

using namespace scma;

namespace {

LayerSignature sig(std::vector<std::uint8_t> f) { return LayerSignature(std::move(f), 0); }

}  // namespace

TEST(FactorGraph, FourResourcesTwoNonzeros) {
    const auto g = build_full_graph(4, 2);
    EXPECT_EQ(g.num_layers(), 6);
    for (int d : g.degrees()) EXPECT_EQ(d, 3);
    EXPECT_DOUBLE_EQ(g.overloading(), 1.5);
    // lexicographic subsets: {0,1},{0,2},{0,3},{1,2},{1,3},{2,3}
    EXPECT_EQ(g.layer(0).support(), (std::vector<int>{0, 1}));
    EXPECT_EQ(g.layer(2).support(), (std::vector<int>{0, 3}));
    EXPECT_EQ(g.layer(5).support(), (std::vector<int>{2, 3}));
}

TEST(FactorGraph, SmallCases) {
    const auto a = build_full_graph(2, 1);
    EXPECT_EQ(a.num_layers(), 2);
    EXPECT_EQ(a.max_degree(), 1);
    EXPECT_DOUBLE_EQ(a.overloading(), 1.0);

    const auto b = build_full_graph(6, 2);
    EXPECT_EQ(b.num_layers(), 15);
    for (int d : b.degrees()) EXPECT_EQ(d, 5);
    EXPECT_DOUBLE_EQ(b.overloading(), 2.5);
}

TEST(FactorGraph, ExhaustiveIdentities) {
    for (int k = 2; k <= 8; ++k) {
        for (int n = 1; n < k; ++n) {
            const auto g = build_full_graph(k, n);
            const auto j = g.num_layers();
            ASSERT_EQ(j, binomial(k, n));
            const auto df = binomial(k - 1, n - 1);
            ASSERT_EQ(df * k, j * n);
            for (int d : g.degrees()) ASSERT_EQ(d, df);
            for (int a = 0; a < j; ++a) {
                for (int b = a + 1; b < j; ++b) {
                    const int l = overlap(g.layer(a), g.layer(b));
                    ASSERT_GE(l, std::max(0, 2 * n - k));
                    ASSERT_LE(l, n - 1);
                }
            }
        }
    }
}

TEST(FactorGraph, ColumnsMatchIndicators) {
    const auto g = build_full_graph(5, 3);
    const auto f = g.matrix();
    ASSERT_EQ(static_cast<int>(f.size()), 5);
    for (int k = 0; k < 5; ++k)
        for (int j = 0; j < g.num_layers(); ++j) EXPECT_EQ(f[k][j], g.layer(j).indicator()[k]);
}

TEST(FactorGraph, InvalidArguments) {
    EXPECT_THROW(build_full_graph(4, 4), ParameterError);
    EXPECT_THROW(build_full_graph(4, 0), ParameterError);
    EXPECT_THROW(build_full_graph(17, 2), ParameterError);
    EXPECT_THROW(build_subgraph(4, 2, 7), ParameterError);
    EXPECT_THROW(LayerSignature({1, 2, 0}, 0), ParameterError);
    EXPECT_THROW(FactorGraph({sig({1, 1, 0, 0}), sig({1, 1, 0, 0})}), ParameterError);
}

TEST(Subgraph, FullLoadEqualsFullGraph) { EXPECT_EQ(build_subgraph(4, 2, 6), build_full_graph(4, 2)); }

TEST(Subgraph, TwoLayersDisjoint) {
    const auto g = build_subgraph(4, 2, 2);
    EXPECT_EQ(overlap(g.layer(0), g.layer(1)), 0);
    EXPECT_LE(g.max_degree(), 1);
}

TEST(Subgraph, FourLayersMatchExhaustiveOptimum) {
    // Oracle: smallest achievable max degree over every 4-subset of the 6 columns.
    const auto full = build_full_graph(4, 2);
    int best = 99;
    for (int mask = 0; mask < 64; ++mask) {
        if (__builtin_popcount(mask) != 4) continue;
        std::vector<int> deg(4, 0);
        for (int j = 0; j < 6; ++j)
            if (mask & (1 << j))
                for (int k : full.layer(j).support()) ++deg[k];
        best = std::min(best, *std::max_element(deg.begin(), deg.end()));
    }
    const auto g = build_subgraph(4, 2, 4);
    EXPECT_EQ(best, 2);
    EXPECT_EQ(g.max_degree(), best);
}

TEST(Subgraph, BalancedAndDeterministic) {
    for (int k = 3; k <= 7; ++k)
        for (int n = 1; n < k; ++n)
            for (int j = 1; j <= binomial(k, n); ++j) {
                const auto g = build_subgraph(k, n, j);
                EXPECT_LE(g.max_degree() - g.min_degree(), 1) << k << ' ' << n << ' ' << j;
                EXPECT_EQ(g, build_subgraph(k, n, j));
            }
}

TEST(Overlap, Examples) {
    EXPECT_EQ(overlap(sig({1, 1, 0, 0}), sig({0, 0, 1, 1})), 0);
    EXPECT_EQ(overlap(sig({1, 1, 0, 0}), sig({1, 0, 1, 0})), 1);
    const auto g = build_full_graph(4, 3);
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) EXPECT_EQ(overlap(g.layer(a), g.layer(b)), 2);
    EXPECT_THROW(overlap(sig({1, 1, 0, 0}), sig({1, 1, 0, 0})), IdentityError);
}

TEST(MappingMatrix, Examples) {
    const auto v = mapping_matrix(sig({1, 0, 1, 0}));
    ASSERT_EQ(v.rows, 4);
    ASSERT_EQ(v.cols, 2);
    EXPECT_EQ(v.entries, (std::vector<std::uint8_t>{1, 0, 0, 0, 0, 1, 0, 0}));
    const auto w = mapping_matrix(sig({0, 0, 1, 1}));
    EXPECT_EQ(w.entries, (std::vector<std::uint8_t>{0, 0, 0, 0, 1, 0, 0, 1}));
}

TEST(MappingMatrix, OrthonormalColumnsAndSupport) {
    for (int k = 2; k <= 6; ++k) {
        for (int n = 1; n < k; ++n) {
            const auto g = build_full_graph(k, n);
            for (const auto& s : g.layers()) {
                const auto v = mapping_matrix(s);
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b) {
                        int dot = 0;
                        for (int r = 0; r < k; ++r) dot += v.at(r, a) * v.at(r, b);
                        ASSERT_EQ(dot, a == b ? 1 : 0);
                    }
                // V c with all-nonzero c is nonzero exactly on the support.
                for (int r = 0; r < k; ++r) {
                    int val = 0;
                    for (int c = 0; c < n; ++c) val += v.at(r, c) * (c + 1);
                    ASSERT_EQ(val != 0, s.indicator()[r] == 1);
                }
            }
        }
    }
}
