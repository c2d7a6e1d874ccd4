#include "support.hpp"

#include "wmd/errors.hpp"
#include "wmd/partition.hpp"
#include "wmd/sparse_kernels.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace wmd;

namespace {

DenseMatrix mat(std::size_t r, std::size_t c, std::vector<double> v) {
    return DenseMatrix(r, c, std::move(v));
}

struct Instance {
    DocMatrix c;
    DenseMatrix KT;
    DenseMatrix u;
    DenseMatrix A;
};

Instance random_instance(std::mt19937_64& rng) {
    const std::size_t vocab = 2 + rng() % 60;
    const std::size_t docs = 1 + rng() % 30;
    const std::size_t vr = 1 + rng() % 12;
    const double density = 0.02 + 0.3 * static_cast<double>(rng() % 100) / 100.0;
    Instance inst{test::random_corpus(rng, vocab, docs, density),
                  test::random_dense(rng, vocab, vr, 0.05, 1.0),
                  test::random_dense(rng, vr, docs, 0.1, 5.0),
                  test::random_dense(rng, vr, vocab, 0.0, 2.0)};
    return inst;
}

} // namespace

TEST_CASE("sddmm examples") {
    const DocMatrix one = doc_matrix_from_entries(1, 1, std::vector<DocEntry>{{0, 0, 1.0}});
    const SddmmOutput v = sddmm(one, mat(1, 1, {2}), mat(1, 1, {4}));
    CHECK(v.values()[0] == 0.125);

    // weight 0.5 on word 0 (word 1 carries the other half)
    const DocMatrix half = DocMatrix(2, {0, 2}, {0, 1}, {0.5, 0.5});
    const SddmmOutput vh = sddmm(half, mat(2, 1, {2, 2}), mat(1, 1, {4}));
    CHECK(vh.values()[0] == 0.0625);

    // KT row of word 1 = [1, 2], u[:, 0] = [3, 4] -> 1 / 11
    const DocMatrix w1 = DocMatrix(2, {0, 1}, {1}, {1.0});
    const DenseMatrix KT = mat(2, 2, {9, 9, 1, 2});
    const DenseMatrix u = mat(2, 1, {3, 4});
    const SddmmOutput v11 = sddmm(w1, KT, u);
    CHECK(v11.values()[0] == 1.0 / 11.0);
    CHECK(test::dense_sddmm_oracle(w1, KT, u)[0] == 1.0 / 11.0);
}

TEST_CASE("sddmm error paths") {
    const DocMatrix one = doc_matrix_from_entries(1, 1, std::vector<DocEntry>{{0, 0, 1.0}});
    CHECK_THROWS_AS(sddmm(one, mat(1, 1, {0}), mat(1, 1, {4})), NumericalBreakdown);
    CHECK_THROWS_AS(sddmm(one, mat(2, 1, {1, 1}), mat(1, 1, {4})), DimensionMismatch);
    CHECK_THROWS_AS(sddmm(one, mat(1, 1, {1}), mat(2, 1, {4, 4})), DimensionMismatch);
}

TEST_CASE("spmm examples") {
    const DocMatrix one = DocMatrix(2, {0, 1}, {0}, {1.0});
    const SddmmOutput v(one, {3.0});
    const DenseMatrix x = spmm(mat(1, 2, {1, 2}), v);
    CHECK(x(0, 0) == 3.0);

    const DocMatrix two = DocMatrix(2, {0, 2}, {0, 1}, {0.5, 0.5});
    const SddmmOutput v2(two, {3.0, 5.0});
    CHECK(spmm(mat(1, 2, {1, 2}), v2)(0, 0) == 13.0);
}

TEST_CASE("sddmm and spmm match dense oracles on random instances") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 60; ++trial) {
        const Instance in = random_instance(rng);
        const SddmmOutput v = sddmm(in.c, in.KT, in.u);
        const auto oracle = test::dense_sddmm_oracle(in.c, in.KT, in.u);
        REQUIRE(oracle.size() == v.values().size());
        for (std::size_t e = 0; e < oracle.size(); ++e) {
            CHECK(std::abs(v.values()[e] - oracle[e]) <= 1e-13 * oracle[e]);
            CHECK(v.values()[e] > 0.0);
        }
        const DenseMatrix x = spmm(in.A, v);
        const DenseMatrix xo = test::dense_spmm_oracle(in.A, in.c, oracle);
        for (std::size_t k = 0; k < x.size(); ++k) {
            CHECK(std::abs(x.data()[k] - xo.data()[k]) <= 1e-12 * (1.0 + std::abs(xo.data()[k])));
        }
    }
}

TEST_CASE("sddmm_spmm example composes the two oracle steps") {
    const DocMatrix w1 = DocMatrix(2, {0, 1}, {1}, {1.0});
    const DenseMatrix KT = mat(2, 2, {9, 9, 1, 2});
    const DenseMatrix u = mat(2, 1, {3, 4});
    const DenseMatrix A = mat(1, 2, {10, 20});
    // v_r is 2 here, so A = [[10, 20]] gets a zero second row.
    const DenseMatrix A2 = mat(2, 2, {10, 20, 0, 0});
    KernelStats stats;
    const DenseMatrix x = sddmm_spmm(w1, KT, u, A2, partition_nonzeros(w1, 1), stats);
    CHECK(x(0, 0) == doctest::Approx(20.0 / 11.0).epsilon(1e-15));
    CHECK(x(1, 0) == 0.0);
    CHECK(stats.sddmm_mac_count == 2);
    CHECK(stats.spmm_mac_count == 2);
    CHECK_THROWS_AS(sddmm_spmm(w1, KT, u, A, partition_nonzeros(w1, 1), stats),
                    DimensionMismatch);
}

TEST_CASE("sddmm_spmm property: fusion identity, determinism, op counts") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const Instance in = random_instance(rng);
        const DenseMatrix composed = spmm(in.A, sddmm(in.c, in.KT, in.u));
        const std::size_t vr = in.KT.cols();
        for (const std::size_t p : {1u, 2u, 3u, 4u, 8u}) {
            KernelStats stats;
            const DenseMatrix fused =
                sddmm_spmm(in.c, in.KT, in.u, in.A, partition_nonzeros(in.c, p), stats);
            REQUIRE(bitwise_equal(fused, composed));
            CHECK(stats.sddmm_mac_count == in.c.nnz() * vr);
            CHECK(stats.spmm_mac_count == in.c.nnz() * vr);
        }
    }
}

TEST_CASE("sddmm_spmm rejects a plan that does not cover the corpus") {
    std::mt19937_64 rng(1);
    const DocMatrix c = test::random_corpus(rng, 10, 4, 0.3);
    const DenseMatrix KT = test::random_dense(rng, 10, 2, 0.1, 1.0);
    const DenseMatrix u = test::random_dense(rng, 2, 4, 0.1, 1.0);
    const DenseMatrix A = test::random_dense(rng, 2, 10, 0.1, 1.0);
    KernelStats stats;
    PartitionPlan partial{{{0, 2}}};
    CHECK_THROWS_AS(sddmm_spmm(c, KT, u, A, partial, stats), std::invalid_argument);
    PartitionPlan gap{{{0, 1}, {2, 4}}};
    CHECK_THROWS_AS(sddmm_spmm(c, KT, u, A, gap, stats), std::invalid_argument);
}

TEST_CASE("fused_final examples") {
    // Single word at distance 0: KM = 0.
    const DocMatrix c = DocMatrix(1, {0, 1}, {0}, {1.0});
    const WmdResult zero = fused_final(c, mat(1, 1, {1}), mat(1, 1, {1}), mat(1, 1, {0}),
                                       partition_nonzeros(c, 1));
    CHECK(zero.distances == std::vector<double>{0.0});

    // Single query word, single doc word at distance 5, any lambda and x.
    for (const double lambda : {0.5, 1.0, 3.0}) {
        for (const double x : {0.3, 1.0, 7.0}) {
            const double k = std::exp(-lambda * 5.0);
            const DocMatrix d = DocMatrix(2, {0, 1}, {1}, {1.0});
            const DenseMatrix KT = mat(2, 1, {1.0, k});
            const DenseMatrix KM = mat(1, 2, {0.0, k * 5.0});
            const WmdResult r =
                fused_final(d, KT, mat(1, 1, {1.0 / x}), KM, partition_nonzeros(d, 1));
            CHECK(r.distances[0] == doctest::Approx(5.0).epsilon(1e-13));
        }
    }
}

TEST_CASE("fused_final matches a dense evaluation and is worker-count invariant") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        const Instance in = random_instance(rng);
        const auto v = test::dense_sddmm_oracle(in.c, in.KT, in.u);
        const DenseMatrix kmv = test::dense_spmm_oracle(in.A, in.c, v);
        const WmdResult base = fused_final(in.c, in.KT, in.u, in.A, partition_nonzeros(in.c, 1));
        for (std::size_t j = 0; j < in.c.num_docs(); ++j) {
            double expect = 0.0;
            for (std::size_t i = 0; i < in.u.rows(); ++i) {
                expect += in.u(i, j) * kmv(i, j);
            }
            CHECK(std::abs(base.distances[j] - expect) <= 1e-12 * (1.0 + std::abs(expect)));
        }
        for (const std::size_t p : {2u, 3u, 8u}) {
            const WmdResult r = fused_final(in.c, in.KT, in.u, in.A, partition_nonzeros(in.c, p));
            CHECK(bitwise_equal(r.distances, base.distances));
            CHECK(r.stats == base.stats);
        }
    }
}
