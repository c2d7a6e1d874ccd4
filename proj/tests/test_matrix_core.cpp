#include "support.hpp"

#include "wmd/dense_matrix.hpp"
#include "wmd/doc_matrix.hpp"
#include "wmd/errors.hpp"
#include "wmd/partition.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace wmd;

namespace {

void check_doc_invariants(const DocMatrix& c) {
    REQUIRE(c.doc_ptr().front() == 0);
    REQUIRE(c.doc_ptr().back() == c.nnz());
    for (std::size_t j = 0; j < c.num_docs(); ++j) {
        const auto words = c.words(j);
        const auto weights = c.weights(j);
        REQUIRE(!words.empty());
        double sum = 0.0;
        for (std::size_t e = 0; e < words.size(); ++e) {
            CHECK(words[e] < c.vocab_size());
            if (e > 0) {
                CHECK(words[e] > words[e - 1]);
            }
            CHECK(weights[e] > 0.0);
            sum += weights[e];
        }
        CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
}

} // namespace

TEST_CASE("DenseMatrix rejects wrong length and non-finite data") {
    CHECK_THROWS_AS(DenseMatrix(2, 2, std::vector<double>{1, 2, 3}), DimensionMismatch);
    CHECK_THROWS_AS(DenseMatrix(1, 2, std::vector<double>{1, std::nan("")}), std::invalid_argument);
    CHECK_THROWS_AS(DenseMatrix(1, 1, std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
    const DenseMatrix m(2, 3, std::vector<double>{1, 2, 3, 4, 5, 6});
    CHECK(m(1, 2) == 6);
    const DenseMatrix t = m.transposed();
    CHECK(t.rows() == 3);
    CHECK(t(2, 1) == 6);
    CHECK(t(0, 1) == 4);
}

TEST_CASE("doc_matrix_from_entries normalizes per document") {
    const std::vector<DocEntry> entries{{0, 0, 2}, {0, 1, 1}, {1, 2, 1}};
    const DocMatrix c = doc_matrix_from_entries(3, 2, entries);
    REQUIRE(c.num_docs() == 2);
    REQUIRE(c.nnz() == 3);
    CHECK(c.words(0)[0] == 0);
    CHECK(c.words(0)[1] == 1);
    CHECK(c.weights(0)[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(c.weights(0)[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(c.words(1)[0] == 2);
    CHECK(c.weights(1)[0] == 1.0);
}

TEST_CASE("doc_matrix_from_entries merges duplicates") {
    const std::vector<DocEntry> entries{{0, 0, 1}, {0, 0, 1}, {1, 2, 5}};
    const DocMatrix c = doc_matrix_from_entries(3, 2, entries);
    REQUIRE(c.doc_nnz(0) == 1);
    CHECK(c.weights(0)[0] == 1.0);
    CHECK(c.words(1)[0] == 2);
    CHECK(c.weights(1)[0] == 1.0);
}

TEST_CASE("doc_matrix_from_entries error paths") {
    const std::vector<DocEntry> missing{{0, 0, 1}};
    try {
        (void)doc_matrix_from_entries(3, 2, missing);
        FAIL("expected EmptyDocument");
    } catch (const EmptyDocument& e) {
        CHECK(e.doc() == 1);
    }
    const std::vector<DocEntry> bad_word{{0, 3, 1}};
    CHECK_THROWS_AS(doc_matrix_from_entries(3, 1, bad_word), IndexOutOfRange);
    const std::vector<DocEntry> bad_doc{{1, 0, 1}};
    CHECK_THROWS_AS(doc_matrix_from_entries(3, 1, bad_doc), IndexOutOfRange);
}

TEST_CASE("DocMatrix constructor enforces its invariants") {
    CHECK_THROWS_AS(DocMatrix(3, {0, 1, 1}, {0}, {1.0}), EmptyDocument);
    CHECK_THROWS_AS(DocMatrix(3, {0, 2}, {1, 0}, {0.5, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(DocMatrix(3, {0, 2}, {0, 1}, {0.5, 0.4}), std::invalid_argument);
    CHECK_THROWS_AS(DocMatrix(3, {0, 1}, {5}, {1.0}), IndexOutOfRange);
    CHECK_NOTHROW(DocMatrix(3, {0, 2}, {0, 2}, {0.25, 0.75}));
}

TEST_CASE("doc_matrix_from_entries property: invariants on random input") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t vocab = 1 + rng() % 50;
        const std::size_t docs = 1 + rng() % 20;
        std::vector<DocEntry> entries;
        for (std::size_t j = 0; j < docs; ++j) {
            const std::size_t k = 1 + rng() % 12;
            for (std::size_t t = 0; t < k; ++t) {
                entries.push_back({j, rng() % vocab, 1.0 + static_cast<double>(rng() % 7)});
            }
        }
        std::shuffle(entries.begin(), entries.end(), rng);
        check_doc_invariants(doc_matrix_from_entries(vocab, docs, entries));
    }
}

TEST_CASE("partition_nonzeros examples") {
    SUBCASE("split inside a document goes to the earlier worker") {
        const std::vector<std::size_t> ptr{0, 3, 7, 10};
        const PartitionPlan plan = partition_nonzeros(ptr, 2);
        REQUIRE(plan.num_workers() == 2);
        CHECK(plan.ranges[0] == DocRange{0, 2});
        CHECK(plan.ranges[1] == DocRange{2, 3});
        CHECK(plan == test::linear_scan_partition(ptr, 2));
    }
    SUBCASE("exact split on a boundary") {
        const std::vector<std::size_t> ptr{0, 4, 8};
        const PartitionPlan plan = partition_nonzeros(ptr, 2);
        CHECK(plan.ranges[0] == DocRange{0, 1});
        CHECK(plan.ranges[1] == DocRange{1, 2});
    }
    SUBCASE("a single document cannot be split") {
        const std::vector<std::size_t> ptr{0, 10};
        const PartitionPlan plan = partition_nonzeros(ptr, 4);
        REQUIRE(plan.num_workers() == 4);
        CHECK(plan.ranges[0] == DocRange{0, 1});
        for (std::size_t k = 1; k < 4; ++k) {
            CHECK(plan.ranges[k] == DocRange{1, 1});
        }
    }
    CHECK_THROWS_AS(partition_nonzeros(std::vector<std::size_t>{0, 1}, 0), std::invalid_argument);
}

TEST_CASE("partition_nonzeros property: cover, balance, linear-scan equivalence") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        const auto ptr = test::random_doc_ptr(rng, 60, 25, trial % 2 == 0);
        const std::size_t n = ptr.size() - 1;
        const std::size_t nnz = ptr.back();
        std::size_t max_doc = 0;
        for (std::size_t j = 0; j < n; ++j) {
            max_doc = std::max(max_doc, ptr[j + 1] - ptr[j]);
        }
        for (std::size_t p = 1; p <= 16; ++p) {
            const PartitionPlan plan = partition_nonzeros(ptr, p);
            REQUIRE(plan.num_workers() == p);
            std::size_t next = 0;
            for (const DocRange& r : plan.ranges) {
                REQUIRE(r.begin == next);
                REQUIRE(r.end >= r.begin);
                next = r.end;
                CHECK(ptr[r.end] - ptr[r.begin] <= (nnz + p - 1) / p + max_doc);
            }
            CHECK(next == n);
            CHECK(plan == test::linear_scan_partition(ptr, p));
        }
    }
}
