#include "wmd/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>

namespace wmd {

namespace {

// Floyd's algorithm: k distinct values from [0, n), returned sorted.
std::vector<std::size_t> sample_distinct(std::size_t n, std::size_t k, std::mt19937_64& rng) {
    std::set<std::size_t> chosen;
    for (std::size_t j = n - k; j < n; ++j) {
        std::uniform_int_distribution<std::size_t> pick(0, j);
        const std::size_t t = pick(rng);
        if (!chosen.insert(t).second) {
            chosen.insert(j);
        }
    }
    return {chosen.begin(), chosen.end()};
}

} // namespace

SyntheticInstance make_synthetic(const SyntheticParams& params) {
    std::mt19937_64 rng(params.seed);
    const std::size_t vocab = std::max<std::size_t>(params.vocab_size, 1);
    const std::size_t dim = std::max<std::size_t>(params.dim, 1);

    std::uniform_real_distribution<double> coord(-params.scale, params.scale);
    std::vector<double> data(vocab * dim);
    for (double& d : data) {
        d = coord(rng);
    }
    std::vector<std::string> tokens;
    tokens.reserve(vocab);
    for (std::size_t g = 0; g < vocab; ++g) {
        tokens.push_back("w" + std::to_string(g));
    }

    const double target = params.density * static_cast<double>(vocab);
    const auto lo = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(0.5 * target)));
    const auto hi = std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(1.5 * target)), lo,
                                            vocab);
    std::uniform_int_distribution<std::size_t> doc_len(std::min(lo, hi), hi);
    std::uniform_int_distribution<int> count(1, 4);

    std::vector<DocEntry> entries;
    for (std::size_t j = 0; j < params.num_docs; ++j) {
        for (const std::size_t g : sample_distinct(vocab, doc_len(rng), rng)) {
            entries.push_back({j, g, static_cast<double>(count(rng))});
        }
    }

    SyntheticInstance inst{
        EmbeddingMatrix(std::move(tokens), DenseMatrix(vocab, dim, std::move(data))),
        doc_matrix_from_entries(vocab, params.num_docs, entries),
        {},
    };

    const std::size_t qwords = std::clamp<std::size_t>(params.query_words, 1, vocab);
    std::uniform_int_distribution<int> qcount(1, 3);
    for (std::size_t q = 0; q < params.num_queries; ++q) {
        const auto words = sample_distinct(vocab, qwords, rng);
        std::vector<double> val;
        double total = 0.0;
        for (std::size_t k = 0; k < words.size(); ++k) {
            val.push_back(static_cast<double>(qcount(rng)));
            total += val.back();
        }
        for (double& v : val) {
            v /= total;
        }
        inst.queries.emplace_back(vocab, words, std::move(val));
    }
    return inst;
}

} // namespace wmd
