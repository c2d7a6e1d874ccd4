#include "wmd/reference.hpp"

#include "wmd/distance.hpp"
#include "wmd/errors.hpp"

#include <algorithm>
#include <cmath>

namespace wmd {

namespace {

// v = c .* (1 ./ KTu), evaluated only where c is nonzero.
DenseMatrix masked_reciprocal(const DenseMatrix& c_dense, const DenseMatrix& ktu) {
    DenseMatrix v(c_dense.rows(), c_dense.cols());
    for (std::size_t k = 0; k < v.size(); ++k) {
        const double w = c_dense.data()[k];
        if (w != 0.0) {
            v.data()[k] = w * (1.0 / ktu.data()[k]);
        }
    }
    return v;
}

DenseMatrix elementwise_reciprocal(const DenseMatrix& x) {
    DenseMatrix u(x.rows(), x.cols());
    for (std::size_t k = 0; k < x.size(); ++k) {
        u.data()[k] = 1.0 / x.data()[k];
    }
    return u;
}

} // namespace

DenseMatrix densify(const DocMatrix& c) {
    DenseMatrix out(c.vocab_size(), c.num_docs());
    for (std::size_t j = 0; j < c.num_docs(); ++j) {
        const auto words = c.words(j);
        const auto weights = c.weights(j);
        for (std::size_t e = 0; e < words.size(); ++e) {
            out(words[e], j) = weights[e];
        }
    }
    return out;
}

DenseMatrix dense_matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) {
        throw DimensionMismatch("dense_matmul: inner dimensions differ");
    }
    DenseMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

WmdResult dense_reference_wmd(const QueryHistogram& r, const DocMatrix& c,
                              const EmbeddingMatrix& emb, const SolverConfig& cfg,
                              std::vector<DenseMatrix>* trace) {
    cfg.validate();
    if (r.vocab_size() != c.vocab_size() || c.vocab_size() != emb.vocab_size()) {
        throw DimensionMismatch("query, corpus and embeddings disagree on vocabulary size");
    }
    const CompactQuery query = select_nonzero(r);
    const std::size_t vr = query.size();

    const DenseMatrix M = euclidean_rows(emb, query.sel);
    DenseMatrix K(vr, M.cols());
    DenseMatrix K_over_r(vr, M.cols());
    DenseMatrix KM(vr, M.cols());
    for (std::size_t i = 0; i < vr; ++i) {
        for (std::size_t g = 0; g < M.cols(); ++g) {
            K(i, g) = std::exp(-cfg.lambda * M(i, g));
            K_over_r(i, g) = (1.0 / query.r[i]) * K(i, g);
            KM(i, g) = K(i, g) * M(i, g);
        }
    }
    const DenseMatrix KT = K.transposed();
    const DenseMatrix c_dense = densify(c);

    DenseMatrix x(vr, c.num_docs(), 1.0 / static_cast<double>(vr));
    std::size_t it = 0;
    while (it < cfg.max_iter) {
        const DenseMatrix u = elementwise_reciprocal(x);
        const DenseMatrix v = masked_reciprocal(c_dense, dense_matmul(KT, u));
        DenseMatrix next = dense_matmul(K_over_r, v);
        ++it;
        const bool converged =
            cfg.mode == SolverMode::until_converged && max_abs_diff(next, x) <= cfg.tol;
        x = std::move(next);
        if (trace) {
            trace->push_back(x);
        }
        if (converged) {
            break;
        }
    }

    const DenseMatrix u = elementwise_reciprocal(x);
    const DenseMatrix v = masked_reciprocal(c_dense, dense_matmul(KT, u));
    const DenseMatrix kmv = dense_matmul(KM, v);

    WmdResult result;
    result.distances.assign(c.num_docs(), 0.0);
    for (std::size_t i = 0; i < vr; ++i) {
        for (std::size_t j = 0; j < c.num_docs(); ++j) {
            result.distances[j] += u(i, j) * kmv(i, j);
        }
    }
    result.stats.iterations = it;
    return result;
}

} // namespace wmd
