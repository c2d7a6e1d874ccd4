#include "wmd/batch.hpp"

#include "wmd/errors.hpp"
#include "wmd/parallel.hpp"
#include "wmd/reference.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace wmd {

namespace {

std::ifstream open_input(const std::filesystem::path& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::ios_base::failure(std::string("cannot open ") + what + " file " + path.string());
    }
    return in;
}

QueryOutcome solve_one(const BatchInputs& inputs, const RunConfig& cfg, std::size_t id,
                       std::size_t workers) {
    QueryOutcome out;
    out.query_id = id;
    try {
        const QueryHistogram r = build_query(inputs.queries[id], inputs.emb);
        out.wmd = sinkhorn_wmd(r, inputs.corpus, inputs.emb, cfg.solver, workers).distances;
        const std::size_t n = inputs.corpus.num_docs();
        if (cfg.check_dense && r.size() * n <= kDenseCheckLimit &&
            inputs.corpus.vocab_size() * n <= kDenseCellLimit) {
            out.dense_wmd = dense_reference_wmd(r, inputs.corpus, inputs.emb, cfg.solver).distances;
        }
    } catch (const EmptyDocument&) {
        out.wmd.clear();
        out.error = "query has no in-vocabulary words";
    } catch (const Error& e) {
        out.wmd.clear();
        out.error = e.what();
    }
    return out;
}

double bench_solve(const EmbeddingMatrix& emb, const DocMatrix& corpus, const QueryHistogram& q,
                   const SolverConfig& solver, std::size_t workers, WmdResult& result) {
    const auto start = std::chrono::steady_clock::now();
    result = sinkhorn_wmd(q, corpus, emb, solver, workers);
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(stop - start).count();
}

} // namespace

BatchInputs load_inputs(const RunConfig& cfg) {
    TokenSet stopwords;
    if (cfg.stopwords_path) {
        auto in = open_input(*cfg.stopwords_path, "stopwords");
        stopwords = load_stopwords(in);
    }
    auto emb_in = open_input(cfg.embeddings_path, "embeddings");
    auto corpus_in = open_input(cfg.corpus_path, "corpus");
    auto queries_in = open_input(cfg.queries_path, "queries");

    BatchInputs inputs;
    inputs.emb = load_embeddings(emb_in);
    const auto docs = read_documents(corpus_in, stopwords);
    inputs.corpus = build_corpus(docs, inputs.emb, &inputs.stats);
    inputs.queries = read_documents(queries_in, stopwords);
    return inputs;
}

std::vector<QueryOutcome> solve_queries(const BatchInputs& inputs, const RunConfig& cfg) {
    const std::size_t nq = inputs.queries.size();
    std::vector<QueryOutcome> outcomes(nq);
    if (cfg.parallel_queries) {
        const std::size_t team = std::max<std::size_t>(cfg.workers, 1);
        for_each_worker(team, [&](std::size_t w) {
            for (std::size_t q = w; q < nq; q += team) {
                outcomes[q] = solve_one(inputs, cfg, q, 1);
            }
        });
    } else {
        for (std::size_t q = 0; q < nq; ++q) {
            outcomes[q] = solve_one(inputs, cfg, q, cfg.workers);
        }
    }
    return outcomes;
}

std::string format_double(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void write_csv(std::span<const QueryOutcome> results, std::ostream& sink, bool with_dense) {
    if (results.empty()) {
        throw std::invalid_argument("write_csv: no results to write");
    }
    sink << "query_id,doc_id,wmd" << (with_dense ? ",dense_wmd" : "") << '\n';
    for (const QueryOutcome& q : results) {
        if (!q.error.empty()) {
            sink << q.query_id << ",,error" << (with_dense ? "," : "") << '\n';
            continue;
        }
        for (std::size_t j = 0; j < q.wmd.size(); ++j) {
            sink << q.query_id << ',' << j << ',' << format_double(q.wmd[j]);
            if (with_dense) {
                sink << ',';
                if (q.dense_wmd) {
                    sink << format_double((*q.dense_wmd)[j]);
                }
            }
            sink << '\n';
        }
    }
    if (!sink) {
        throw std::ios_base::failure("write_csv: output stream failed");
    }
}

void write_csv_file(std::span<const QueryOutcome> results, const std::filesystem::path& path,
                    bool with_dense) {
    if (results.empty()) {
        throw std::invalid_argument("write_csv: no results to write");
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::ios_base::failure("cannot create output file " + path.string());
    }
    write_csv(results, out, with_dense);
    out.flush();
    if (!out) {
        throw std::ios_base::failure("failed writing " + path.string());
    }
}

int run_batch(const RunConfig& cfg, std::ostream& log) {
    if (cfg.workers < 1) {
        log << "error: --threads must be >= 1\n";
        return kExitUsage;
    }
    try {
        cfg.solver.validate();
    } catch (const std::invalid_argument& e) {
        log << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    BatchInputs inputs;
    try {
        inputs = load_inputs(cfg);
    } catch (const std::ios_base::failure& e) {
        log << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        log << "error: failed to load inputs: " << e.what() << '\n';
        return kExitUsage;
    }
    log << "loaded V=" << inputs.emb.vocab_size() << " w=" << inputs.emb.dim()
        << " N=" << inputs.corpus.num_docs() << " nnz=" << inputs.corpus.nnz()
        << " queries=" << inputs.queries.size() << " oov_tokens=" << inputs.stats.oov_tokens
        << '\n';
    if (inputs.queries.empty()) {
        log << "error: queries file " << cfg.queries_path.string() << " is empty\n";
        return kExitUsage;
    }

    const auto outcomes = solve_queries(inputs, cfg);
    int status = kExitOk;
    for (const QueryOutcome& q : outcomes) {
        if (!q.error.empty()) {
            log << "query " << q.query_id << ": error: " << q.error << '\n';
            status = kExitSolverFailure;
            continue;
        }
        if (q.dense_wmd) {
            double worst = 0.0;
            for (std::size_t j = 0; j < q.wmd.size() && !std::isnan(worst); ++j) {
                const double d = std::abs(q.wmd[j] - (*q.dense_wmd)[j]);
                worst = std::isnan(d) ? d : std::max(worst, d);
            }
            log << "query " << q.query_id << ": dense check max deviation "
                << format_double(worst) << '\n';
            if (!(worst <= kDenseCheckTolerance)) {
                log << "query " << q.query_id << ": verification failed\n";
                status = kExitSolverFailure;
            }
        } else if (cfg.check_dense) {
            log << "query " << q.query_id << ": dense check skipped (instance too large)\n";
        }
    }

    try {
        write_csv_file(outcomes, cfg.output_path, cfg.check_dense);
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    if (!cfg.bench_threads.empty()) {
        std::vector<QueryHistogram> queries;
        std::vector<std::size_t> ids;
        for (const QueryOutcome& q : outcomes) {
            if (q.error.empty()) {
                queries.push_back(build_query(inputs.queries[q.query_id], inputs.emb));
                ids.push_back(q.query_id);
            }
        }
        const auto bench_path = cfg.bench_output_path.value_or(
            std::filesystem::path(cfg.output_path.string() + ".bench.csv"));
        try {
            BenchReport report =
                run_bench(inputs.emb, inputs.corpus, queries, cfg.solver, cfg.bench_threads);
            for (BenchRow& row : report.rows) {
                row.query_id = ids[row.query_id];
            }
            std::ofstream out(bench_path, std::ios::binary | std::ios::trunc);
            if (!out) {
                log << "error: cannot create bench output " << bench_path.string() << '\n';
                return kExitUsage;
            }
            write_bench_csv(report, out);
        } catch (const DeterminismViolation& e) {
            log << "error: " << e.what() << '\n';
            return kExitSolverFailure;
        } catch (const Error& e) {
            log << "error: bench failed: " << e.what() << '\n';
            return kExitSolverFailure;
        }
    }
    return status;
}

BenchReport run_bench(const EmbeddingMatrix& emb, const DocMatrix& corpus,
                      std::span<const QueryHistogram> queries, const SolverConfig& solver,
                      std::span<const std::size_t> thread_counts) {
    if (thread_counts.empty()) {
        throw std::invalid_argument("run_bench: thread list is empty");
    }
    std::vector<std::size_t> counts;
    if (std::find(thread_counts.begin(), thread_counts.end(), std::size_t{1}) ==
        thread_counts.end()) {
        counts.push_back(1);
    }
    for (const std::size_t t : thread_counts) {
        if (t == 0) {
            throw std::invalid_argument("run_bench: thread counts must be >= 1");
        }
        if (std::find(counts.begin(), counts.end(), t) == counts.end()) {
            counts.push_back(t);
        }
    }

    BenchReport report;
    for (std::size_t q = 0; q < queries.size(); ++q) {
        std::vector<WmdResult> results(counts.size());
        std::vector<double> seconds(counts.size());
        for (std::size_t k = 0; k < counts.size(); ++k) {
            WmdResult warm;
            bench_solve(emb, corpus, queries[q], solver, counts[k], warm);
            seconds[k] = bench_solve(emb, corpus, queries[q], solver, counts[k], results[k]);
        }
        for (std::size_t k = 1; k < counts.size(); ++k) {
            if (!bitwise_equal(results[k].distances, results[0].distances) ||
                !(results[k].stats == results[0].stats)) {
                throw DeterminismViolation("query " + std::to_string(q) + ": " +
                                           std::to_string(counts[k]) + " workers disagree with " +
                                           std::to_string(counts[0]));
            }
        }
        const std::size_t base =
            static_cast<std::size_t>(std::find(counts.begin(), counts.end(), std::size_t{1}) -
                                     counts.begin());
        for (std::size_t k = 0; k < counts.size(); ++k) {
            BenchRow row;
            row.threads = counts[k];
            row.query_id = q;
            row.seconds = seconds[k];
            row.speedup = k == base ? 1.0 : seconds[base] / seconds[k];
            row.iterations = results[k].stats.iterations;
            row.v_r = queries[q].size();
            row.nnz = corpus.nnz();
            report.rows.push_back(row);
        }
    }
    return report;
}

BenchReport run_bench(const RunConfig& cfg) {
    const BatchInputs inputs = load_inputs(cfg);
    std::vector<QueryHistogram> queries;
    for (const TokenList& q : inputs.queries) {
        queries.push_back(build_query(q, inputs.emb));
    }
    return run_bench(inputs.emb, inputs.corpus, queries, cfg.solver, cfg.bench_threads);
}

void write_bench_csv(const BenchReport& report, std::ostream& sink) {
    sink << "threads,query_id,seconds,speedup,iterations,v_r,nnz\n";
    for (const BenchRow& r : report.rows) {
        sink << r.threads << ',' << r.query_id << ',' << format_double(r.seconds) << ','
             << format_double(r.speedup) << ',' << r.iterations << ',' << r.v_r << ',' << r.nnz
             << '\n';
    }
}

} // namespace wmd
