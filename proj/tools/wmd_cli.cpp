// Batch front end: one-to-many Sinkhorn WMD for every query line against a corpus.

#include "wmd/batch.hpp"
#include "wmd/parallel.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>
#include <string>

namespace {

std::vector<std::size_t> parse_thread_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        const unsigned long value = std::stoul(item, &pos);
        if (pos != item.size() || value == 0) {
            throw std::invalid_argument("bad thread count '" + item + "'");
        }
        out.push_back(value);
    }
    if (out.empty()) {
        throw std::invalid_argument("empty --bench list");
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"One-to-many Word Mover's Distance with a sparse Sinkhorn-Knopp solver"};

    wmd::RunConfig cfg;
    cfg.workers = wmd::default_workers();
    std::string embeddings, corpus, queries, output, stopwords, bench, bench_output;
    bool until_converged = false;

    app.add_option("--embeddings", embeddings, "fastText .vec embeddings")->required();
    app.add_option("--corpus", corpus, "target documents, one per line")->required();
    app.add_option("--queries", queries, "query documents, one per line")->required();
    app.add_option("--stopwords", stopwords, "stopword list, one per line");
    app.add_option("--lambda", cfg.solver.lambda, "entropic regularization strength")
        ->capture_default_str();
    app.add_option("--max-iter", cfg.solver.max_iter, "scaling iterations (cap)")
        ->capture_default_str();
    app.add_option("--tol", cfg.solver.tol, "convergence threshold on max |dx|")
        ->capture_default_str();
    app.add_flag("--until-converged", until_converged, "stop once max |dx| <= tol");
    app.add_option("--threads", cfg.workers, "worker threads")->capture_default_str();
    app.add_flag("--check-dense", cfg.check_dense, "cross-check against the dense reference");
    app.add_flag("--parallel-queries", cfg.parallel_queries,
                 "solve queries concurrently, one worker each");
    app.add_option("--bench", bench, "comma-separated worker counts to time, e.g. 1,2,4");
    app.add_option("--bench-output", bench_output, "bench CSV path (default <output>.bench.csv)");
    app.add_option("--output", output, "result CSV path")->required();

    try {
        app.parse(argc, argv);
        if (!bench.empty()) {
            cfg.bench_threads = parse_thread_list(bench);
        }
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : wmd::kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return wmd::kExitUsage;
    }

    cfg.embeddings_path = embeddings;
    cfg.corpus_path = corpus;
    cfg.queries_path = queries;
    cfg.output_path = output;
    if (!stopwords.empty()) {
        cfg.stopwords_path = stopwords;
    }
    if (!bench_output.empty()) {
        cfg.bench_output_path = bench_output;
    }
    if (until_converged) {
        cfg.solver.mode = wmd::SolverMode::until_converged;
    }
    return wmd::run_batch(cfg, std::cerr);
}
