#pragma once

#include "wmd/doc_matrix.hpp"
#include "wmd/ingest.hpp"
#include "wmd/query.hpp"
#include "wmd/sinkhorn.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wmd {

/// Exit codes of the batch front end.
enum ExitStatus : int {
    kExitOk = 0,
    kExitSolverFailure = 1,
    kExitUsage = 2,
};

struct RunConfig {
    std::filesystem::path embeddings_path;
    std::filesystem::path corpus_path;
    std::filesystem::path queries_path;
    std::optional<std::filesystem::path> stopwords_path;
    SolverConfig solver;
    std::size_t workers = 1;
    bool check_dense = false;
    /// Solve independent queries concurrently, one worker each.
    bool parallel_queries = false;
    std::filesystem::path output_path;
    std::vector<std::size_t> bench_threads;
    std::optional<std::filesystem::path> bench_output_path;
};

/// Largest v_r * N for which the dense cross-check is attempted.
inline constexpr std::size_t kDenseCheckLimit = 1'000'000;
/// Largest V * N dense intermediate the cross-check may materialize.
inline constexpr std::size_t kDenseCellLimit = 50'000'000;
/// Allowed |sparse - dense| before a run is flagged as a verification failure.
inline constexpr double kDenseCheckTolerance = 1e-8;

/// Outcome for one query line.
struct QueryOutcome {
    std::size_t query_id = 0;
    std::vector<double> wmd;
    /// Set when the dense cross-check ran for this query.
    std::optional<std::vector<double>> dense_wmd;
    /// Non-empty when the query failed; wmd is then empty.
    std::string error;
};

/// Everything the batch needs, already parsed.
struct BatchInputs {
    EmbeddingMatrix emb;
    DocMatrix corpus;
    std::vector<TokenList> queries;
    IngestStats stats;
};

BatchInputs load_inputs(const RunConfig& cfg);

/// Solves every query; per-query failures are recorded, not thrown.
std::vector<QueryOutcome> solve_queries(const BatchInputs& inputs, const RunConfig& cfg);

/// CSV with header `query_id,doc_id,wmd` (plus `dense_wmd` when with_dense).
/// Throws std::invalid_argument when results is empty.
void write_csv(std::span<const QueryOutcome> results, std::ostream& sink, bool with_dense);

/// Same, to a file; nothing is created when results is empty.
void write_csv_file(std::span<const QueryOutcome> results, const std::filesystem::path& path,
                    bool with_dense);

/// Round-trip decimal form (%.17g).
std::string format_double(double value);

/// Loads inputs, solves, writes CSV. Log lines go to `log`.
int run_batch(const RunConfig& cfg, std::ostream& log);

struct BenchRow {
    std::size_t threads = 0;
    std::size_t query_id = 0;
    double seconds = 0.0;
    double speedup = 0.0;
    std::size_t iterations = 0;
    std::size_t v_r = 0;
    std::size_t nnz = 0;
};

struct BenchReport {
    std::vector<BenchRow> rows;
};

/// Times the per-query solve for each worker count, after one untimed
/// warm-up. A 1-worker baseline is added when missing so speedup is defined.
/// Throws DeterminismViolation if any worker count disagrees bitwise.
BenchReport run_bench(const EmbeddingMatrix& emb, const DocMatrix& corpus,
                      std::span<const QueryHistogram> queries, const SolverConfig& solver,
                      std::span<const std::size_t> thread_counts);

/// File-driven variant over cfg.queries_path.
BenchReport run_bench(const RunConfig& cfg);

/// `threads,query_id,seconds,speedup,iterations,v_r,nnz`
void write_bench_csv(const BenchReport& report, std::ostream& sink);

} // namespace wmd
