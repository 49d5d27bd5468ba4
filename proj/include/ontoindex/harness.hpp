#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ontoindex/indexer.hpp"
#include "ontoindex/retrieval.hpp"
#include "ontoindex/synth.hpp"

namespace ontoindex {

/// Fixed evaluation queries: one per term that dominates at least one page,
/// with the four terms most often sub-dominating alongside it (frequency
/// descending, name ascending) and the full index relevance range. `count`
/// is left at 1; harnesses set it per row.
std::vector<Query> standard_queries(const AttachmentIndex& index, const std::vector<Extraction>& extractions);

struct BenchOptions {
    std::vector<std::size_t> counts{10, 20, 30, 40, 50};
    std::size_t repetitions = 5;
    std::size_t max_queries = 0; // 0 = the whole standard query set
};

struct BenchRow {
    std::size_t x = 0;
    double scan_seconds = 0.0;    // median per-query latency, linear scan
    double indexed_seconds = 0.0; // median per-query latency, attachment index
    std::size_t corpus_size = 0;
    std::size_t repetitions = 0;
    double speedup = 0.0;
};

struct BenchReport {
    std::vector<BenchRow> rows;
    std::size_t queries = 0;
};

/// Times linear_scan_search against search for every count. Before timing a
/// row, asserts both paths return identical results for every query and
/// throws Error if they do not.
BenchReport run_bench(const Ontology& ontology, const BuildResult& built, const BenchOptions& options);

struct AccuracyRow {
    std::size_t x = 0;
    double avg_relevant = 0.0;
    double avg_non_relevant = 0.0;
    std::size_t corpus_size = 0;
    std::size_t queries = 0;
    std::size_t relevant_total = 0;
    std::size_t non_relevant_total = 0; // includes unfilled slots
    std::size_t shortfall_total = 0;
};

struct AccuracyReport {
    std::vector<AccuracyRow> rows;
};

/// A result is relevant iff the manifest lists the query's dominating term
/// among the page's intended terms. Each of the x slots counts once: slots a
/// query could not fill count as non-relevant.
AccuracyReport run_accuracy(const BuildResult& built, const Manifest& manifest, const std::vector<std::size_t>& counts);

std::string format_bench(const BenchReport& report);
std::string bench_to_json(const BenchReport& report);
std::string format_accuracy(const AccuracyReport& report);
std::string accuracy_to_json(const AccuracyReport& report);

} // namespace ontoindex
