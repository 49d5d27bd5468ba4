#include "ontoindex/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <unordered_map>

#include <json.hpp>

#include "ontoindex/error.hpp"

namespace ontoindex {

using nlohmann::ordered_json;

namespace {

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n == 0) {
        return 0.0;
    }
    return n % 2 == 1 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

template <typename F>
double seconds_per_query(const std::vector<Query>& queries, F&& run) {
    std::size_t sink = 0;
    const auto start = std::chrono::steady_clock::now();
    for (const auto& q : queries) {
        sink += run(q).fulfilled();
    }
    const auto stop = std::chrono::steady_clock::now();
    // keep the work observable
    static volatile std::size_t observed = 0;
    observed = observed + sink;
    const double total = std::chrono::duration<double>(stop - start).count();
    return std::max(total, 1e-9) / static_cast<double>(std::max<std::size_t>(queries.size(), 1));
}

} // namespace

std::vector<Query> standard_queries(const AttachmentIndex& index, const std::vector<Extraction>& extractions) {
    std::vector<Query> queries;
    if (index.empty()) {
        return queries;
    }
    const auto [lo, hi] = relevance_bounds(index);

    std::unordered_map<std::string, std::map<std::string, std::size_t>> co_sub;
    for (const auto& ex : extractions) {
        auto& freq = co_sub[ex.dominating];
        for (const auto& sub : ex.sub_dominating) {
            ++freq[sub];
        }
    }

    for (std::size_t t = 0; t < index.term_names.size(); ++t) {
        if (index.attachments[t].primary.empty()) {
            continue;
        }
        Query q;
        q.dominating = index.term_names[t];
        q.range_lo = lo;
        q.range_hi = hi;
        q.count = 1;
        std::vector<std::pair<std::string, std::size_t>> ranked(co_sub[q.dominating].begin(),
                                                                co_sub[q.dominating].end());
        std::stable_sort(ranked.begin(), ranked.end(),
                         [](const auto& a, const auto& b) { return a.second > b.second; });
        for (std::size_t i = 0; i < ranked.size() && i < kMaxSubDominating; ++i) {
            q.sub_dominating.push_back(ranked[i].first);
        }
        queries.push_back(std::move(q));
    }
    return queries;
}

BenchReport run_bench(const Ontology& ontology, const BuildResult& built, const BenchOptions& options) {
    BenchReport report;
    std::vector<Query> queries = standard_queries(built.index, built.extractions);
    if (options.max_queries > 0 && queries.size() > options.max_queries) {
        queries.resize(options.max_queries);
    }
    report.queries = queries.size();
    const std::size_t reps = std::max<std::size_t>(options.repetitions, 5);

    for (const std::size_t x : options.counts) {
        for (auto& q : queries) {
            q.count = x;
        }
        for (const auto& q : queries) {
            if (search(built.index, q) != linear_scan_search(ontology, built.extractions, q)) {
                throw Error("indexed and linear-scan results differ for dominating term '" + q.dominating +
                            "' at x=" + std::to_string(x));
            }
        }

        std::vector<double> scan_times;
        std::vector<double> indexed_times;
        for (std::size_t r = 0; r < reps; ++r) {
            scan_times.push_back(seconds_per_query(
                queries, [&](const Query& q) { return linear_scan_search(ontology, built.extractions, q); }));
            indexed_times.push_back(seconds_per_query(queries, [&](const Query& q) { return search(built.index, q); }));
        }

        BenchRow row;
        row.x = x;
        row.scan_seconds = median(scan_times);
        row.indexed_seconds = median(indexed_times);
        row.corpus_size = built.index.page_count();
        row.repetitions = reps;
        row.speedup = row.scan_seconds / row.indexed_seconds;
        report.rows.push_back(row);
    }
    return report;
}

AccuracyReport run_accuracy(const BuildResult& built, const Manifest& manifest, const std::vector<std::size_t>& counts) {
    std::unordered_map<std::string_view, const PlantedPage*> planted;
    for (const auto& page : manifest.pages) {
        planted.emplace(page.page_id, &page);
    }

    AccuracyReport report;
    std::vector<Query> queries = standard_queries(built.index, built.extractions);
    for (const std::size_t x : counts) {
        AccuracyRow row;
        row.x = x;
        row.corpus_size = built.index.page_count();
        row.queries = queries.size();
        for (auto& q : queries) {
            q.count = x;
            const ResultList result = search(built.index, q);
            std::size_t relevant = 0;
            for (const auto& entry : result.entries) {
                auto it = planted.find(entry.page_id);
                if (it != planted.end() && manifest.lists(*it->second, q.dominating)) {
                    ++relevant;
                }
            }
            row.relevant_total += relevant;
            row.non_relevant_total += x - relevant;
            row.shortfall_total += x - result.fulfilled();
        }
        if (row.queries > 0) {
            row.avg_relevant = static_cast<double>(row.relevant_total) / static_cast<double>(row.queries);
            row.avg_non_relevant = static_cast<double>(row.non_relevant_total) / static_cast<double>(row.queries);
        }
        report.rows.push_back(row);
    }
    return report;
}

std::string format_bench(const BenchReport& report) {
    std::string out = "Number of Search Results | Linear scan (s/query) | Indexed (s/query) | Speedup | Pages | Reps\n";
    char line[256];
    for (const auto& r : report.rows) {
        std::snprintf(line, sizeof line, "%24zu | %21.9f | %17.9f | %7.2f | %5zu | %4zu\n", r.x, r.scan_seconds,
                      r.indexed_seconds, r.speedup, r.corpus_size, r.repetitions);
        out += line;
    }
    return out;
}

std::string bench_to_json(const BenchReport& report) {
    ordered_json doc;
    doc["queries"] = report.queries;
    doc["rows"] = ordered_json::array();
    for (const auto& r : report.rows) {
        doc["rows"].push_back({{"x", r.x},
                               {"scan_seconds", r.scan_seconds},
                               {"indexed_seconds", r.indexed_seconds},
                               {"corpus_size", r.corpus_size},
                               {"repetitions", r.repetitions},
                               {"speedup", r.speedup}});
    }
    return doc.dump(2);
}

std::string format_accuracy(const AccuracyReport& report) {
    std::string out = "Number of Search Results | Avg. Relevant | Avg. Non-Relevant | Pages | Queries\n";
    char line[256];
    for (const auto& r : report.rows) {
        std::snprintf(line, sizeof line, "%24zu | %13.2f | %17.2f | %5zu | %7zu\n", r.x, r.avg_relevant,
                      r.avg_non_relevant, r.corpus_size, r.queries);
        out += line;
    }
    return out;
}

std::string accuracy_to_json(const AccuracyReport& report) {
    ordered_json doc;
    doc["rows"] = ordered_json::array();
    for (const auto& r : report.rows) {
        doc["rows"].push_back({{"x", r.x},
                               {"avg_relevant", r.avg_relevant},
                               {"avg_non_relevant", r.avg_non_relevant},
                               {"corpus_size", r.corpus_size},
                               {"queries", r.queries},
                               {"relevant_total", r.relevant_total},
                               {"non_relevant_total", r.non_relevant_total},
                               {"shortfall_total", r.shortfall_total}});
    }
    return doc.dump(2);
}

} // namespace ontoindex
