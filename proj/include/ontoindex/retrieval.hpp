#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ontoindex/indexer.hpp"
#include "ontoindex/ontology.hpp"

namespace ontoindex {

inline constexpr std::size_t kBucketCount = kMaxSubDominating + 1;

/// Percent of the requested count drawn from each bucket: the dominating
/// term's primary list, then the four sub-dominating secondary lists.
inline constexpr std::array<unsigned, kBucketCount> kBucketPercent{50, 20, 15, 10, 5};

/// Which attachment list supplied a result: 0 = primary, 1..4 = sub-term rank.
enum class Bucket : unsigned { primary = 0, sub1, sub2, sub3, sub4 };

std::string_view bucket_name(Bucket b);

struct Query {
    std::string dominating;
    std::vector<std::string> sub_dominating; // 0..4, priority order
    double range_lo = 0.0;                   // closed interval on page relevance
    double range_hi = 0.0;
    std::size_t count = 0;                   // x, the number of results wanted
};

/// Throws InvalidQueryError on a broken Query invariant.
void validate_query(const Query& query);

struct ResultEntry {
    std::string page_id;
    double relevance = 0.0;
    Bucket source = Bucket::primary;

    bool operator==(const ResultEntry&) const = default;
};

struct ResultList {
    std::vector<ResultEntry> entries;
    std::size_t requested = 0;

    std::size_t fulfilled() const noexcept { return entries.size(); }
    bool operator==(const ResultList&) const = default;
};

/// Integer bucket sizes summing to x. Shares of absent sub-terms fold into the
/// primary bucket; fractions are settled by largest remainder, ties going to
/// the higher-priority bucket.
std::array<std::size_t, kBucketCount> quotas(std::size_t x, std::size_t num_sub);

/// Per-query instrumentation.
struct SearchStats {
    std::size_t lookup_comparisons = 0; // term-table binary search steps
    std::size_t postings_examined = 0;
};

/// Indexed retrieval. Throws InvalidQueryError or TermNotFoundError.
ResultList search(const AttachmentIndex& index, const Query& query, SearchStats* stats = nullptr);

/// Unindexed baseline: rebuilds each bucket by scanning every extraction.
/// Produces the same ResultList as `search` over the index built from the
/// same extractions.
ResultList linear_scan_search(const Ontology& ontology, std::span<const Extraction> extractions, const Query& query);

/// Stored (min, max) page relevance. Throws NoBoundsError on an empty index.
std::pair<double, double> relevance_bounds(const AttachmentIndex& index);

} // namespace ontoindex
