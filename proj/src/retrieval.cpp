#include "ontoindex/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "ontoindex/error.hpp"

namespace ontoindex {

namespace {

using BucketLists = std::array<std::span<const Posting>, kBucketCount>;

/// Canonical names of the dominating term followed by the sub-terms.
std::vector<std::string> canonical_terms(const Query& query) {
    std::vector<std::string> names;
    names.reserve(1 + query.sub_dominating.size());
    names.push_back(canonical_phrase(query.dominating));
    for (const auto& sub : query.sub_dominating) {
        names.push_back(canonical_phrase(sub));
    }
    return names;
}

/// Fills the result from range-filtered bucket lists. First pass: each bucket
/// up to its quota, skipping pages an earlier bucket already took. Second
/// pass: leftover slots drawn in bucket priority order.
ResultList mix(const BucketLists& buckets, const Query& query, std::size_t* examined) {
    const auto quota = quotas(query.count, query.sub_dominating.size());

    struct Pick {
        std::size_t bucket;
        std::size_t position;
    };
    std::size_t available = 0;
    for (const auto& list : buckets) {
        available += list.size();
    }
    const std::size_t bound = std::min(query.count, available);
    std::vector<Pick> picks;
    picks.reserve(bound);
    std::unordered_set<std::string_view> taken;
    taken.reserve(bound * 2);
    std::array<std::size_t, kBucketCount> cursor{};

    auto draw = [&](std::size_t b, std::size_t limit) {
        std::size_t got = 0;
        const auto& list = buckets[b];
        while (got < limit && picks.size() < query.count && cursor[b] < list.size()) {
            const std::size_t pos = cursor[b]++;
            ++*examined;
            if (taken.insert(list[pos].page_id).second) {
                picks.push_back({b, pos});
                ++got;
            }
        }
    };

    for (std::size_t b = 0; b < kBucketCount; ++b) {
        draw(b, quota[b]);
    }
    for (std::size_t b = 0; b < kBucketCount && picks.size() < query.count; ++b) {
        draw(b, query.count - picks.size());
    }

    std::sort(picks.begin(), picks.end(), [](const Pick& a, const Pick& b) {
        return a.bucket != b.bucket ? a.bucket < b.bucket : a.position < b.position;
    });

    ResultList result;
    result.requested = query.count;
    result.entries.reserve(picks.size());
    for (const auto& pick : picks) {
        const Posting& p = buckets[pick.bucket][pick.position];
        result.entries.push_back({p.page_id, p.relevance, static_cast<Bucket>(pick.bucket)});
    }
    return result;
}

std::span<const Posting> in_range(const std::vector<Posting>& list, double lo, double hi) {
    const auto first = std::partition_point(list.begin(), list.end(), [hi](const Posting& p) { return p.relevance > hi; });
    const auto last = std::partition_point(first, list.end(), [lo](const Posting& p) { return p.relevance >= lo; });
    return {first, last};
}

} // namespace

std::string_view bucket_name(Bucket b) {
    switch (b) {
    case Bucket::primary:
        return "primary";
    case Bucket::sub1:
        return "sub1";
    case Bucket::sub2:
        return "sub2";
    case Bucket::sub3:
        return "sub3";
    case Bucket::sub4:
        return "sub4";
    }
    return "unknown";
}

void validate_query(const Query& query) {
    const auto names = canonical_terms(query);
    if (names.front().empty()) {
        throw InvalidQueryError("dominating term is mandatory");
    }
    if (query.sub_dominating.size() > kMaxSubDominating) {
        throw InvalidQueryError("at most four sub-dominating terms may be selected");
    }
    for (std::size_t i = 1; i < names.size(); ++i) {
        if (names[i].empty()) {
            throw InvalidQueryError("sub-dominating term " + std::to_string(i) + " is empty");
        }
    }
    for (std::size_t i = 0; i < names.size(); ++i) {
        for (std::size_t j = i + 1; j < names.size(); ++j) {
            if (names[i] == names[j]) {
                throw InvalidQueryError("term '" + names[i] + "' is selected more than once");
            }
        }
    }
    if (std::isnan(query.range_lo) || std::isnan(query.range_hi) || query.range_lo > query.range_hi) {
        throw InvalidQueryError("relevance range must satisfy from <= to");
    }
    if (query.count < 1) {
        throw InvalidQueryError("number of search results must be at least 1");
    }
}

std::array<std::size_t, kBucketCount> quotas(std::size_t x, std::size_t num_sub) {
    num_sub = std::min(num_sub, kMaxSubDominating);
    std::array<unsigned, kBucketCount> percent{};
    percent[0] = kBucketPercent[0];
    for (std::size_t b = 1; b < kBucketCount; ++b) {
        if (b <= num_sub) {
            percent[b] = kBucketPercent[b];
        } else {
            percent[0] += kBucketPercent[b];
        }
    }

    // Exact integer arithmetic: share_b = percent_b * x / 100.
    std::array<std::size_t, kBucketCount> out{};
    std::array<std::size_t, kBucketCount> remainder{};
    std::size_t assigned = 0;
    for (std::size_t b = 0; b < kBucketCount; ++b) {
        const std::size_t scaled = percent[b] * x;
        out[b] = scaled / 100;
        remainder[b] = scaled % 100;
        assigned += out[b];
    }
    std::array<std::size_t, kBucketCount> order{};
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t i = 0; assigned < x; ++i) {
        ++out[order[i]];
        ++assigned;
    }
    return out;
}

ResultList search(const AttachmentIndex& index, const Query& query, SearchStats* stats) {
    validate_query(query);
    SearchStats local;
    SearchStats& s = stats ? *stats : local;
    s = {};

    BucketLists buckets{};
    const auto names = canonical_terms(query);
    for (std::size_t i = 0; i < names.size(); ++i) {
        const auto found = find_sorted(index.term_names, names[i]);
        s.lookup_comparisons += found.comparisons;
        if (!found) {
            throw TermNotFoundError(names[i]);
        }
        const auto& attachments = index.attachments[*found.position];
        buckets[i] = in_range(i == 0 ? attachments.primary : attachments.secondary, query.range_lo, query.range_hi);
    }
    return mix(buckets, query, &s.postings_examined);
}

ResultList linear_scan_search(const Ontology& ontology, std::span<const Extraction> extractions, const Query& query) {
    validate_query(query);
    const auto names = canonical_terms(query);
    for (const auto& name : names) {
        if (!ontology.lookup_term(name)) {
            throw TermNotFoundError(name);
        }
    }

    std::array<std::vector<Posting>, kBucketCount> lists;
    for (const auto& ex : extractions) {
        if (ex.relevance < query.range_lo || ex.relevance > query.range_hi) {
            continue;
        }
        if (ex.dominating == names[0]) {
            lists[0].push_back({ex.page_id, ex.relevance});
        }
        for (std::size_t i = 1; i < names.size(); ++i) {
            if (std::find(ex.sub_dominating.begin(), ex.sub_dominating.end(), names[i]) != ex.sub_dominating.end()) {
                lists[i].push_back({ex.page_id, ex.relevance});
            }
        }
    }
    BucketLists buckets{};
    for (std::size_t b = 0; b < kBucketCount; ++b) {
        std::sort(lists[b].begin(), lists[b].end(), posting_before);
        buckets[b] = lists[b];
    }
    std::size_t examined = 0;
    return mix(buckets, query, &examined);
}

std::pair<double, double> relevance_bounds(const AttachmentIndex& index) {
    if (!index.min_relevance || !index.max_relevance) {
        throw NoBoundsError();
    }
    return {*index.min_relevance, *index.max_relevance};
}

} // namespace ontoindex
