#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ontoindex/corpus.hpp"
#include "ontoindex/ontology.hpp"

namespace ontoindex {

/// Number of sub-dominating terms kept per page. The retrieval quota table
/// has one bucket per sub-dominating rank, so this is not configurable.
inline constexpr std::size_t kMaxSubDominating = 4;

/// A page's dominating term and up to four sub-dominating terms, in rank order.
struct Extraction {
    std::string page_id;
    std::string dominating;
    std::vector<std::string> sub_dominating;
    double relevance = 0.0;

    bool operator==(const Extraction&) const = default;
};

/// Ranks the profile's terms by trv descending, then weight ascending (equal
/// trv with a lower weight means more occurrences), then name ascending.
/// Throws NoDominatingTermError for an empty profile and TermNotFoundError
/// when the profile names a term absent from the ontology.
Extraction extract(const PageProfile& profile, const Ontology& ontology);

struct Posting {
    std::string page_id;
    double relevance = 0.0;

    bool operator==(const Posting&) const = default;
};

/// Posting order: relevance descending, then page id ascending.
inline bool posting_before(const Posting& a, const Posting& b) {
    if (a.relevance != b.relevance) {
        return a.relevance > b.relevance;
    }
    return a.page_id < b.page_id;
}

struct TermAttachments {
    std::vector<Posting> primary;   // pages whose dominating term this is
    std::vector<Posting> secondary; // pages listing this as a sub-dominating term

    bool operator==(const TermAttachments&) const = default;
};

/// Primary/secondary attachment tables for every ontology term. `term_names`
/// is sorted and parallel to `attachments`.
struct AttachmentIndex {
    std::string domain;
    std::vector<std::string> term_names;
    std::vector<TermAttachments> attachments;
    std::optional<double> min_relevance; // unset when no page is indexed
    std::optional<double> max_relevance;

    LookupResult find(std::string_view name) const;
    const TermAttachments& at(std::size_t position) const { return attachments.at(position); }

    std::size_t term_count() const noexcept { return term_names.size(); }
    /// Number of indexed pages (one primary posting each).
    std::size_t page_count() const noexcept;
    bool empty() const noexcept { return page_count() == 0; }

    bool operator==(const AttachmentIndex&) const = default;
};

/// Checks every structural invariant of a finished index. Returns a
/// description of the first violation, or nullopt when the index is sound.
std::optional<std::string> check_index(const AttachmentIndex& index);

struct BuildReport {
    std::size_t profiles_visited = 0;
    std::size_t pages_indexed = 0;
    std::vector<std::string> skipped_pages; // no ontology-term occurrences
};

struct BuildResult {
    AttachmentIndex index;
    std::vector<Extraction> extractions; // one per indexed page, input order
    BuildReport report;
};

/// Throws DuplicatePageError when two profiles share a page id.
BuildResult build_index(std::span<const PageProfile> profiles, const Ontology& ontology);

} // namespace ontoindex
