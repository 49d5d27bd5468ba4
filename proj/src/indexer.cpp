#include "ontoindex/indexer.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "ontoindex/error.hpp"

namespace ontoindex {

namespace {

struct RankedTerm {
    const std::string* name;
    double trv;
    double weight;
};

bool ranks_before(const RankedTerm& a, const RankedTerm& b) {
    if (a.trv != b.trv) {
        return a.trv > b.trv;
    }
    if (a.weight != b.weight) {
        return a.weight < b.weight;
    }
    return *a.name < *b.name;
}

} // namespace

Extraction extract(const PageProfile& profile, const Ontology& ontology) {
    std::vector<RankedTerm> ranked;
    ranked.reserve(profile.term_stats.size());
    for (const auto& [name, stat] : profile.term_stats) {
        if (stat.count == 0) {
            continue;
        }
        const auto found = ontology.lookup_term(name);
        if (!found) {
            throw TermNotFoundError(name);
        }
        ranked.push_back({&name, stat.trv, ontology.term(*found.position).weight});
    }
    if (ranked.empty()) {
        throw NoDominatingTermError(profile.page_id);
    }

    const std::size_t keep = std::min(ranked.size(), kMaxSubDominating + 1);
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep), ranked.end(), ranks_before);

    Extraction out;
    out.page_id = profile.page_id;
    out.relevance = profile.relevance;
    out.dominating = *ranked.front().name;
    for (std::size_t i = 1; i < keep; ++i) {
        out.sub_dominating.push_back(*ranked[i].name);
    }
    return out;
}

LookupResult AttachmentIndex::find(std::string_view name) const {
    return find_sorted(term_names, canonical_phrase(name));
}

std::size_t AttachmentIndex::page_count() const noexcept {
    std::size_t n = 0;
    for (const auto& a : attachments) {
        n += a.primary.size();
    }
    return n;
}

std::optional<std::string> check_index(const AttachmentIndex& index) {
    if (index.term_names.size() != index.attachments.size()) {
        return "term table and attachment table differ in length";
    }
    for (std::size_t i = 1; i < index.term_names.size(); ++i) {
        if (!(index.term_names[i - 1] < index.term_names[i])) {
            return "term names are not strictly sorted at '" + index.term_names[i] + "'";
        }
    }

    auto check_list = [](const std::vector<Posting>& list) {
        for (std::size_t i = 1; i < list.size(); ++i) {
            if (!posting_before(list[i - 1], list[i])) {
                return false;
            }
        }
        return true;
    };

    std::unordered_map<std::string, double> primary_relevance;
    std::unordered_map<std::string, std::size_t> secondary_count;
    std::optional<double> lo;
    std::optional<double> hi;
    for (std::size_t t = 0; t < index.attachments.size(); ++t) {
        const auto& a = index.attachments[t];
        const auto& name = index.term_names[t];
        if (!check_list(a.primary) || !check_list(a.secondary)) {
            return "posting list of '" + name + "' is not ordered by (relevance desc, page id asc)";
        }
        for (const auto& p : a.primary) {
            if (!primary_relevance.emplace(p.page_id, p.relevance).second) {
                return "page '" + p.page_id + "' has more than one primary attachment";
            }
            lo = lo ? std::min(*lo, p.relevance) : p.relevance;
            hi = hi ? std::max(*hi, p.relevance) : p.relevance;
        }
        std::unordered_set<std::string_view> in_list;
        for (const auto& p : a.secondary) {
            if (!in_list.insert(p.page_id).second) {
                return "page '" + p.page_id + "' repeated in secondary list of '" + name + "'";
            }
            if (++secondary_count[p.page_id] > kMaxSubDominating) {
                return "page '" + p.page_id + "' has more than four secondary attachments";
            }
        }
    }
    for (const auto& [page, count] : secondary_count) {
        if (!primary_relevance.contains(page)) {
            return "page '" + page + "' has secondary attachments but no primary attachment";
        }
    }
    if (index.min_relevance != lo || index.max_relevance != hi) {
        return "stored relevance bounds do not match the primary postings";
    }
    return std::nullopt;
}

BuildResult build_index(std::span<const PageProfile> profiles, const Ontology& ontology) {
    BuildResult result;
    AttachmentIndex& index = result.index;
    index.domain = ontology.domain();
    index.term_names.assign(ontology.names().begin(), ontology.names().end());
    index.attachments.resize(index.term_names.size());

    std::unordered_set<std::string_view> seen;
    for (const auto& profile : profiles) {
        ++result.report.profiles_visited;
        if (!seen.insert(profile.page_id).second) {
            throw DuplicatePageError(profile.page_id);
        }
        if (profile.term_stats.empty()) {
            result.report.skipped_pages.push_back(profile.page_id);
            continue;
        }
        Extraction ex = extract(profile, ontology);

        const Posting posting{profile.page_id, profile.relevance};
        index.attachments[*index.find(ex.dominating).position].primary.push_back(posting);
        for (const auto& sub : ex.sub_dominating) {
            index.attachments[*index.find(sub).position].secondary.push_back(posting);
        }
        index.min_relevance = index.min_relevance ? std::min(*index.min_relevance, posting.relevance) : posting.relevance;
        index.max_relevance = index.max_relevance ? std::max(*index.max_relevance, posting.relevance) : posting.relevance;

        result.extractions.push_back(std::move(ex));
        ++result.report.pages_indexed;
    }

    for (auto& a : index.attachments) {
        std::sort(a.primary.begin(), a.primary.end(), posting_before);
        std::sort(a.secondary.begin(), a.secondary.end(), posting_before);
    }
    return result;
}

} // namespace ontoindex
