#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ontoindex/ontology.hpp"
#include "ontoindex/text.hpp"

namespace ontoindex {

struct Document {
    std::string page_id;
    std::string url;
    std::string content;
};

struct TermStat {
    std::uint64_t count = 0;
    double trv = 0.0; // term relevance value: weight * count

    bool operator==(const TermStat&) const = default;
};

/// Per-page scoring result. Only terms with a nonzero count are present;
/// `relevance` is the sum of every trv, accumulated in term-name order.
struct PageProfile {
    std::string page_id;
    std::string url;
    std::map<std::string, TermStat> term_stats;
    double relevance = 0.0;

    bool operator==(const PageProfile&) const = default;
};

struct ScoreOptions {
    bool strip_html = false;
};

/// Occurrences of the term's name plus each synonym, matched as consecutive
/// token runs, greedy left to right with the longest pattern tried first.
std::uint64_t count_occurrences(const TokenList& tokens, const OntologyTerm& term);

PageProfile score_page(const Document& doc, const Ontology& ontology, ScoreOptions options = {});

inline bool is_domain_page(const PageProfile& profile, double relevance_limit) {
    return profile.relevance >= relevance_limit;
}

struct IngestResult {
    std::vector<PageProfile> profiles;     // pages at or above the relevance limit
    std::vector<std::string> below_limit;  // page ids filtered out
};

/// Scores every document and keeps the domain pages.
IngestResult ingest(const std::vector<Document>& docs, const Ontology& ontology, double relevance_limit = 0.0,
                    ScoreOptions options = {});

/// Reads a corpus from either a directory of text files (page id = file stem,
/// url = file path) or a JSON-lines file of {"id", "url", "content"} records.
/// Throws CorpusError on unreadable input and DuplicatePageError on id reuse.
std::vector<Document> load_corpus(const std::filesystem::path& path);

void write_corpus_jsonl(std::ostream& out, const std::vector<Document>& docs);

/// Profiles as JSON lines: {"page_id", "url", "relevance", "terms": {name: [count, trv]}}.
void write_profiles(std::ostream& out, const std::vector<PageProfile>& profiles);
std::vector<PageProfile> read_profiles(std::istream& in);

} // namespace ontoindex
