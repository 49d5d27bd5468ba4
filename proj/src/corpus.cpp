#include "ontoindex/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "ontoindex/error.hpp"

namespace ontoindex {

using nlohmann::json;

namespace {

bool matches_at(const TokenList& tokens, std::size_t at, const TokenList& pattern) {
    if (pattern.size() > tokens.size() - at) {
        return false;
    }
    return std::equal(pattern.begin(), pattern.end(), tokens.begin() + static_cast<std::ptrdiff_t>(at));
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw CorpusError("cannot read " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace

std::uint64_t count_occurrences(const TokenList& tokens, const OntologyTerm& term) {
    std::vector<TokenList> patterns;
    patterns.push_back(tokenize(term.name));
    for (const auto& synonym : term.synonyms) {
        patterns.push_back(tokenize(synonym));
    }
    std::erase_if(patterns, [](const TokenList& p) { return p.empty(); });
    std::stable_sort(patterns.begin(), patterns.end(),
                     [](const TokenList& a, const TokenList& b) { return a.size() > b.size(); });

    std::uint64_t count = 0;
    std::size_t i = 0;
    while (i < tokens.size()) {
        std::size_t advance = 1;
        for (const auto& pattern : patterns) {
            if (matches_at(tokens, i, pattern)) {
                ++count;
                advance = pattern.size();
                break;
            }
        }
        i += advance;
    }
    return count;
}

PageProfile score_page(const Document& doc, const Ontology& ontology, ScoreOptions options) {
    const TokenList tokens = tokenize(options.strip_html ? strip_tags(doc.content) : doc.content);
    const auto& groups = ontology.patterns_by_first_token();

    // Each term is matched independently; next_free[t] is the first token
    // position term t may start a new match at.
    std::vector<std::size_t> next_free(ontology.size(), 0);
    std::vector<std::uint64_t> counts(ontology.size(), 0);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        auto it = groups.find(tokens[i]);
        if (it == groups.end()) {
            continue;
        }
        for (const Pattern& pattern : it->second) {
            if (next_free[pattern.term] > i || !matches_at(tokens, i, pattern.tokens)) {
                continue;
            }
            ++counts[pattern.term];
            next_free[pattern.term] = i + pattern.tokens.size();
        }
    }

    PageProfile profile;
    profile.page_id = doc.page_id;
    profile.url = doc.url;
    for (std::size_t t = 0; t < counts.size(); ++t) {
        if (counts[t] == 0) {
            continue;
        }
        const auto& term = ontology.term(t);
        profile.term_stats.emplace(term.name, TermStat{counts[t], term.weight * static_cast<double>(counts[t])});
    }
    for (const auto& [name, stat] : profile.term_stats) {
        profile.relevance += stat.trv;
    }
    return profile;
}

IngestResult ingest(const std::vector<Document>& docs, const Ontology& ontology, double relevance_limit,
                    ScoreOptions options) {
    IngestResult result;
    result.profiles.reserve(docs.size());
    for (const auto& doc : docs) {
        PageProfile profile = score_page(doc, ontology, options);
        if (is_domain_page(profile, relevance_limit)) {
            result.profiles.push_back(std::move(profile));
        } else {
            result.below_limit.push_back(doc.page_id);
        }
    }
    return result;
}

std::vector<Document> load_corpus(const std::filesystem::path& path) {
    namespace fs = std::filesystem;
    std::vector<Document> docs;
    std::error_code ec;
    if (fs::is_directory(path, ec)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(path)) {
            if (entry.is_regular_file()) {
                files.push_back(entry.path());
            }
        }
        std::sort(files.begin(), files.end());
        for (const auto& file : files) {
            docs.push_back({file.stem().string(), file.string(), read_file(file)});
        }
    } else if (fs::is_regular_file(path, ec)) {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            throw CorpusError("cannot read " + path.string());
        }
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.find_first_not_of(" \t\r") == std::string::npos) {
                continue;
            }
            json record;
            try {
                record = json::parse(line);
            } catch (const json::parse_error& e) {
                throw CorpusError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
            }
            if (!record.is_object() || !record.contains("id") || !record["id"].is_string() ||
                !record.contains("content") || !record["content"].is_string()) {
                throw CorpusError(path.string() + ":" + std::to_string(line_no) +
                                  ": record needs string \"id\" and \"content\"");
            }
            Document doc;
            doc.page_id = record["id"].get<std::string>();
            doc.url = record.value("url", std::string{});
            doc.content = record["content"].get<std::string>();
            docs.push_back(std::move(doc));
        }
    } else {
        throw CorpusError("corpus path does not exist: " + path.string());
    }

    std::unordered_set<std::string> seen;
    for (const auto& doc : docs) {
        if (!seen.insert(doc.page_id).second) {
            throw DuplicatePageError(doc.page_id);
        }
    }
    return docs;
}

void write_corpus_jsonl(std::ostream& out, const std::vector<Document>& docs) {
    for (const auto& doc : docs) {
        out << json{{"id", doc.page_id}, {"url", doc.url}, {"content", doc.content}}.dump() << '\n';
    }
}

void write_profiles(std::ostream& out, const std::vector<PageProfile>& profiles) {
    for (const auto& profile : profiles) {
        json terms = json::object();
        for (const auto& [name, stat] : profile.term_stats) {
            terms[name] = json::array({stat.count, stat.trv});
        }
        out << json{{"page_id", profile.page_id},
                    {"url", profile.url},
                    {"relevance", profile.relevance},
                    {"terms", std::move(terms)}}
                   .dump()
            << '\n';
    }
}

std::vector<PageProfile> read_profiles(std::istream& in) {
    std::vector<PageProfile> profiles;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            const json record = json::parse(line);
            PageProfile profile;
            profile.page_id = record.at("page_id").get<std::string>();
            profile.url = record.value("url", std::string{});
            profile.relevance = record.at("relevance").get<double>();
            for (const auto& [name, stat] : record.at("terms").items()) {
                profile.term_stats.emplace(name, TermStat{stat.at(0).get<std::uint64_t>(), stat.at(1).get<double>()});
            }
            profiles.push_back(std::move(profile));
        } catch (const json::exception& e) {
            throw CorpusError("profiles line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return profiles;
}

} // namespace ontoindex
