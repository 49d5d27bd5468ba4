#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ontoindex/corpus.hpp"
#include "ontoindex/indexer.hpp"
#include "ontoindex/ontology.hpp"
#include "ontoindex/retrieval.hpp"

namespace httplib {
class Server;
}

namespace ontoindex {

using UrlMap = std::unordered_map<std::string, std::string>;

/// Everything a query needs, frozen. Replaced wholesale on rebuild.
struct Snapshot {
    Ontology ontology;
    AttachmentIndex index;
    UrlMap urls;
    std::size_t corpus_size = 0;   // documents read
    std::size_t below_limit = 0;   // dropped by the relevance limit
    std::size_t skipped = 0;       // no ontology term occurrences
    std::string source;
};

/// Scores the corpus, applies the relevance limit and builds the index.
std::shared_ptr<const Snapshot> build_snapshot(Ontology ontology, const std::vector<Document>& docs,
                                               double relevance_limit, ScoreOptions options = {});

/// Wraps a prebuilt index. Throws Error if the index's term table differs
/// from the ontology's.
std::shared_ptr<const Snapshot> snapshot_from_index(Ontology ontology, AttachmentIndex index, UrlMap urls = {});

/// JSON rendering shared by the CLI and the HTTP API:
/// {"requested": x, "fulfilled": n, "results": [{"page_id", "url", "relevance", "source"}]}.
/// "url" is null when unknown.
std::string render_results(const ResultList& results, const UrlMap& urls);

/// Reads the POST /api/search body. Throws InvalidQueryError.
Query parse_search_request(std::string_view body);

struct ApiResponse {
    int status = 200;
    std::string body;
};

/// HTTP front end over an atomically swappable snapshot. Handlers are plain
/// member functions so they can be exercised without a socket.
class SearchService {
public:
    SearchService() = default;
    explicit SearchService(std::shared_ptr<const Snapshot> snapshot) : snapshot_(std::move(snapshot)) {}

    /// In-flight requests keep the snapshot they started with.
    void replace(std::shared_ptr<const Snapshot> snapshot);
    std::shared_ptr<const Snapshot> snapshot() const;

    ApiResponse terms() const;
    ApiResponse bounds() const;
    ApiResponse search(std::string_view body) const;
    ApiResponse stats() const;

    /// Registers the /api routes, plus static files from `ui_dir` when given.
    void mount(httplib::Server& server, const std::optional<std::filesystem::path>& ui_dir = std::nullopt) const;

private:
    mutable std::mutex mutex_;
    std::shared_ptr<const Snapshot> snapshot_;
};

} // namespace ontoindex
