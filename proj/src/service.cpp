#include "ontoindex/service.hpp"

#include <httplib.h>
#include <json.hpp>

#include "ontoindex/error.hpp"

namespace ontoindex {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ApiResponse error_response(int status, std::string_view message) {
    return {status, ordered_json{{"error", message}}.dump()};
}

ApiResponse not_ready() {
    return error_response(503, "index not loaded");
}

} // namespace

std::shared_ptr<const Snapshot> build_snapshot(Ontology ontology, const std::vector<Document>& docs,
                                               double relevance_limit, ScoreOptions options) {
    IngestResult ingested = ingest(docs, ontology, relevance_limit, options);
    BuildResult built = build_index(ingested.profiles, ontology);

    UrlMap urls;
    for (const auto& doc : docs) {
        urls.emplace(doc.page_id, doc.url);
    }
    auto snapshot = std::make_shared<Snapshot>(Snapshot{std::move(ontology), std::move(built.index), std::move(urls),
                                                        docs.size(), ingested.below_limit.size(),
                                                        built.report.skipped_pages.size(), "corpus"});
    return snapshot;
}

std::shared_ptr<const Snapshot> snapshot_from_index(Ontology ontology, AttachmentIndex index, UrlMap urls) {
    const auto names = ontology.names();
    if (!std::equal(names.begin(), names.end(), index.term_names.begin(), index.term_names.end())) {
        throw Error("index term table does not match the ontology");
    }
    const std::size_t pages = index.page_count();
    return std::make_shared<Snapshot>(
        Snapshot{std::move(ontology), std::move(index), std::move(urls), pages, 0, 0, "index"});
}

std::string render_results(const ResultList& results, const UrlMap& urls) {
    ordered_json doc;
    doc["requested"] = results.requested;
    doc["fulfilled"] = results.fulfilled();
    doc["results"] = ordered_json::array();
    for (const auto& entry : results.entries) {
        auto it = urls.find(entry.page_id);
        doc["results"].push_back({{"page_id", entry.page_id},
                                  {"url", it == urls.end() ? ordered_json(nullptr) : ordered_json(it->second)},
                                  {"relevance", entry.relevance},
                                  {"source", bucket_name(entry.source)}});
    }
    return doc.dump();
}

Query parse_search_request(std::string_view body) {
    json doc;
    try {
        doc = json::parse(body);
    } catch (const json::parse_error&) {
        throw InvalidQueryError("request body is not valid JSON");
    }
    if (!doc.is_object()) {
        throw InvalidQueryError("request body must be a JSON object");
    }

    Query q;
    if (!doc.contains("dominating") || doc["dominating"].is_null() ||
        (doc["dominating"].is_string() && doc["dominating"].get<std::string>().empty())) {
        throw InvalidQueryError("dominating term is mandatory");
    }
    if (!doc["dominating"].is_string()) {
        throw InvalidQueryError("dominating must be a string");
    }
    q.dominating = doc["dominating"].get<std::string>();

    if (doc.contains("sub_dominating") && !doc["sub_dominating"].is_null()) {
        const auto& subs = doc["sub_dominating"];
        if (!subs.is_array()) {
            throw InvalidQueryError("sub_dominating must be a list of term names");
        }
        for (const auto& s : subs) {
            if (!s.is_string()) {
                throw InvalidQueryError("sub_dominating must be a list of term names");
            }
            q.sub_dominating.push_back(s.get<std::string>());
        }
    }

    if (!doc.contains("range") || !doc["range"].is_object()) {
        throw InvalidQueryError("relevance range is mandatory");
    }
    const auto& range = doc["range"];
    if (!range.contains("from") || !range["from"].is_number() || !range.contains("to") || !range["to"].is_number()) {
        throw InvalidQueryError("relevance range needs numeric from and to");
    }
    q.range_lo = range["from"].get<double>();
    q.range_hi = range["to"].get<double>();

    if (!doc.contains("count") || doc["count"].is_null()) {
        throw InvalidQueryError("number of search results is mandatory");
    }
    if (!doc["count"].is_number_integer() || doc["count"].get<long long>() < 1) {
        throw InvalidQueryError("number of search results must be a positive integer");
    }
    q.count = doc["count"].get<std::size_t>();

    validate_query(q);
    return q;
}

void SearchService::replace(std::shared_ptr<const Snapshot> snapshot) {
    std::lock_guard lock(mutex_);
    snapshot_ = std::move(snapshot);
}

std::shared_ptr<const Snapshot> SearchService::snapshot() const {
    std::lock_guard lock(mutex_);
    return snapshot_;
}

ApiResponse SearchService::terms() const {
    const auto snap = snapshot();
    if (!snap) {
        return not_ready();
    }
    ordered_json doc;
    doc["domain"] = snap->ontology.domain();
    doc["terms"] = ordered_json::array();
    for (const auto& name : snap->ontology.names()) {
        doc["terms"].push_back(name);
    }
    return {200, doc.dump()};
}

ApiResponse SearchService::bounds() const {
    const auto snap = snapshot();
    if (!snap) {
        return not_ready();
    }
    try {
        const auto [lo, hi] = relevance_bounds(snap->index);
        return {200, ordered_json{{"min", lo}, {"max", hi}}.dump()};
    } catch (const NoBoundsError& e) {
        return error_response(404, e.what());
    }
}

ApiResponse SearchService::search(std::string_view body) const {
    const auto snap = snapshot();
    if (!snap) {
        return not_ready();
    }
    try {
        const Query q = parse_search_request(body);
        return {200, render_results(ontoindex::search(snap->index, q), snap->urls)};
    } catch (const InvalidQueryError& e) {
        return error_response(400, e.what());
    } catch (const TermNotFoundError& e) {
        return error_response(404, e.what());
    }
}

ApiResponse SearchService::stats() const {
    const auto snap = snapshot();
    if (!snap) {
        return not_ready();
    }
    ordered_json doc;
    doc["domain"] = snap->ontology.domain();
    doc["k"] = snap->ontology.size();
    doc["corpus_size"] = snap->corpus_size;
    doc["indexed_pages"] = snap->index.page_count();
    doc["below_relevance_limit"] = snap->below_limit;
    doc["skipped_pages"] = snap->skipped;
    doc["source"] = snap->source;
    return {200, doc.dump()};
}

void SearchService::mount(httplib::Server& server, const std::optional<std::filesystem::path>& ui_dir) const {
    auto reply = [](httplib::Response& res, const ApiResponse& api) {
        res.status = api.status;
        res.set_content(api.body, "application/json");
    };
    server.Get("/api/terms", [this, reply](const httplib::Request&, httplib::Response& res) { reply(res, terms()); });
    server.Get("/api/bounds", [this, reply](const httplib::Request&, httplib::Response& res) { reply(res, bounds()); });
    server.Get("/api/stats", [this, reply](const httplib::Request&, httplib::Response& res) { reply(res, stats()); });
    server.Post("/api/search", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, search(req.body));
    });
    if (ui_dir) {
        server.set_mount_point("/", ui_dir->string());
    }
}

} // namespace ontoindex
