#include "ontoindex/index_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ontoindex/error.hpp"

namespace ontoindex {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json postings_to_json(const std::vector<Posting>& list) {
    ordered_json out = ordered_json::array();
    for (const auto& p : list) {
        out.push_back(ordered_json::array({p.page_id, p.relevance}));
    }
    return out;
}

std::vector<Posting> postings_from_json(const json& list) {
    if (!list.is_array()) {
        throw IndexFormatError(IndexFormatError::Kind::corrupt, "posting list is not an array");
    }
    std::vector<Posting> out;
    out.reserve(list.size());
    for (const auto& entry : list) {
        if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string() || !entry[1].is_number()) {
            throw IndexFormatError(IndexFormatError::Kind::corrupt, "posting is not a [page_id, relevance] pair");
        }
        out.push_back({entry[0].get<std::string>(), entry[1].get<double>()});
    }
    return out;
}

std::optional<double> bound_from_json(const json& doc, const char* key) {
    if (!doc.contains(key)) {
        throw IndexFormatError(IndexFormatError::Kind::corrupt, std::string("missing \"") + key + "\"");
    }
    const auto& v = doc[key];
    if (v.is_null()) {
        return std::nullopt;
    }
    if (!v.is_number()) {
        throw IndexFormatError(IndexFormatError::Kind::corrupt, std::string("\"") + key + "\" is not a number");
    }
    return v.get<double>();
}

} // namespace

std::string serialize_index(const AttachmentIndex& index) {
    ordered_json doc;
    doc["version"] = kIndexFormatVersion;
    doc["domain"] = index.domain;
    doc["min_relevance"] = index.min_relevance ? ordered_json(*index.min_relevance) : ordered_json(nullptr);
    doc["max_relevance"] = index.max_relevance ? ordered_json(*index.max_relevance) : ordered_json(nullptr);
    ordered_json terms = ordered_json::object();
    for (std::size_t t = 0; t < index.term_names.size(); ++t) {
        terms[index.term_names[t]] = {{"primary", postings_to_json(index.attachments[t].primary)},
                                      {"secondary", postings_to_json(index.attachments[t].secondary)}};
    }
    doc["terms"] = std::move(terms);
    return doc.dump();
}

AttachmentIndex deserialize_index(std::string_view bytes) {
    json doc;
    try {
        doc = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw IndexFormatError(IndexFormatError::Kind::corrupt, std::string("index is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw IndexFormatError(IndexFormatError::Kind::corrupt, "index document is not an object");
    }
    if (!doc.contains("version") || !doc["version"].is_number_integer()) {
        throw IndexFormatError(IndexFormatError::Kind::corrupt, "index has no integer \"version\"");
    }
    if (const auto version = doc["version"].get<long long>(); version != kIndexFormatVersion) {
        throw IndexFormatError(IndexFormatError::Kind::version_mismatch,
                               "unsupported index version " + std::to_string(version) + " (expected " +
                                   std::to_string(kIndexFormatVersion) + ")");
    }
    if (!doc.contains("terms") || !doc["terms"].is_object() || !doc.contains("domain") || !doc["domain"].is_string()) {
        throw IndexFormatError(IndexFormatError::Kind::corrupt, "index lacks \"domain\" or \"terms\"");
    }

    AttachmentIndex index;
    index.domain = doc["domain"].get<std::string>();
    index.min_relevance = bound_from_json(doc, "min_relevance");
    index.max_relevance = bound_from_json(doc, "max_relevance");
    // nlohmann::json objects iterate in key order, which is the lookup order.
    for (const auto& [name, entry] : doc["terms"].items()) {
        if (!entry.is_object() || !entry.contains("primary") || !entry.contains("secondary")) {
            throw IndexFormatError(IndexFormatError::Kind::corrupt, "term '" + name + "' lacks attachment tables");
        }
        index.term_names.push_back(name);
        index.attachments.push_back({postings_from_json(entry["primary"]), postings_from_json(entry["secondary"])});
    }
    if (auto problem = check_index(index)) {
        throw IndexFormatError(IndexFormatError::Kind::corrupt, "index fails validation: " + *problem);
    }
    return index;
}

void save_index(const AttachmentIndex& index, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write index file " + path.string());
    }
    out << serialize_index(index);
    if (!out) {
        throw Error("failed writing index file " + path.string());
    }
}

AttachmentIndex load_index(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open index file " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return deserialize_index(buffer.str());
}

} // namespace ontoindex
