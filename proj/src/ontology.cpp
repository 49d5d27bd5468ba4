#include "ontoindex/ontology.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ontoindex/error.hpp"

namespace ontoindex {

using nlohmann::json;

LookupResult find_sorted(std::span<const std::string> sorted_names, std::string_view key) {
    LookupResult result;
    std::size_t lo = 0;
    std::size_t hi = sorted_names.size();
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        const int cmp = std::string_view(sorted_names[mid]).compare(key);
        ++result.comparisons;
        if (cmp == 0) {
            result.position = mid;
            return result;
        }
        if (cmp < 0) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    return result;
}

Ontology::Ontology(std::string domain, std::vector<OntologyTerm> terms) : domain_(std::move(domain)) {
    if (terms.empty()) {
        throw OntologyError("ontology has no terms");
    }

    for (auto& term : terms) {
        const std::string raw_name = term.name;
        term.name = canonical_phrase(term.name);
        if (term.name.empty()) {
            throw OntologyError("term name is empty", raw_name);
        }
        if (!std::isfinite(term.weight) || term.weight <= 0.0 || term.weight > 1.0) {
            throw OntologyError("weight out of range (0, 1]", term.name);
        }
        std::vector<std::string> canonical;
        canonical.reserve(term.synonyms.size());
        for (const auto& synonym : term.synonyms) {
            std::string c = canonical_phrase(synonym);
            if (c.empty()) {
                throw OntologyError("synonym is empty", term.name);
            }
            if (c == term.name) {
                throw OntologyError("synonym repeats the term name", term.name);
            }
            if (std::find(canonical.begin(), canonical.end(), c) != canonical.end()) {
                throw OntologyError("duplicate synonym '" + c + "'", term.name);
            }
            canonical.push_back(std::move(c));
        }
        term.synonyms = std::move(canonical);
    }

    std::sort(terms.begin(), terms.end(),
              [](const OntologyTerm& a, const OntologyTerm& b) { return a.name < b.name; });
    for (std::size_t i = 1; i < terms.size(); ++i) {
        if (terms[i].name == terms[i - 1].name) {
            throw OntologyError("duplicate term name", terms[i].name);
        }
    }

    terms_ = std::move(terms);
    names_.reserve(terms_.size());
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        names_.push_back(terms_[i].name);
        owners_.emplace(terms_[i].name, i);
    }
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        for (const auto& synonym : terms_[i].synonyms) {
            if (!owners_.emplace(synonym, i).second) {
                throw OntologyError("synonym '" + synonym + "' collides with another term or synonym",
                                    terms_[i].name);
            }
        }
    }

    for (std::size_t i = 0; i < terms_.size(); ++i) {
        auto add = [&](const std::string& phrase) {
            Pattern p{tokenize(phrase), i};
            by_first_token_[p.tokens.front()].push_back(std::move(p));
        };
        add(terms_[i].name);
        for (const auto& synonym : terms_[i].synonyms) {
            add(synonym);
        }
    }
    for (auto& [first, group] : by_first_token_) {
        std::stable_sort(group.begin(), group.end(), [](const Pattern& a, const Pattern& b) {
            if (a.tokens.size() != b.tokens.size()) {
                return a.tokens.size() > b.tokens.size();
            }
            return a.term < b.term;
        });
    }
}

LookupResult Ontology::lookup_term(std::string_view name) const {
    return find_sorted(names_, canonical_phrase(name));
}

std::optional<std::size_t> Ontology::owner_of(std::string_view phrase) const {
    auto it = owners_.find(canonical_phrase(phrase));
    if (it == owners_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::vector<std::size_t> Ontology::by_weight() const {
    std::vector<std::size_t> order(terms_.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(),
                     [this](std::size_t a, std::size_t b) { return terms_[a].weight > terms_[b].weight; });
    return order;
}

Ontology parse_ontology(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw OntologyError(std::string("malformed ontology document: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("terms") || !doc["terms"].is_array()) {
        throw OntologyError("malformed ontology document: expected an object with a \"terms\" array");
    }
    std::string domain;
    if (doc.contains("domain")) {
        if (!doc["domain"].is_string()) {
            throw OntologyError("malformed ontology document: \"domain\" must be a string");
        }
        domain = doc["domain"].get<std::string>();
    }

    std::vector<OntologyTerm> terms;
    for (const auto& entry : doc["terms"]) {
        if (!entry.is_object() || !entry.contains("name") || !entry["name"].is_string()) {
            throw OntologyError("malformed ontology document: term entry without a string \"name\"");
        }
        OntologyTerm term;
        term.name = entry["name"].get<std::string>();
        if (!entry.contains("weight") || !entry["weight"].is_number()) {
            throw OntologyError("malformed ontology document: missing numeric weight", term.name);
        }
        term.weight = entry["weight"].get<double>();
        if (entry.contains("synonyms")) {
            const auto& syn = entry["synonyms"];
            if (syn.is_string()) {
                term.synonyms = split_synonym_cell(syn.get<std::string>());
            } else if (syn.is_array()) {
                for (const auto& s : syn) {
                    if (!s.is_string()) {
                        throw OntologyError("malformed ontology document: non-string synonym", term.name);
                    }
                    term.synonyms.push_back(s.get<std::string>());
                }
            } else if (!syn.is_null()) {
                throw OntologyError("malformed ontology document: synonyms must be a list", term.name);
            }
        }
        terms.push_back(std::move(term));
    }
    return Ontology(std::move(domain), std::move(terms));
}

Ontology load_ontology(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw OntologyError("cannot open ontology file " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_ontology(buffer.str());
}

std::string serialize_ontology(const Ontology& ontology) {
    json doc;
    doc["domain"] = ontology.domain();
    doc["terms"] = json::array();
    for (const auto& term : ontology.terms()) {
        doc["terms"].push_back({{"name", term.name}, {"weight", term.weight}, {"synonyms", term.synonyms}});
    }
    return doc.dump(2);
}

} // namespace ontoindex
