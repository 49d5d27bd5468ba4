#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ontoindex/text.hpp"

namespace ontoindex {

struct OntologyTerm {
    std::string name;                  // canonical (case-folded, single-spaced)
    double weight = 1.0;               // in (0, 1]
    std::vector<std::string> synonyms; // canonical phrases, declaration order
};

/// Outcome of a binary-search probe. `comparisons` counts three-way string
/// comparisons and never exceeds floor(log2 k) + 1.
struct LookupResult {
    std::optional<std::size_t> position;
    std::size_t comparisons = 0;

    explicit operator bool() const noexcept { return position.has_value(); }
};

/// Binary search over a name-sorted array. Shared by the ontology and the
/// attachment index so both report the same comparison counts.
LookupResult find_sorted(std::span<const std::string> sorted_names, std::string_view key);

/// A single match pattern (a term name or one of its synonyms) as tokens.
struct Pattern {
    TokenList tokens;
    std::size_t term = 0; // position of the owning term
};

/// Validated, immutable domain ontology. Terms are kept sorted by canonical
/// name, which is the lookup key.
class Ontology {
public:
    /// Validates and canonicalizes. Throws OntologyError naming the offending
    /// term on any violation.
    Ontology(std::string domain, std::vector<OntologyTerm> terms);

    const std::string& domain() const noexcept { return domain_; }
    std::size_t size() const noexcept { return terms_.size(); }
    std::span<const OntologyTerm> terms() const noexcept { return terms_; }
    std::span<const std::string> names() const noexcept { return names_; }
    const OntologyTerm& term(std::size_t position) const { return terms_.at(position); }

    /// Case-insensitive lookup by term name (not synonym).
    LookupResult lookup_term(std::string_view name) const;

    /// Term owning a name or synonym phrase, if any.
    std::optional<std::size_t> owner_of(std::string_view phrase) const;

    /// Every pattern of every term, grouped by first token. Within a group,
    /// patterns are ordered longest first.
    const std::unordered_map<std::string, std::vector<Pattern>>& patterns_by_first_token() const noexcept {
        return by_first_token_;
    }

    /// Term positions ordered by weight descending, then name. Display only.
    std::vector<std::size_t> by_weight() const;

private:
    std::string domain_;
    std::vector<OntologyTerm> terms_;
    std::vector<std::string> names_;
    std::unordered_map<std::string, std::size_t> owners_;
    std::unordered_map<std::string, std::vector<Pattern>> by_first_token_;
};

/// Parses the JSON ontology document:
/// {"domain": str, "terms": [{"name": str, "weight": num, "synonyms": [str...]}]}.
/// "synonyms" may also be a single comma-separated string (legacy syntable cell).
Ontology parse_ontology(std::string_view json_text);
Ontology load_ontology(const std::filesystem::path& path);

std::string serialize_ontology(const Ontology& ontology);

} // namespace ontoindex
