#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "ontoindex/corpus.hpp"
#include "ontoindex/ontology.hpp"

namespace ontoindex {

/// Intended ranking planted into one generated page.
struct PlantedPage {
    std::string page_id;
    std::string dominating;
    std::vector<std::string> sub_dominating;

    bool operator==(const PlantedPage&) const = default;
};

struct Manifest {
    std::uint64_t seed = 0;
    double noise = 0.0;
    std::vector<PlantedPage> pages;

    /// True iff `term` is the page's intended dominating or sub-dominating term.
    bool lists(const PlantedPage& page, std::string_view term) const;
    const PlantedPage* find(std::string_view page_id) const;
};

std::string serialize_manifest(const Manifest& manifest);
Manifest parse_manifest(std::string_view json_text);

struct SynthOptions {
    std::size_t pages = 1000;
    std::uint64_t seed = 42;
    /// Probability that a page receives stray high-count terms from outside
    /// its topic group. 0 gives strict count separation.
    double noise = 0.0;
    /// Terms are partitioned (in name order) into topic groups of this size;
    /// a page draws its dominating and sub-dominating terms from one group.
    std::size_t group_size = 5;
};

struct SynthCorpus {
    std::vector<Document> documents;
    Manifest manifest;
};

/// Generated ontology of `terms` names ("term0001"...) with weights in
/// [0.30, 1.00] and a two-word synonym on every third term.
Ontology make_synthetic_ontology(std::size_t terms, std::uint64_t seed);

/// Ontology over caller-supplied names, weights drawn as above.
Ontology make_synthetic_ontology(const std::vector<std::string>& names, std::uint64_t seed);

/// Deterministic for a given (ontology, options). Without noise every page's
/// extraction equals its planted ranking.
SynthCorpus generate_corpus(const Ontology& ontology, const SynthOptions& options);

/// Small helpers over std::mt19937_64 with platform-independent results
/// (the std distributions are implementation-defined).
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

template <typename T>
void deterministic_shuffle(std::vector<T>& items, std::mt19937_64& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::swap(items[i - 1], items[uniform_below(rng, i)]);
    }
}

} // namespace ontoindex
