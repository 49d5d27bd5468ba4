#include "ontoindex/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include <json.hpp>

#include "ontoindex/error.hpp"
#include "ontoindex/indexer.hpp"

namespace ontoindex {

using nlohmann::json;
using nlohmann::ordered_json;

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    if (bound <= 1) {
        return 0;
    }
    // Rejection sampling keeps the draw unbiased.
    const std::uint64_t limit = std::mt19937_64::max() - (std::mt19937_64::max() % bound);
    std::uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % bound;
}

namespace {

std::string numbered(std::string_view prefix, std::size_t n, std::size_t width) {
    std::string digits = std::to_string(n);
    if (digits.size() < width) {
        digits.insert(0, width - digits.size(), '0');
    }
    return std::string(prefix) + digits;
}

double draw_weight(std::mt19937_64& rng) {
    return static_cast<double>(30 + uniform_below(rng, 71)) / 100.0;
}

/// Counts giving strictly decreasing trv along `ranked` (term positions).
std::vector<std::uint64_t> plant_counts(const Ontology& ontology, const std::vector<std::size_t>& ranked,
                                        std::mt19937_64& rng) {
    std::vector<std::uint64_t> counts(ranked.size());
    double next_trv = 0.0;
    for (std::size_t r = ranked.size(); r-- > 0;) {
        const double w = ontology.term(ranked[r]).weight;
        std::uint64_t c = (r + 1 == ranked.size()) ? 1 + uniform_below(rng, 3)
                                                   : static_cast<std::uint64_t>(std::floor(next_trv / w)) + 1 +
                                                         uniform_below(rng, 3);
        while (w * static_cast<double>(c) <= next_trv) {
            ++c;
        }
        counts[r] = c;
        next_trv = w * static_cast<double>(c);
    }
    return counts;
}

struct PageRecipe {
    std::vector<std::pair<std::size_t, std::uint64_t>> term_counts; // (term position, occurrences)
    std::size_t filler = 0;
};

std::string render_page(const Ontology& ontology, const PageRecipe& recipe, const std::vector<std::string>& filler_words,
                        bool use_synonyms, std::mt19937_64& rng) {
    std::vector<std::string> phrases;
    for (const auto& [term_pos, count] : recipe.term_counts) {
        const auto& term = ontology.term(term_pos);
        for (std::uint64_t i = 0; i < count; ++i) {
            std::string phrase = term.name;
            if (use_synonyms && !term.synonyms.empty() && uniform_below(rng, 4) == 0) {
                phrase = term.synonyms[uniform_below(rng, term.synonyms.size())];
            }
            if (uniform_below(rng, 5) == 0 && !phrase.empty() && phrase[0] >= 'a' && phrase[0] <= 'z') {
                phrase[0] = static_cast<char>(phrase[0] - 'a' + 'A');
            }
            phrases.push_back(std::move(phrase));
        }
    }
    for (std::size_t i = 0; i < recipe.filler && !filler_words.empty(); ++i) {
        phrases.push_back(filler_words[uniform_below(rng, filler_words.size())]);
    }
    deterministic_shuffle(phrases, rng);

    static constexpr std::string_view separators[] = {" ", " ", " ", ", ", ". ", "\n"};
    std::string content;
    for (std::size_t i = 0; i < phrases.size(); ++i) {
        if (i > 0) {
            content += separators[uniform_below(rng, std::size(separators))];
        }
        content += phrases[i];
    }
    return content;
}

bool counts_match(const PageProfile& profile, const Ontology& ontology, const PageRecipe& recipe) {
    if (profile.term_stats.size() != recipe.term_counts.size()) {
        return false;
    }
    for (const auto& [term_pos, count] : recipe.term_counts) {
        auto it = profile.term_stats.find(ontology.term(term_pos).name);
        if (it == profile.term_stats.end() || it->second.count != count) {
            return false;
        }
    }
    return true;
}

} // namespace

bool Manifest::lists(const PlantedPage& page, std::string_view term) const {
    return page.dominating == term ||
           std::find(page.sub_dominating.begin(), page.sub_dominating.end(), term) != page.sub_dominating.end();
}

const PlantedPage* Manifest::find(std::string_view page_id) const {
    for (const auto& page : pages) {
        if (page.page_id == page_id) {
            return &page;
        }
    }
    return nullptr;
}

std::string serialize_manifest(const Manifest& manifest) {
    ordered_json doc;
    doc["seed"] = manifest.seed;
    doc["noise"] = manifest.noise;
    doc["pages"] = ordered_json::array();
    for (const auto& page : manifest.pages) {
        doc["pages"].push_back(
            {{"id", page.page_id}, {"dominating", page.dominating}, {"sub_dominating", page.sub_dominating}});
    }
    return doc.dump(1);
}

Manifest parse_manifest(std::string_view json_text) {
    try {
        const json doc = json::parse(json_text);
        Manifest manifest;
        manifest.seed = doc.value("seed", std::uint64_t{0});
        manifest.noise = doc.value("noise", 0.0);
        for (const auto& page : doc.at("pages")) {
            manifest.pages.push_back({page.at("id").get<std::string>(), page.at("dominating").get<std::string>(),
                                      page.at("sub_dominating").get<std::vector<std::string>>()});
        }
        return manifest;
    } catch (const json::exception& e) {
        throw CorpusError(std::string("malformed manifest: ") + e.what());
    }
}

Ontology make_synthetic_ontology(std::size_t terms, std::uint64_t seed) {
    const std::size_t width = std::max<std::size_t>(4, std::to_string(terms).size());
    std::vector<std::string> names;
    names.reserve(terms);
    for (std::size_t i = 1; i <= terms; ++i) {
        names.push_back(numbered("term", i, width));
    }
    return make_synthetic_ontology(names, seed);
}

Ontology make_synthetic_ontology(const std::vector<std::string>& names, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::size_t width = std::max<std::size_t>(4, std::to_string(names.size()).size());
    std::vector<OntologyTerm> terms;
    terms.reserve(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) {
        OntologyTerm term;
        term.name = names[i];
        term.weight = draw_weight(rng);
        if ((i + 1) % 3 == 0) {
            term.synonyms.push_back(numbered("alt", i + 1, width) + " form");
        }
        terms.push_back(std::move(term));
    }
    return Ontology("synthetic", std::move(terms));
}

SynthCorpus generate_corpus(const Ontology& ontology, const SynthOptions& options) {
    std::mt19937_64 rng(options.seed);
    const std::size_t k = ontology.size();
    const std::size_t group_size = std::clamp<std::size_t>(options.group_size, 1, kMaxSubDominating + 1);

    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t start = 0; start < k; start += group_size) {
        std::vector<std::size_t> group;
        for (std::size_t t = start; t < std::min(k, start + group_size); ++t) {
            group.push_back(t);
        }
        groups.push_back(std::move(group));
    }

    std::vector<std::string> filler_words;
    for (std::size_t i = 0; filler_words.size() < 500 && i < 5000; ++i) {
        std::string word = numbered("w", i, 4);
        if (!ontology.patterns_by_first_token().contains(word)) {
            filler_words.push_back(std::move(word));
        }
    }

    SynthCorpus out;
    out.manifest.seed = options.seed;
    out.manifest.noise = options.noise;
    const std::size_t id_width = std::max<std::size_t>(6, std::to_string(options.pages).size());
    const std::uint64_t noise_permille = static_cast<std::uint64_t>(std::clamp(options.noise, 0.0, 1.0) * 1000.0 + 0.5);

    for (std::size_t p = 0; p < options.pages; ++p) {
        const auto& group = groups[uniform_below(rng, groups.size())];
        std::vector<std::size_t> ranked = group;
        deterministic_shuffle(ranked, rng);
        const auto counts = plant_counts(ontology, ranked, rng);

        PageRecipe recipe;
        for (std::size_t r = 0; r < ranked.size(); ++r) {
            recipe.term_counts.emplace_back(ranked[r], counts[r]);
        }
        recipe.filler = 20 + uniform_below(rng, 41);

        if (noise_permille > 0 && uniform_below(rng, 1000) < noise_permille && groups.size() > 1) {
            // Stray terms from other groups, each landing just above a random
            // planted rank so the page's real ranking departs from the plan.
            const std::size_t strays = 1 + uniform_below(rng, 2);
            for (std::size_t s = 0; s < strays; ++s) {
                std::size_t stray = uniform_below(rng, k);
                if (std::find(group.begin(), group.end(), stray) != group.end()) {
                    continue;
                }
                bool already = false;
                for (const auto& [term_pos, c] : recipe.term_counts) {
                    already = already || term_pos == stray;
                }
                if (already) {
                    continue;
                }
                const std::size_t rank = uniform_below(rng, ranked.size());
                const double target = ontology.term(ranked[rank]).weight * static_cast<double>(counts[rank]);
                const double w = ontology.term(stray).weight;
                auto c = static_cast<std::uint64_t>(std::floor(target / w)) + 1;
                while (w * static_cast<double>(c) <= target) {
                    ++c;
                }
                recipe.term_counts.emplace_back(stray, c);
            }
        }

        Document doc;
        doc.page_id = numbered("p", p + 1, id_width);
        doc.url = "synthetic://" + ontology.domain() + "/" + doc.page_id;
        doc.content = render_page(ontology, recipe, filler_words, true, rng);
        if (!counts_match(score_page(doc, ontology), ontology, recipe)) {
            // Phrase adjacency created extra matches; fall back to bare names.
            doc.content = render_page(ontology, recipe, filler_words, false, rng);
        }

        PlantedPage planted;
        planted.page_id = doc.page_id;
        planted.dominating = ontology.term(ranked.front()).name;
        for (std::size_t r = 1; r < ranked.size(); ++r) {
            planted.sub_dominating.push_back(ontology.term(ranked[r]).name);
        }
        out.manifest.pages.push_back(std::move(planted));
        out.documents.push_back(std::move(doc));
    }
    return out;
}

} // namespace ontoindex
