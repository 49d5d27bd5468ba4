#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include <unistd.h>

#include "oracles.hpp"
#include "ontoindex/error.hpp"
#include "ontoindex/index_io.hpp"
#include "ontoindex/synth.hpp"

namespace ontoindex {
namespace {

AttachmentIndex fig1_index() {
    const Ontology o("mobile", {{"mobile", 0.9, {}},
                                {"price", 0.7, {}},
                                {"color", 0.4, {}},
                                {"battery", 0.6, {}},
                                {"company", 0.5, {}}});
    PageProfile p;
    p.page_id = "fig1";
    for (const auto& [name, trv] :
         std::vector<std::pair<std::string, double>>{{"mobile", 45}, {"price", 31}, {"color", 27}, {"battery", 18}, {"company", 15}}) {
        p.term_stats[name] = {1, trv};
        p.relevance += trv;
    }
    const std::vector<PageProfile> profiles{p};
    return build_index(profiles, o).index;
}

IndexFormatError::Kind failure_kind(std::string_view bytes) {
    try {
        deserialize_index(bytes);
    } catch (const IndexFormatError& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error for: " << bytes;
    return IndexFormatError::Kind::corrupt;
}

TEST(IndexIoTest, SinglePageRoundTrip) {
    const AttachmentIndex idx = fig1_index();
    EXPECT_EQ(deserialize_index(serialize_index(idx)), idx);
}

TEST(IndexIoTest, EmptyIndexUsesNullBounds) {
    const AttachmentIndex idx = build_index({}, Ontology("d", {{"a", 0.5, {}}})).index;
    const std::string bytes = serialize_index(idx);
    EXPECT_NE(bytes.find("\"min_relevance\":null"), std::string::npos);
    EXPECT_EQ(deserialize_index(bytes), idx);
}

TEST(IndexIoTest, DocumentLayout) {
    const std::string bytes = serialize_index(fig1_index());
    EXPECT_EQ(bytes.rfind("{\"version\":1,\"domain\":\"mobile\",\"min_relevance\":136.0,\"max_relevance\":136.0,", 0), 0u)
        << bytes;
    EXPECT_NE(bytes.find("\"mobile\":{\"primary\":[[\"fig1\",136.0]],\"secondary\":[]}"), std::string::npos);
}

TEST(IndexIoTest, FullPrecisionDoubles) {
    AttachmentIndex idx = build_index({}, Ontology("d", {{"a", 0.5, {}}})).index;
    const double awkward = 0.1 + 0.2;
    idx.attachments[0].primary.push_back({"p", awkward});
    idx.min_relevance = idx.max_relevance = awkward;
    EXPECT_EQ(deserialize_index(serialize_index(idx)).attachments[0].primary[0].relevance, awkward);
}

TEST(IndexIoTest, TruncationIsCorruption) {
    const std::string bytes = serialize_index(fig1_index());
    for (std::size_t cut : {std::size_t{0}, std::size_t{1}, bytes.size() / 2, bytes.size() - 1}) {
        EXPECT_EQ(failure_kind(std::string_view(bytes).substr(0, cut)), IndexFormatError::Kind::corrupt) << cut;
    }
}

TEST(IndexIoTest, VersionMismatchIsDistinct) {
    std::string bytes = serialize_index(fig1_index());
    bytes.replace(bytes.find("\"version\":1"), 11, "\"version\":2");
    EXPECT_EQ(failure_kind(bytes), IndexFormatError::Kind::version_mismatch);
}

TEST(IndexIoTest, StructuralDamageIsCorruption) {
    // valid JSON, invalid index
    EXPECT_EQ(failure_kind(R"([1,2])"), IndexFormatError::Kind::corrupt);
    EXPECT_EQ(failure_kind(R"({"version":1})"), IndexFormatError::Kind::corrupt);
    EXPECT_EQ(failure_kind(R"({"version":1,"domain":"d","min_relevance":null,"max_relevance":null,
                               "terms":{"a":{"primary":[["p",1.0]],"secondary":[]}}})"),
              IndexFormatError::Kind::corrupt); // bounds disagree with postings
    EXPECT_EQ(failure_kind(R"({"version":1,"domain":"d","min_relevance":1.0,"max_relevance":2.0,
                               "terms":{"a":{"primary":[["p",1.0],["q",2.0]],"secondary":[]}}})"),
              IndexFormatError::Kind::corrupt); // wrong order
    EXPECT_EQ(failure_kind(R"({"version":1,"domain":"d","min_relevance":1.0,"max_relevance":1.0,
                               "terms":{"a":{"primary":[["p",1.0]],"secondary":[]},
                                        "b":{"primary":[["p",1.0]],"secondary":[]}}})"),
              IndexFormatError::Kind::corrupt); // two primaries
    EXPECT_EQ(failure_kind(R"({"version":1,"domain":"d","min_relevance":1.0,"max_relevance":1.0,
                               "terms":{"a":{"primary":[["p","1.0"]],"secondary":[]}}})"),
              IndexFormatError::Kind::corrupt);
}

TEST(IndexIoTest, FileRoundTripOfSyntheticCorpus) {
    const Ontology o = make_synthetic_ontology(40, 3);
    SynthOptions opt;
    opt.pages = 5000;
    opt.seed = 3;
    const auto corpus = generate_corpus(o, opt);
    const auto profiles = ingest(corpus.documents, o).profiles;
    const AttachmentIndex idx = build_index(profiles, o).index;

    const auto path = std::filesystem::temp_directory_path() / ("ontoindex_io_" + std::to_string(::getpid()) + ".json");
    save_index(idx, path);
    const AttachmentIndex loaded = load_index(path);
    std::filesystem::remove(path);
    ASSERT_EQ(loaded.term_names, idx.term_names);
    for (std::size_t t = 0; t < idx.term_count(); ++t) {
        EXPECT_EQ(loaded.attachments[t].primary, idx.attachments[t].primary);
        EXPECT_EQ(loaded.attachments[t].secondary, idx.attachments[t].secondary);
    }
    EXPECT_EQ(loaded, idx);
}

TEST(IndexIoTest, RandomIndexesRoundTrip) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const Ontology o = oracle::random_ontology(rng, 2 + rng() % 10);
        const auto profiles = oracle::random_profiles(rng, o, rng() % 50);
        const AttachmentIndex idx = build_index(profiles, o).index;
        EXPECT_EQ(deserialize_index(serialize_index(idx)), idx);
    }
}

TEST(IndexIoTest, MissingFile) {
    EXPECT_THROW(load_index("/nonexistent/ontoindex.json"), Error);
}

} // namespace
} // namespace ontoindex
