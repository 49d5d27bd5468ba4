#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>
#include <unistd.h>

#include "ontoindex/config.hpp"
#include "ontoindex/error.hpp"
#include "ontoindex/index_io.hpp"
#include "ontoindex/service.hpp"

namespace ontoindex {
namespace {

using nlohmann::json;
using ::testing::HasSubstr;

/// Term "d" dominates d_100..; "s1".."s4" carry s<i>_100.. as secondaries.
/// Every page really has a primary attachment under "pad".
std::shared_ptr<const Snapshot> deep_snapshot(std::size_t depth = 30) {
    Ontology o("shop", {{"d", 0.5, {}}, {"s1", 0.5, {}}, {"s2", 0.5, {}}, {"s3", 0.5, {}}, {"s4", 0.5, {}}, {"pad", 0.5, {}}});
    AttachmentIndex idx;
    idx.domain = "shop";
    idx.term_names.assign(o.names().begin(), o.names().end());
    idx.attachments.resize(o.size());
    UrlMap urls;
    double lo = 1e300, hi = -1e300;
    const auto slot = [&](const std::string& n) { return *idx.find(n).position; };
    std::vector<Posting> pad;
    for (const std::string name : {"d", "s1", "s2", "s3", "s4"}) {
        for (std::size_t i = 0; i < depth; ++i) {
            const std::string id = name + "_" + std::to_string(100 + i);
            const double rel = 11.3 + static_cast<double>(i) * (489.7 - 11.3) / static_cast<double>(depth - 1);
            const Posting p{id, rel};
            if (name == "d") {
                idx.attachments[slot("d")].primary.push_back(p);
            } else {
                idx.attachments[slot(name)].secondary.push_back(p);
                pad.push_back(p);
            }
            urls[id] = "http://example.com/" + id;
            lo = std::min(lo, rel);
            hi = std::max(hi, rel);
        }
    }
    idx.attachments[slot("pad")].primary = pad;
    for (auto& att : idx.attachments) {
        std::sort(att.primary.begin(), att.primary.end(), posting_before);
        std::sort(att.secondary.begin(), att.secondary.end(), posting_before);
    }
    idx.min_relevance = lo;
    idx.max_relevance = hi;
    EXPECT_FALSE(check_index(idx)) << *check_index(idx);
    return snapshot_from_index(std::move(o), std::move(idx), std::move(urls));
}

const char* kFullQuery = R"({"dominating":"d","sub_dominating":["s1","s2","s3","s4"],"range":{"from":0,"to":1000},"count":20})";

TEST(ServiceTest, NotReadyBeforeLoad) {
    const SearchService svc;
    EXPECT_EQ(svc.terms().status, 503);
    EXPECT_EQ(svc.bounds().status, 503);
    EXPECT_EQ(svc.stats().status, 503);
    EXPECT_EQ(svc.search(kFullQuery).status, 503);
}

TEST(ServiceTest, MissingDominatingIsRejected) {
    const SearchService svc(deep_snapshot());
    for (const char* body : {R"({"range":{"from":0,"to":1},"count":5})",
                             R"({"dominating":"","range":{"from":0,"to":1},"count":5})",
                             R"({"dominating":null,"range":{"from":0,"to":1},"count":5})"}) {
        const ApiResponse r = svc.search(body);
        EXPECT_EQ(r.status, 400);
        EXPECT_THAT(json::parse(r.body)["error"].get<std::string>(), HasSubstr("dominating term is mandatory"));
    }
}

TEST(ServiceTest, MalformedRequests) {
    const SearchService svc(deep_snapshot());
    for (const char* body : {"not json", "[]", R"({"dominating":"d","count":5})",
                             R"({"dominating":"d","range":{"from":5,"to":1},"count":5})",
                             R"({"dominating":"d","range":{"from":0,"to":1},"count":0})",
                             R"({"dominating":"d","range":{"from":0,"to":1},"count":2.5})",
                             R"({"dominating":"d","range":{"from":0,"to":1}})",
                             R"({"dominating":"d","sub_dominating":["a","b","c","e","f"],"range":{"from":0,"to":1},"count":5})",
                             R"({"dominating":"d","sub_dominating":"s1","range":{"from":0,"to":1},"count":5})"}) {
        EXPECT_EQ(svc.search(body).status, 400) << body;
    }
}

TEST(ServiceTest, UnknownTermIsNotFound) {
    const SearchService svc(deep_snapshot());
    const ApiResponse r = svc.search(R"({"dominating":"tablet","range":{"from":0,"to":1000},"count":5})");
    EXPECT_EQ(r.status, 404);
    EXPECT_THAT(r.body, HasSubstr("tablet"));
    EXPECT_EQ(svc.search(R"({"dominating":"d","sub_dominating":["nope"],"range":{"from":0,"to":1000},"count":5})").status,
              404);
}

TEST(ServiceTest, BoundsAndTerms) {
    const SearchService svc(deep_snapshot());
    const ApiResponse b = svc.bounds();
    ASSERT_EQ(b.status, 200);
    EXPECT_EQ(json::parse(b.body), json::parse(R"({"min":11.3,"max":489.7})"));
    const json t = json::parse(svc.terms().body);
    EXPECT_EQ(t["domain"], "shop");
    EXPECT_EQ(t["terms"], json::parse(R"(["d","pad","s1","s2","s3","s4"])"));

    const SearchService empty(snapshot_from_index(Ontology("x", {{"a", 1.0, {}}}),
                                                  build_index({}, Ontology("x", {{"a", 1.0, {}}})).index));
    EXPECT_EQ(empty.bounds().status, 404);
}

TEST(ServiceTest, SourceDistributionFollowsQuotas) {
    const SearchService svc(deep_snapshot());
    const ApiResponse r = svc.search(kFullQuery);
    ASSERT_EQ(r.status, 200) << r.body;
    const json doc = json::parse(r.body);
    EXPECT_EQ(doc["requested"], 20);
    EXPECT_EQ(doc["fulfilled"], 20);
    std::map<std::string, int> sources;
    for (const auto& e : doc["results"]) {
        ++sources[e["source"].get<std::string>()];
        EXPECT_EQ(e["url"], "http://example.com/" + e["page_id"].get<std::string>());
    }
    EXPECT_EQ(sources, (std::map<std::string, int>{{"primary", 10}, {"sub1", 4}, {"sub2", 3}, {"sub3", 2}, {"sub4", 1}}));
}

TEST(ServiceTest, ResultsWithoutUrlRenderNull) {
    ResultList r;
    r.requested = 3;
    r.entries.push_back({"p", 2.5, Bucket::sub2});
    EXPECT_EQ(render_results(r, {}),
              R"({"requested":3,"fulfilled":1,"results":[{"page_id":"p","url":null,"relevance":2.5,"source":"sub2"}]})");
}

TEST(ServiceTest, StatsAndReplace) {
    SearchService svc(deep_snapshot());
    json s = json::parse(svc.stats().body);
    EXPECT_EQ(s["domain"], "shop");
    EXPECT_EQ(s["k"], 6);
    EXPECT_EQ(s["indexed_pages"], 150);
    EXPECT_EQ(s["source"], "index");

    const auto held = svc.snapshot();
    const Ontology o("mobile", {{"mobile", 0.9, {}}, {"price", 0.7, {}}});
    const std::vector<Document> docs{{"a", "http://a", "mobile mobile price"},
                                     {"b", "http://b", "price"},
                                     {"c", "http://c", "nothing here"},
                                     {"e", "http://e", "mobile"}};
    svc.replace(build_snapshot(o, docs, 1.0));
    s = json::parse(svc.stats().body);
    EXPECT_EQ(s["domain"], "mobile");
    EXPECT_EQ(s["corpus_size"], 4);
    EXPECT_EQ(s["indexed_pages"], 1); // only "a" reaches 2.5
    EXPECT_EQ(s["below_relevance_limit"], 3);
    EXPECT_EQ(s["source"], "corpus");
    // the old snapshot is still intact for whoever holds it
    EXPECT_EQ(held->ontology.domain(), "shop");
    const json r = json::parse(svc.search(R"({"dominating":"mobile","range":{"from":0,"to":10},"count":5})").body);
    ASSERT_EQ(r["fulfilled"], 1);
    EXPECT_EQ(r["results"][0]["url"], "http://a");
}

TEST(ServiceTest, SnapshotRejectsMismatchedIndex) {
    const Ontology o("d", {{"a", 1.0, {}}});
    EXPECT_THROW(snapshot_from_index(o, build_index({}, Ontology("d", {{"b", 1.0, {}}})).index), Error);
}

TEST(ServiceTest, ConcurrentReadersDuringSwap) {
    SearchService svc(deep_snapshot());
    std::atomic<bool> stop{false};
    std::atomic<int> bad{0};
    std::vector<std::thread> readers;
    for (int i = 0; i < 4; ++i) {
        readers.emplace_back([&] {
            while (!stop) {
                const ApiResponse r = svc.search(kFullQuery);
                if (r.status != 200 || json::parse(r.body)["fulfilled"] != 20) ++bad;
            }
        });
    }
    for (int i = 0; i < 50; ++i) svc.replace(deep_snapshot());
    stop = true;
    for (auto& t : readers) t.join();
    EXPECT_EQ(bad, 0);
}

std::filesystem::path temp_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() / ("ontoindex_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    return dir;
}

TEST(HttpTest, LiveServerRoundTrip) {
    SearchService svc(deep_snapshot());
    httplib::Server server;
    svc.mount(server);
    const int port = server.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port, 0);
    std::thread loop([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    httplib::Client client("127.0.0.1", port);
    auto terms = client.Get("/api/terms");
    ASSERT_TRUE(terms);
    EXPECT_EQ(terms->status, 200);
    EXPECT_EQ(terms->get_header_value("Content-Type"), "application/json");
    auto res = client.Post("/api/search", kFullQuery, "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    EXPECT_EQ(res->body, svc.search(kFullQuery).body);
    auto bad = client.Post("/api/search", R"({"count":3})", "application/json");
    ASSERT_TRUE(bad);
    EXPECT_EQ(bad->status, 400);
    auto bounds = client.Get("/api/bounds");
    ASSERT_TRUE(bounds);
    EXPECT_EQ(json::parse(bounds->body)["max"], 489.7);

    server.stop();
    loop.join();
}

std::string run_capture(const std::string& cmd) {
    std::string out;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) return out;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    ::pclose(pipe);
    return out;
}

TEST(HttpTest, ApiMatchesCommandLineSearch) {
    const auto dir = temp_dir("cli");
    const auto snap = deep_snapshot();
    save_index(snap->index, dir / "index.json");
    const std::string cmd = std::string(ONTOINDEX_CLI) + " search --index " + (dir / "index.json").string() +
                            " --dominating d --sub s1,s2,s3,s4 --range 0:1000 --count 20";
    std::string cli = run_capture(cmd);
    std::filesystem::remove_all(dir);
    ASSERT_FALSE(cli.empty());
    if (cli.back() == '\n') cli.pop_back();
    // the CLI has no url source here, so compare against a url-less service
    const SearchService svc(snapshot_from_index(snap->ontology, snap->index));
    EXPECT_EQ(cli, svc.search(kFullQuery).body);
}

TEST(ConfigTest, LoadResolvesRelativePaths) {
    const auto dir = temp_dir("cfg");
    {
        std::ofstream out(dir / "service.json");
        out << R"({"ontology":"onto.json","corpus":"/abs/pages","relevance_limit":2.5,"listen":":9000","strip_html":true})";
    }
    const ServiceConfig c = load_service_config(dir / "service.json");
    std::filesystem::remove_all(dir);
    EXPECT_EQ(*c.ontology, dir / "onto.json");
    EXPECT_EQ(*c.corpus, std::filesystem::path("/abs/pages"));
    EXPECT_FALSE(c.index);
    EXPECT_EQ(c.relevance_limit, 2.5);
    EXPECT_TRUE(c.strip_html);
    EXPECT_EQ(c.listen, ":9000");
    EXPECT_THROW(load_service_config(dir / "missing.json"), Error);
}

TEST(ConfigTest, ListenAndRangeSpecs) {
    EXPECT_EQ(parse_listen("127.0.0.1:8080").host, "127.0.0.1");
    EXPECT_EQ(parse_listen("127.0.0.1:8080").port, 8080);
    EXPECT_EQ(parse_listen(":9000").host, "0.0.0.0");
    EXPECT_EQ(parse_listen("9001").port, 9001);
    EXPECT_THROW(parse_listen("host:"), Error);
    EXPECT_THROW(parse_listen("host:99999"), Error);
    EXPECT_THROW(parse_listen("x:y"), Error);
    EXPECT_EQ(parse_range("1.5:20"), std::make_pair(1.5, 20.0));
    EXPECT_EQ(parse_range("-3:-1"), std::make_pair(-3.0, -1.0));
    EXPECT_THROW(parse_range("1.5"), Error);
    EXPECT_THROW(parse_range("a:b"), Error);
    EXPECT_THROW(parse_range("1:2:3"), Error);
}

} // namespace
} // namespace ontoindex
