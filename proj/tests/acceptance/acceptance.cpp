// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include <unistd.h>

#include "oracles.hpp"
#include "ontoindex/harness.hpp"
#include "ontoindex/index_io.hpp"
#include "ontoindex/service.hpp"

using namespace ontoindex;

namespace {

int failures = 0;

void report(const char* name, bool ok, const std::string& detail) {
    std::printf("%s  %-28s %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
    std::fflush(stdout);
    failures += ok ? 0 : 1;
}

template <class F>
void run(const char* name, F&& check) {
    std::string detail;
    bool ok = false;
    try {
        ok = check(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    report(name, ok, detail);
}

bool figure_one(std::string& detail) {
    const Ontology o("mobile", {{"mobile", 0.9, {}}, {"price", 0.7, {}}, {"color", 0.4, {}},
                                {"battery", 0.6, {}}, {"company", 0.5, {}}});
    PageProfile p;
    p.page_id = "fig1";
    for (const auto& [name, trv] : std::map<std::string, double>{
             {"mobile", 45}, {"price", 31}, {"color", 27}, {"battery", 18}, {"company", 15}}) {
        p.term_stats[name] = {1, trv};
        p.relevance += trv;
    }
    const Extraction ex = extract(p, o);
    detail = "dominating=" + ex.dominating + " sub=[";
    for (std::size_t i = 0; i < ex.sub_dominating.size(); ++i) {
        detail += (i ? "," : "") + ex.sub_dominating[i];
    }
    detail += "]";
    return ex.dominating == "mobile" &&
           ex.sub_dominating == std::vector<std::string>{"price", "color", "battery", "company"};
}

bool quota_table(std::string& detail) {
    using Q = std::array<std::size_t, kBucketCount>;
    const Q a = quotas(100, 4);
    const Q b = quotas(20, 4);
    bool ok = a == Q{50, 20, 15, 10, 5} && b == Q{10, 4, 3, 2, 1};
    std::size_t bad = 0;
    for (std::size_t x = 1; x <= 10000; ++x) {
        for (std::size_t n = 0; n <= 4; ++n) {
            const Q q = quotas(x, n);
            bad += q[0] + q[1] + q[2] + q[3] + q[4] != x;
        }
    }
    std::ostringstream out;
    out << "q(100,4)=(" << a[0] << "," << a[1] << "," << a[2] << "," << a[3] << "," << a[4] << ") q(20,4)=(" << b[0]
        << "," << b[1] << "," << b[2] << "," << b[3] << "," << b[4] << ") sum violations=" << bad << "/50000";
    detail = out.str();
    return ok && bad == 0;
}

bool oracle_equivalence(std::string& detail) {
    std::mt19937_64 rng(20240601);
    std::size_t corpora = 0, queries = 0, mismatches = 0;
    for (; corpora < 120; ++corpora) {
        const Ontology o = oracle::random_ontology(rng, 3 + rng() % 20);
        const auto profiles = oracle::random_profiles(rng, o, 1 + rng() % 200);
        const BuildResult built = build_index(profiles, o);
        const auto [lo, hi] = relevance_bounds(built.index);
        UrlMap urls;
        for (const auto& p : profiles) urls[p.page_id] = "http://x/" + p.page_id;
        for (int i = 0; i < 20; ++i, ++queries) {
            const Query q = oracle::random_query(rng, o, lo - 1.0, hi + 1.0);
            const std::string a = render_results(search(built.index, q), urls);
            const std::string b = render_results(linear_scan_search(o, built.extractions, q), urls);
            mismatches += a != b;
        }
    }
    detail = std::to_string(corpora) + " corpora, " + std::to_string(queries) + " queries, " +
             std::to_string(mismatches) + " mismatches";
    return corpora >= 100 && mismatches == 0;
}

struct Synthetic {
    Ontology ontology;
    SynthCorpus corpus;
    BuildResult built;
};

Synthetic synthetic(std::size_t pages, double noise, std::uint64_t seed) {
    Ontology o = make_synthetic_ontology(50, seed);
    SynthOptions opt;
    opt.pages = pages;
    opt.seed = seed;
    opt.noise = noise;
    SynthCorpus c = generate_corpus(o, opt);
    BuildResult b = build_index(ingest(c.documents, o).profiles, o);
    return {std::move(o), std::move(c), std::move(b)};
}

bool structural_invariants(std::string& detail) {
    const Synthetic s = synthetic(5000, 0.1, 42);
    const AttachmentIndex& idx = s.built.index;
    std::map<std::string, std::size_t> primary, secondary;
    for (const auto& att : idx.attachments) {
        for (const auto& p : att.primary) ++primary[p.page_id];
        for (const auto& p : att.secondary) ++secondary[p.page_id];
    }
    std::size_t bad = 0;
    for (const auto& doc : s.corpus.documents) {
        bad += primary[doc.page_id] != 1 || secondary[doc.page_id] > 4;
    }
    bad += primary.size() != 5000;
    const auto path = std::filesystem::temp_directory_path() / ("ontoindex_accept_" + std::to_string(::getpid()));
    save_index(idx, path);
    const AttachmentIndex loaded = load_index(path);
    std::filesystem::remove(path);
    const bool same = loaded == idx && !check_index(loaded);
    detail = std::to_string(primary.size()) + " pages, " + std::to_string(bad) + " violations, round-trip " +
             (same ? "identical" : "differs");
    return bad == 0 && same && !check_index(idx);
}

bool bench_trend(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    const Synthetic s = synthetic(5000, 0.0, 42);
    BenchOptions opt;
    opt.counts = {10, 20, 30, 40, 50};
    opt.repetitions = 5;
    const BenchReport r = run_bench(s.ontology, s.built, opt);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool ok = r.rows.size() == 5 && elapsed < 300.0;
    std::ostringstream out;
    out.precision(3);
    for (const auto& row : r.rows) {
        ok = ok && row.indexed_seconds < row.scan_seconds && row.speedup >= 1.2;
        out << "x=" << row.x << ":" << row.speedup << "x ";
    }
    out << "total " << elapsed << "s";
    detail = out.str();
    return ok;
}

bool lookup_complexity(std::string& detail) {
    bool ok = true;
    std::ostringstream out;
    for (std::size_t k : {1, 2, 5, 100, 1024}) {
        std::vector<OntologyTerm> terms;
        for (std::size_t i = 0; i < k; ++i) {
            char name[16];
            std::snprintf(name, sizeof name, "t%05zu", i * 2);
            terms.push_back({name, 0.5, {}});
        }
        const Ontology o("d", terms);
        std::size_t bound = 1;
        while ((std::size_t{1} << (bound - 1)) < k) ++bound; // ceil(log2 k) + 1
        std::size_t worst = 0;
        // every hit, plus a miss before, between and after each name
        std::vector<std::string> probes{"a", "z"};
        for (std::size_t i = 0; i <= 2 * k; ++i) {
            char name[16];
            std::snprintf(name, sizeof name, "t%05zu", i);
            probes.push_back(name);
        }
        for (const auto& p : probes) {
            const LookupResult r = o.lookup_term(p);
            worst = std::max(worst, r.comparisons);
            ok = ok && static_cast<bool>(r) == (p[0] == 't' && std::stoul(p.substr(1)) % 2 == 0 &&
                                                std::stoul(p.substr(1)) < 2 * k);
        }
        ok = ok && worst <= bound;
        out << "k=" << k << ":" << worst << "<=" << bound << " ";
    }
    detail = out.str();
    return ok;
}

bool accuracy_substitute(std::string& detail) {
    const std::vector<std::size_t> counts{10, 20, 30, 40, 50};
    const Synthetic clean = synthetic(5000, 0.0, 42);
    const AccuracyReport a = run_accuracy(clean.built, clean.corpus.manifest, counts);
    bool ok = a.rows.size() == counts.size();
    for (const auto& row : a.rows) ok = ok && row.avg_relevant == static_cast<double>(row.x);

    const Synthetic noisy = synthetic(5000, 0.3, 43);
    const AccuracyReport b = run_accuracy(noisy.built, noisy.corpus.manifest, counts);
    std::ostringstream out;
    out.precision(4);
    out << "clean " << (ok ? "all x" : "short") << "; noisy";
    ok = ok && b.rows.size() == counts.size();
    for (const auto& row : b.rows) {
        ok = ok && row.relevant_total + row.non_relevant_total == row.x * row.queries;
        out << " x=" << row.x << ":" << row.avg_relevant << "+" << row.avg_non_relevant;
    }
    detail = out.str();
    return ok;
}

} // namespace

int main() {
    run("figure-1-extraction", figure_one);
    run("quota-table", quota_table);
    run("oracle-equivalence", oracle_equivalence);
    run("index-structural-invariants", structural_invariants);
    run("bench-trend", bench_trend);
    run("lookup-complexity", lookup_complexity);
    run("accuracy-substitute", accuracy_substitute);
    std::printf("%d failed\n", failures);
    return failures == 0 ? 0 : 1;
}
