// ontoindex: command-line front end for the prioritized-term attachment index.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include "ontoindex/config.hpp"
#include "ontoindex/corpus.hpp"
#include "ontoindex/error.hpp"
#include "ontoindex/harness.hpp"
#include "ontoindex/index_io.hpp"
#include "ontoindex/indexer.hpp"
#include "ontoindex/ontology.hpp"
#include "ontoindex/retrieval.hpp"
#include "ontoindex/service.hpp"
#include "ontoindex/synth.hpp"

namespace fs = std::filesystem;
using namespace ontoindex;

namespace {

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << text)) {
        throw Error("cannot write " + path.string());
    }
}

std::vector<PageProfile> read_profiles_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open profiles file " + path.string());
    }
    return read_profiles(in);
}

UrlMap urls_from_profiles(const std::vector<PageProfile>& profiles) {
    UrlMap urls;
    for (const auto& p : profiles) {
        urls.emplace(p.page_id, p.url);
    }
    return urls;
}

UrlMap urls_from_docs(const std::vector<Document>& docs) {
    UrlMap urls;
    for (const auto& d : docs) {
        urls.emplace(d.page_id, d.url);
    }
    return urls;
}

struct Synthetic {
    Ontology ontology;
    SynthCorpus corpus;
};

Synthetic make_synthetic(std::size_t pages, std::size_t terms, std::uint64_t seed, double noise) {
    Ontology ontology = make_synthetic_ontology(terms, seed);
    SynthOptions options;
    options.pages = pages;
    options.seed = seed;
    options.noise = noise;
    SynthCorpus corpus = generate_corpus(ontology, options);
    return {std::move(ontology), std::move(corpus)};
}

void print_build_report(const BuildReport& report, std::size_t below_limit) {
    std::cout << "profiles visited: " << report.profiles_visited << "\n"
              << "pages indexed:    " << report.pages_indexed << "\n"
              << "below limit:      " << below_limit << "\n"
              << "skipped (no ontology terms): " << report.skipped_pages.size() << "\n";
    for (const auto& id : report.skipped_pages) {
        std::cout << "  skipped " << id << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ontology-term attachment index: ingest, build, search, serve, benchmark"};
    app.require_subcommand(1);

    // ingest
    auto* ingest_cmd = app.add_subcommand("ingest", "Score a corpus against an ontology into page profiles");
    fs::path ingest_ontology, ingest_corpus, ingest_out;
    double ingest_limit = 0.0;
    bool ingest_strip = false;
    ingest_cmd->add_option("--ontology", ingest_ontology, "Ontology JSON file")->required();
    ingest_cmd->add_option("--corpus", ingest_corpus, "Directory of text files or JSON-lines file")->required();
    ingest_cmd->add_option("--out", ingest_out, "Profiles output (JSON lines)")->required();
    ingest_cmd->add_option("--relevance-limit", ingest_limit, "Minimum page relevance to keep")->check(CLI::NonNegativeNumber);
    ingest_cmd->add_flag("--strip-html", ingest_strip, "Delete markup between '<' and '>' before scoring");

    // build-index
    auto* build_cmd = app.add_subcommand("build-index", "Build the attachment index");
    fs::path build_ontology, build_corpus, build_profiles, build_out, build_report;
    double build_limit = 0.0;
    bool build_strip = false;
    build_cmd->add_option("--ontology", build_ontology, "Ontology JSON file")->required();
    auto* corpus_opt = build_cmd->add_option("--corpus", build_corpus, "Directory of text files or JSON-lines file");
    auto* profiles_opt = build_cmd->add_option("--profiles", build_profiles, "Profiles produced by ingest");
    corpus_opt->excludes(profiles_opt);
    build_cmd->add_option("--out", build_out, "Index output file")->required();
    build_cmd->add_option("--report", build_report, "Write the build report as JSON");
    build_cmd->add_option("--relevance-limit", build_limit, "Minimum page relevance to keep")->check(CLI::NonNegativeNumber);
    build_cmd->add_flag("--strip-html", build_strip, "Delete markup between '<' and '>' before scoring");

    // search
    auto* search_cmd = app.add_subcommand("search", "Query an index");
    fs::path search_index, search_profiles, search_corpus;
    std::string search_dominating, search_range;
    std::vector<std::string> search_sub;
    std::size_t search_count = 0;
    search_cmd->add_option("--index", search_index, "Index file")->required();
    search_cmd->add_option("--dominating", search_dominating, "Dominating ontology term")->required();
    search_cmd->add_option("--sub", search_sub, "Up to four sub-dominating terms, comma separated")->delimiter(',');
    search_cmd->add_option("--range", search_range, "Relevance range lo:hi (default: index bounds)");
    search_cmd->add_option("--count", search_count, "Number of search results")->required()->check(CLI::PositiveNumber);
    search_cmd->add_option("--profiles", search_profiles, "Profiles file supplying page urls");
    search_cmd->add_option("--corpus", search_corpus, "Corpus supplying page urls");

    // serve
    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP search service");
    fs::path serve_config;
    std::optional<fs::path> serve_ontology, serve_corpus, serve_index, serve_profiles, serve_ui;
    std::optional<std::string> serve_listen;
    std::optional<double> serve_limit;
    serve_cmd->add_option("--config", serve_config, "Config file (default: $ONTOINDEX_CONFIG)");
    serve_cmd->add_option("--ontology", serve_ontology, "Ontology JSON file");
    serve_cmd->add_option("--corpus", serve_corpus, "Corpus to index at startup");
    serve_cmd->add_option("--index", serve_index, "Prebuilt index file");
    serve_cmd->add_option("--profiles", serve_profiles, "Profiles file supplying page urls");
    serve_cmd->add_option("--listen", serve_listen, "host:port");
    serve_cmd->add_option("--relevance-limit", serve_limit, "Minimum page relevance to keep");
    serve_cmd->add_option("--ui-dir", serve_ui, "Static files served at /");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Time indexed retrieval against a linear scan");
    std::size_t bench_size = 5000, bench_terms = 50, bench_reps = 5, bench_queries = 0;
    std::uint64_t bench_seed = 42;
    std::vector<std::size_t> bench_counts{10, 20, 30, 40, 50};
    fs::path bench_ontology, bench_corpus, bench_json;
    bench_cmd->add_option("--corpus-size", bench_size, "Synthetic pages to generate")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--terms", bench_terms, "Synthetic ontology size")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--seed", bench_seed, "Generator seed");
    bench_cmd->add_option("--counts", bench_counts, "Result counts, comma separated")->delimiter(',');
    bench_cmd->add_option("--repetitions", bench_reps, "Timed repetitions per row (minimum 5)");
    bench_cmd->add_option("--max-queries", bench_queries, "Cap on the query set (0 = all)");
    auto* bench_onto_opt = bench_cmd->add_option("--ontology", bench_ontology, "Use this ontology instead of a synthetic one");
    bench_cmd->add_option("--corpus", bench_corpus, "Use this corpus instead of a synthetic one")->needs(bench_onto_opt);
    bench_cmd->add_option("--json", bench_json, "Also write the report as JSON");

    // accuracy
    auto* acc_cmd = app.add_subcommand("accuracy", "Score retrieval against planted ground truth");
    std::size_t acc_size = 5000, acc_terms = 50;
    std::uint64_t acc_seed = 42;
    double acc_noise = 0.0;
    std::vector<std::size_t> acc_counts{10, 20, 30, 40, 50};
    fs::path acc_ontology, acc_corpus, acc_manifest, acc_json;
    acc_cmd->add_option("--corpus-size", acc_size, "Synthetic pages to generate")->check(CLI::PositiveNumber);
    acc_cmd->add_option("--terms", acc_terms, "Synthetic ontology size")->check(CLI::PositiveNumber);
    acc_cmd->add_option("--seed", acc_seed, "Generator seed");
    acc_cmd->add_option("--noise", acc_noise, "Fraction of pages with stray terms")->check(CLI::Range(0.0, 1.0));
    acc_cmd->add_option("--counts", acc_counts, "Result counts, comma separated")->delimiter(',');
    auto* acc_onto_opt = acc_cmd->add_option("--ontology", acc_ontology, "Ontology of an existing corpus");
    acc_cmd->add_option("--corpus", acc_corpus, "Existing corpus")->needs(acc_onto_opt);
    acc_cmd->add_option("--manifest", acc_manifest, "Ground-truth manifest for --corpus");
    acc_cmd->add_option("--json", acc_json, "Also write the report as JSON");

    // gen-corpus
    auto* gen_cmd = app.add_subcommand("gen-corpus", "Write a synthetic corpus with a ground-truth manifest");
    std::size_t gen_pages = 1000, gen_terms = 50;
    std::uint64_t gen_seed = 42;
    double gen_noise = 0.0;
    std::vector<std::string> gen_names;
    fs::path gen_ontology, gen_out;
    gen_cmd->add_option("--pages", gen_pages, "Number of pages")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--terms", gen_terms, "Synthetic ontology size")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--term-names", gen_names, "Explicit term names, comma separated")->delimiter(',');
    gen_cmd->add_option("--ontology", gen_ontology, "Draw terms and weights from this ontology");
    gen_cmd->add_option("--seed", gen_seed, "Generator seed");
    gen_cmd->add_option("--noise", gen_noise, "Fraction of pages with stray terms")->check(CLI::Range(0.0, 1.0));
    gen_cmd->add_option("--out", gen_out, "Output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ingest_cmd) {
            const Ontology ontology = load_ontology(ingest_ontology);
            const auto docs = load_corpus(ingest_corpus);
            const IngestResult result = ingest(docs, ontology, ingest_limit, {ingest_strip});
            std::ofstream out(ingest_out, std::ios::binary | std::ios::trunc);
            if (!out) {
                throw Error("cannot write " + ingest_out.string());
            }
            write_profiles(out, result.profiles);
            std::cout << "documents: " << docs.size() << "\nkept: " << result.profiles.size()
                      << "\nbelow limit: " << result.below_limit.size() << "\n";
            return EXIT_SUCCESS;
        }

        if (*build_cmd) {
            const Ontology ontology = load_ontology(build_ontology);
            IngestResult ingested;
            if (!build_corpus.empty()) {
                ingested = ingest(load_corpus(build_corpus), ontology, build_limit, {build_strip});
            } else if (!build_profiles.empty()) {
                for (auto& p : read_profiles_file(build_profiles)) {
                    if (is_domain_page(p, build_limit)) {
                        ingested.profiles.push_back(std::move(p));
                    } else {
                        ingested.below_limit.push_back(p.page_id);
                    }
                }
            } else {
                throw Error("build-index needs --corpus or --profiles");
            }
            const BuildResult built = build_index(ingested.profiles, ontology);
            save_index(built.index, build_out);
            print_build_report(built.report, ingested.below_limit.size());
            if (!build_report.empty()) {
                nlohmann::ordered_json doc{{"profiles_visited", built.report.profiles_visited},
                                           {"pages_indexed", built.report.pages_indexed},
                                           {"below_limit", ingested.below_limit},
                                           {"skipped_pages", built.report.skipped_pages}};
                write_text(build_report, doc.dump(2));
            }
            return EXIT_SUCCESS;
        }

        if (*search_cmd) {
            const AttachmentIndex index = load_index(search_index);
            Query q;
            q.dominating = search_dominating;
            q.sub_dominating = search_sub;
            q.count = search_count;
            if (search_range.empty()) {
                std::tie(q.range_lo, q.range_hi) = relevance_bounds(index);
            } else {
                std::tie(q.range_lo, q.range_hi) = parse_range(search_range);
            }
            UrlMap urls;
            if (!search_profiles.empty()) {
                urls = urls_from_profiles(read_profiles_file(search_profiles));
            } else if (!search_corpus.empty()) {
                urls = urls_from_docs(load_corpus(search_corpus));
            }
            std::cout << render_results(search(index, q), urls) << "\n";
            return EXIT_SUCCESS;
        }

        if (*serve_cmd) {
            ServiceConfig config;
            if (serve_config.empty()) {
                if (const char* env = std::getenv(kConfigEnvVar); env && *env) {
                    serve_config = env;
                }
            }
            if (!serve_config.empty()) {
                config = load_service_config(serve_config);
            }
            if (serve_ontology) config.ontology = serve_ontology;
            if (serve_corpus) config.corpus = serve_corpus;
            if (serve_index) config.index = serve_index;
            if (serve_profiles) config.profiles = serve_profiles;
            if (serve_ui) config.ui_dir = serve_ui;
            if (serve_listen) config.listen = *serve_listen;
            if (serve_limit) config.relevance_limit = *serve_limit;
            if (!config.ontology) {
                throw Error("serve needs an ontology (--ontology or config)");
            }

            Ontology ontology = load_ontology(*config.ontology);
            std::shared_ptr<const Snapshot> snapshot;
            if (config.index) {
                UrlMap urls;
                if (config.profiles) {
                    urls = urls_from_profiles(read_profiles_file(*config.profiles));
                } else if (config.corpus) {
                    urls = urls_from_docs(load_corpus(*config.corpus));
                }
                snapshot = snapshot_from_index(std::move(ontology), load_index(*config.index), std::move(urls));
            } else if (config.corpus) {
                snapshot = build_snapshot(std::move(ontology), load_corpus(*config.corpus), config.relevance_limit,
                                          {config.strip_html});
            } else {
                throw Error("serve needs --index or --corpus");
            }

            SearchService service(snapshot);
            httplib::Server server;
            service.mount(server, config.ui_dir);
            const ListenAddress addr = parse_listen(config.listen);
            std::cout << "serving " << snapshot->index.page_count() << " pages on " << addr.host << ":" << addr.port
                      << std::endl;
            if (!server.listen(addr.host, addr.port)) {
                throw Error("cannot listen on " + config.listen);
            }
            return EXIT_SUCCESS;
        }

        if (*bench_cmd) {
            std::optional<Ontology> ontology;
            std::vector<Document> docs;
            if (!bench_corpus.empty()) {
                ontology = load_ontology(bench_ontology);
                docs = load_corpus(bench_corpus);
            } else {
                auto synthetic = make_synthetic(bench_size, bench_terms, bench_seed, 0.0);
                ontology = std::move(synthetic.ontology);
                docs = std::move(synthetic.corpus.documents);
            }
            const auto ingested = ingest(docs, *ontology);
            const BuildResult built = build_index(ingested.profiles, *ontology);
            BenchOptions options;
            options.counts = bench_counts;
            options.repetitions = bench_reps;
            options.max_queries = bench_queries;
            const BenchReport report = run_bench(*ontology, built, options);
            std::cout << format_bench(report);
            if (!bench_json.empty()) {
                write_text(bench_json, bench_to_json(report));
            }
            return EXIT_SUCCESS;
        }

        if (*acc_cmd) {
            std::optional<Ontology> ontology;
            std::vector<Document> docs;
            Manifest manifest;
            if (!acc_corpus.empty()) {
                if (acc_manifest.empty()) {
                    throw Error("accuracy needs --manifest with --corpus; refusing to run without ground truth");
                }
                ontology = load_ontology(acc_ontology);
                docs = load_corpus(acc_corpus);
                manifest = parse_manifest(read_text(acc_manifest));
            } else {
                auto synthetic = make_synthetic(acc_size, acc_terms, acc_seed, acc_noise);
                ontology = std::move(synthetic.ontology);
                docs = std::move(synthetic.corpus.documents);
                manifest = std::move(synthetic.corpus.manifest);
            }
            const auto ingested = ingest(docs, *ontology);
            const BuildResult built = build_index(ingested.profiles, *ontology);
            const AccuracyReport report = run_accuracy(built, manifest, acc_counts);
            std::cout << format_accuracy(report);
            if (!acc_json.empty()) {
                write_text(acc_json, accuracy_to_json(report));
            }
            return EXIT_SUCCESS;
        }

        if (*gen_cmd) {
            std::optional<Ontology> ontology;
            if (!gen_ontology.empty()) {
                ontology = load_ontology(gen_ontology);
            } else if (!gen_names.empty()) {
                ontology = make_synthetic_ontology(gen_names, gen_seed);
            } else {
                ontology = make_synthetic_ontology(gen_terms, gen_seed);
            }
            SynthOptions options;
            options.pages = gen_pages;
            options.seed = gen_seed;
            options.noise = gen_noise;
            const SynthCorpus corpus = generate_corpus(*ontology, options);
            fs::create_directories(gen_out);
            std::ofstream out(gen_out / "corpus.jsonl", std::ios::binary | std::ios::trunc);
            write_corpus_jsonl(out, corpus.documents);
            if (!out) {
                throw Error("cannot write " + (gen_out / "corpus.jsonl").string());
            }
            write_text(gen_out / "manifest.json", serialize_manifest(corpus.manifest));
            write_text(gen_out / "ontology.json", serialize_ontology(*ontology));
            std::cout << "wrote " << corpus.documents.size() << " pages to " << gen_out.string() << "\n";
            return EXIT_SUCCESS;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_FAILURE;
    }
    return EXIT_SUCCESS;
}
