#include "ontoindex/config.hpp"

#include <charconv>
#include <fstream>

#include <json.hpp>

#include "ontoindex/error.hpp"

namespace ontoindex {

using nlohmann::json;

namespace {

double parse_double(std::string_view text, std::string_view what) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc{} || ptr != end) {
        throw Error("invalid " + std::string(what) + " '" + std::string(text) + "'");
    }
    return value;
}

} // namespace

ServiceConfig load_service_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open config file " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error("malformed config " + path.string() + ": " + e.what());
    }
    if (!doc.is_object()) {
        throw Error("config " + path.string() + " is not a JSON object");
    }

    const auto base = path.parent_path();
    auto path_field = [&](const char* key) -> std::optional<std::filesystem::path> {
        if (!doc.contains(key) || doc[key].is_null()) {
            return std::nullopt;
        }
        if (!doc[key].is_string()) {
            throw Error(std::string("config field \"") + key + "\" must be a string");
        }
        std::filesystem::path p = doc[key].get<std::string>();
        return p.is_absolute() ? p : base / p;
    };

    ServiceConfig config;
    config.ontology = path_field("ontology");
    config.corpus = path_field("corpus");
    config.index = path_field("index");
    config.profiles = path_field("profiles");
    config.ui_dir = path_field("ui_dir");
    try {
        config.relevance_limit = doc.value("relevance_limit", 0.0);
        config.strip_html = doc.value("strip_html", false);
        config.listen = doc.value("listen", config.listen);
    } catch (const json::type_error& e) {
        throw Error(std::string("config field has the wrong type: ") + e.what());
    }
    if (config.relevance_limit < 0.0) {
        throw Error("relevance_limit must be non-negative");
    }
    return config;
}

ListenAddress parse_listen(std::string_view spec) {
    ListenAddress out;
    std::string_view port_text = spec;
    if (const auto colon = spec.rfind(':'); colon != std::string_view::npos) {
        out.host = std::string(spec.substr(0, colon));
        port_text = spec.substr(colon + 1);
    }
    if (out.host.empty()) {
        out.host = "0.0.0.0";
    }
    unsigned port = 0;
    const auto* end = port_text.data() + port_text.size();
    const auto [ptr, ec] = std::from_chars(port_text.data(), end, port);
    if (port_text.empty() || ec != std::errc{} || ptr != end || port > 65535) {
        throw Error("invalid listen address '" + std::string(spec) + "'");
    }
    out.port = static_cast<std::uint16_t>(port);
    return out;
}

std::pair<double, double> parse_range(std::string_view spec) {
    const auto colon = spec.find(':');
    if (colon == std::string_view::npos) {
        throw Error("range must be written lo:hi, got '" + std::string(spec) + "'");
    }
    return {parse_double(spec.substr(0, colon), "range bound"), parse_double(spec.substr(colon + 1), "range bound")};
}

} // namespace ontoindex
