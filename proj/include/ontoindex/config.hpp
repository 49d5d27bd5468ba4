#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace ontoindex {

/// Environment variable naming a service config file.
inline constexpr const char* kConfigEnvVar = "ONTOINDEX_CONFIG";

/// JSON config: {"ontology", "corpus", "index", "profiles", "relevance_limit",
/// "listen", "strip_html", "ui_dir"}. Relative paths resolve against the
/// config file's directory.
struct ServiceConfig {
    std::optional<std::filesystem::path> ontology;
    std::optional<std::filesystem::path> corpus;
    std::optional<std::filesystem::path> index;
    std::optional<std::filesystem::path> profiles;
    std::optional<std::filesystem::path> ui_dir;
    double relevance_limit = 0.0;
    bool strip_html = false;
    std::string listen = "127.0.0.1:8080";
};

ServiceConfig load_service_config(const std::filesystem::path& path);

struct ListenAddress {
    std::string host;
    std::uint16_t port = 0;
};

/// "host:port", ":port" (all interfaces) or "port". Throws Error when malformed.
ListenAddress parse_listen(std::string_view spec);

/// Parses "lo:hi". Throws Error when malformed.
std::pair<double, double> parse_range(std::string_view spec);

} // namespace ontoindex
