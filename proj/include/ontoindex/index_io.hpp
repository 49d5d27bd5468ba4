#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "ontoindex/indexer.hpp"

namespace ontoindex {

inline constexpr int kIndexFormatVersion = 1;

/// JSON index document:
/// {"version": 1, "domain": str, "min_relevance": num|null, "max_relevance": num|null,
///  "terms": {name: {"primary": [[page_id, relevance]...], "secondary": [...]}}}
/// Doubles are written in shortest round-trip form.
std::string serialize_index(const AttachmentIndex& index);

/// Throws IndexFormatError: kind version_mismatch for an unsupported
/// "version", kind corrupt for anything unparsable or structurally invalid.
AttachmentIndex deserialize_index(std::string_view bytes);

void save_index(const AttachmentIndex& index, const std::filesystem::path& path);
AttachmentIndex load_index(const std::filesystem::path& path);

} // namespace ontoindex
