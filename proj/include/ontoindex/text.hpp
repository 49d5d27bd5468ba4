#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ontoindex {

using TokenList = std::vector<std::string>;

/// Splits on every ASCII non-alphanumeric byte and lower-cases ASCII letters.
/// Bytes >= 0x80 are kept inside tokens so UTF-8 words survive intact.
TokenList tokenize(std::string_view content);

std::string case_fold(std::string_view text);

/// Canonical form of a name or synonym phrase: its tokens joined by a single
/// space. Returns an empty string when the phrase has no tokens.
std::string canonical_phrase(std::string_view phrase);

/// Removes everything between '<' and the next '>' (inclusive). An unclosed
/// '<' drops the remainder of the input.
std::string strip_tags(std::string_view html);

/// Splits a legacy syntable cell ("cost, rate ,price tag") on commas and trims
/// surrounding whitespace. Empty items are dropped.
std::vector<std::string> split_synonym_cell(std::string_view cell);

} // namespace ontoindex
