#include "ontoindex/text.hpp"

namespace ontoindex {

namespace {

bool is_token_byte(unsigned char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

char fold(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

} // namespace

TokenList tokenize(std::string_view content) {
    TokenList tokens;
    std::string current;
    for (char c : content) {
        if (is_token_byte(static_cast<unsigned char>(c))) {
            current.push_back(fold(c));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) {
        tokens.push_back(std::move(current));
    }
    return tokens;
}

std::string case_fold(std::string_view text) {
    std::string out(text);
    for (char& c : out) {
        c = fold(c);
    }
    return out;
}

std::string canonical_phrase(std::string_view phrase) {
    std::string out;
    for (const auto& token : tokenize(phrase)) {
        if (!out.empty()) {
            out.push_back(' ');
        }
        out += token;
    }
    return out;
}

std::string strip_tags(std::string_view html) {
    std::string out;
    out.reserve(html.size());
    bool in_tag = false;
    for (char c : html) {
        if (in_tag) {
            if (c == '>') {
                in_tag = false;
                // keep words on either side of a tag apart
                out.push_back(' ');
            }
        } else if (c == '<') {
            in_tag = true;
        } else {
            out.push_back(c);
        }
    }
    return out;
}

std::vector<std::string> split_synonym_cell(std::string_view cell) {
    std::vector<std::string> items;
    std::size_t start = 0;
    while (start <= cell.size()) {
        std::size_t comma = cell.find(',', start);
        if (comma == std::string_view::npos) {
            comma = cell.size();
        }
        std::size_t b = start;
        std::size_t e = comma;
        while (b < e && is_space(cell[b])) {
            ++b;
        }
        while (e > b && is_space(cell[e - 1])) {
            --e;
        }
        if (e > b) {
            items.emplace_back(cell.substr(b, e - b));
        }
        start = comma + 1;
    }
    return items;
}

} // namespace ontoindex
