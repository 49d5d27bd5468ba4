#pragma once

#include <stdexcept>
#include <string>

namespace ontoindex {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Ontology document failed to parse or validate. `term()` names the
/// offending term when one is known.
class OntologyError : public Error {
public:
    OntologyError(const std::string& message, std::string term = {})
        : Error(term.empty() ? message : message + " (term '" + term + "')"),
          term_(std::move(term)) {}

    const std::string& term() const noexcept { return term_; }

private:
    std::string term_;
};

class CorpusError : public Error {
public:
    using Error::Error;
};

class DuplicatePageError : public Error {
public:
    explicit DuplicatePageError(std::string page_id)
        : Error("duplicate page id '" + page_id + "'"), page_id_(std::move(page_id)) {}

    const std::string& page_id() const noexcept { return page_id_; }

private:
    std::string page_id_;
};

class NoDominatingTermError : public Error {
public:
    explicit NoDominatingTermError(const std::string& page_id)
        : Error("page '" + page_id + "' has no ontology term occurrences") {}
};

class TermNotFoundError : public Error {
public:
    explicit TermNotFoundError(std::string term)
        : Error("unknown ontology term '" + term + "'"), term_(std::move(term)) {}

    const std::string& term() const noexcept { return term_; }

private:
    std::string term_;
};

class InvalidQueryError : public Error {
public:
    using Error::Error;
};

class NoBoundsError : public Error {
public:
    NoBoundsError() : Error("index is empty; relevance bounds are undefined") {}
};

/// Raised by index deserialization. Version mismatches and corrupt or
/// truncated payloads are reported with distinct kinds.
class IndexFormatError : public Error {
public:
    enum class Kind { version_mismatch, corrupt };

    IndexFormatError(Kind kind, const std::string& message) : Error(message), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

} // namespace ontoindex
