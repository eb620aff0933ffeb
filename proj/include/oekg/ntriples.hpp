#pragma once
// Line-recoverable N-Triples parser and deterministic serializer.
//
// The parser never aborts a document: each malformed line yields one
// ParseError with its 1-based line number and the remaining lines are still
// parsed. \uXXXX / \UXXXXXXXX and short escapes are honored on parse; the
// serializer emits short escapes and keeps everything else verbatim UTF-8,
// so parse(serialize(T)) == (T, []) for every valid triple list T.

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oekg/rdf.hpp"

namespace oekg {

struct ParseError {
    std::size_t line = 0;  // 1-based
    std::string message;

    bool operator==(const ParseError&) const = default;
};

struct ParseResult {
    std::vector<Triple> triples;
    std::vector<ParseError> errors;
};

ParseResult parse_ntriples(std::string_view text);

std::string serialize_ntriples(std::span<const Triple> triples);
void serialize_ntriples(std::span<const Triple> triples, std::ostream& out);

namespace ntriples {

// Token-level scanner shared with the quad-log reader.
struct ScanState {
    std::string_view input;
    std::size_t pos = 0;
    std::string error;
};

void skip_ws(ScanState& s);
// Scans one term (IRI, blank node or literal) at the cursor. On failure the
// cursor is left at the offending byte and `error` is set.
std::optional<Term> scan_term(ScanState& s);
// Consumes the statement terminator: ws, '.', ws, optional '#' comment, EOL.
bool scan_end(ScanState& s);

std::string term_string(const Term& term);
void write_term(const Term& term, std::string& out);

}  // namespace ntriples

}  // namespace oekg
