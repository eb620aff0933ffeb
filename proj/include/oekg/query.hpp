#pragma once
// Parser and evaluator for the SPARQL subset the integration service
// answers: SELECT [DISTINCT] over basic graph patterns with predicate-object
// lists, `a`, bracketed blank nodes, FILTER comparisons and ORDER BY.
//
// Queries run over the union of all named graphs unless an explicit graph
// scope is given. Anything outside the subset (OPTIONAL, UNION, paths,
// aggregates, subqueries, LIMIT, ...) is rejected at parse time with the
// feature's name, never silently ignored.

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "oekg/quad_store.hpp"
#include "oekg/rdf.hpp"

namespace oekg {

struct Variable {
    std::string name;  // without the '?' sigil

    bool operator==(const Variable&) const = default;
    auto operator<=>(const Variable&) const = default;
};

using PatternTerm = std::variant<Term, Variable>;

struct TriplePattern {
    PatternTerm subject;
    PatternTerm predicate;
    PatternTerm object;
};

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };

struct FilterExpr {
    CompareOp op = CompareOp::Eq;
    std::variant<Term, Variable> lhs;
    std::variant<Term, Variable> rhs;
};

struct OrderKey {
    Variable var;
    bool ascending = true;
};

struct Query {
    std::vector<std::string> projected;
    bool distinct = false;
    std::vector<TriplePattern> patterns;  // bracket nodes already desugared
    std::vector<FilterExpr> filters;
    std::vector<OrderKey> order;
};

class QuerySyntaxError : public std::runtime_error {
public:
    QuerySyntaxError(const std::string& message, std::size_t position)
        : std::runtime_error(message + " at offset " + std::to_string(position)),
          position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

class UnsupportedFeatureError : public std::runtime_error {
public:
    explicit UnsupportedFeatureError(const std::string& feature)
        : std::runtime_error("unsupported SPARQL feature: " + feature), feature_(feature) {}
    const std::string& feature() const { return feature_; }

private:
    std::string feature_;
};

// Throws QuerySyntaxError, UnsupportedFeatureError, UnknownPrefixError.
Query parse_query(std::string_view text, const PrefixTable& prefixes);

struct ResultTable {
    std::vector<std::string> vars;                        // projection order
    std::vector<std::vector<std::optional<Term>>> rows;   // unbound = nullopt
};

// scope == nullptr evaluates over the union of all named graphs.
ResultTable evaluate(const QuadStore::Snapshot& snapshot, const Query& query,
                     const std::vector<NamedGraphId>* scope = nullptr);
ResultTable evaluate(const QuadStore& store, const Query& query,
                     const std::vector<NamedGraphId>* scope = nullptr);

struct PlanStep {
    std::size_t pattern_index = 0;  // position in the desugared pattern list
    std::string pattern;            // compacted rendering
    std::uint64_t estimate = 0;
    IndexKind index = IndexKind::Scan;  // given everything bound earlier in the plan
};

struct QueryPlan {
    std::vector<PlanStep> steps;
};

QueryPlan explain(const QuadStore::Snapshot& snapshot, const Query& query,
                  const PrefixTable& prefixes,
                  const std::vector<NamedGraphId>* scope = nullptr);
std::string to_string(const QueryPlan& plan);

// Comparison semantics shared by FILTER and ORDER BY:
//  - numeric datatypes compare by value, xsd:date chronologically,
//    remaining literals by (datatype, lexical, language),
//  - IRIs by codepoint,
//  - FILTER order comparisons across kinds (or on blanks) are type errors
//    and eliminate the row; equality across kinds is structural.
std::optional<double> numeric_value(const Literal& literal);
std::optional<std::array<int, 3>> date_value(const Literal& literal);
std::optional<bool> eval_compare(const Term& lhs, CompareOp op, const Term& rhs);
// Total order with unbound first; used by ORDER BY and the deterministic
// fallback ordering of unordered results.
std::weak_ordering order_compare(const std::optional<Term>& a, const std::optional<Term>& b);

std::string to_tsv(const ResultTable& table);
std::string to_json(const ResultTable& table);

}  // namespace oekg
