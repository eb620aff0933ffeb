#pragma once
// RDF value types, vocabulary constants and the prefix table.
//
// Terms are immutable values with structural equality; everything here is
// safe to copy across threads. IRIs are validated syntactically only, they
// are never resolved.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace oekg {

class UnknownPrefixError : public std::runtime_error {
public:
    explicit UnknownPrefixError(const std::string& prefix)
        : std::runtime_error("unknown prefix: " + prefix), prefix_(prefix) {}
    const std::string& prefix() const { return prefix_; }

private:
    std::string prefix_;
};

// Absolute IRI. Must be non-empty, free of whitespace and of unescaped
// '<', '>', '"'. Construction validates; parse paths report violations as
// line errors instead of throwing.
struct Iri {
    std::string value;

    Iri() = default;
    explicit Iri(std::string v) : value(std::move(v)) {}

    bool operator==(const Iri&) const = default;
    auto operator<=>(const Iri&) const = default;
};

bool is_valid_iri(std::string_view value);

// Literal with lexical form, datatype IRI and optional language tag.
// language is non-empty exactly when datatype is rdf:langString, and is
// stored lowercased (BCP-47 tags are case-insensitive).
struct Literal {
    std::string lexical;
    Iri datatype;
    std::string language;  // empty unless datatype == rdf:langString

    bool operator==(const Literal&) const = default;
    auto operator<=>(const Literal&) const = default;
};

bool is_valid_language_tag(std::string_view tag);

// Document-scoped blank node. Labels are renamed apart on store insertion
// and carry no global identity.
struct BlankNode {
    std::string label;

    bool operator==(const BlankNode&) const = default;
    auto operator<=>(const BlankNode&) const = default;
};

using Term = std::variant<Iri, Literal, BlankNode>;

inline bool is_iri(const Term& t) { return std::holds_alternative<Iri>(t); }
inline bool is_literal(const Term& t) { return std::holds_alternative<Literal>(t); }
inline bool is_blank(const Term& t) { return std::holds_alternative<BlankNode>(t); }

// Convenience factories keeping the Literal invariants in one place.
Literal plain_literal(std::string lexical);
Literal lang_literal(std::string lexical, std::string language);
Literal typed_literal(std::string lexical, Iri datatype);
Literal integer_literal(long long value);
Literal decimal_literal(std::string lexical);
Literal date_literal(std::string yyyy_mm_dd);

struct TermHash {
    std::size_t operator()(const Term& t) const;
};

// subject is Iri or BlankNode, predicate always an Iri.
struct Triple {
    Term subject;
    Iri predicate;
    Term object;

    bool operator==(const Triple&) const = default;
    auto operator<=>(const Triple&) const = default;
};

// Short graph identifier plus its oekg-g: IRI. name matches [A-Za-z0-9_+-]+.
struct NamedGraphId {
    std::string name;
    Iri iri;

    bool operator==(const NamedGraphId&) const = default;
    auto operator<=>(const NamedGraphId&) const = default;
};

bool is_valid_graph_name(std::string_view name);
NamedGraphId make_graph_id(std::string_view name);  // throws std::invalid_argument
std::optional<NamedGraphId> graph_id_from_iri(const Iri& iri);

struct Quad {
    Triple triple;
    NamedGraphId graph;

    bool operator==(const Quad&) const = default;
    auto operator<=>(const Quad&) const = default;
};

// prefix -> namespace IRI. Injective per prefix; several prefixes may name
// the same namespace (xs:/xsd: both bind XMLSchema#).
class PrefixTable {
public:
    void bind(std::string prefix, Iri ns);
    std::optional<Iri> find(std::string_view prefix) const;
    const std::map<std::string, Iri>& entries() const { return entries_; }

    // `prefix:local` -> full IRI. Throws UnknownPrefixError.
    Iri expand(std::string_view curie) const;

    // Longest-namespace-match compaction; ties go to the shortest, then
    // lexicographically smallest prefix. Falls back to `<iri>` verbatim.
    std::string compact(const Iri& iri) const;

    static PrefixTable defaults();
    static PrefixTable load_tsv(const std::string& path);  // prefix<TAB>namespace

private:
    std::map<std::string, Iri> entries_;
};

Iri expand_curie(std::string_view curie, const PrefixTable& prefixes);
std::string compact_iri(const Iri& iri, const PrefixTable& prefixes);

namespace ns {
inline constexpr std::string_view oekg_r = "http://oekg.l3s.uni-hannover.de/resource/";
inline constexpr std::string_view oekg_s = "http://oekg.l3s.uni-hannover.de/schema/";
inline constexpr std::string_view oekg_g = "http://oekg.l3s.uni-hannover.de/graph/";
inline constexpr std::string_view uner = "http://oekg.l3s.uni-hannover.de/uner/";
inline constexpr std::string_view so = "http://schema.org/";
inline constexpr std::string_view rdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view rdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view xsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view sem = "http://semanticweb.cs.vu.nl/2009/11/sem/";
inline constexpr std::string_view onyx = "http://www.gsi.dit.upm.es/ontologies/onyx/ns#";
inline constexpr std::string_view skos = "http://www.w3.org/2004/02/skos/core#";
inline constexpr std::string_view owl = "http://www.w3.org/2002/07/owl#";
inline constexpr std::string_view dbr = "http://dbpedia.org/resource/";
inline constexpr std::string_view dbo = "http://dbpedia.org/ontology/";
}  // namespace ns

namespace vocab {
Iri iri(std::string_view ns, std::string_view local);

const Iri& rdf_type();
const Iri& rdf_lang_string();
const Iri& rdf_property();

const Iri& xsd_string();
const Iri& xsd_integer();
const Iri& xsd_decimal();
const Iri& xsd_double();
const Iri& xsd_float();
const Iri& xsd_boolean();
const Iri& xsd_date();
const Iri& xsd_date_time();
const Iri& xsd_language();

const Iri& rdfs_class();
const Iri& rdfs_sub_class_of();
const Iri& rdfs_domain();
const Iri& rdfs_range();
const Iri& rdfs_label();

const Iri& owl_class();
const Iri& owl_same_as();
const Iri& owl_object_property();
const Iri& owl_datatype_property();

const Iri& skos_pref_label();
const Iri& skos_exact_match();
const Iri& skos_close_match();
const Iri& skos_broad_match();
const Iri& skos_narrow_match();

const Iri& sem_event();
const Iri& sem_actor();
const Iri& sem_place();
const Iri& sem_has_place();
const Iri& sem_has_begin_time_stamp();
const Iri& sem_has_end_time_stamp();

const Iri& so_article();
const Iri& so_question();
const Iri& so_answer();
const Iri& so_headline();
const Iri& so_mentions();
const Iri& so_main_entity();
const Iri& so_suggested_answer();
const Iri& so_text();
const Iri& so_image();
const Iri& so_description();

const Iri& oekgs_relation();
const Iri& oekgs_text_event();
const Iri& oekgs_event_series();
const Iri& oekgs_event_series_edition();
const Iri& oekgs_language_specific_relation();
const Iri& oekgs_language_specific_relation_score();
const Iri& oekgs_source();
const Iri& oekgs_target();
const Iri& oekgs_has_language_specific_relation_score();
const Iri& oekgs_score_value();
const Iri& oekgs_score_language();
const Iri& oekgs_positive_emotion();
const Iri& oekgs_negative_emotion();

const Iri& onyx_emotion_set();
const Iri& onyx_emotion();
const Iri& onyx_emotion_category();
const Iri& onyx_has_emotion_set();
const Iri& onyx_has_emotion();
const Iri& onyx_has_emotion_category();
const Iri& onyx_has_emotion_intensity();
}  // namespace vocab

}  // namespace oekg
