#pragma once
// Class/property definitions, the subclass hierarchy and SKOS alignments.
//
// The registry is a cache over schema statements that also live as regular
// quads in the store; upload_schema is the single mutation path and keeps
// both in sync. The subclass relation stays acyclic: an upload that would
// close a cycle is rejected without touching the store or the registry.

#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "oekg/quad_store.hpp"
#include "oekg/rdf.hpp"

namespace oekg {

struct ClassDef {
    Iri iri;
    std::set<Iri> superclasses;
    NamedGraphId origin;
};

struct PropertyDef {
    Iri iri;
    std::optional<Iri> domain;
    std::optional<Iri> range;
    NamedGraphId origin;
};

enum class AlignRelation { ExactMatch, CloseMatch, BroadMatch, NarrowMatch };

bool is_symmetric(AlignRelation r);
AlignRelation inverse(AlignRelation r);
std::string_view align_relation_name(AlignRelation r);

struct Alignment {
    Iri left;
    Iri right;
    AlignRelation relation = AlignRelation::ExactMatch;

    auto operator<=>(const Alignment&) const = default;
};

struct SchemaDelta {
    std::vector<Iri> classes;
    std::vector<Iri> properties;
    std::vector<Alignment> alignments;
    std::size_t quads_inserted = 0;
};

class CycleDetectedError : public std::runtime_error {
public:
    explicit CycleDetectedError(const Iri& at)
        : std::runtime_error("subclass cycle through " + at.value) {}
};

class UnknownClassError : public std::runtime_error {
public:
    explicit UnknownClassError(const Iri& iri)
        : std::runtime_error("unknown class " + iri.value) {}
};

class SchemaRegistry {
public:
    // Stores every triple verbatim under `graph` and indexes the schema
    // statements (subClassOf, domain/range, class/property declarations,
    // skos alignments). Atomic: throws CycleDetectedError and leaves both
    // store and registry untouched.
    SchemaDelta upload_schema(QuadStore& store, std::span<const Triple> triples,
                              const NamedGraphId& graph);

    bool has_class(const Iri& iri) const;
    bool has_property(const Iri& iri) const;
    const std::map<Iri, ClassDef>& classes() const { return classes_; }
    const std::map<Iri, PropertyDef>& properties() const { return properties_; }

    // Strict ancestors (the queried class excluded). Throws UnknownClassError.
    std::set<Iri> subclass_closure(const Iri& cls) const;

    // Strict descendants; empty for leaves and undeclared classes.
    std::set<Iri> subclass_descendants(const Iri& cls) const;

    // Subjects typed `cls` (rdf:type, IRIs only); transitive adds every
    // descendant class.
    std::set<Iri> instances_of(const QuadStore& store, const Iri& cls, bool transitive) const;

    // Alignments touching cls; symmetric relations reported from both
    // sides, broad/narrow reported as their inverse from the right side.
    std::set<std::pair<Iri, AlignRelation>> aligned(const Iri& cls) const;

private:
    struct ParsedSchema;
    void index_triples(std::span<const Triple> triples, const NamedGraphId& graph,
                       SchemaDelta& delta);

    std::map<Iri, ClassDef> classes_;
    std::map<Iri, PropertyDef> properties_;
    std::set<Alignment> alignments_;
    // child -> parents edge view for the closure walks
    std::map<Iri, std::set<Iri>> parents_;
    std::map<Iri, std::set<Iri>> children_;
};

}  // namespace oekg
