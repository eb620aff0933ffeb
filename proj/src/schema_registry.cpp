#include "oekg/schema_registry.hpp"

#include <algorithm>
#include <deque>

namespace oekg {

bool is_symmetric(AlignRelation r) {
    return r == AlignRelation::ExactMatch || r == AlignRelation::CloseMatch;
}

AlignRelation inverse(AlignRelation r) {
    switch (r) {
        case AlignRelation::BroadMatch: return AlignRelation::NarrowMatch;
        case AlignRelation::NarrowMatch: return AlignRelation::BroadMatch;
        default: return r;
    }
}

std::string_view align_relation_name(AlignRelation r) {
    switch (r) {
        case AlignRelation::ExactMatch: return "exactMatch";
        case AlignRelation::CloseMatch: return "closeMatch";
        case AlignRelation::BroadMatch: return "broadMatch";
        case AlignRelation::NarrowMatch: return "narrowMatch";
    }
    return "?";
}

namespace {

std::optional<AlignRelation> align_relation_for(const Iri& predicate) {
    if (predicate == vocab::skos_exact_match()) return AlignRelation::ExactMatch;
    if (predicate == vocab::skos_close_match()) return AlignRelation::CloseMatch;
    if (predicate == vocab::skos_broad_match()) return AlignRelation::BroadMatch;
    if (predicate == vocab::skos_narrow_match()) return AlignRelation::NarrowMatch;
    return std::nullopt;
}

// DFS cycle check over child->parents edges
bool has_cycle(const std::map<Iri, std::set<Iri>>& parents, Iri& witness) {
    enum class Mark { White, Grey, Black };
    std::map<Iri, Mark> marks;
    std::vector<std::pair<Iri, bool>> stack;
    for (const auto& [node, _] : parents) {
        if (marks.count(node)) continue;
        stack.push_back({node, false});
        while (!stack.empty()) {
            auto [cur, done] = stack.back();
            stack.pop_back();
            if (done) {
                marks[cur] = Mark::Black;
                continue;
            }
            auto& m = marks[cur];
            if (m == Mark::Grey) continue;
            if (m == Mark::Black) continue;
            m = Mark::Grey;
            stack.push_back({cur, true});
            auto it = parents.find(cur);
            if (it == parents.end()) continue;
            for (const Iri& parent : it->second) {
                auto pm = marks.find(parent);
                if (pm != marks.end() && pm->second == Mark::Grey) {
                    witness = parent;
                    return true;
                }
                if (pm == marks.end() || pm->second == Mark::White)
                    stack.push_back({parent, false});
            }
        }
    }
    return false;
}

}  // namespace

void SchemaRegistry::index_triples(std::span<const Triple> triples, const NamedGraphId& graph,
                                   SchemaDelta& delta) {
    auto declare_class = [&](const Iri& iri) -> ClassDef& {
        auto [it, fresh] = classes_.try_emplace(iri, ClassDef{iri, {}, graph});
        if (fresh) delta.classes.push_back(iri);
        return it->second;
    };
    auto declare_property = [&](const Iri& iri) -> PropertyDef& {
        auto [it, fresh] = properties_.try_emplace(iri, PropertyDef{iri, {}, {}, graph});
        if (fresh) delta.properties.push_back(iri);
        return it->second;
    };

    for (const Triple& t : triples) {
        const Iri* subject = std::get_if<Iri>(&t.subject);
        if (!subject) continue;  // schema statements about blank nodes are stored, not indexed
        const Iri* object = std::get_if<Iri>(&t.object);

        if (t.predicate == vocab::rdfs_sub_class_of() && object) {
            declare_class(*subject).superclasses.insert(*object);
            declare_class(*object);
            parents_[*subject].insert(*object);
            children_[*object].insert(*subject);
        } else if (t.predicate == vocab::rdf_type() && object) {
            if (*object == vocab::rdfs_class() || *object == vocab::owl_class()) {
                declare_class(*subject);
            } else if (*object == vocab::rdf_property() ||
                       *object == vocab::owl_object_property() ||
                       *object == vocab::owl_datatype_property()) {
                declare_property(*subject);
            }
        } else if (t.predicate == vocab::rdfs_domain() && object) {
            declare_property(*subject).domain = *object;
            declare_class(*object);
        } else if (t.predicate == vocab::rdfs_range() && object) {
            declare_property(*subject).range = *object;
            declare_class(*object);
        } else if (object) {
            if (auto rel = align_relation_for(t.predicate)) {
                Alignment a{*subject, *object, *rel};
                if (alignments_.insert(a).second) delta.alignments.push_back(a);
            }
        }
    }
}

SchemaDelta SchemaRegistry::upload_schema(QuadStore& store, std::span<const Triple> triples,
                                          const NamedGraphId& graph) {
    // validate acyclicity on a scratch copy of the edges first
    std::map<Iri, std::set<Iri>> candidate = parents_;
    for (const Triple& t : triples) {
        const Iri* s = std::get_if<Iri>(&t.subject);
        const Iri* o = std::get_if<Iri>(&t.object);
        if (s && o && t.predicate == vocab::rdfs_sub_class_of()) candidate[*s].insert(*o);
    }
    Iri witness;
    if (has_cycle(candidate, witness)) throw CycleDetectedError(witness);

    SchemaDelta delta;
    index_triples(triples, graph, delta);
    delta.quads_inserted = store.insert(triples, graph);
    return delta;
}

bool SchemaRegistry::has_class(const Iri& iri) const { return classes_.contains(iri); }

bool SchemaRegistry::has_property(const Iri& iri) const { return properties_.contains(iri); }

std::set<Iri> SchemaRegistry::subclass_closure(const Iri& cls) const {
    if (!classes_.contains(cls)) throw UnknownClassError(cls);
    std::set<Iri> out;
    std::deque<Iri> frontier{cls};
    while (!frontier.empty()) {
        Iri cur = frontier.front();
        frontier.pop_front();
        auto it = parents_.find(cur);
        if (it == parents_.end()) continue;
        for (const Iri& parent : it->second) {
            if (out.insert(parent).second) frontier.push_back(parent);
        }
    }
    out.erase(cls);  // strict ancestors even inside degenerate data
    return out;
}

std::set<Iri> SchemaRegistry::subclass_descendants(const Iri& cls) const {
    std::set<Iri> out;
    std::deque<Iri> frontier{cls};
    while (!frontier.empty()) {
        Iri cur = frontier.front();
        frontier.pop_front();
        auto it = children_.find(cur);
        if (it == children_.end()) continue;
        for (const Iri& child : it->second) {
            if (out.insert(child).second) frontier.push_back(child);
        }
    }
    out.erase(cls);
    return out;
}

std::set<Iri> SchemaRegistry::instances_of(const QuadStore& store, const Iri& cls,
                                           bool transitive) const {
    std::set<Iri> wanted_classes{cls};
    if (transitive) {
        auto desc = subclass_descendants(cls);
        wanted_classes.insert(desc.begin(), desc.end());
    }
    std::set<Iri> out;
    for (const Iri& c : wanted_classes) {
        QuadPattern p;
        p.predicate = Term{vocab::rdf_type()};
        p.object = Term{c};
        for (const Quad& q : store.match(p)) {
            if (const Iri* s = std::get_if<Iri>(&q.triple.subject)) out.insert(*s);
        }
    }
    return out;
}

std::set<std::pair<Iri, AlignRelation>> SchemaRegistry::aligned(const Iri& cls) const {
    std::set<std::pair<Iri, AlignRelation>> out;
    for (const Alignment& a : alignments_) {
        if (a.left == cls) out.insert({a.right, a.relation});
        if (a.right == cls) out.insert({a.left, inverse(a.relation)});
    }
    return out;
}

}  // namespace oekg
