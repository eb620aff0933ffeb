#pragma once
// In-process quad store with named-graph isolation and set semantics.
//
// Terms are dictionary-encoded to 32-bit ids; quads live in four composite
// orderings (G-S-P-O, G-P-O-S, P-O-S-G, S-P-O-G) so every access path the
// query engine generates is a prefix range scan. Counters track per-graph
// and total cardinalities exactly.
//
// Concurrency: many readers XOR one writer behind one shared_mutex. A
// Snapshot pins the reader lock for its lifetime, so anything computed
// through it never observes a concurrent write.
//
// Optional persistence: an append-only log of `A <s> <p> <o> <g> .` /
// `D-GRAPH <g>` lines, replayed on open. Blank-node labels in the log are
// already standardized apart and replay keeps them verbatim.

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "oekg/rdf.hpp"

namespace oekg {

using TermId = std::uint32_t;
using GraphId = std::uint32_t;
inline constexpr std::uint32_t kWildcardId = 0xFFFFFFFFu;

// Pattern over decoded terms. Empty optionals are wildcards; `graphs`
// absent means the union of all named graphs, otherwise an explicit set
// (a single element gives the plain one-graph case).
struct QuadPattern {
    std::optional<Term> subject;
    std::optional<Term> predicate;
    std::optional<Term> object;
    std::optional<std::vector<NamedGraphId>> graphs;

    static QuadPattern any() { return {}; }
};

// Encoded pattern in canonical (graph, subject, predicate, object) slots.
struct IdPattern {
    GraphId graph = kWildcardId;
    TermId subject = kWildcardId;
    TermId predicate = kWildcardId;
    TermId object = kWildcardId;
};

struct IdQuad {
    GraphId graph;
    TermId subject;
    TermId predicate;
    TermId object;

    bool operator==(const IdQuad&) const = default;
};

enum class IndexKind { GSPO, GPOS, POSG, SPOG, Scan };
std::string_view index_name(IndexKind kind);

class QuadStore {
public:
    QuadStore() = default;
    // Opens (creating if absent) and replays the append log.
    explicit QuadStore(const std::filesystem::path& log_path);

    QuadStore(const QuadStore&) = delete;
    QuadStore& operator=(const QuadStore&) = delete;

    // Inserts after renaming the document's blank nodes apart from
    // everything already stored. Duplicates are skipped; returns the
    // number of quads actually added.
    std::size_t insert(std::span<const Triple> triples, const NamedGraphId& graph);

    // delete_graph + insert under one writer lock. Returns quads inserted.
    std::size_t replace_graph(std::span<const Triple> triples, const NamedGraphId& graph);

    std::size_t delete_graph(const NamedGraphId& graph);

    std::uint64_t count(const NamedGraphId& graph) const;
    std::uint64_t total() const;
    // Non-empty graphs with their exact quad counts, by name.
    std::vector<std::pair<NamedGraphId, std::uint64_t>> graph_counts() const;

    std::vector<Quad> match(const QuadPattern& pattern) const;

    // Shared-locked consistent view; the id-level surface the query engine
    // works on. Keep it short-lived: it blocks writers.
    class Snapshot {
    public:
        std::optional<TermId> find_term(const Term& term) const;
        const Term& term(TermId id) const;
        std::optional<GraphId> find_graph(std::string_view name) const;
        const NamedGraphId& graph(GraphId id) const;
        std::vector<GraphId> graph_ids() const;  // non-empty graphs

        std::vector<IdQuad> match(const IdPattern& pattern) const;
        std::vector<Quad> match(const QuadPattern& pattern) const;

        // Upper-bound cardinality estimate from index statistics; range
        // walks are capped so planning stays cheap.
        std::uint64_t estimate(const IdPattern& pattern) const;
        IndexKind index_for(const IdPattern& pattern) const;

        std::uint64_t total() const;
        std::uint64_t count(const NamedGraphId& graph) const;

    private:
        friend class QuadStore;
        explicit Snapshot(const QuadStore& store)
            : store_(&store), lock_(store.mutex_) {}
        const QuadStore* store_;
        std::shared_lock<std::shared_mutex> lock_;
    };

    Snapshot snapshot() const { return Snapshot(*this); }

private:
    friend class Snapshot;

    using Key = std::array<std::uint32_t, 4>;

    struct EncodedTriple {
        TermId subject, predicate, object;
    };

    TermId intern_term(const Term& term);
    GraphId intern_graph(const NamedGraphId& graph);
    std::optional<TermId> find_term_unlocked(const Term& term) const;

    // quad assumed absent-checked by caller via gspo_
    void add_quad_unlocked(const IdQuad& q);
    std::size_t insert_encoded_unlocked(std::span<const EncodedTriple> triples, GraphId gid,
                                        bool log);
    std::size_t delete_graph_unlocked(GraphId gid, bool log);
    std::vector<IdQuad> match_unlocked(const IdPattern& pattern) const;
    std::uint64_t estimate_unlocked(const IdPattern& pattern) const;
    IndexKind index_for_unlocked(const IdPattern& pattern) const;
    std::vector<Quad> match_decoded_unlocked(const QuadPattern& pattern) const;
    std::optional<IdPattern> encode_pattern_unlocked(const QuadPattern& pattern,
                                                     std::optional<GraphId> graph) const;

    void log_insert(const IdQuad& q);
    void log_delete_graph(GraphId gid);
    void replay_log(const std::filesystem::path& path);
    void note_blank_label(const std::string& label);

    mutable std::shared_mutex mutex_;

    std::unordered_map<Term, TermId, TermHash> term_ids_;
    std::vector<Term> terms_;
    std::unordered_map<std::string, GraphId> graph_ids_;
    std::vector<NamedGraphId> graphs_;

    std::set<Key> gspo_;
    std::set<Key> gpos_;
    std::set<Key> posg_;
    std::set<Key> spog_;

    std::map<GraphId, std::uint64_t> graph_counts_;
    std::unordered_map<TermId, std::uint64_t> predicate_counts_;
    std::uint64_t total_ = 0;
    std::uint64_t blank_counter_ = 0;

    std::ofstream log_;
};

}  // namespace oekg
