#include "oekg/quad_store.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>

#include "oekg/ntriples.hpp"

namespace oekg {

namespace {

// canonical slot order inside IdPattern/IdQuad: 0=graph 1=subject 2=predicate 3=object
constexpr std::array<int, 4> kPermGSPO{0, 1, 2, 3};
constexpr std::array<int, 4> kPermGPOS{0, 2, 3, 1};
constexpr std::array<int, 4> kPermPOSG{2, 3, 1, 0};
constexpr std::array<int, 4> kPermSPOG{1, 2, 3, 0};

const std::array<int, 4>& permutation(IndexKind kind) {
    switch (kind) {
        case IndexKind::GPOS: return kPermGPOS;
        case IndexKind::POSG: return kPermPOSG;
        case IndexKind::SPOG: return kPermSPOG;
        default: return kPermGSPO;
    }
}

std::array<std::uint32_t, 4> pattern_slots(const IdPattern& p) {
    return {p.graph, p.subject, p.predicate, p.object};
}

std::size_t bound_prefix_length(const IdPattern& p, IndexKind kind) {
    auto slots = pattern_slots(p);
    const auto& perm = permutation(kind);
    std::size_t n = 0;
    while (n < 4 && slots[static_cast<std::size_t>(perm[n])] != kWildcardId) ++n;
    return n;
}

constexpr std::uint64_t kEstimateCap = 4096;

}  // namespace

std::string_view index_name(IndexKind kind) {
    switch (kind) {
        case IndexKind::GSPO: return "GSPO";
        case IndexKind::GPOS: return "GPOS";
        case IndexKind::POSG: return "POSG";
        case IndexKind::SPOG: return "SPOG";
        case IndexKind::Scan: return "scan";
    }
    return "?";
}

QuadStore::QuadStore(const std::filesystem::path& log_path) {
    if (std::filesystem::exists(log_path)) replay_log(log_path);
    log_.open(log_path, std::ios::app);
    if (!log_) throw std::runtime_error("cannot open quad log: " + log_path.string());
}

TermId QuadStore::intern_term(const Term& term) {
    auto it = term_ids_.find(term);
    if (it != term_ids_.end()) return it->second;
    TermId id = static_cast<TermId>(terms_.size());
    terms_.push_back(term);
    term_ids_.emplace(term, id);
    return id;
}

GraphId QuadStore::intern_graph(const NamedGraphId& graph) {
    auto it = graph_ids_.find(graph.name);
    if (it != graph_ids_.end()) return it->second;
    GraphId id = static_cast<GraphId>(graphs_.size());
    graphs_.push_back(graph);
    graph_ids_.emplace(graph.name, id);
    return id;
}

std::optional<TermId> QuadStore::find_term_unlocked(const Term& term) const {
    auto it = term_ids_.find(term);
    if (it == term_ids_.end()) return std::nullopt;
    return it->second;
}

void QuadStore::add_quad_unlocked(const IdQuad& q) {
    gspo_.insert({q.graph, q.subject, q.predicate, q.object});
    gpos_.insert({q.graph, q.predicate, q.object, q.subject});
    posg_.insert({q.predicate, q.object, q.subject, q.graph});
    spog_.insert({q.subject, q.predicate, q.object, q.graph});
    ++graph_counts_[q.graph];
    ++predicate_counts_[q.predicate];
    ++total_;
}

std::size_t QuadStore::insert_encoded_unlocked(std::span<const EncodedTriple> triples,
                                               GraphId gid, bool log) {
    std::size_t added = 0;
    for (const EncodedTriple& t : triples) {
        Key key{gid, t.subject, t.predicate, t.object};
        if (gspo_.contains(key)) continue;
        IdQuad q{gid, t.subject, t.predicate, t.object};
        add_quad_unlocked(q);
        ++added;
        if (log) log_insert(q);
    }
    if (log && added > 0) log_.flush();
    return added;
}

std::size_t QuadStore::insert(std::span<const Triple> triples, const NamedGraphId& graph) {
    std::unique_lock lock(mutex_);
    GraphId gid = intern_graph(graph);

    // standardize blank nodes apart: one fresh label per document label
    std::unordered_map<std::string, std::string> renamed;
    auto encode = [&](const Term& term) -> TermId {
        if (const auto* b = std::get_if<BlankNode>(&term)) {
            auto [it, fresh] = renamed.try_emplace(b->label);
            if (fresh) it->second = "b" + std::to_string(++blank_counter_);
            return intern_term(Term{BlankNode{it->second}});
        }
        return intern_term(term);
    };

    std::vector<EncodedTriple> encoded;
    encoded.reserve(triples.size());
    for (const Triple& t : triples) {
        encoded.push_back({encode(t.subject), intern_term(Term{t.predicate}), encode(t.object)});
    }
    return insert_encoded_unlocked(encoded, gid, log_.is_open());
}

std::size_t QuadStore::delete_graph_unlocked(GraphId gid, bool log) {
    Key lower{gid, 0, 0, 0};
    std::vector<Key> doomed;
    for (auto it = gspo_.lower_bound(lower); it != gspo_.end() && (*it)[0] == gid; ++it) {
        doomed.push_back(*it);
    }
    for (const Key& k : doomed) {
        gspo_.erase(k);
        gpos_.erase({k[0], k[2], k[3], k[1]});
        posg_.erase({k[2], k[3], k[1], k[0]});
        spog_.erase({k[1], k[2], k[3], k[0]});
        auto pit = predicate_counts_.find(k[2]);
        if (pit != predicate_counts_.end() && --pit->second == 0) predicate_counts_.erase(pit);
    }
    if (!doomed.empty()) {
        total_ -= doomed.size();
        graph_counts_.erase(gid);
        if (log) {
            log_delete_graph(gid);
            log_.flush();
        }
    }
    return doomed.size();
}

std::size_t QuadStore::delete_graph(const NamedGraphId& graph) {
    std::unique_lock lock(mutex_);
    auto it = graph_ids_.find(graph.name);
    if (it == graph_ids_.end()) return 0;
    return delete_graph_unlocked(it->second, log_.is_open());
}

std::size_t QuadStore::replace_graph(std::span<const Triple> triples,
                                     const NamedGraphId& graph) {
    std::unique_lock lock(mutex_);
    GraphId gid = intern_graph(graph);
    delete_graph_unlocked(gid, log_.is_open());

    std::unordered_map<std::string, std::string> renamed;
    auto encode = [&](const Term& term) -> TermId {
        if (const auto* b = std::get_if<BlankNode>(&term)) {
            auto [it, fresh] = renamed.try_emplace(b->label);
            if (fresh) it->second = "b" + std::to_string(++blank_counter_);
            return intern_term(Term{BlankNode{it->second}});
        }
        return intern_term(term);
    };
    std::vector<EncodedTriple> encoded;
    encoded.reserve(triples.size());
    for (const Triple& t : triples) {
        encoded.push_back({encode(t.subject), intern_term(Term{t.predicate}), encode(t.object)});
    }
    return insert_encoded_unlocked(encoded, gid, log_.is_open());
}

std::uint64_t QuadStore::count(const NamedGraphId& graph) const {
    std::shared_lock lock(mutex_);
    auto it = graph_ids_.find(graph.name);
    if (it == graph_ids_.end()) return 0;
    auto cit = graph_counts_.find(it->second);
    return cit == graph_counts_.end() ? 0 : cit->second;
}

std::uint64_t QuadStore::total() const {
    std::shared_lock lock(mutex_);
    return total_;
}

std::vector<std::pair<NamedGraphId, std::uint64_t>> QuadStore::graph_counts() const {
    std::shared_lock lock(mutex_);
    std::vector<std::pair<NamedGraphId, std::uint64_t>> out;
    out.reserve(graph_counts_.size());
    for (const auto& [gid, n] : graph_counts_) out.emplace_back(graphs_[gid], n);
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first.name < b.first.name; });
    return out;
}

IndexKind QuadStore::index_for_unlocked(const IdPattern& p) const {
    IndexKind best = IndexKind::Scan;
    std::size_t best_len = 0;
    for (IndexKind kind : {IndexKind::GSPO, IndexKind::GPOS, IndexKind::POSG, IndexKind::SPOG}) {
        std::size_t len = bound_prefix_length(p, kind);
        if (len > best_len) {
            best_len = len;
            best = kind;
        }
    }
    return best;
}

std::vector<IdQuad> QuadStore::match_unlocked(const IdPattern& p) const {
    IndexKind kind = index_for_unlocked(p);
    const std::set<Key>* index = &gspo_;
    switch (kind) {
        case IndexKind::GPOS: index = &gpos_; break;
        case IndexKind::POSG: index = &posg_; break;
        case IndexKind::SPOG: index = &spog_; break;
        default: break;  // GSPO doubles as the scan order
    }
    const auto& perm = permutation(kind == IndexKind::Scan ? IndexKind::GSPO : kind);
    auto slots = pattern_slots(p);
    std::size_t prefix = kind == IndexKind::Scan ? 0 : bound_prefix_length(p, kind);

    Key lower{0, 0, 0, 0};
    for (std::size_t i = 0; i < prefix; ++i) lower[i] = slots[static_cast<std::size_t>(perm[i])];

    std::vector<IdQuad> out;
    for (auto it = index->lower_bound(lower); it != index->end(); ++it) {
        const Key& k = *it;
        bool in_range = true;
        for (std::size_t i = 0; i < prefix; ++i) {
            if (k[i] != slots[static_cast<std::size_t>(perm[i])]) {
                in_range = false;
                break;
            }
        }
        if (!in_range) break;
        bool ok = true;
        for (std::size_t i = prefix; i < 4; ++i) {
            std::uint32_t want = slots[static_cast<std::size_t>(perm[i])];
            if (want != kWildcardId && k[i] != want) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        IdQuad q{};
        std::array<std::uint32_t*, 4> canonical{&q.graph, &q.subject, &q.predicate, &q.object};
        for (std::size_t i = 0; i < 4; ++i) *canonical[static_cast<std::size_t>(perm[i])] = k[i];
        out.push_back(q);
    }
    return out;
}

std::uint64_t QuadStore::estimate_unlocked(const IdPattern& p) const {
    auto slots = pattern_slots(p);
    bool any_bound = std::any_of(slots.begin(), slots.end(),
                                 [](std::uint32_t v) { return v != kWildcardId; });
    if (!any_bound) return total_;

    // exact counters first
    if (p.subject == kWildcardId && p.object == kWildcardId && p.predicate == kWildcardId) {
        auto it = graph_counts_.find(p.graph);
        return it == graph_counts_.end() ? 0 : it->second;
    }
    if (p.graph == kWildcardId && p.subject == kWildcardId && p.object == kWildcardId) {
        auto it = predicate_counts_.find(p.predicate);
        return it == predicate_counts_.end() ? 0 : it->second;
    }

    IndexKind kind = index_for_unlocked(p);
    if (kind == IndexKind::Scan) return total_;

    const std::set<Key>* index = &gspo_;
    switch (kind) {
        case IndexKind::GPOS: index = &gpos_; break;
        case IndexKind::POSG: index = &posg_; break;
        case IndexKind::SPOG: index = &spog_; break;
        default: break;
    }
    const auto& perm = permutation(kind);
    std::size_t prefix = bound_prefix_length(p, kind);
    Key lower{0, 0, 0, 0};
    for (std::size_t i = 0; i < prefix; ++i) lower[i] = slots[static_cast<std::size_t>(perm[i])];

    std::uint64_t n = 0;
    for (auto it = index->lower_bound(lower); it != index->end() && n <= kEstimateCap; ++it) {
        bool in_range = true;
        for (std::size_t i = 0; i < prefix; ++i) {
            if ((*it)[i] != slots[static_cast<std::size_t>(perm[i])]) {
                in_range = false;
                break;
            }
        }
        if (!in_range) break;
        ++n;
    }
    return n;
}

std::optional<IdPattern> QuadStore::encode_pattern_unlocked(const QuadPattern& pattern,
                                                            std::optional<GraphId> graph) const {
    IdPattern p;
    if (graph) p.graph = *graph;
    auto bind = [&](const std::optional<Term>& term, TermId& slot) {
        if (!term) return true;
        auto id = find_term_unlocked(*term);
        if (!id) return false;  // bound term unknown -> nothing matches
        slot = *id;
        return true;
    };
    if (!bind(pattern.subject, p.subject)) return std::nullopt;
    if (!bind(pattern.predicate, p.predicate)) return std::nullopt;
    if (!bind(pattern.object, p.object)) return std::nullopt;
    return p;
}

std::vector<Quad> QuadStore::match_decoded_unlocked(const QuadPattern& pattern) const {
    std::vector<GraphId> graph_scope;
    bool all_graphs = !pattern.graphs.has_value();
    if (!all_graphs) {
        for (const NamedGraphId& g : *pattern.graphs) {
            auto it = graph_ids_.find(g.name);
            if (it != graph_ids_.end()) graph_scope.push_back(it->second);
        }
    }

    std::vector<Quad> out;
    auto run = [&](std::optional<GraphId> gid) {
        auto p = encode_pattern_unlocked(pattern, gid);
        if (!p) return;
        for (const IdQuad& q : match_unlocked(*p)) {
            out.push_back(Quad{Triple{terms_[q.subject], std::get<Iri>(terms_[q.predicate]),
                                      terms_[q.object]},
                               graphs_[q.graph]});
        }
    };
    if (all_graphs) {
        run(std::nullopt);
    } else {
        for (GraphId gid : graph_scope) run(gid);
    }
    return out;
}

std::vector<Quad> QuadStore::match(const QuadPattern& pattern) const {
    std::shared_lock lock(mutex_);
    return match_decoded_unlocked(pattern);
}

// ---- Snapshot ----

std::optional<TermId> QuadStore::Snapshot::find_term(const Term& term) const {
    return store_->find_term_unlocked(term);
}

const Term& QuadStore::Snapshot::term(TermId id) const { return store_->terms_[id]; }

std::optional<GraphId> QuadStore::Snapshot::find_graph(std::string_view name) const {
    auto it = store_->graph_ids_.find(std::string(name));
    if (it == store_->graph_ids_.end()) return std::nullopt;
    return it->second;
}

const NamedGraphId& QuadStore::Snapshot::graph(GraphId id) const { return store_->graphs_[id]; }

std::vector<GraphId> QuadStore::Snapshot::graph_ids() const {
    std::vector<GraphId> out;
    out.reserve(store_->graph_counts_.size());
    for (const auto& [gid, n] : store_->graph_counts_) out.push_back(gid);
    return out;
}

std::vector<IdQuad> QuadStore::Snapshot::match(const IdPattern& pattern) const {
    return store_->match_unlocked(pattern);
}

std::vector<Quad> QuadStore::Snapshot::match(const QuadPattern& pattern) const {
    return store_->match_decoded_unlocked(pattern);
}

std::uint64_t QuadStore::Snapshot::estimate(const IdPattern& pattern) const {
    return store_->estimate_unlocked(pattern);
}

IndexKind QuadStore::Snapshot::index_for(const IdPattern& pattern) const {
    return store_->index_for_unlocked(pattern);
}

std::uint64_t QuadStore::Snapshot::total() const { return store_->total_; }

std::uint64_t QuadStore::Snapshot::count(const NamedGraphId& graph) const {
    auto it = store_->graph_ids_.find(graph.name);
    if (it == store_->graph_ids_.end()) return 0;
    auto cit = store_->graph_counts_.find(it->second);
    return cit == store_->graph_counts_.end() ? 0 : cit->second;
}

// ---- persistence log ----

void QuadStore::log_insert(const IdQuad& q) {
    std::string line = "A ";
    ntriples::write_term(terms_[q.subject], line);
    line.push_back(' ');
    ntriples::write_term(terms_[q.predicate], line);
    line.push_back(' ');
    ntriples::write_term(terms_[q.object], line);
    line.push_back(' ');
    ntriples::write_term(Term{graphs_[q.graph].iri}, line);
    line.append(" .\n");
    log_ << line;
}

void QuadStore::log_delete_graph(GraphId gid) {
    std::string line = "D-GRAPH ";
    ntriples::write_term(Term{graphs_[gid].iri}, line);
    line.push_back('\n');
    log_ << line;
}

void QuadStore::note_blank_label(const std::string& label) {
    if (label.size() < 2 || label[0] != 'b') return;
    std::uint64_t n = 0;
    auto [ptr, ec] = std::from_chars(label.data() + 1, label.data() + label.size(), n);
    if (ec == std::errc() && ptr == label.data() + label.size() && n > blank_counter_) {
        blank_counter_ = n;
    }
}

void QuadStore::replay_log(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read quad log: " + path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto bad = [&](const std::string& why) {
            throw std::runtime_error("quad log " + path.string() + ":" +
                                     std::to_string(line_no) + ": " + why);
        };
        if (line.starts_with("A ")) {
            ntriples::ScanState s{std::string_view(line).substr(2), 0, {}};
            auto subject = ntriples::scan_term(s);
            std::optional<Term> predicate, object, graph_term;
            if (subject) predicate = ntriples::scan_term(s);
            if (predicate) object = ntriples::scan_term(s);
            if (object) graph_term = ntriples::scan_term(s);
            if (!graph_term || !ntriples::scan_end(s)) bad(s.error);
            if (!is_iri(*graph_term)) bad("graph must be an IRI");
            auto graph = graph_id_from_iri(std::get<Iri>(*graph_term));
            if (!graph) bad("graph IRI outside the graph namespace");
            if (!is_iri(*predicate)) bad("predicate must be an IRI");
            for (const Term* t : {&*subject, &*object}) {
                if (const auto* b = std::get_if<BlankNode>(t)) note_blank_label(b->label);
            }
            GraphId gid = intern_graph(*graph);
            EncodedTriple enc{intern_term(*subject), intern_term(*predicate),
                              intern_term(*object)};
            insert_encoded_unlocked({&enc, 1}, gid, false);
        } else if (line.starts_with("D-GRAPH ")) {
            ntriples::ScanState s{std::string_view(line).substr(8), 0, {}};
            auto graph_term = ntriples::scan_term(s);
            if (!graph_term || !is_iri(*graph_term)) bad("expected graph IRI");
            auto graph = graph_id_from_iri(std::get<Iri>(*graph_term));
            if (!graph) bad("graph IRI outside the graph namespace");
            auto it = graph_ids_.find(graph->name);
            if (it != graph_ids_.end()) delete_graph_unlocked(it->second, false);
        } else {
            bad("unrecognized record");
        }
    }
}

}  // namespace oekg
