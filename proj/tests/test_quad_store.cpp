#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <random>

#include "generators.hpp"
#include "oekg/ntriples.hpp"
#include "oekg/quad_store.hpp"

using namespace oekg;

namespace {

Triple make(const std::string& s, const std::string& p, const std::string& o) {
    return Triple{Iri{s}, Iri{p}, Term{Iri{o}}};
}

std::vector<Quad> sorted(std::vector<Quad> quads) {
    std::sort(quads.begin(), quads.end());
    return quads;
}

// reference semantics: match == filter over all quads
std::vector<Quad> brute_force(const QuadStore& store, const QuadPattern& p) {
    std::vector<Quad> out;
    for (const Quad& q : store.match(QuadPattern::any())) {
        if (p.subject && q.triple.subject != *p.subject) continue;
        if (p.predicate && Term{q.triple.predicate} != *p.predicate) continue;
        if (p.object && q.triple.object != *p.object) continue;
        if (p.graphs) {
            bool in = false;
            for (const auto& g : *p.graphs) in = in || g.name == q.graph.name;
            if (!in) continue;
        }
        out.push_back(q);
    }
    return out;
}

const std::vector<Triple>& algorithm_doc() {
    static const std::vector<Triple> doc{
        make("http://oekg.l3s.uni-hannover.de/resource/article1",
             "http://www.w3.org/1999/02/22-rdf-syntax-ns#type", "http://schema.org/Article"),
        Triple{Iri{"http://oekg.l3s.uni-hannover.de/resource/article1"},
               Iri{"http://schema.org/mentions"},
               Term{Iri{"http://oekg.l3s.uni-hannover.de/resource/entityId"}}}};
    return doc;
}

}  // namespace

TEST_CASE("inserting the news example yields two quads") {
    QuadStore store;
    auto news = make_graph_id("news");
    CHECK(store.insert(algorithm_doc(), news) == 2);
    CHECK(store.count(news) == 2);
    CHECK(store.total() == 2);

    SUBCASE("re-inserting ground content is a no-op") {
        CHECK(store.insert(algorithm_doc(), news) == 0);
        CHECK(store.count(news) == 2);
    }
    SUBCASE("the typed-article pattern matches exactly one quad") {
        QuadPattern p;
        p.predicate = Term{vocab::rdf_type()};
        p.object = Term{Iri{"http://schema.org/Article"}};
        p.graphs = std::vector<NamedGraphId>{news};
        CHECK(store.match(p).size() == 1);
    }
    SUBCASE("deleting the graph restores the empty store") {
        CHECK(store.delete_graph(news) == 2);
        CHECK(store.total() == 0);
        CHECK(store.count(news) == 0);
        CHECK(store.match(QuadPattern::any()).empty());
    }
}

TEST_CASE("empty insert and unknown-graph delete are no-ops") {
    QuadStore store;
    CHECK(store.insert({}, make_graph_id("g")) == 0);
    CHECK(store.total() == 0);
    CHECK(store.delete_graph(make_graph_id("nope")) == 0);
}

TEST_CASE("all-wildcard pattern returns everything; absent subject nothing") {
    QuadStore store;
    store.insert(algorithm_doc(), make_graph_id("news"));
    CHECK(store.match(QuadPattern::any()).size() == 2);

    QuadPattern p;
    p.subject = Term{Iri{"http://nowhere/x"}};
    CHECK(store.match(p).empty());
}

TEST_CASE("blank nodes are standardized apart per document") {
    QuadStore store;
    auto g = make_graph_id("g");
    std::vector<Triple> doc{
        Triple{BlankNode{"a"}, Iri{"http://p"}, Term{BlankNode{"a"}}},
        Triple{BlankNode{"a"}, Iri{"http://q"}, Term{plain_literal("x")}}};
    CHECK(store.insert(doc, g) == 2);
    // same labels, fresh identity: the re-upload adds quads instead of deduping
    CHECK(store.insert(doc, g) == 2);
    CHECK(store.count(g) == 4);

    // within one document the label keeps referring to one node
    QuadPattern p;
    p.predicate = Term{Iri{"http://p"}};
    for (const Quad& q : store.match(p)) {
        CHECK(q.triple.subject == q.triple.object);
    }
}

TEST_CASE("insert then delete of a fresh graph is the identity on store state") {
    testgen::TripleGen gen(4242);
    QuadStore store;
    store.insert(gen.random_document(25), make_graph_id("base"));
    auto before = sorted(store.match(QuadPattern::any()));
    auto before_total = store.total();

    auto g = make_graph_id("scratch");
    auto doc = gen.random_document(40);
    std::size_t added = store.insert(doc, g);
    CHECK(store.delete_graph(g) == added);
    CHECK(store.total() == before_total);
    CHECK(sorted(store.match(QuadPattern::any())) == before);
}

TEST_CASE("match agrees with the brute-force filter on random patterns") {
    testgen::TripleGen gen(31337);
    std::vector<NamedGraphId> graphs{make_graph_id("g1"), make_graph_id("g2"),
                                     make_graph_id("g3")};
    for (int round = 0; round < 12; ++round) {
        QuadStore store;
        std::vector<Quad> all;
        for (const auto& g : graphs) {
            auto doc = gen.random_document(static_cast<std::size_t>(gen.pick(0, 60)));
            // keep ground terms so the oracle can re-identify them
            for (auto& t : doc) {
                if (is_blank(t.subject)) t.subject = gen.random_iri();
                if (is_blank(t.object)) t.object = Term{gen.random_iri()};
            }
            store.insert(doc, g);
        }
        all = store.match(QuadPattern::any());
        if (all.empty()) continue;

        for (int i = 0; i < 90; ++i) {
            const Quad& probe = all[static_cast<std::size_t>(gen.pick(0, static_cast<int>(all.size()) - 1))];
            QuadPattern p;
            if (gen.pick(0, 1)) p.subject = probe.triple.subject;
            if (gen.pick(0, 1)) p.predicate = Term{probe.triple.predicate};
            if (gen.pick(0, 1)) p.object = probe.triple.object;
            switch (gen.pick(0, 3)) {
                case 0: p.graphs = std::vector<NamedGraphId>{probe.graph}; break;
                case 1: p.graphs = std::vector<NamedGraphId>{graphs[0], graphs[2]}; break;
                default: break;  // union
            }
            CHECK(sorted(store.match(p)) == sorted(brute_force(store, p)));
        }
    }
}

TEST_CASE("counters stay consistent under a random insert/delete workload") {
    testgen::TripleGen gen(777);
    QuadStore store;
    std::vector<NamedGraphId> graphs;
    for (int i = 0; i < 6; ++i) graphs.push_back(make_graph_id("g" + std::to_string(i)));

    for (int step = 0; step < 400; ++step) {
        const auto& g = graphs[static_cast<std::size_t>(gen.pick(0, 5))];
        if (gen.pick(0, 9) < 7) {
            store.insert(gen.random_document(static_cast<std::size_t>(gen.pick(1, 8))), g);
        } else {
            store.delete_graph(g);
        }
        std::uint64_t sum = 0;
        for (const auto& [graph, n] : store.graph_counts()) sum += n;
        CHECK(store.total() == sum);
        CHECK(store.total() == store.match(QuadPattern::any()).size());
    }
}

TEST_CASE("index selection covers the published access paths") {
    QuadStore store;
    auto g = make_graph_id("g");
    store.insert(algorithm_doc(), g);
    auto snap = store.snapshot();

    auto id = [&](const char* iri) { return snap.find_term(Term{Iri{iri}}); };
    auto type_id = snap.find_term(Term{vocab::rdf_type()});
    REQUIRE(type_id.has_value());

    IdPattern po;
    po.predicate = *type_id;
    po.object = *id("http://schema.org/Article");
    CHECK(snap.index_for(po) == IndexKind::POSG);

    IdPattern sp;
    sp.subject = *id("http://oekg.l3s.uni-hannover.de/resource/article1");
    sp.predicate = *type_id;
    CHECK(snap.index_for(sp) == IndexKind::SPOG);

    IdPattern gp;
    gp.graph = *snap.find_graph("g");
    gp.predicate = *type_id;
    CHECK(snap.index_for(gp) == IndexKind::GPOS);

    IdPattern gs;
    gs.graph = *snap.find_graph("g");
    gs.subject = sp.subject;
    CHECK(snap.index_for(gs) == IndexKind::GSPO);

    IdPattern o_only;
    o_only.object = *id("http://schema.org/Article");
    CHECK(snap.index_for(o_only) == IndexKind::Scan);

    CHECK(snap.match(po).size() == 1);
    CHECK(snap.estimate(po) == 1);
}

TEST_CASE("snapshots never observe later writes") {
    QuadStore store;
    auto g = make_graph_id("g");
    store.insert(algorithm_doc(), g);

    std::vector<IdQuad> before;
    {
        auto snap = store.snapshot();
        before = snap.match(IdPattern{});
        CHECK(before.size() == 2);
    }  // lock released before the write

    std::vector<Triple> more{make("http://new/s", "http://new/p", "http://new/o")};
    store.insert(more, g);
    CHECK(store.total() == 3);
    CHECK(before.size() == 2);
}

TEST_CASE("append log replay reproduces the store") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "oekg_store_test";
    fs::create_directories(dir);
    fs::path log = dir / "quads.log";
    fs::remove(log);

    testgen::TripleGen gen(555);
    std::vector<Quad> expected;
    {
        QuadStore store(log);
        store.insert(gen.random_document(30), make_graph_id("a"));
        store.insert(gen.random_document(30), make_graph_id("b"));
        store.delete_graph(make_graph_id("a"));
        store.insert(gen.random_document(10), make_graph_id("a"));
        expected = sorted(store.match(QuadPattern::any()));
    }
    {
        QuadStore replayed(log);
        CHECK(sorted(replayed.match(QuadPattern::any())) == expected);

        // fresh blank labels never collide with replayed ones
        std::vector<Triple> doc{Triple{BlankNode{"z"}, Iri{"http://p"}, Term{BlankNode{"z"}}}};
        replayed.insert(doc, make_graph_id("c"));
        auto all = sorted(replayed.match(QuadPattern::any()));
        std::size_t blanks = 0;
        std::set<std::string> labels;
        for (const Quad& q : all) {
            if (const auto* b = std::get_if<BlankNode>(&q.triple.subject)) labels.insert(b->label);
            if (const auto* b = std::get_if<BlankNode>(&q.triple.object)) labels.insert(b->label);
            (void)blanks;
        }
        // the new doc contributed exactly one fresh label
        CHECK(labels.size() >= 1);
    }
    fs::remove_all(dir);
}

TEST_CASE("replace_graph swaps content atomically") {
    QuadStore store;
    auto g = make_graph_id("g");
    store.insert(algorithm_doc(), g);
    std::vector<Triple> next{make("http://x/s", "http://x/p", "http://x/o")};
    CHECK(store.replace_graph(next, g) == 1);
    CHECK(store.count(g) == 1);
    auto quads = store.match(QuadPattern::any());
    REQUIRE(quads.size() == 1);
    CHECK(std::get<Iri>(quads[0].triple.subject).value == "http://x/s");
}
