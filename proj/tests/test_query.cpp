#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "oekg/ntriples.hpp"
#include "oekg/query.hpp"
#include "oekg/quad_store.hpp"
#include "query_oracle.hpp"

using namespace oekg;

namespace {

const char* kListing1 = R"(SELECT DISTINCT ?Location ?Image WHERE {
  ?earthquake rdf:type uner:Earthquake ;
    sem:hasPlace ?Location  .
  ?Location so:image ?Image .
}
)";

const char* kListing3 = R"(SELECT ?Label ?StartDate WHERE {
  ?event owl:sameAs dbr:World_War_I.
  ?r oekg-s:source ?event ;
    oekg-s:target ?target ;
    oekg-s:hasLanguageSpecificRelationScore [
      oekg-s:scoreValue ?value ;
      oekg-s:scoreLanguage 'ru'^^xsd:language
    ] .
  ?target skos:prefLabel ?Label ;
    sem:hasBeginTimeStamp ?StartDate .
  FILTER(?value >= 0.8) .
}
ORDER BY ?StartDate
)";

PrefixTable prefixes() { return PrefixTable::defaults(); }

std::string cell(const std::optional<Term>& t) {
    return t ? ntriples::term_string(*t) : std::string();
}

std::vector<std::string> row_strings(const ResultTable& t) {
    std::vector<std::string> out;
    for (const auto& row : t.rows) {
        std::string s;
        for (const auto& c : row) {
            s += cell(c);
            s.push_back('\t');
        }
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace

TEST_CASE("listing 1 parses to three patterns with a distinct projection") {
    Query q = parse_query(kListing1, prefixes());
    CHECK(q.distinct);
    CHECK(q.projected == std::vector<std::string>{"Location", "Image"});
    REQUIRE(q.patterns.size() == 3);
    CHECK(std::get<Variable>(q.patterns[0].subject).name == "earthquake");
    CHECK(std::get<Term>(q.patterns[0].predicate) == Term{vocab::rdf_type()});
    CHECK(std::get<Term>(q.patterns[0].object) ==
          Term{Iri{"http://oekg.l3s.uni-hannover.de/uner/Earthquake"}});
    CHECK(std::get<Variable>(q.patterns[1].subject).name == "earthquake");
    CHECK(std::get<Variable>(q.patterns[2].subject).name == "Location");
    CHECK(q.filters.empty());
    CHECK(q.order.empty());
}

TEST_CASE("listing 3 parses to eight desugared patterns, one filter, one order key") {
    Query q = parse_query(kListing3, prefixes());
    CHECK_FALSE(q.distinct);
    CHECK(q.projected == std::vector<std::string>{"Label", "StartDate"});
    REQUIRE(q.patterns.size() == 8);
    REQUIRE(q.filters.size() == 1);
    CHECK(q.filters[0].op == CompareOp::Ge);
    REQUIRE(q.order.size() == 1);
    CHECK(q.order[0].var.name == "StartDate");
    CHECK(q.order[0].ascending);

    // the bracket desugars to one hidden variable shared by three patterns:
    // its two inner statements come first, then the linking pattern
    const Variable* hidden = std::get_if<Variable>(&q.patterns[3].subject);
    REQUIRE(hidden != nullptr);
    CHECK(hidden->name.starts_with("_:"));
    CHECK(std::get<Variable>(q.patterns[4].subject) == *hidden);
    CHECK(std::get<Variable>(q.patterns[5].object) == *hidden);
    CHECK(std::get<Term>(q.patterns[4].object) ==
          Term{typed_literal("ru", vocab::xsd_language())});
    // dbr: constant got the conventional DBpedia namespace
    CHECK(std::get<Term>(q.patterns[0].object) ==
          Term{Iri{"http://dbpedia.org/resource/World_War_I"}});
}

TEST_CASE("empty group is legal and evaluates to one empty solution") {
    Query q = parse_query("SELECT ?x WHERE { }", prefixes());
    CHECK(q.patterns.empty());
    QuadStore store;
    auto r = evaluate(store, q);
    REQUIRE(r.rows.size() == 1);
    CHECK_FALSE(r.rows[0][0].has_value());
}

TEST_CASE("unsupported features are rejected by name") {
    auto expect_feature = [&](const char* text, const char* feature) {
        try {
            parse_query(text, prefixes());
            FAIL_CHECK("expected UnsupportedFeatureError for ", feature);
        } catch (const UnsupportedFeatureError& e) {
            CHECK(e.feature() == feature);
        }
    };
    expect_feature("SELECT ?x WHERE { OPTIONAL { ?x rdf:type ?y } }", "OPTIONAL");
    expect_feature("SELECT ?x WHERE { { ?x rdf:type ?y } UNION { ?x rdfs:label ?y } }",
                   "nested group / subquery");
    expect_feature("SELECT ?x WHERE { GRAPH ?g { ?x rdf:type ?y } }", "GRAPH");
    expect_feature("SELECT ?x WHERE { ?x rdf:type ?y } LIMIT 10", "LIMIT");
    expect_feature("SELECT ?x WHERE { ?x rdf:type/rdfs:subClassOf ?y }", "property paths");
    expect_feature("SELECT (COUNT(?x) AS ?n) WHERE { ?x rdf:type ?y }", "SELECT expressions");
    expect_feature("SELECT ?x WHERE { ?x rdf:type ?y . VALUES ?x { dbr:A } }", "VALUES");
    expect_feature("SELECT ?x WHERE { ?x rdf:type ?y FILTER(?x = ?y && ?x = ?y) }",
                   "FILTER boolean connectives");
}

TEST_CASE("syntax and prefix errors carry positions") {
    CHECK_THROWS_AS(parse_query("SELECT ?x WHERE { ?x rdf:type ?y", prefixes()),
                    QuerySyntaxError);
    CHECK_THROWS_AS(parse_query("SELECT ?x WHERE { ?x nosuch:type ?y }", prefixes()),
                    UnknownPrefixError);
    CHECK_THROWS_AS(parse_query("BANANA ?x WHERE { }", prefixes()), QuerySyntaxError);
    try {
        parse_query("SELECT ?x WHERE { ?x rdf:type }", prefixes());
        FAIL_CHECK("expected syntax error");
    } catch (const QuerySyntaxError& e) {
        CHECK(e.position() > 0);
    }
}

TEST_CASE("prologue PREFIX declarations extend the ambient table") {
    Query q = parse_query(
        "PREFIX ex: <http://example.org/>\nSELECT ?x WHERE { ?x ex:p ex:o }", prefixes());
    CHECK(std::get<Term>(q.patterns[0].predicate) == Term{Iri{"http://example.org/p"}});
}

TEST_CASE("a keyword, object lists, numeric datatypes, SELECT star") {
    Query q = parse_query("SELECT * WHERE { ?s a so:Article , so:Question ; so:text 5 , 0.8 , 1e3 . }",
                          prefixes());
    REQUIRE(q.patterns.size() == 5);
    CHECK(std::get<Term>(q.patterns[0].predicate) == Term{vocab::rdf_type()});
    CHECK(std::get<Term>(q.patterns[2].object) == Term{integer_literal(5)});
    CHECK(std::get<Term>(q.patterns[3].object) == Term{decimal_literal("0.8")});
    CHECK(std::get<Term>(q.patterns[4].object) ==
          Term{typed_literal("1e3", vocab::xsd_double())});
    CHECK(q.projected == std::vector<std::string>{"s"});
}

TEST_CASE("filter comparison semantics") {
    CHECK(eval_compare(Term{integer_literal(2)}, CompareOp::Lt,
                       Term{decimal_literal("10.5")}) == true);
    CHECK(eval_compare(Term{decimal_literal("0.85")}, CompareOp::Ge,
                       Term{decimal_literal("0.8")}) == true);
    CHECK(eval_compare(Term{integer_literal(2)}, CompareOp::Eq,
                       Term{decimal_literal("2.0")}) == true);
    // value-typed vs plain literal cannot be order-compared
    CHECK_FALSE(eval_compare(Term{plain_literal("2")}, CompareOp::Lt,
                             Term{integer_literal(10)})
                    .has_value());
    CHECK(eval_compare(Term{plain_literal("2")}, CompareOp::Eq, Term{integer_literal(2)}) ==
          false);
    CHECK(eval_compare(Term{date_literal("1916-05-22")}, CompareOp::Lt,
                       Term{date_literal("1917-11-07")}) == true);
    CHECK(eval_compare(Term{Iri{"http://a"}}, CompareOp::Lt, Term{Iri{"http://b"}}) == true);
    CHECK_FALSE(eval_compare(Term{Iri{"http://a"}}, CompareOp::Lt,
                             Term{plain_literal("x")})
                     .has_value());
    CHECK(eval_compare(Term{Iri{"http://a"}}, CompareOp::Ne, Term{plain_literal("x")}) == true);
    CHECK(eval_compare(Term{lang_literal("x", "en")}, CompareOp::Eq,
                       Term{lang_literal("x", "de")}) == false);
}

TEST_CASE("listing 3 shape end to end on an inline fixture") {
    QuadStore store;
    PrefixTable px = prefixes();
    auto iri = [&](const char* curie) { return px.expand(curie); };

    std::vector<Triple> doc;
    auto add = [&](Iri s, Iri p, Term o) { doc.push_back(Triple{s, p, std::move(o)}); };
    add(iri("oekg-r:ww1"), iri("owl:sameAs"), Term{iri("dbr:World_War_I")});
    struct Row {
        const char* local;
        const char* label;
        const char* date;
        const char* score;
        const char* lang;
    };
    Row rows[] = {
        {"brusilov", "Brusilov Offensive", "1916-05-22", "0.85", "ru"},
        {"rcw", "Russian Civil War", "1917-11-07", "0.9", "ru"},
        {"treaty", "Treaty of Brest-Litovsk", "1918-03-03", "0.82", "ru"},
        {"below", "February Revolution", "1917-03-08", "0.45", "ru"},   // fails the filter
        {"wronglang", "Armistice", "1918-11-11", "0.95", "en"},          // wrong language
    };
    int i = 0;
    for (const Row& r : rows) {
        Iri target = iri(("oekg-r:" + std::string(r.local)).c_str());
        Iri rel = iri(("oekg-r:rel" + std::to_string(i)).c_str());
        std::string score_node = "sc" + std::to_string(i++);
        add(rel, iri("oekg-s:source"), Term{iri("oekg-r:ww1")});
        add(rel, iri("oekg-s:target"), Term{target});
        doc.push_back(Triple{rel, iri("oekg-s:hasLanguageSpecificRelationScore"),
                             Term{BlankNode{score_node}}});
        doc.push_back(Triple{BlankNode{score_node}, iri("oekg-s:scoreValue"),
                             Term{decimal_literal(r.score)}});
        doc.push_back(Triple{BlankNode{score_node}, iri("oekg-s:scoreLanguage"),
                             Term{typed_literal(r.lang, vocab::xsd_language())}});
        add(target, iri("skos:prefLabel"), Term{lang_literal(r.label, "en")});
        add(target, iri("sem:hasBeginTimeStamp"), Term{date_literal(r.date)});
    }
    store.insert(doc, make_graph_id("fixture"));

    Query q = parse_query(kListing3, px);
    auto result = evaluate(store, q);
    REQUIRE(result.rows.size() == 3);
    CHECK(cell(result.rows[0][0]) == "\"Brusilov Offensive\"@en");
    CHECK(cell(result.rows[0][1]) ==
          "\"1916-05-22\"^^<http://www.w3.org/2001/XMLSchema#date>");
    CHECK(cell(result.rows[1][0]) == "\"Russian Civil War\"@en");
    CHECK(cell(result.rows[2][0]) == "\"Treaty of Brest-Litovsk\"@en");

    SUBCASE("join-order independence") {
        Query permuted = q;
        std::reverse(permuted.patterns.begin(), permuted.patterns.end());
        auto r2 = evaluate(store, permuted);
        CHECK(row_strings(r2) == row_strings(result));
        std::swap(permuted.patterns[2], permuted.patterns[5]);
        auto r3 = evaluate(store, permuted);
        CHECK(row_strings(r3) == row_strings(result));
    }
    SUBCASE("filter monotonicity") {
        Query more = q;
        FilterExpr f;
        f.lhs = Variable{"value"};
        f.op = CompareOp::Ge;
        f.rhs = Term{decimal_literal("0.9")};
        more.filters.push_back(f);
        auto r2 = evaluate(store, more);
        CHECK(r2.rows.size() == 1);
        auto all = row_strings(result);
        for (const std::string& row : row_strings(r2)) {
            CHECK(std::count(all.begin(), all.end(), row) == 1);
        }
    }
    SUBCASE("explain binds the selective sameAs pattern first and uses indexes throughout") {
        auto snap = store.snapshot();
        auto plan = explain(snap, q, px);
        REQUIRE(plan.steps.size() == 8);
        CHECK(plan.steps[0].pattern == "?event owl:sameAs dbr:World_War_I");
        for (const auto& step : plan.steps) {
            CHECK(step.index != IndexKind::Scan);
        }
        CHECK(to_string(plan).find("owl:sameAs") != std::string::npos);
    }
    SUBCASE("graph scope isolates the query") {
        std::vector<NamedGraphId> other{make_graph_id("elsewhere")};
        CHECK(evaluate(store, q, &other).rows.empty());
        std::vector<NamedGraphId> same{make_graph_id("fixture")};
        CHECK(evaluate(store, q, &same).rows.size() == 3);
    }
}

TEST_CASE("any query with a pattern over an empty store is empty") {
    QuadStore store;
    Query q = parse_query("SELECT ?s WHERE { ?s a so:Article }", prefixes());
    CHECK(evaluate(store, q).rows.empty());
}

TEST_CASE("explain single-pattern plan") {
    QuadStore store;
    store.insert(std::vector<Triple>{Triple{Iri{"http://s"}, vocab::rdf_type(),
                                            Term{Iri{"http://c"}}}},
                 make_graph_id("g"));
    Query q = parse_query("SELECT ?s WHERE { ?s a ?c }", prefixes());
    auto snap = store.snapshot();
    auto plan = explain(snap, q, prefixes());
    REQUIRE(plan.steps.size() == 1);
    CHECK(plan.steps[0].estimate == 1);
}

TEST_CASE("tsv and json output shapes") {
    ResultTable t;
    t.vars = {"Label", "StartDate"};
    t.rows.push_back({Term{lang_literal("a\tb", "en")}, std::nullopt});
    std::string tsv = to_tsv(t);
    CHECK(tsv == "?Label\t?StartDate\n\"a\\tb\"@en\t\n");
    CHECK(to_json(t) == R"({"vars":["Label","StartDate"],"rows":[["\"a\\tb\"@en",null]]})");
}

TEST_CASE("distinct deduplicates and multiplicities match the oracle otherwise") {
    QuadStore store;
    std::vector<Triple> doc{
        Triple{Iri{"http://s1"}, Iri{"http://p"}, Term{plain_literal("x")}},
        Triple{Iri{"http://s2"}, Iri{"http://p"}, Term{plain_literal("x")}},
    };
    store.insert(doc, make_graph_id("g"));
    Query q = parse_query("SELECT ?o WHERE { ?s <http://p> ?o }", prefixes());
    CHECK(evaluate(store, q).rows.size() == 2);
    q.distinct = true;
    CHECK(evaluate(store, q).rows.size() == 1);
}

TEST_CASE("evaluate equals the nested-loop oracle on randomized instances") {
    testoracle::CaseGen gen(20240229);
    int checked = 0;
    for (int round = 0; round < 200; ++round) {
        QuadStore store;
        int ngraphs = gen.pick(1, 3);
        for (int g = 0; g < ngraphs; ++g) {
            store.insert(gen.store_doc(static_cast<std::size_t>(gen.pick(0, 70))),
                         make_graph_id("g" + std::to_string(g)));
        }
        Query q = gen.random_query();
        auto quads = store.match(QuadPattern::any());

        auto expected = testoracle::run(q, quads);
        auto actual = evaluate(store, q);
        REQUIRE(actual.vars == q.projected);

        auto render = [&](const std::vector<std::vector<std::optional<Term>>>& rows) {
            std::vector<std::string> out;
            for (const auto& row : rows) {
                std::string s;
                for (const auto& c : row) {
                    s += cell(c);
                    s.push_back('\t');
                }
                out.push_back(std::move(s));
            }
            return out;
        };
        auto exp_rows = render(expected);
        auto act_rows = render(actual.rows);
        if (q.order.empty()) {
            std::sort(exp_rows.begin(), exp_rows.end());
            std::sort(act_rows.begin(), act_rows.end());
        }
        REQUIRE(act_rows == exp_rows);
        ++checked;
    }
    CHECK(checked == 200);
}
