#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <unordered_set>

#include "oekg/entity_linker.hpp"

using namespace oekg;

TEST_CASE("get_id returns the registered resource") {
    LinkRegistry reg;
    ResourceId obama = resource_from_local("Barack_Obama");
    reg.register_alias(wikipedia_ref("en", "Barack_Obama"), obama);

    auto hit = reg.get_id(wikipedia_ref("en", "Barack_Obama"));
    REQUIRE(hit.has_value());
    CHECK(*hit == obama);
    CHECK(hit->iri.value == "http://oekg.l3s.uni-hannover.de/resource/Barack_Obama");

    // read-only determinism
    CHECK(reg.get_id(wikipedia_ref("en", "Barack_Obama")) == hit);
}

TEST_CASE("empty registry answers NotFound") {
    LinkRegistry reg;
    CHECK_FALSE(reg.get_id(wikipedia_ref("en", "Barack_Obama")).has_value());
}

TEST_CASE("labels unify spaces and underscores; language is part of the key") {
    LinkRegistry reg;
    ResourceId id = resource_from_local("x1");
    reg.register_alias(wikipedia_ref("en", "Barack Obama"), id);
    CHECK(reg.get_id(wikipedia_ref("en", "Barack_Obama")) == id);
    CHECK_FALSE(reg.get_id(wikipedia_ref("de", "Barack_Obama")).has_value());
}

TEST_CASE("ref construction enforces its shape") {
    CHECK_THROWS_AS(wikipedia_ref("", "X"), std::invalid_argument);
    CHECK_THROWS_AS(wikipedia_ref("en", ""), std::invalid_argument);
    CHECK_THROWS_AS(wikidata_ref("not an iri"), std::invalid_argument);
    CHECK(wikipedia_ref("EN", "X").language == "en");
}

TEST_CASE("minting yields distinct oekg-r resources") {
    LinkRegistry reg;
    ResourceId a = reg.mint();
    ResourceId b = reg.mint();
    CHECK(a != b);
    CHECK(a.iri.value.starts_with("http://oekg.l3s.uni-hannover.de/resource/"));
    CHECK(a.local.size() == 10);

    std::unordered_set<std::string> seen{a.local, b.local};
    for (int i = 0; i < 10000; ++i) {
        CHECK(seen.insert(reg.mint().local).second);
    }
}

TEST_CASE("register_alias is idempotent and conflicts loudly") {
    LinkRegistry reg;
    ExternalRef ww1 = dbpedia_ref("http://dbpedia.org/resource/World_War_I");
    ResourceId id = resource_from_local("World_War_I");

    RegisterOutcome first = reg.register_alias(ww1, id);
    CHECK(first.newly_bound);
    REQUIRE(first.same_as.has_value());
    CHECK(std::get<Iri>(first.same_as->subject) == id.iri);
    CHECK(first.same_as->predicate == vocab::owl_same_as());
    CHECK(std::get<Iri>(first.same_as->object).value == "http://dbpedia.org/resource/World_War_I");

    RegisterOutcome again = reg.register_alias(ww1, id);
    CHECK_FALSE(again.newly_bound);
    CHECK_FALSE(again.same_as.has_value());

    CHECK_THROWS_AS(reg.register_alias(ww1, resource_from_local("other")),
                    AliasConflictError);
}

TEST_CASE("label refs do not materialize sameAs") {
    LinkRegistry reg;
    auto outcome = reg.register_alias(wikipedia_ref("en", "Ferrara"), resource_from_local("Ferrara"));
    CHECK(outcome.newly_bound);
    CHECK_FALSE(outcome.same_as.has_value());
}

TEST_CASE("registry equals a shadow map over random registrations") {
    LinkRegistry reg;
    std::map<std::pair<std::string, std::string>, ResourceId> shadow;
    std::mt19937 rng(2023);
    std::uniform_int_distribution<int> label_id(0, 200);

    for (int i = 0; i < 2000; ++i) {
        std::string label = "L" + std::to_string(label_id(rng));
        std::string lang = label_id(rng) % 2 ? "en" : "de";
        ExternalRef ref = wikipedia_ref(lang, label);
        auto key = std::make_pair(lang, label);
        auto it = shadow.find(key);
        if (it == shadow.end()) {
            ResourceId id = reg.mint();
            reg.register_alias(ref, id);
            shadow.emplace(key, id);
        }
        CHECK(reg.get_id(ref) == shadow.at(key));
    }
    for (int i = 0; i < 200; ++i) {
        std::string label = "unseen" + std::to_string(i);
        CHECK_FALSE(reg.get_id(wikipedia_ref("en", label)).has_value());
    }
}

TEST_CASE("bootstrap TSV loads aliases and protects the mint counter") {
    namespace fs = std::filesystem;
    fs::path path = fs::temp_directory_path() / "oekg_registry_test.tsv";
    {
        std::ofstream out(path);
        out << "# bootstrap fixture\n";
        out << "wikipedia-label\ten\tBarack_Obama\tBarack_Obama\n";
        out << "wikidata-uri\t\thttp://www.wikidata.org/entity/Q76\tBarack_Obama\n";
        out << "dbpedia-uri\t\thttp://dbpedia.org/resource/World_War_I\tWorld_War_I\n";
        out << "wikipedia-label\ten\tTaken_Local\t0000000005\n";
    }
    LinkRegistry reg;
    auto outcomes = reg.load_tsv(path.string());
    CHECK(outcomes.size() == 4);

    auto obama = reg.get_id(wikipedia_ref("en", "Barack_Obama"));
    REQUIRE(obama.has_value());
    CHECK(reg.get_id(wikidata_ref("http://www.wikidata.org/entity/Q76")) == obama);

    std::size_t with_same_as = 0;
    for (const auto& o : outcomes) with_same_as += o.same_as.has_value();
    CHECK(with_same_as == 2);

    // numeric local 0000000005 is reserved: the next mints skip past it
    CHECK(reg.mint().local == "0000000006");
    fs::remove(path);
}
