#include "oekg/rdf.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>

namespace oekg {

bool is_valid_iri(std::string_view value) {
    if (value.empty()) return false;
    for (unsigned char c : value) {
        if (c <= 0x20) return false;  // controls and space
        if (c == '<' || c == '>' || c == '"') return false;
    }
    return true;
}

bool is_valid_language_tag(std::string_view tag) {
    if (tag.empty()) return false;
    std::size_t i = 0;
    auto lower = [](char c) { return c >= 'a' && c <= 'z'; };
    auto lower_digit = [&](char c) { return lower(c) || (c >= '0' && c <= '9'); };
    while (i < tag.size() && lower(tag[i])) ++i;
    if (i == 0) return false;
    while (i < tag.size()) {
        if (tag[i] != '-') return false;
        ++i;
        std::size_t start = i;
        while (i < tag.size() && lower_digit(tag[i])) ++i;
        if (i == start) return false;
    }
    return true;
}

Literal plain_literal(std::string lexical) {
    return Literal{std::move(lexical), vocab::xsd_string(), {}};
}

Literal lang_literal(std::string lexical, std::string language) {
    std::transform(language.begin(), language.end(), language.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return Literal{std::move(lexical), vocab::rdf_lang_string(), std::move(language)};
}

Literal typed_literal(std::string lexical, Iri datatype) {
    return Literal{std::move(lexical), std::move(datatype), {}};
}

Literal integer_literal(long long value) {
    return Literal{std::to_string(value), vocab::xsd_integer(), {}};
}

Literal decimal_literal(std::string lexical) {
    return Literal{std::move(lexical), vocab::xsd_decimal(), {}};
}

Literal date_literal(std::string yyyy_mm_dd) {
    return Literal{std::move(yyyy_mm_dd), vocab::xsd_date(), {}};
}

std::size_t TermHash::operator()(const Term& t) const {
    auto mix = [](std::size_t seed, std::size_t v) {
        return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
    };
    std::hash<std::string> h;
    std::size_t seed = t.index() + 1;
    if (const auto* iri = std::get_if<Iri>(&t)) {
        seed = mix(seed, h(iri->value));
    } else if (const auto* lit = std::get_if<Literal>(&t)) {
        seed = mix(seed, h(lit->lexical));
        seed = mix(seed, h(lit->datatype.value));
        seed = mix(seed, h(lit->language));
    } else {
        seed = mix(seed, h(std::get<BlankNode>(t).label));
    }
    return seed;
}

bool is_valid_graph_name(std::string_view name) {
    if (name.empty()) return false;
    return std::all_of(name.begin(), name.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_' || c == '+' || c == '-';
    });
}

NamedGraphId make_graph_id(std::string_view name) {
    if (!is_valid_graph_name(name))
        throw std::invalid_argument("invalid graph name: " + std::string(name));
    return NamedGraphId{std::string(name), vocab::iri(ns::oekg_g, name)};
}

std::optional<NamedGraphId> graph_id_from_iri(const Iri& iri) {
    if (!iri.value.starts_with(ns::oekg_g)) return std::nullopt;
    std::string_view name = std::string_view(iri.value).substr(ns::oekg_g.size());
    if (!is_valid_graph_name(name)) return std::nullopt;
    return NamedGraphId{std::string(name), iri};
}

void PrefixTable::bind(std::string prefix, Iri namespace_iri) {
    entries_[std::move(prefix)] = std::move(namespace_iri);
}

std::optional<Iri> PrefixTable::find(std::string_view prefix) const {
    auto it = entries_.find(std::string(prefix));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

Iri PrefixTable::expand(std::string_view curie) const {
    auto colon = curie.find(':');
    if (colon == std::string_view::npos)
        throw std::invalid_argument("not a prefixed name: " + std::string(curie));
    std::string prefix(curie.substr(0, colon));
    auto it = entries_.find(prefix);
    if (it == entries_.end()) throw UnknownPrefixError(prefix);
    return Iri{it->second.value + std::string(curie.substr(colon + 1))};
}

std::string PrefixTable::compact(const Iri& iri) const {
    const std::string* best_prefix = nullptr;
    std::size_t best_len = 0;
    for (const auto& [prefix, namespace_iri] : entries_) {
        const std::string& nsv = namespace_iri.value;
        if (nsv.size() < best_len || !iri.value.starts_with(nsv)) continue;
        if (nsv.size() > best_len) {
            best_len = nsv.size();
            best_prefix = &prefix;
        } else if (best_prefix &&
                   (prefix.size() < best_prefix->size() ||
                    (prefix.size() == best_prefix->size() && prefix < *best_prefix))) {
            best_prefix = &prefix;
        }
    }
    if (!best_prefix) return "<" + iri.value + ">";
    return *best_prefix + ":" + iri.value.substr(best_len);
}

PrefixTable PrefixTable::defaults() {
    PrefixTable t;
    t.bind("oekg-r", Iri{std::string(ns::oekg_r)});
    t.bind("oekg-s", Iri{std::string(ns::oekg_s)});
    t.bind("oekg-g", Iri{std::string(ns::oekg_g)});
    t.bind("uner", Iri{std::string(ns::uner)});
    t.bind("so", Iri{std::string(ns::so)});
    t.bind("rdf", Iri{std::string(ns::rdf)});
    t.bind("rdfs", Iri{std::string(ns::rdfs)});
    t.bind("xs", Iri{std::string(ns::xsd)});
    t.bind("xsd", Iri{std::string(ns::xsd)});
    t.bind("sem", Iri{std::string(ns::sem)});
    t.bind("onyx", Iri{std::string(ns::onyx)});
    t.bind("skos", Iri{std::string(ns::skos)});
    t.bind("owl", Iri{std::string(ns::owl)});
    t.bind("dbr", Iri{std::string(ns::dbr)});
    t.bind("dbo", Iri{std::string(ns::dbo)});
    return t;
}

PrefixTable PrefixTable::load_tsv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open prefix table: " + path);
    PrefixTable t;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw std::runtime_error("malformed prefix line: " + line);
        std::string prefix = line.substr(0, tab);
        std::string namespace_iri = line.substr(tab + 1);
        if (!namespace_iri.empty() && namespace_iri.back() == '\r') namespace_iri.pop_back();
        if (!is_valid_iri(namespace_iri))
            throw std::runtime_error("invalid namespace IRI for prefix " + prefix);
        t.bind(std::move(prefix), Iri{std::move(namespace_iri)});
    }
    return t;
}

Iri expand_curie(std::string_view curie, const PrefixTable& prefixes) {
    return prefixes.expand(curie);
}

std::string compact_iri(const Iri& iri, const PrefixTable& prefixes) {
    return prefixes.compact(iri);
}

namespace vocab {

Iri iri(std::string_view namespace_iri, std::string_view local) {
    std::string v;
    v.reserve(namespace_iri.size() + local.size());
    v.append(namespace_iri).append(local);
    return Iri{std::move(v)};
}

#define OEKG_VOCAB(fn, ns_, local)            \
    const Iri& fn() {                         \
        static const Iri v = iri(ns_, local); \
        return v;                             \
    }

OEKG_VOCAB(rdf_type, ns::rdf, "type")
OEKG_VOCAB(rdf_lang_string, ns::rdf, "langString")
OEKG_VOCAB(rdf_property, ns::rdf, "Property")

OEKG_VOCAB(xsd_string, ns::xsd, "string")
OEKG_VOCAB(xsd_integer, ns::xsd, "integer")
OEKG_VOCAB(xsd_decimal, ns::xsd, "decimal")
OEKG_VOCAB(xsd_double, ns::xsd, "double")
OEKG_VOCAB(xsd_float, ns::xsd, "float")
OEKG_VOCAB(xsd_boolean, ns::xsd, "boolean")
OEKG_VOCAB(xsd_date, ns::xsd, "date")
OEKG_VOCAB(xsd_date_time, ns::xsd, "dateTime")
OEKG_VOCAB(xsd_language, ns::xsd, "language")

OEKG_VOCAB(rdfs_class, ns::rdfs, "Class")
OEKG_VOCAB(rdfs_sub_class_of, ns::rdfs, "subClassOf")
OEKG_VOCAB(rdfs_domain, ns::rdfs, "domain")
OEKG_VOCAB(rdfs_range, ns::rdfs, "range")
OEKG_VOCAB(rdfs_label, ns::rdfs, "label")

OEKG_VOCAB(owl_class, ns::owl, "Class")
OEKG_VOCAB(owl_same_as, ns::owl, "sameAs")
OEKG_VOCAB(owl_object_property, ns::owl, "ObjectProperty")
OEKG_VOCAB(owl_datatype_property, ns::owl, "DatatypeProperty")

OEKG_VOCAB(skos_pref_label, ns::skos, "prefLabel")
OEKG_VOCAB(skos_exact_match, ns::skos, "exactMatch")
OEKG_VOCAB(skos_close_match, ns::skos, "closeMatch")
OEKG_VOCAB(skos_broad_match, ns::skos, "broadMatch")
OEKG_VOCAB(skos_narrow_match, ns::skos, "narrowMatch")

OEKG_VOCAB(sem_event, ns::sem, "Event")
OEKG_VOCAB(sem_actor, ns::sem, "Actor")
OEKG_VOCAB(sem_place, ns::sem, "Place")
OEKG_VOCAB(sem_has_place, ns::sem, "hasPlace")
OEKG_VOCAB(sem_has_begin_time_stamp, ns::sem, "hasBeginTimeStamp")
OEKG_VOCAB(sem_has_end_time_stamp, ns::sem, "hasEndTimeStamp")

OEKG_VOCAB(so_article, ns::so, "Article")
OEKG_VOCAB(so_question, ns::so, "Question")
OEKG_VOCAB(so_answer, ns::so, "Answer")
OEKG_VOCAB(so_headline, ns::so, "headline")
OEKG_VOCAB(so_mentions, ns::so, "mentions")
OEKG_VOCAB(so_main_entity, ns::so, "mainEntity")
OEKG_VOCAB(so_suggested_answer, ns::so, "suggestedAnswer")
OEKG_VOCAB(so_text, ns::so, "text")
OEKG_VOCAB(so_image, ns::so, "image")
OEKG_VOCAB(so_description, ns::so, "description")

OEKG_VOCAB(oekgs_relation, ns::oekg_s, "Relation")
OEKG_VOCAB(oekgs_text_event, ns::oekg_s, "TextEvent")
OEKG_VOCAB(oekgs_event_series, ns::oekg_s, "EventSeries")
OEKG_VOCAB(oekgs_event_series_edition, ns::oekg_s, "EventSeriesEdition")
OEKG_VOCAB(oekgs_language_specific_relation, ns::oekg_s, "LanguageSpecificRelation")
OEKG_VOCAB(oekgs_language_specific_relation_score, ns::oekg_s, "LanguageSpecificRelationScore")
OEKG_VOCAB(oekgs_source, ns::oekg_s, "source")
OEKG_VOCAB(oekgs_target, ns::oekg_s, "target")
OEKG_VOCAB(oekgs_has_language_specific_relation_score, ns::oekg_s,
           "hasLanguageSpecificRelationScore")
OEKG_VOCAB(oekgs_score_value, ns::oekg_s, "scoreValue")
OEKG_VOCAB(oekgs_score_language, ns::oekg_s, "scoreLanguage")
OEKG_VOCAB(oekgs_positive_emotion, ns::oekg_s, "positive-emotion")
OEKG_VOCAB(oekgs_negative_emotion, ns::oekg_s, "negative-emotion")

OEKG_VOCAB(onyx_emotion_set, ns::onyx, "EmotionSet")
OEKG_VOCAB(onyx_emotion, ns::onyx, "Emotion")
OEKG_VOCAB(onyx_emotion_category, ns::onyx, "EmotionCategory")
OEKG_VOCAB(onyx_has_emotion_set, ns::onyx, "hasEmotionSet")
OEKG_VOCAB(onyx_has_emotion, ns::onyx, "hasEmotion")
OEKG_VOCAB(onyx_has_emotion_category, ns::onyx, "hasEmotionCategory")
OEKG_VOCAB(onyx_has_emotion_intensity, ns::onyx, "hasEmotionIntensity")

#undef OEKG_VOCAB

}  // namespace vocab

}  // namespace oekg
