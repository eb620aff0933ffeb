#include "oekg/entity_linker.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <mutex>

namespace oekg {

std::optional<RefSource> parse_ref_source(std::string_view name) {
    if (name == "wikipedia-label") return RefSource::WikipediaLabel;
    if (name == "wikidata-uri") return RefSource::WikidataUri;
    if (name == "dbpedia-uri") return RefSource::DbpediaUri;
    return std::nullopt;
}

std::string_view ref_source_name(RefSource source) {
    switch (source) {
        case RefSource::WikipediaLabel: return "wikipedia-label";
        case RefSource::WikidataUri: return "wikidata-uri";
        case RefSource::DbpediaUri: return "dbpedia-uri";
    }
    return "?";
}

ExternalRef make_ref(RefSource source, std::string_view language, std::string_view value) {
    if (value.empty()) throw std::invalid_argument("external ref value must be non-empty");
    ExternalRef ref;
    ref.source = source;
    ref.value = std::string(value);
    if (source == RefSource::WikipediaLabel) {
        std::string lang(language);
        std::transform(lang.begin(), lang.end(), lang.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (!is_valid_language_tag(lang))
            throw std::invalid_argument("wikipedia-label ref requires a language tag");
        ref.language = std::move(lang);
    } else {
        if (!language.empty())
            throw std::invalid_argument("URI refs carry no language");
        if (!is_valid_iri(ref.value)) throw std::invalid_argument("ref URI is not a valid IRI");
    }
    return ref;
}

ExternalRef wikipedia_ref(std::string_view language, std::string_view label) {
    return make_ref(RefSource::WikipediaLabel, language, label);
}

ExternalRef wikidata_ref(std::string_view uri) {
    return make_ref(RefSource::WikidataUri, {}, uri);
}

ExternalRef dbpedia_ref(std::string_view uri) {
    return make_ref(RefSource::DbpediaUri, {}, uri);
}

ResourceId resource_from_local(std::string_view local) {
    if (local.empty()) throw std::invalid_argument("resource local must be non-empty");
    return ResourceId{std::string(local), vocab::iri(ns::oekg_r, local)};
}

AliasConflictError::AliasConflictError(const ExternalRef& ref, const ResourceId& bound,
                                       const ResourceId& requested)
    : std::runtime_error("alias conflict: " + std::string(ref_source_name(ref.source)) + " '" +
                         ref.value + "' already bound to " + bound.local + ", refusing " +
                         requested.local) {}

std::size_t LinkRegistry::RefHash::operator()(const ExternalRef& r) const {
    std::hash<std::string> h;
    std::size_t seed = static_cast<std::size_t>(r.source) + 1;
    auto mix = [&](std::size_t v) { seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2); };
    mix(h(r.language));
    mix(h(r.value));
    return seed;
}

// Wikipedia labels treat spaces and underscores interchangeably.
ExternalRef LinkRegistry::normalize(const ExternalRef& ref) const {
    ExternalRef n = ref;
    if (n.source == RefSource::WikipediaLabel) {
        std::replace(n.value.begin(), n.value.end(), ' ', '_');
    }
    return n;
}

std::optional<ResourceId> LinkRegistry::get_id(const ExternalRef& ref) const {
    std::shared_lock lock(mutex_);
    auto it = links_.find(normalize(ref));
    if (it == links_.end()) return std::nullopt;
    return it->second;
}

ResourceId LinkRegistry::mint() {
    std::unique_lock lock(mutex_);
    for (;;) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%010llu",
                      static_cast<unsigned long long>(++mint_counter_));
        std::string local(buf);
        if (locals_.insert(local).second) return resource_from_local(local);
    }
}

RegisterOutcome LinkRegistry::register_alias(const ExternalRef& ref, const ResourceId& id) {
    ExternalRef key = normalize(ref);
    std::unique_lock lock(mutex_);
    auto it = links_.find(key);
    if (it != links_.end()) {
        if (it->second == id) return {};  // idempotent
        throw AliasConflictError(ref, it->second, id);
    }
    links_.emplace(std::move(key), id);
    locals_.insert(id.local);

    RegisterOutcome outcome;
    outcome.newly_bound = true;
    if (ref.source != RefSource::WikipediaLabel) {
        outcome.same_as = Triple{id.iri, vocab::owl_same_as(), Term{Iri{ref.value}}};
    }
    return outcome;
}

bool LinkRegistry::known_local(const std::string& local) const {
    std::shared_lock lock(mutex_);
    return locals_.contains(local);
}

std::size_t LinkRegistry::size() const {
    std::shared_lock lock(mutex_);
    return links_.size();
}

std::vector<RegisterOutcome> LinkRegistry::load_tsv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open registry TSV: " + path);
    std::vector<RegisterOutcome> outcomes;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cols;
        std::size_t start = 0;
        for (;;) {
            auto tab = line.find('\t', start);
            cols.push_back(line.substr(start, tab == std::string::npos ? tab : tab - start));
            if (tab == std::string::npos) break;
            start = tab + 1;
        }
        if (cols.size() != 4)
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected 4 tab-separated columns");
        auto source = parse_ref_source(cols[0]);
        if (!source)
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": unknown source '" + cols[0] + "'");
        ExternalRef ref = make_ref(*source, cols[1], cols[2]);
        ResourceId id = resource_from_local(cols[3]);
        reserve_numeric_local(id.local);
        outcomes.push_back(register_alias(ref, id));
    }
    return outcomes;
}

void LinkRegistry::reserve_numeric_local(const std::string& local) {
    if (local.empty() || local.size() > 10) return;
    if (!std::all_of(local.begin(), local.end(),
                     [](unsigned char c) { return std::isdigit(c); }))
        return;
    std::uint64_t n = std::stoull(local);
    std::unique_lock lock(mutex_);
    if (n > mint_counter_) mint_counter_ = n;
    locals_.insert(local);
}

}  // namespace oekg
