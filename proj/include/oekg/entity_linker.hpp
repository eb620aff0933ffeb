#pragma once
// Canonical resource-URI registry: maps external references (Wikipedia
// labels, Wikidata/DBpedia URIs) to oekg-r: resource URIs and mints URIs
// for unlinked objects.

#include <cstdint>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "oekg/rdf.hpp"

namespace oekg {

enum class RefSource { WikipediaLabel, WikidataUri, DbpediaUri };

std::optional<RefSource> parse_ref_source(std::string_view name);
std::string_view ref_source_name(RefSource source);

// language required exactly for wikipedia-label refs; labels are matched
// after space/underscore unification, URIs verbatim.
struct ExternalRef {
    RefSource source = RefSource::WikipediaLabel;
    std::string language;
    std::string value;

    bool operator==(const ExternalRef&) const = default;
};

// throws std::invalid_argument when the ref shape is malformed
ExternalRef make_ref(RefSource source, std::string_view language, std::string_view value);
ExternalRef wikipedia_ref(std::string_view language, std::string_view label);
ExternalRef wikidata_ref(std::string_view uri);
ExternalRef dbpedia_ref(std::string_view uri);

struct ResourceId {
    std::string local;
    Iri iri;  // always oekg-r: + local

    bool operator==(const ResourceId&) const = default;
};

ResourceId resource_from_local(std::string_view local);

class AliasConflictError : public std::runtime_error {
public:
    AliasConflictError(const ExternalRef& ref, const ResourceId& bound,
                       const ResourceId& requested);
};

struct RegisterOutcome {
    bool newly_bound = false;
    // owl:sameAs statement to materialize for URI-shaped refs
    std::optional<Triple> same_as;
};

class LinkRegistry {
public:
    // Never mints implicitly; NotFound is the nullopt case.
    std::optional<ResourceId> get_id(const ExternalRef& ref) const;

    // Fresh oekg-r: resource; locals are sequential fixed-width decimals.
    ResourceId mint();

    // Binds ref -> id. Re-registering the same pair is a no-op success;
    // binding to a different id throws AliasConflictError.
    RegisterOutcome register_alias(const ExternalRef& ref, const ResourceId& id);

    bool known_local(const std::string& local) const;
    std::size_t size() const;

    // TSV rows: source <TAB> language <TAB> value <TAB> local
    // (language column empty for URI sources). Returns the outcomes so the
    // caller can materialize sameAs triples.
    std::vector<RegisterOutcome> load_tsv(const std::string& path);

    // Advances the mint counter past any numeric local already in use;
    // called after store replay so restarts never re-mint taken locals.
    void reserve_numeric_local(const std::string& local);

private:
    struct RefHash {
        std::size_t operator()(const ExternalRef& r) const;
    };

    ExternalRef normalize(const ExternalRef& ref) const;

    mutable std::shared_mutex mutex_;
    std::unordered_map<ExternalRef, ResourceId, RefHash> links_;
    std::unordered_set<std::string> locals_;
    std::uint64_t mint_counter_ = 0;
};

}  // namespace oekg
