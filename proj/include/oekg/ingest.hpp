#pragma once
// Dataset adapters: transform source records into schema-conformant triples
// under a dataset-specific named graph. Mention annotation and sentiment
// scoring are deterministic local components (gazetteer / lexicon driven)
// behind the same interfaces the hosted enrichment services had.

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oekg/entity_linker.hpp"
#include "oekg/quad_store.hpp"
#include "oekg/rdf.hpp"

namespace oekg {

enum class AdapterKind { Tabular, News, Qa, Place, ClickRelation };

std::optional<AdapterKind> parse_adapter_kind(std::string_view name);
std::string_view adapter_kind_name(AdapterKind kind);

class MappingError : public std::runtime_error {
public:
    explicit MappingError(const std::string& what) : std::runtime_error(what) {}
};

struct ColumnMapping {
    std::string column;
    bool link = false;          // object is an entity reference, not a literal
    Iri property;
    std::string language;       // literal columns: optional @lang
    std::optional<Iri> datatype;  // literal columns: optional ^^type
};

// Plain key-value descriptor file; see DatasetDescriptor::load.
struct DatasetDescriptor {
    AdapterKind kind = AdapterKind::Tabular;
    NamedGraphId graph;
    std::filesystem::path source;
    // tabular
    char delimiter = '\t';
    std::string key_column;
    std::string key_language = "en";
    std::optional<Iri> row_type;
    std::vector<ColumnMapping> columns;
    // news
    std::filesystem::path gazetteer;
    std::filesystem::path lexicon;

    static DatasetDescriptor load(const std::filesystem::path& path,
                                  const PrefixTable& prefixes);
};

struct IngestReport {
    std::size_t records = 0;
    std::size_t cells_linked = 0;
    std::size_t minted = 0;
    std::size_t triples = 0;
    std::size_t inserted = 0;  // new quads after set-semantics upload
    std::vector<std::string> errors;
};

// ---- enrichment -----------------------------------------------------------

struct Mention {
    std::string surface;     // exact slice of the input text
    std::size_t start = 0;   // character (code point) offsets
    std::size_t end = 0;
    ResourceId target;

    bool operator==(const Mention&) const = default;
};

using Gazetteer = std::map<std::string, ResourceId>;      // surface -> target
using SentimentLexicon = std::map<std::string, int>;      // token -> [-5..-1] | [1..5]

// Left-to-right longest match at word boundaries, non-overlapping.
// Case-sensitive on the first character, ASCII-case-insensitive after it.
std::vector<Mention> annotate_mentions(std::string_view text, const Gazetteer& gazetteer);

struct EmotionAnnotation {
    int positive = 1;  // 1..5
    int negative = 1;  // magnitude, 1..5

    bool operator==(const EmotionAnnotation&) const = default;
};

// positive = max positive token score, negative = max |negative| score,
// neutral (1,1) baseline; tokens are lowercased words split on non-letters.
EmotionAnnotation score_sentiment(std::string_view headline, const SentimentLexicon& lexicon);

// ---- source records -------------------------------------------------------

struct NewsArticleDoc {
    std::string headline;
    std::string body;
    std::string language;   // publication language tag
    std::string source_id;
};

struct QAPair {
    std::string question_text;
    std::string answer_text;
    std::vector<ResourceId> question_entities;
    std::vector<ResourceId> answer_entities;
    std::optional<std::string> query_text;
};

struct PlaceDoc {
    ResourceId place;
    std::vector<Iri> images;
    std::vector<std::pair<std::string, std::string>> descriptions;  // (language, text)
};

struct ClickRelationRec {
    ResourceId source;
    ResourceId target;
    std::vector<std::pair<std::string, std::string>> scores;  // (language, decimal lexical)
};

// ---- builders (pure up to registry minting) -------------------------------

struct BuiltGraph {
    std::vector<Triple> triples;
    IngestReport report;
};

BuiltGraph build_tabular(LinkRegistry& registry, const DatasetDescriptor& descriptor,
                         std::istream& table);
BuiltGraph build_news(LinkRegistry& registry, const std::vector<NewsArticleDoc>& docs,
                      const Gazetteer& gazetteer, const SentimentLexicon& lexicon);
BuiltGraph build_qa(LinkRegistry& registry, const std::vector<QAPair>& pairs);
BuiltGraph build_places(const std::vector<PlaceDoc>& docs);
BuiltGraph build_click_relations(LinkRegistry& registry,
                                 const std::vector<ClickRelationRec>& relations);

// ---- store-writing adapters ------------------------------------------------

IngestReport ingest_tabular(QuadStore& store, LinkRegistry& registry,
                            const DatasetDescriptor& descriptor);
IngestReport ingest_news(QuadStore& store, LinkRegistry& registry,
                         const std::vector<NewsArticleDoc>& docs, const Gazetteer& gazetteer,
                         const SentimentLexicon& lexicon, const NamedGraphId& graph);
IngestReport ingest_qa(QuadStore& store, LinkRegistry& registry,
                       const std::vector<QAPair>& pairs, const NamedGraphId& graph);
IngestReport ingest_places(QuadStore& store, const std::vector<PlaceDoc>& docs,
                           const NamedGraphId& graph);
IngestReport ingest_click_relations(QuadStore& store, LinkRegistry& registry,
                                    const std::vector<ClickRelationRec>& relations,
                                    const NamedGraphId& graph);

// ---- source file loaders ---------------------------------------------------

// "local:<id>", "<lang>:<Wikipedia label>", or a Wikidata/DBpedia URI.
std::optional<ResourceId> parse_entity_ref(const std::string& ref,
                                           const LinkRegistry& registry);

std::vector<NewsArticleDoc> load_news_jsonl(const std::filesystem::path& path,
                                            std::vector<std::string>& errors);
std::vector<QAPair> load_qa_jsonl(const std::filesystem::path& path,
                                  const LinkRegistry& registry,
                                  std::vector<std::string>& errors);
std::vector<PlaceDoc> load_places_jsonl(const std::filesystem::path& path,
                                        const LinkRegistry& registry,
                                        std::vector<std::string>& errors);
std::vector<ClickRelationRec> load_click_jsonl(const std::filesystem::path& path,
                                               const LinkRegistry& registry,
                                               std::vector<std::string>& errors);
Gazetteer load_gazetteer_tsv(const std::filesystem::path& path, const LinkRegistry& registry,
                             std::vector<std::string>& errors);
SentimentLexicon load_lexicon_tsv(const std::filesystem::path& path,
                                  std::vector<std::string>& errors);

}  // namespace oekg
