#include "oekg/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace oekg {

std::optional<AdapterKind> parse_adapter_kind(std::string_view name) {
    if (name == "tabular") return AdapterKind::Tabular;
    if (name == "news") return AdapterKind::News;
    if (name == "qa") return AdapterKind::Qa;
    if (name == "place") return AdapterKind::Place;
    if (name == "click-relation") return AdapterKind::ClickRelation;
    return std::nullopt;
}

std::string_view adapter_kind_name(AdapterKind kind) {
    switch (kind) {
        case AdapterKind::Tabular: return "tabular";
        case AdapterKind::News: return "news";
        case AdapterKind::Qa: return "qa";
        case AdapterKind::Place: return "place";
        case AdapterKind::ClickRelation: return "click-relation";
    }
    return "?";
}

// ------------------------------------------------------------- descriptor

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

Iri expand_any(const std::string& token, const PrefixTable& prefixes) {
    if (token.starts_with('<') && token.ends_with('>')) {
        std::string value = token.substr(1, token.size() - 2);
        if (!is_valid_iri(value)) throw MappingError("invalid IRI " + token);
        return Iri{std::move(value)};
    }
    return prefixes.expand(token);
}

}  // namespace

DatasetDescriptor DatasetDescriptor::load(const std::filesystem::path& path,
                                          const PrefixTable& prefixes) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open descriptor: " + path.string());

    DatasetDescriptor d;
    bool have_kind = false, have_graph = false, have_source = false;
    std::string line;
    std::size_t line_no = 0;
    auto dir = path.parent_path();
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw MappingError(path.string() + ":" + std::to_string(line_no) +
                               ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));

        if (key == "kind") {
            auto k = parse_adapter_kind(value);
            if (!k) throw MappingError("unknown adapter kind '" + value + "'");
            d.kind = *k;
            have_kind = true;
        } else if (key == "graph") {
            d.graph = make_graph_id(value);
            have_graph = true;
        } else if (key == "source") {
            d.source = dir / value;
            have_source = true;
        } else if (key == "delimiter") {
            if (value == "tab") d.delimiter = '\t';
            else if (value == "comma") d.delimiter = ',';
            else if (value == "semicolon") d.delimiter = ';';
            else throw MappingError("unknown delimiter '" + value + "'");
        } else if (key == "key") {
            d.key_column = value;
        } else if (key == "key-language") {
            d.key_language = value;
        } else if (key == "type") {
            d.row_type = expand_any(value, prefixes);
        } else if (key == "gazetteer") {
            d.gazetteer = dir / value;
        } else if (key == "lexicon") {
            d.lexicon = dir / value;
        } else if (key.starts_with("column.")) {
            ColumnMapping m;
            m.column = key.substr(7);
            std::istringstream parts(value);
            std::string mode, property, suffix;
            parts >> mode >> property;
            std::getline(parts, suffix);
            suffix = trim(suffix);
            if (mode == "link") {
                m.link = true;
            } else if (mode != "literal") {
                throw MappingError("column mapping must start with link|literal: " + value);
            }
            if (property.empty()) throw MappingError("column mapping misses a property");
            m.property = expand_any(property, prefixes);
            if (!suffix.empty()) {
                if (m.link) throw MappingError("link columns take no datatype or language");
                if (suffix.starts_with('@')) {
                    m.language = suffix.substr(1);
                    if (!is_valid_language_tag(m.language))
                        throw MappingError("bad language tag in mapping: " + suffix);
                } else if (suffix.starts_with("^^")) {
                    m.datatype = expand_any(trim(suffix.substr(2)), prefixes);
                } else {
                    throw MappingError("unexpected mapping suffix: " + suffix);
                }
            }
            d.columns.push_back(std::move(m));
        } else {
            throw MappingError("unknown descriptor key '" + key + "'");
        }
    }
    if (!have_kind || !have_graph || !have_source)
        throw MappingError(path.string() + ": kind, graph and source are required");
    return d;
}

// ------------------------------------------------------------- enrichment

namespace {

struct DecodedText {
    std::vector<char32_t> cps;
    std::vector<std::size_t> byte_offset;  // cps.size() + 1 entries
};

DecodedText decode(std::string_view text) {
    DecodedText d;
    std::size_t i = 0;
    while (i < text.size()) {
        unsigned char b = static_cast<unsigned char>(text[i]);
        std::size_t len = b < 0x80 ? 1 : (b & 0xE0) == 0xC0 ? 2 : (b & 0xF0) == 0xE0 ? 3 : 4;
        if (i + len > text.size()) len = 1;
        char32_t cp = b;
        if (len > 1) {
            cp = b & (0xFF >> (len + 1));
            for (std::size_t k = 1; k < len; ++k)
                cp = (cp << 6) | (static_cast<unsigned char>(text[i + k]) & 0x3F);
        }
        d.byte_offset.push_back(i);
        d.cps.push_back(cp);
        i += len;
    }
    d.byte_offset.push_back(text.size());
    return d;
}

bool word_char(char32_t c) {
    if (c < 0x80) return std::isalnum(static_cast<int>(c)) != 0;
    return true;  // non-ASCII stays inside words
}

char32_t ascii_lower(char32_t c) {
    if (c >= 'A' && c <= 'Z') return c + 32;
    return c;
}

}  // namespace

std::vector<Mention> annotate_mentions(std::string_view text, const Gazetteer& gazetteer) {
    std::vector<Mention> out;
    if (gazetteer.empty() || text.empty()) return out;

    DecodedText t = decode(text);
    struct Entry {
        std::vector<char32_t> cps;
        const ResourceId* target;
    };
    std::vector<Entry> entries;
    entries.reserve(gazetteer.size());
    for (const auto& [surface, target] : gazetteer) {
        DecodedText s = decode(surface);
        if (!s.cps.empty()) entries.push_back({std::move(s.cps), &target});
    }

    std::size_t n = t.cps.size();
    std::size_t i = 0;
    while (i < n) {
        bool start_boundary = i == 0 || !word_char(t.cps[i - 1]);
        if (!start_boundary || !word_char(t.cps[i])) {
            ++i;
            continue;
        }
        const Entry* best = nullptr;
        for (const Entry& e : entries) {
            if (e.cps.size() > n - i) continue;
            if (best && e.cps.size() <= best->cps.size()) continue;
            if (t.cps[i] != e.cps[0]) continue;  // first character exact
            bool ok = true;
            for (std::size_t k = 1; k < e.cps.size(); ++k) {
                if (ascii_lower(t.cps[i + k]) != ascii_lower(e.cps[k])) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            std::size_t end = i + e.cps.size();
            if (end < n && word_char(t.cps[end])) continue;  // end boundary
            best = &e;
        }
        if (best) {
            std::size_t end = i + best->cps.size();
            Mention m;
            m.start = i;
            m.end = end;
            m.surface = std::string(text.substr(t.byte_offset[i],
                                                t.byte_offset[end] - t.byte_offset[i]));
            m.target = *best->target;
            out.push_back(std::move(m));
            i = end;
        } else {
            ++i;
        }
    }
    return out;
}

EmotionAnnotation score_sentiment(std::string_view headline, const SentimentLexicon& lexicon) {
    EmotionAnnotation result;
    std::string token;
    auto flush = [&] {
        if (token.empty()) return;
        auto it = lexicon.find(token);
        if (it != lexicon.end()) {
            if (it->second > 0) result.positive = std::max(result.positive, it->second);
            if (it->second < 0) result.negative = std::max(result.negative, -it->second);
        }
        token.clear();
    };
    for (unsigned char c : headline) {
        if (std::isalpha(c)) {
            token.push_back(static_cast<char>(std::tolower(c)));
        } else if (c >= 0x80) {
            token.push_back(static_cast<char>(c));
        } else {
            flush();
        }
    }
    flush();
    result.positive = std::clamp(result.positive, 1, 5);
    result.negative = std::clamp(result.negative, 1, 5);
    return result;
}

// --------------------------------------------------------------- builders

namespace {

// run-scoped blank labels; the store standardizes them apart on insert
struct BlankSeq {
    std::string prefix;
    std::size_t n = 0;
    BlankNode next() { return BlankNode{prefix + std::to_string(n++)}; }
};

}  // namespace

BuiltGraph build_tabular(LinkRegistry& registry, const DatasetDescriptor& descriptor,
                         std::istream& table) {
    BuiltGraph out;
    std::string line;
    if (!std::getline(table, line)) return out;  // empty table: all-zero report
    if (!line.empty() && line.back() == '\r') line.pop_back();

    auto split = [&](const std::string& s) {
        std::vector<std::string> cells;
        std::size_t start = 0;
        for (;;) {
            auto d = s.find(descriptor.delimiter, start);
            cells.push_back(s.substr(start, d == std::string::npos ? d : d - start));
            if (d == std::string::npos) break;
            start = d + 1;
        }
        return cells;
    };

    std::vector<std::string> header = split(line);
    auto column_index = [&](const std::string& name) -> std::size_t {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end())
            throw MappingError("column '" + name + "' missing from table header");
        return static_cast<std::size_t>(it - header.begin());
    };

    if (descriptor.key_column.empty()) throw MappingError("tabular descriptor needs a key column");
    std::size_t key_idx = column_index(descriptor.key_column);
    std::vector<std::size_t> col_idx;
    for (const ColumnMapping& m : descriptor.columns) col_idx.push_back(column_index(m.column));

    auto resolve_or_mint = [&](const std::string& label) -> std::pair<ResourceId, bool> {
        ExternalRef ref = wikipedia_ref(descriptor.key_language, label);
        if (auto hit = registry.get_id(ref)) return {*hit, true};
        ResourceId fresh = registry.mint();
        registry.register_alias(ref, fresh);
        return {fresh, false};
    };

    std::size_t line_no = 1;
    while (std::getline(table, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells = split(line);
        if (cells.size() != header.size()) {
            out.report.errors.push_back("row " + std::to_string(line_no) + ": expected " +
                                        std::to_string(header.size()) + " cells, got " +
                                        std::to_string(cells.size()));
            continue;
        }
        ++out.report.records;

        ResourceId subject;
        const std::string& key_cell = cells[key_idx];
        if (key_cell.empty()) {
            subject = registry.mint();
            ++out.report.minted;
        } else {
            auto [id, linked] = resolve_or_mint(key_cell);
            subject = id;
            if (linked) ++out.report.cells_linked;
            else ++out.report.minted;
        }
        if (descriptor.row_type) {
            out.triples.push_back(Triple{subject.iri, vocab::rdf_type(),
                                         Term{*descriptor.row_type}});
        }
        for (std::size_t c = 0; c < descriptor.columns.size(); ++c) {
            const ColumnMapping& m = descriptor.columns[c];
            const std::string& cell = cells[col_idx[c]];
            if (cell.empty()) continue;
            if (m.link) {
                auto [id, linked] = resolve_or_mint(cell);
                if (linked) ++out.report.cells_linked;
                else ++out.report.minted;
                out.triples.push_back(Triple{subject.iri, m.property, Term{id.iri}});
            } else {
                Literal lit = !m.language.empty()
                                  ? lang_literal(cell, m.language)
                                  : m.datatype ? typed_literal(cell, *m.datatype)
                                               : plain_literal(cell);
                out.triples.push_back(Triple{subject.iri, m.property, Term{std::move(lit)}});
            }
        }
    }
    out.report.triples = out.triples.size();
    return out;
}

BuiltGraph build_news(LinkRegistry& registry, const std::vector<NewsArticleDoc>& docs,
                      const Gazetteer& gazetteer, const SentimentLexicon& lexicon) {
    BuiltGraph out;
    BlankSeq emotion_sets{"es"}, emotions{"em"};
    for (const NewsArticleDoc& doc : docs) {
        if (doc.headline.empty()) {
            out.report.errors.push_back("article '" + doc.source_id + "': empty headline");
            continue;
        }
        std::string lang = doc.language.empty() ? "en" : doc.language;
        if (!is_valid_language_tag(lang)) {
            out.report.errors.push_back("article '" + doc.source_id + "': bad language tag '" +
                                        lang + "'");
            continue;
        }
        ++out.report.records;
        ResourceId article = registry.mint();
        ++out.report.minted;
        auto add = [&](Term s, const Iri& p, Term o) {
            out.triples.push_back(Triple{std::move(s), p, std::move(o)});
        };
        add(Term{article.iri}, vocab::rdf_type(), Term{vocab::so_article()});
        add(Term{article.iri}, vocab::so_headline(), Term{lang_literal(doc.headline, lang)});

        std::set<std::string> targets;  // distinct, ordered for determinism
        std::map<std::string, ResourceId> by_local;
        for (const std::string* text : {&doc.headline, &doc.body}) {
            for (const Mention& m : annotate_mentions(*text, gazetteer)) {
                targets.insert(m.target.local);
                by_local.emplace(m.target.local, m.target);
            }
        }
        for (const std::string& local : targets) {
            add(Term{article.iri}, vocab::so_mentions(), Term{by_local.at(local).iri});
            ++out.report.cells_linked;
        }

        EmotionAnnotation emotion = score_sentiment(doc.headline, lexicon);
        BlankNode es = emotion_sets.next();
        add(Term{article.iri}, vocab::onyx_has_emotion_set(), Term{es});
        add(Term{es}, vocab::rdf_type(), Term{vocab::onyx_emotion_set()});
        auto emit_emotion = [&](const Iri& category, int strength) {
            BlankNode e = emotions.next();
            add(Term{es}, vocab::onyx_has_emotion(), Term{e});
            add(Term{e}, vocab::rdf_type(), Term{vocab::onyx_emotion()});
            add(Term{e}, vocab::onyx_has_emotion_category(), Term{category});
            add(Term{e}, vocab::onyx_has_emotion_intensity(), Term{integer_literal(strength)});
        };
        emit_emotion(vocab::oekgs_positive_emotion(), emotion.positive);
        emit_emotion(vocab::oekgs_negative_emotion(), emotion.negative);
    }
    out.report.triples = out.triples.size();
    return out;
}

BuiltGraph build_qa(LinkRegistry& registry, const std::vector<QAPair>& pairs) {
    BuiltGraph out;
    for (const QAPair& pair : pairs) {
        if (pair.question_text.empty() || pair.answer_text.empty()) {
            out.report.errors.push_back("qa pair with empty text skipped");
            continue;
        }
        ++out.report.records;
        ResourceId question = registry.mint();
        ResourceId answer = registry.mint();
        out.report.minted += 2;
        auto add = [&](const Iri& s, const Iri& p, Term o) {
            out.triples.push_back(Triple{s, p, std::move(o)});
        };
        add(question.iri, vocab::rdf_type(), Term{vocab::so_question()});
        add(question.iri, vocab::so_text(), Term{lang_literal(pair.question_text, "en")});
        for (const ResourceId& e : pair.question_entities) {
            add(question.iri, vocab::so_main_entity(), Term{e.iri});
            ++out.report.cells_linked;
        }
        add(answer.iri, vocab::rdf_type(), Term{vocab::so_answer()});
        add(answer.iri, vocab::so_text(), Term{lang_literal(pair.answer_text, "en")});
        for (const ResourceId& e : pair.answer_entities) {
            add(answer.iri, vocab::so_mentions(), Term{e.iri});
            ++out.report.cells_linked;
        }
        add(question.iri, vocab::so_suggested_answer(), Term{answer.iri});
    }
    out.report.triples = out.triples.size();
    return out;
}

BuiltGraph build_places(const std::vector<PlaceDoc>& docs) {
    BuiltGraph out;
    for (const PlaceDoc& doc : docs) {
        ++out.report.records;
        for (const Iri& image : doc.images) {
            out.triples.push_back(Triple{doc.place.iri, vocab::so_image(), Term{image}});
        }
        for (const auto& [lang, text] : doc.descriptions) {
            out.triples.push_back(Triple{doc.place.iri, vocab::so_description(),
                                         Term{lang_literal(text, lang)}});
        }
    }
    out.report.triples = out.triples.size();
    return out;
}

BuiltGraph build_click_relations(LinkRegistry& registry,
                                 const std::vector<ClickRelationRec>& relations) {
    BuiltGraph out;
    BlankSeq scores{"sc"};
    for (const ClickRelationRec& rel : relations) {
        bool valid = true;
        std::set<std::string> langs;
        for (const auto& [lang, value] : rel.scores) {
            char* end = nullptr;
            double v = std::strtod(value.c_str(), &end);
            if (value.empty() || end != value.c_str() + value.size() || v < 0.0 || v > 1.0) {
                out.report.errors.push_back("relation " + rel.source.local + " -> " +
                                            rel.target.local + ": score out of range: " + value);
                valid = false;
            }
            if (!langs.insert(lang).second) {
                out.report.errors.push_back("relation " + rel.source.local + " -> " +
                                            rel.target.local + ": duplicate language " + lang);
                valid = false;
            }
        }
        if (!valid) continue;
        ++out.report.records;
        ResourceId relation = registry.mint();
        ++out.report.minted;
        auto add = [&](Term s, const Iri& p, Term o) {
            out.triples.push_back(Triple{std::move(s), p, std::move(o)});
        };
        add(Term{relation.iri}, vocab::rdf_type(),
            Term{vocab::oekgs_language_specific_relation()});
        add(Term{relation.iri}, vocab::oekgs_source(), Term{rel.source.iri});
        add(Term{relation.iri}, vocab::oekgs_target(), Term{rel.target.iri});
        for (const auto& [lang, value] : rel.scores) {
            BlankNode score = scores.next();
            add(Term{relation.iri}, vocab::oekgs_has_language_specific_relation_score(),
                Term{score});
            add(Term{score}, vocab::oekgs_score_value(), Term{decimal_literal(value)});
            add(Term{score}, vocab::oekgs_score_language(),
                Term{typed_literal(lang, vocab::xsd_language())});
        }
    }
    out.report.triples = out.triples.size();
    return out;
}

// ------------------------------------------------- store-writing adapters

namespace {

IngestReport commit(QuadStore& store, BuiltGraph&& built, const NamedGraphId& graph) {
    built.report.inserted = store.insert(built.triples, graph);
    return std::move(built.report);
}

}  // namespace

IngestReport ingest_tabular(QuadStore& store, LinkRegistry& registry,
                            const DatasetDescriptor& descriptor) {
    std::ifstream in(descriptor.source);
    if (!in)
        throw std::runtime_error("cannot open table: " + descriptor.source.string());
    return commit(store, build_tabular(registry, descriptor, in), descriptor.graph);
}

IngestReport ingest_news(QuadStore& store, LinkRegistry& registry,
                         const std::vector<NewsArticleDoc>& docs, const Gazetteer& gazetteer,
                         const SentimentLexicon& lexicon, const NamedGraphId& graph) {
    return commit(store, build_news(registry, docs, gazetteer, lexicon), graph);
}

IngestReport ingest_qa(QuadStore& store, LinkRegistry& registry,
                       const std::vector<QAPair>& pairs, const NamedGraphId& graph) {
    return commit(store, build_qa(registry, pairs), graph);
}

IngestReport ingest_places(QuadStore& store, const std::vector<PlaceDoc>& docs,
                           const NamedGraphId& graph) {
    return commit(store, build_places(docs), graph);
}

IngestReport ingest_click_relations(QuadStore& store, LinkRegistry& registry,
                                    const std::vector<ClickRelationRec>& relations,
                                    const NamedGraphId& graph) {
    return commit(store, build_click_relations(registry, relations), graph);
}

// -------------------------------------------------------------- loaders

std::optional<ResourceId> parse_entity_ref(const std::string& ref,
                                           const LinkRegistry& registry) {
    if (ref.starts_with("local:")) {
        std::string local = ref.substr(6);
        if (local.empty()) return std::nullopt;
        return resource_from_local(local);
    }
    if (ref.starts_with("http://") || ref.starts_with("https://")) {
        if (ref.find("wikidata.org") != std::string::npos)
            return registry.get_id(wikidata_ref(ref));
        if (ref.find("dbpedia.org") != std::string::npos)
            return registry.get_id(dbpedia_ref(ref));
        return std::nullopt;
    }
    auto colon = ref.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 >= ref.size())
        return std::nullopt;
    return registry.get_id(wikipedia_ref(ref.substr(0, colon), ref.substr(colon + 1)));
}

namespace {

using nlohmann::json;

// one JSON object per line; parse errors are reported and the line skipped
template <typename Fn>
void for_each_jsonl(const std::filesystem::path& path, std::vector<std::string>& errors,
                    Fn&& fn) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        json j = json::parse(t, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            errors.push_back(path.filename().string() + ":" + std::to_string(line_no) +
                             ": malformed JSON record");
            continue;
        }
        try {
            fn(j, line_no);
        } catch (const std::exception& e) {
            errors.push_back(path.filename().string() + ":" + std::to_string(line_no) + ": " +
                             e.what());
        }
    }
}

std::string json_string(const json& j, const char* field) {
    if (!j.contains(field) || !j[field].is_string())
        throw std::runtime_error(std::string("missing string field '") + field + "'");
    return j[field].get<std::string>();
}

}  // namespace

std::vector<NewsArticleDoc> load_news_jsonl(const std::filesystem::path& path,
                                            std::vector<std::string>& errors) {
    std::vector<NewsArticleDoc> docs;
    for_each_jsonl(path, errors, [&](const json& j, std::size_t) {
        NewsArticleDoc d;
        d.headline = json_string(j, "headline");
        d.body = j.value("body", std::string{});
        d.language = j.value("language", std::string{"en"});
        d.source_id = j.value("source", std::string{});
        docs.push_back(std::move(d));
    });
    return docs;
}

namespace {

std::vector<ResourceId> resolve_refs(const json& j, const char* field,
                                     const LinkRegistry& registry,
                                     std::vector<std::string>& errors,
                                     const std::filesystem::path& path, std::size_t line_no) {
    std::vector<ResourceId> out;
    if (!j.contains(field)) return out;
    for (const auto& item : j[field]) {
        if (!item.is_string()) {
            errors.push_back(path.filename().string() + ":" + std::to_string(line_no) +
                             ": non-string entity ref");
            continue;
        }
        auto id = parse_entity_ref(item.get<std::string>(), registry);
        if (!id) {
            errors.push_back(path.filename().string() + ":" + std::to_string(line_no) +
                             ": unresolved entity ref '" + item.get<std::string>() + "'");
            continue;
        }
        out.push_back(std::move(*id));
    }
    return out;
}

}  // namespace

std::vector<QAPair> load_qa_jsonl(const std::filesystem::path& path,
                                  const LinkRegistry& registry,
                                  std::vector<std::string>& errors) {
    std::vector<QAPair> pairs;
    for_each_jsonl(path, errors, [&](const json& j, std::size_t line_no) {
        QAPair p;
        p.question_text = json_string(j, "question");
        p.answer_text = json_string(j, "answer");
        p.question_entities = resolve_refs(j, "question_entities", registry, errors, path, line_no);
        p.answer_entities = resolve_refs(j, "answer_entities", registry, errors, path, line_no);
        if (j.contains("query") && j["query"].is_string())
            p.query_text = j["query"].get<std::string>();
        pairs.push_back(std::move(p));
    });
    return pairs;
}

std::vector<PlaceDoc> load_places_jsonl(const std::filesystem::path& path,
                                        const LinkRegistry& registry,
                                        std::vector<std::string>& errors) {
    std::vector<PlaceDoc> docs;
    for_each_jsonl(path, errors, [&](const json& j, std::size_t line_no) {
        auto id = parse_entity_ref(json_string(j, "place"), registry);
        if (!id) throw std::runtime_error("unresolved place ref");
        PlaceDoc d;
        d.place = std::move(*id);
        if (j.contains("images")) {
            for (const auto& img : j["images"]) {
                std::string v = img.get<std::string>();
                if (!is_valid_iri(v) || v.find("://") == std::string::npos) {
                    errors.push_back(path.filename().string() + ":" + std::to_string(line_no) +
                                     ": image IRI must be absolute: " + v);
                    continue;
                }
                d.images.push_back(Iri{std::move(v)});
            }
        }
        if (j.contains("descriptions")) {
            for (const auto& desc : j["descriptions"]) {
                d.descriptions.emplace_back(desc.value("language", "en"),
                                            json_string(desc, "text"));
            }
        }
        docs.push_back(std::move(d));
    });
    return docs;
}

std::vector<ClickRelationRec> load_click_jsonl(const std::filesystem::path& path,
                                               const LinkRegistry& registry,
                                               std::vector<std::string>& errors) {
    std::vector<ClickRelationRec> out;
    for_each_jsonl(path, errors, [&](const json& j, std::size_t) {
        auto source = parse_entity_ref(json_string(j, "source"), registry);
        auto target = parse_entity_ref(json_string(j, "target"), registry);
        if (!source || !target) throw std::runtime_error("unresolved source/target ref");
        ClickRelationRec rec;
        rec.source = std::move(*source);
        rec.target = std::move(*target);
        for (const auto& s : j["scores"]) {
            std::string value = s["value"].is_string() ? s["value"].get<std::string>()
                                                       : s["value"].dump();
            rec.scores.emplace_back(json_string(s, "language"), std::move(value));
        }
        out.push_back(std::move(rec));
    });
    return out;
}

Gazetteer load_gazetteer_tsv(const std::filesystem::path& path, const LinkRegistry& registry,
                             std::vector<std::string>& errors) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open gazetteer: " + path.string());
    Gazetteer g;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) {
            errors.push_back("gazetteer:" + std::to_string(line_no) + ": expected two columns");
            continue;
        }
        std::string surface = line.substr(0, tab);
        auto id = parse_entity_ref(line.substr(tab + 1), registry);
        if (!id) {
            errors.push_back("gazetteer:" + std::to_string(line_no) + ": unresolved target");
            continue;
        }
        g.emplace(std::move(surface), std::move(*id));
    }
    return g;
}

SentimentLexicon load_lexicon_tsv(const std::filesystem::path& path,
                                  std::vector<std::string>& errors) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open lexicon: " + path.string());
    SentimentLexicon lex;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        int score = tab == std::string::npos ? 0 : std::atoi(line.c_str() + tab + 1);
        if (tab == std::string::npos || score == 0 || score < -5 || score > 5) {
            errors.push_back("lexicon:" + std::to_string(line_no) +
                             ": score must be in [-5,-1] or [1,5]");
            continue;
        }
        std::string token = line.substr(0, tab);
        std::transform(token.begin(), token.end(), token.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        lex.emplace(std::move(token), score);
    }
    return lex;
}

}  // namespace oekg
