#include "oekg/ntriples.hpp"

#include <array>
#include <cctype>
#include <sstream>

namespace oekg {
namespace ntriples {
namespace {

constexpr char32_t kInvalid = 0xFFFFFFFF;

bool is_hex(char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

unsigned hex_value(char c) {
    if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
    return static_cast<unsigned>(c - 'A' + 10);
}

void append_utf8(char32_t cp, std::string& out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

// Decodes one UTF-8 sequence; returns kInvalid on malformed input.
char32_t decode_utf8(std::string_view s, std::size_t pos, std::size_t& len) {
    unsigned char b0 = static_cast<unsigned char>(s[pos]);
    if (b0 < 0x80) {
        len = 1;
        return b0;
    }
    int extra;
    char32_t cp;
    if ((b0 & 0xE0) == 0xC0) {
        extra = 1;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        extra = 2;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        extra = 3;
        cp = b0 & 0x07;
    } else {
        return kInvalid;
    }
    if (pos + static_cast<std::size_t>(extra) >= s.size()) return kInvalid;
    for (int i = 1; i <= extra; ++i) {
        unsigned char b = static_cast<unsigned char>(s[pos + static_cast<std::size_t>(i)]);
        if ((b & 0xC0) != 0x80) return kInvalid;
        cp = (cp << 6) | (b & 0x3F);
    }
    len = static_cast<std::size_t>(extra) + 1;
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return kInvalid;
    return cp;
}

bool pn_chars_base(char32_t c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= 0xC0 && c <= 0xD6) ||
           (c >= 0xD8 && c <= 0xF6) || (c >= 0xF8 && c <= 0x2FF) || (c >= 0x370 && c <= 0x37D) ||
           (c >= 0x37F && c <= 0x1FFF) || (c >= 0x200C && c <= 0x200D) ||
           (c >= 0x2070 && c <= 0x218F) || (c >= 0x2C00 && c <= 0x2FEF) ||
           (c >= 0x3001 && c <= 0xD7FF) || (c >= 0xF900 && c <= 0xFDCF) ||
           (c >= 0xFDF0 && c <= 0xFFFD) || (c >= 0x10000 && c <= 0xEFFFF);
}

bool pn_chars_u(char32_t c) { return pn_chars_base(c) || c == '_' || c == ':'; }

bool pn_chars(char32_t c) {
    return pn_chars_u(c) || c == '-' || (c >= '0' && c <= '9') || c == 0xB7 ||
           (c >= 0x300 && c <= 0x36F) || (c >= 0x203F && c <= 0x2040);
}

bool scan_uchar(ScanState& s, char32_t& cp) {
    // cursor on 'u' or 'U' (the backslash is consumed)
    char kind = s.input[s.pos];
    std::size_t digits = kind == 'u' ? 4 : 8;
    ++s.pos;
    char32_t v = 0;
    for (std::size_t i = 0; i < digits; ++i) {
        if (s.pos >= s.input.size() || !is_hex(s.input[s.pos])) {
            s.error = "bad \\" + std::string(1, kind) + " escape";
            return false;
        }
        v = (v << 4) | hex_value(s.input[s.pos]);
        ++s.pos;
    }
    if (v > 0x10FFFF || (v >= 0xD800 && v <= 0xDFFF)) {
        s.error = "escape denotes an invalid code point";
        return false;
    }
    cp = v;
    return true;
}

std::optional<Iri> scan_iriref(ScanState& s) {
    // cursor on '<'
    ++s.pos;
    std::string value;
    while (s.pos < s.input.size()) {
        char c = s.input[s.pos];
        if (c == '>') {
            ++s.pos;
            if (!is_valid_iri(value)) {
                s.error = "invalid IRI content";
                return std::nullopt;
            }
            return Iri{std::move(value)};
        }
        if (c == '\\') {
            ++s.pos;
            if (s.pos >= s.input.size() || (s.input[s.pos] != 'u' && s.input[s.pos] != 'U')) {
                s.error = "only \\u/\\U escapes are allowed in IRIs";
                return std::nullopt;
            }
            char32_t cp;
            if (!scan_uchar(s, cp)) return std::nullopt;
            append_utf8(cp, value);
            continue;
        }
        unsigned char uc = static_cast<unsigned char>(c);
        if (uc <= 0x20 || c == '<' || c == '"' || c == '{' || c == '}' || c == '|' ||
            c == '^' || c == '`') {
            s.error = "character not allowed in IRI";
            return std::nullopt;
        }
        value.push_back(c);
        ++s.pos;
    }
    s.error = "unterminated IRI";
    return std::nullopt;
}

std::optional<BlankNode> scan_blank(ScanState& s) {
    // cursor on '_'
    if (s.pos + 1 >= s.input.size() || s.input[s.pos + 1] != ':') {
        s.error = "expected '_:' blank node label";
        return std::nullopt;
    }
    s.pos += 2;
    std::string label;
    std::size_t len = 0;
    if (s.pos >= s.input.size()) {
        s.error = "empty blank node label";
        return std::nullopt;
    }
    char32_t first = decode_utf8(s.input, s.pos, len);
    if (first == kInvalid || (!pn_chars_u(first) && !(first >= '0' && first <= '9'))) {
        s.error = "invalid first character in blank node label";
        return std::nullopt;
    }
    label.append(s.input.substr(s.pos, len));
    s.pos += len;
    while (s.pos < s.input.size()) {
        char32_t c = decode_utf8(s.input, s.pos, len);
        if (c == kInvalid) break;
        if (!pn_chars(c) && c != '.') break;
        label.append(s.input.substr(s.pos, len));
        s.pos += len;
    }
    // trailing dots belong to the statement, not the label
    while (!label.empty() && label.back() == '.') {
        label.pop_back();
        --s.pos;
    }
    if (label.empty()) {
        s.error = "empty blank node label";
        return std::nullopt;
    }
    return BlankNode{std::move(label)};
}

std::optional<Literal> scan_literal(ScanState& s) {
    // cursor on '"'
    ++s.pos;
    std::string lexical;
    for (;;) {
        if (s.pos >= s.input.size()) {
            s.error = "unterminated string literal";
            return std::nullopt;
        }
        char c = s.input[s.pos];
        if (c == '"') {
            ++s.pos;
            break;
        }
        if (c == '\n' || c == '\r') {
            s.error = "raw newline in string literal";
            return std::nullopt;
        }
        if (c == '\\') {
            ++s.pos;
            if (s.pos >= s.input.size()) {
                s.error = "dangling escape";
                return std::nullopt;
            }
            char e = s.input[s.pos];
            switch (e) {
                case 't': lexical.push_back('\t'); ++s.pos; break;
                case 'b': lexical.push_back('\b'); ++s.pos; break;
                case 'n': lexical.push_back('\n'); ++s.pos; break;
                case 'r': lexical.push_back('\r'); ++s.pos; break;
                case 'f': lexical.push_back('\f'); ++s.pos; break;
                case '"': lexical.push_back('"'); ++s.pos; break;
                case '\'': lexical.push_back('\''); ++s.pos; break;
                case '\\': lexical.push_back('\\'); ++s.pos; break;
                case 'u':
                case 'U': {
                    char32_t cp;
                    if (!scan_uchar(s, cp)) return std::nullopt;
                    append_utf8(cp, lexical);
                    break;
                }
                default:
                    s.error = "unknown escape \\" + std::string(1, e);
                    return std::nullopt;
            }
            continue;
        }
        lexical.push_back(c);
        ++s.pos;
    }

    if (s.pos < s.input.size() && s.input[s.pos] == '@') {
        ++s.pos;
        std::string tag;
        while (s.pos < s.input.size() &&
               (std::isalnum(static_cast<unsigned char>(s.input[s.pos])) ||
                s.input[s.pos] == '-')) {
            tag.push_back(s.input[s.pos]);
            ++s.pos;
        }
        std::string lowered = tag;
        for (char& c : lowered) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (!is_valid_language_tag(lowered)) {
            s.error = "malformed language tag '@" + tag + "'";
            return std::nullopt;
        }
        return lang_literal(std::move(lexical), std::move(lowered));
    }

    if (s.pos + 1 < s.input.size() && s.input[s.pos] == '^' && s.input[s.pos + 1] == '^') {
        s.pos += 2;
        if (s.pos >= s.input.size() || s.input[s.pos] != '<') {
            s.error = "expected datatype IRI after '^^'";
            return std::nullopt;
        }
        auto dt = scan_iriref(s);
        if (!dt) return std::nullopt;
        if (*dt == vocab::rdf_lang_string()) {
            s.error = "rdf:langString literal requires a language tag";
            return std::nullopt;
        }
        if (*dt == vocab::xsd_string()) return plain_literal(std::move(lexical));
        return typed_literal(std::move(lexical), std::move(*dt));
    }

    return plain_literal(std::move(lexical));
}

}  // namespace

void skip_ws(ScanState& s) {
    while (s.pos < s.input.size() && (s.input[s.pos] == ' ' || s.input[s.pos] == '\t')) ++s.pos;
}

std::optional<Term> scan_term(ScanState& s) {
    skip_ws(s);
    if (s.pos >= s.input.size()) {
        s.error = "unexpected end of statement";
        return std::nullopt;
    }
    char c = s.input[s.pos];
    if (c == '<') {
        auto iri = scan_iriref(s);
        if (!iri) return std::nullopt;
        return Term{std::move(*iri)};
    }
    if (c == '_') {
        auto b = scan_blank(s);
        if (!b) return std::nullopt;
        return Term{std::move(*b)};
    }
    if (c == '"') {
        auto lit = scan_literal(s);
        if (!lit) return std::nullopt;
        return Term{std::move(*lit)};
    }
    s.error = std::string("unexpected character '") + c + "'";
    return std::nullopt;
}

bool scan_end(ScanState& s) {
    skip_ws(s);
    if (s.pos >= s.input.size() || s.input[s.pos] != '.') {
        s.error = "expected '.' statement terminator";
        return false;
    }
    ++s.pos;
    skip_ws(s);
    if (s.pos < s.input.size() && s.input[s.pos] != '#') {
        s.error = "trailing content after '.'";
        return false;
    }
    return true;
}

namespace {

void write_iri(const Iri& iri, std::string& out) {
    out.push_back('<');
    for (char c : iri.value) {
        unsigned char uc = static_cast<unsigned char>(c);
        // valid Iri values never hold ws/'<'/'>'/'"'; escape the remaining
        // IRIREF-forbidden ASCII so output always re-parses
        if (uc < 0x80 && (uc <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' ||
                          c == '}' || c == '|' || c == '^' || c == '`' || c == '\\')) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04X", uc);
            out.append(buf);
        } else {
            out.push_back(c);
        }
    }
    out.push_back('>');
}

void write_literal(const Literal& lit, std::string& out) {
    out.push_back('"');
    for (char c : lit.lexical) {
        switch (c) {
            case '"': out.append("\\\""); break;
            case '\\': out.append("\\\\"); break;
            case '\n': out.append("\\n"); break;
            case '\r': out.append("\\r"); break;
            case '\t': out.append("\\t"); break;
            case '\b': out.append("\\b"); break;
            case '\f': out.append("\\f"); break;
            default: {
                unsigned char uc = static_cast<unsigned char>(c);
                if (uc < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04X", uc);
                    out.append(buf);
                } else {
                    out.push_back(c);
                }
            }
        }
    }
    out.push_back('"');
    if (!lit.language.empty()) {
        out.push_back('@');
        out.append(lit.language);
    } else if (lit.datatype != vocab::xsd_string()) {
        out.append("^^");
        write_iri(lit.datatype, out);
    }
}

}  // namespace

void write_term(const Term& term, std::string& out) {
    if (const auto* iri = std::get_if<Iri>(&term)) {
        write_iri(*iri, out);
    } else if (const auto* lit = std::get_if<Literal>(&term)) {
        write_literal(*lit, out);
    } else {
        out.append("_:");
        out.append(std::get<BlankNode>(term).label);
    }
}

std::string term_string(const Term& term) {
    std::string out;
    write_term(term, out);
    return out;
}

}  // namespace ntriples

ParseResult parse_ntriples(std::string_view text) {
    ParseResult result;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        if (start == text.size() && line_no > 0) break;
        std::size_t eol = text.find('\n', start);
        std::string_view line = eol == std::string_view::npos
                                    ? text.substr(start)
                                    : text.substr(start, eol - start);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        ntriples::ScanState s{line, 0, {}};
        ntriples::skip_ws(s);
        if (s.pos < line.size() && line[s.pos] != '#') {
            auto fail = [&](const std::string& msg) {
                result.errors.push_back({line_no, msg});
            };
            auto subject = ntriples::scan_term(s);
            if (!subject) {
                fail(s.error);
            } else if (is_literal(*subject)) {
                fail("literal not allowed as subject");
            } else {
                ntriples::skip_ws(s);
                std::optional<Term> predicate;
                if (s.pos < line.size() && line[s.pos] == '<') {
                    predicate = ntriples::scan_term(s);
                }
                if (!predicate) {
                    fail(s.error.empty() ? "expected IRI predicate" : s.error);
                } else {
                    auto object = ntriples::scan_term(s);
                    if (!object) {
                        fail(s.error);
                    } else if (!ntriples::scan_end(s)) {
                        fail(s.error);
                    } else {
                        result.triples.push_back(Triple{std::move(*subject),
                                                        std::get<Iri>(std::move(*predicate)),
                                                        std::move(*object)});
                    }
                }
            }
        }

        if (eol == std::string_view::npos) break;
        start = eol + 1;
    }
    return result;
}

std::string serialize_ntriples(std::span<const Triple> triples) {
    std::string out;
    for (const Triple& t : triples) {
        ntriples::write_term(t.subject, out);
        out.push_back(' ');
        ntriples::write_term(Term{t.predicate}, out);
        out.push_back(' ');
        ntriples::write_term(t.object, out);
        out.append(" .\n");
    }
    return out;
}

void serialize_ntriples(std::span<const Triple> triples, std::ostream& out) {
    out << serialize_ntriples(triples);
}

}  // namespace oekg
