#include "oekg/query.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <map>
#include <set>
#include <unordered_set>

#include "oekg/ntriples.hpp"

namespace oekg {

// ---------------------------------------------------------------- parsing

namespace {

std::string upper(std::string_view w) {
    std::string out(w);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
}

const std::unordered_set<std::string>& unsupported_keywords() {
    static const std::unordered_set<std::string> kws{
        "OPTIONAL", "UNION", "MINUS", "GRAPH", "SERVICE", "BIND", "VALUES",
        "EXISTS", "NOT", "LIMIT", "OFFSET", "GROUP", "HAVING", "REDUCED",
        "CONSTRUCT", "ASK", "DESCRIBE", "INSERT", "DELETE", "LOAD", "BASE",
        "COUNT", "SUM", "AVG", "MIN", "MAX", "SAMPLE", "GROUP_CONCAT",
        "REGEX", "STR", "LANG", "DATATYPE", "BOUND", "ISIRI", "ISURI",
        "ISLITERAL", "ISBLANK", "SAMETERM", "IN"};
    return kws;
}

class Parser {
public:
    Parser(std::string_view text, const PrefixTable& ambient)
        : text_(text), prefixes_(ambient) {}

    Query parse() {
        parse_prologue();
        expect_keyword("SELECT");
        if (peek_keyword("DISTINCT")) {
            take_word();
            q_.distinct = true;
        } else {
            check_unsupported_word();
        }
        parse_projection();
        if (peek_keyword("WHERE")) take_word();
        expect_char('{');
        parse_group();
        parse_modifiers();
        skip_ws();
        if (!eof()) fail("unexpected trailing content");
        if (select_star_) {
            for (const std::string& v : seen_vars_) q_.projected.push_back(v);
        }
        return std::move(q_);
    }

private:
    std::string_view text_;
    PrefixTable prefixes_;
    std::size_t pos_ = 0;
    int hidden_counter_ = 0;
    bool select_star_ = false;
    std::vector<std::string> seen_vars_;  // user vars in order of first use
    std::set<std::string> seen_var_set_;
    Query q_;

    [[noreturn]] void fail(const std::string& msg) { throw QuerySyntaxError(msg, pos_); }

    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    void skip_ws() {
        while (!eof()) {
            char c = text_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                ++pos_;
            } else if (c == '#') {
                while (!eof() && text_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    bool try_char(char c) {
        skip_ws();
        if (eof() || text_[pos_] != c) return false;
        ++pos_;
        return true;
    }

    void expect_char(char c) {
        if (!try_char(c)) fail(std::string("expected '") + c + "'");
    }

    // bare word at the cursor: [A-Za-z_][A-Za-z0-9_]*
    std::string_view peek_word() {
        skip_ws();
        std::size_t i = pos_;
        if (i >= text_.size()) return {};
        char c = text_[i];
        if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_')) return {};
        std::size_t j = i;
        while (j < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_'))
            ++j;
        // a ':' right after makes it a prefixed name, not a keyword
        if (j < text_.size() && text_[j] == ':') return {};
        return text_.substr(i, j - i);
    }

    bool peek_keyword(const char* kw) { return upper(peek_word()) == kw; }

    std::string take_word() {
        auto w = peek_word();
        pos_ += w.size();
        return std::string(w);
    }

    void expect_keyword(const char* kw) {
        auto w = peek_word();
        if (upper(w) != kw) {
            check_unsupported_word();
            fail(std::string("expected ") + kw);
        }
        pos_ += w.size();
    }

    void check_unsupported_word() {
        auto w = upper(peek_word());
        if (!w.empty() && unsupported_keywords().contains(w)) throw UnsupportedFeatureError(w);
    }

    void parse_prologue() {
        for (;;) {
            if (peek_keyword("PREFIX")) {
                take_word();
                skip_ws();
                std::string prefix = scan_pname_prefix();
                expect_char(':');
                skip_ws();
                if (eof() || peek() != '<') fail("expected namespace IRI");
                Iri ns_iri = scan_iriref();
                prefixes_.bind(std::move(prefix), std::move(ns_iri));
            } else if (peek_keyword("BASE")) {
                throw UnsupportedFeatureError("BASE");
            } else {
                return;
            }
        }
    }

    void parse_projection() {
        if (try_char('*')) {
            select_star_ = true;
            return;
        }
        skip_ws();
        if (!eof() && peek() == '(') throw UnsupportedFeatureError("SELECT expressions");
        bool any = false;
        for (;;) {
            skip_ws();
            if (eof()) fail("unterminated SELECT clause");
            char c = peek();
            if (c == '?' || c == '$') {
                q_.projected.push_back(scan_variable().name);
                any = true;
            } else if (c == '(') {
                throw UnsupportedFeatureError("SELECT expressions");
            } else {
                break;
            }
        }
        if (!any) fail("SELECT needs at least one variable or *");
    }

    void parse_group() {
        for (;;) {
            skip_ws();
            if (eof()) fail("unterminated group pattern");
            if (peek() == '}') {
                ++pos_;
                return;
            }
            if (peek() == '{') throw UnsupportedFeatureError("nested group / subquery");
            if (peek_keyword("FILTER")) {
                take_word();
                parse_filter();
                try_char('.');
                continue;
            }
            check_unsupported_word();
            parse_triples_same_subject();
            if (!try_char('.')) {
                skip_ws();
                // FILTER (and friends) may follow a triples block undotted
                if (!eof() && peek() == '}') continue;
                if (peek_keyword("FILTER")) continue;
                check_unsupported_word();
                fail("expected '.' or '}'");
            }
        }
    }

    void parse_triples_same_subject() {
        skip_ws();
        if (eof()) fail("expected subject");
        PatternTerm subject;
        if (peek() == '[') {
            subject = parse_bracket();
            // property list after a bracket subject is optional
            skip_ws();
            if (!eof() && (peek() == '.' || peek() == '}')) return;
        } else {
            subject = parse_term_in_pattern(/*predicate_position=*/false);
            if (const Term* t = std::get_if<Term>(&subject); t && is_literal(*t))
                fail("literal subject");
        }
        parse_property_list(subject);
    }

    void parse_property_list(const PatternTerm& subject) {
        for (;;) {
            PatternTerm verb = parse_verb();
            for (;;) {
                PatternTerm object = peek_bracket() ? PatternTerm{parse_bracket()}
                                                    : parse_term_in_pattern(false);
                q_.patterns.push_back(TriplePattern{subject, verb, object});
                if (!try_char(',')) break;
            }
            if (!try_char(';')) return;
            // trailing ';' before the statement ends is legal
            skip_ws();
            if (eof() || peek() == '.' || peek() == '}' || peek() == ']') return;
        }
    }

    bool peek_bracket() {
        skip_ws();
        return !eof() && peek() == '[';
    }

    Variable parse_bracket() {
        expect_char('[');
        Variable hidden{"_:b" + std::to_string(++hidden_counter_)};
        skip_ws();
        if (!eof() && peek() == ']') {
            ++pos_;
            return hidden;
        }
        parse_property_list(PatternTerm{hidden});
        expect_char(']');
        return hidden;
    }

    PatternTerm parse_verb() {
        skip_ws();
        if (!eof() && peek() == '^') throw UnsupportedFeatureError("property paths");
        PatternTerm verb;
        auto w = peek_word();
        if (w == "a") {
            pos_ += 1;
            verb = PatternTerm{Term{vocab::rdf_type()}};
        } else {
            verb = parse_term_in_pattern(true);
        }
        if (const Term* t = std::get_if<Term>(&verb)) {
            if (!is_iri(*t)) fail("predicate must be an IRI or variable");
        }
        skip_ws();
        if (!eof() && (peek() == '/' || peek() == '|'))
            throw UnsupportedFeatureError("property paths");
        return verb;
    }

    Variable scan_variable() {
        ++pos_;  // ? or $
        std::size_t start = pos_;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
            ++pos_;
        if (pos_ == start) fail("empty variable name");
        Variable v{std::string(text_.substr(start, pos_ - start))};
        if (seen_var_set_.insert(v.name).second) seen_vars_.push_back(v.name);
        return v;
    }

    Iri scan_iriref() {
        ++pos_;  // '<'
        std::size_t start = pos_;
        while (!eof() && peek() != '>') {
            if (peek() == '\n') fail("unterminated IRI");
            ++pos_;
        }
        if (eof()) fail("unterminated IRI");
        std::string value(text_.substr(start, pos_ - start));
        ++pos_;
        if (!is_valid_iri(value)) fail("invalid IRI <" + value + ">");
        return Iri{std::move(value)};
    }

    std::string scan_pname_prefix() {
        skip_ws();
        std::size_t start = pos_;
        while (!eof()) {
            char c = peek();
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
                c == '.') {
                ++pos_;
            } else {
                break;
            }
        }
        std::string prefix(text_.substr(start, pos_ - start));
        while (!prefix.empty() && prefix.back() == '.') {
            prefix.pop_back();
            --pos_;
        }
        return prefix;
    }

    Iri scan_pname() {
        std::string prefix = scan_pname_prefix();
        if (eof() || peek() != ':') fail("expected ':' in prefixed name");
        ++pos_;
        std::size_t start = pos_;
        while (!eof()) {
            char c = peek();
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
                c == '.') {
                ++pos_;
            } else {
                break;
            }
        }
        std::string local(text_.substr(start, pos_ - start));
        while (!local.empty() && local.back() == '.') {
            local.pop_back();
            --pos_;
        }
        return prefixes_.expand(prefix + ":" + local);
    }

    Literal scan_string_literal() {
        char quote = peek();
        ++pos_;
        if (pos_ + 1 < text_.size() && text_[pos_] == quote && text_[pos_ + 1] == quote)
            throw UnsupportedFeatureError("long string literals");
        std::string lexical;
        for (;;) {
            if (eof()) fail("unterminated string literal");
            char c = peek();
            if (c == quote) {
                ++pos_;
                break;
            }
            if (c == '\n') fail("raw newline in string literal");
            if (c == '\\') {
                ++pos_;
                if (eof()) fail("dangling escape");
                char e = peek();
                ++pos_;
                switch (e) {
                    case 't': lexical.push_back('\t'); break;
                    case 'b': lexical.push_back('\b'); break;
                    case 'n': lexical.push_back('\n'); break;
                    case 'r': lexical.push_back('\r'); break;
                    case 'f': lexical.push_back('\f'); break;
                    case '"': lexical.push_back('"'); break;
                    case '\'': lexical.push_back('\''); break;
                    case '\\': lexical.push_back('\\'); break;
                    default: fail("unknown escape in string literal");
                }
                continue;
            }
            lexical.push_back(c);
            ++pos_;
        }
        skip_ws_for_literal_suffix();
        if (!eof() && peek() == '@') {
            ++pos_;
            std::size_t start = pos_;
            while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-'))
                ++pos_;
            std::string tag = upper(text_.substr(start, pos_ - start));
            std::transform(tag.begin(), tag.end(), tag.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            if (!is_valid_language_tag(tag)) fail("malformed language tag");
            return lang_literal(std::move(lexical), std::move(tag));
        }
        if (pos_ + 1 < text_.size() && text_[pos_] == '^' && text_[pos_ + 1] == '^') {
            pos_ += 2;
            skip_ws();
            Iri datatype;
            if (!eof() && peek() == '<') {
                datatype = scan_iriref();
            } else {
                datatype = scan_pname();
            }
            if (datatype == vocab::rdf_lang_string())
                fail("rdf:langString literal requires a language tag");
            if (datatype == vocab::xsd_string()) return plain_literal(std::move(lexical));
            return typed_literal(std::move(lexical), std::move(datatype));
        }
        return plain_literal(std::move(lexical));
    }

    // the suffix must follow immediately in SPARQL; no skipping
    void skip_ws_for_literal_suffix() {}

    Literal scan_number() {
        std::size_t start = pos_;
        if (peek() == '+' || peek() == '-') ++pos_;
        bool digits = false;
        while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
            ++pos_;
            digits = true;
        }
        bool decimal = false;
        if (!eof() && peek() == '.' && pos_ + 1 < text_.size() &&
            std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
            ++pos_;
            decimal = true;
            while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        }
        bool exponent = false;
        if (digits && !eof() && (peek() == 'e' || peek() == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (!eof() && (peek() == '+' || peek() == '-')) ++pos_;
            if (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
                exponent = true;
                while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
            } else {
                pos_ = mark;
            }
        }
        if (!digits) fail("malformed numeric literal");
        std::string lexical(text_.substr(start, pos_ - start));
        const Iri& dt = exponent ? vocab::xsd_double()
                                 : decimal ? vocab::xsd_decimal() : vocab::xsd_integer();
        return typed_literal(std::move(lexical), dt);
    }

    PatternTerm parse_term_in_pattern(bool predicate_position) {
        skip_ws();
        if (eof()) fail("expected term");
        char c = peek();
        if (c == '?' || c == '$') return PatternTerm{scan_variable()};
        if (c == '<') return PatternTerm{Term{scan_iriref()}};
        if (c == '"' || c == '\'') {
            if (predicate_position) fail("literal predicate");
            return PatternTerm{Term{scan_string_literal()}};
        }
        if (c == '_') {
            if (pos_ + 1 < text_.size() && text_[pos_ + 1] == ':') {
                pos_ += 2;
                std::size_t start = pos_;
                while (!eof() &&
                       (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
                    ++pos_;
                if (pos_ == start) fail("empty blank node label");
                // query-scoped blank nodes behave as non-projected variables
                return PatternTerm{
                    Variable{"_:" + std::string(text_.substr(start, pos_ - start))}};
            }
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-') {
            if (predicate_position) fail("numeric predicate");
            return PatternTerm{Term{scan_number()}};
        }
        auto w = peek_word();
        if (!w.empty()) {
            std::string u = upper(w);
            if (u == "TRUE" || u == "FALSE") {
                pos_ += w.size();
                Literal b = typed_literal(u == "TRUE" ? "true" : "false", vocab::xsd_boolean());
                return PatternTerm{Term{std::move(b)}};
            }
            if (unsupported_keywords().contains(u)) throw UnsupportedFeatureError(u);
        }
        // prefixed name (possibly with an empty prefix)
        if (std::isalnum(static_cast<unsigned char>(c)) || c == ':' || c == '_')
            return PatternTerm{Term{scan_pname()}};
        fail(std::string("unexpected character '") + c + "'");
    }

    void parse_filter() {
        expect_char('(');
        FilterExpr f;
        f.lhs = parse_filter_operand();
        f.op = parse_compare_op();
        f.rhs = parse_filter_operand();
        skip_ws();
        if (!eof() && (text_.compare(pos_, 2, "&&") == 0 || text_.compare(pos_, 2, "||") == 0))
            throw UnsupportedFeatureError("FILTER boolean connectives");
        expect_char(')');
        q_.filters.push_back(std::move(f));
    }

    std::variant<Term, Variable> parse_filter_operand() {
        PatternTerm t = parse_term_in_pattern(false);
        if (Variable* v = std::get_if<Variable>(&t)) return std::move(*v);
        return std::get<Term>(std::move(t));
    }

    CompareOp parse_compare_op() {
        skip_ws();
        auto two = text_.substr(pos_, 2);
        if (two == ">=") { pos_ += 2; return CompareOp::Ge; }
        if (two == "<=") { pos_ += 2; return CompareOp::Le; }
        if (two == "!=") { pos_ += 2; return CompareOp::Ne; }
        if (!eof()) {
            char c = peek();
            if (c == '=') { ++pos_; return CompareOp::Eq; }
            if (c == '>') { ++pos_; return CompareOp::Gt; }
            if (c == '<') { ++pos_; return CompareOp::Lt; }
        }
        fail("expected comparison operator");
    }

    void parse_modifiers() {
        for (;;) {
            if (peek_keyword("ORDER")) {
                take_word();
                expect_keyword("BY");
                bool any = false;
                for (;;) {
                    skip_ws();
                    if (!eof() && (peek() == '?' || peek() == '$')) {
                        q_.order.push_back(OrderKey{scan_variable(), true});
                        any = true;
                        continue;
                    }
                    if (peek_keyword("ASC") || peek_keyword("DESC")) {
                        bool asc = upper(peek_word()) == "ASC";
                        take_word();
                        expect_char('(');
                        skip_ws();
                        if (eof() || (peek() != '?' && peek() != '$'))
                            fail("expected variable in order condition");
                        q_.order.push_back(OrderKey{scan_variable(), asc});
                        expect_char(')');
                        any = true;
                        continue;
                    }
                    break;
                }
                if (!any) fail("ORDER BY needs at least one key");
                continue;
            }
            check_unsupported_word();
            return;
        }
    }
};

}  // namespace

Query parse_query(std::string_view text, const PrefixTable& prefixes) {
    return Parser(text, prefixes).parse();
}

// ----------------------------------------------------- comparison semantics

namespace {

bool numeric_datatype(const Iri& dt) {
    return dt == vocab::xsd_integer() || dt == vocab::xsd_decimal() ||
           dt == vocab::xsd_double() || dt == vocab::xsd_float();
}

bool numeric_lexical(const std::string& s) {
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t digits = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
    if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
    }
    if (digits == 0) return false;
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
        std::size_t exp_digits = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++exp_digits;
        if (exp_digits == 0) return false;
    }
    return i == s.size();
}

std::weak_ordering from_strong(std::strong_ordering o) {
    if (o == std::strong_ordering::less) return std::weak_ordering::less;
    if (o == std::strong_ordering::greater) return std::weak_ordering::greater;
    return std::weak_ordering::equivalent;
}

std::weak_ordering cmp_double(double a, double b) {
    if (a < b) return std::weak_ordering::less;
    if (a > b) return std::weak_ordering::greater;
    return std::weak_ordering::equivalent;
}

// (datatype, lexical, language) codepoint order for non-numeric non-date
std::weak_ordering cmp_literal_tuple(const Literal& a, const Literal& b) {
    if (auto c = from_strong(a.datatype.value <=> b.datatype.value); c != 0) return c;
    if (auto c = from_strong(a.lexical <=> b.lexical); c != 0) return c;
    return from_strong(a.language <=> b.language);
}

enum class LiteralBand { Numeric, Date, Other };

LiteralBand band_of(const Literal& l) {
    if (numeric_value(l)) return LiteralBand::Numeric;
    if (date_value(l)) return LiteralBand::Date;
    return LiteralBand::Other;
}

bool apply_op(CompareOp op, std::weak_ordering c) {
    switch (op) {
        case CompareOp::Eq: return c == 0;
        case CompareOp::Ne: return c != 0;
        case CompareOp::Lt: return c < 0;
        case CompareOp::Le: return c <= 0;
        case CompareOp::Gt: return c > 0;
        case CompareOp::Ge: return c >= 0;
    }
    return false;
}

}  // namespace

std::optional<double> numeric_value(const Literal& literal) {
    if (!numeric_datatype(literal.datatype) || !numeric_lexical(literal.lexical))
        return std::nullopt;
    return std::strtod(literal.lexical.c_str(), nullptr);
}

std::optional<std::array<int, 3>> date_value(const Literal& literal) {
    if (literal.datatype != vocab::xsd_date()) return std::nullopt;
    const std::string& s = literal.lexical;
    std::size_t i = 0;
    bool negative = false;
    if (i < s.size() && s[i] == '-') {
        negative = true;
        ++i;
    }
    auto read_int = [&](std::size_t min_digits, int& out) {
        std::size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i - start < min_digits) return false;
        out = std::atoi(s.substr(start, i - start).c_str());
        return true;
    };
    int y = 0, m = 0, d = 0;
    if (!read_int(4, y)) return std::nullopt;
    if (i >= s.size() || s[i] != '-') return std::nullopt;
    ++i;
    if (!read_int(2, m)) return std::nullopt;
    if (i >= s.size() || s[i] != '-') return std::nullopt;
    ++i;
    if (!read_int(2, d)) return std::nullopt;
    if (i != s.size()) return std::nullopt;
    if (m < 1 || m > 12 || d < 1 || d > 31) return std::nullopt;
    return std::array<int, 3>{negative ? -y : y, m, d};
}

std::optional<bool> eval_compare(const Term& lhs, CompareOp op, const Term& rhs) {
    bool order_op = op != CompareOp::Eq && op != CompareOp::Ne;

    if (is_literal(lhs) && is_literal(rhs)) {
        const Literal& a = std::get<Literal>(lhs);
        const Literal& b = std::get<Literal>(rhs);
        auto na = numeric_value(a);
        auto nb = numeric_value(b);
        if (na && nb) return apply_op(op, cmp_double(*na, *nb));
        auto da = date_value(a);
        auto db = date_value(b);
        if (da && db) return apply_op(op, from_strong(*da <=> *db));
        if (!order_op) return apply_op(op, a == b ? std::weak_ordering::equivalent
                                                  : std::weak_ordering::less);
        // an order comparison mixing value-typed and plain literals is a
        // type error, not a lexical comparison
        if (na || nb || da || db) return std::nullopt;
        return apply_op(op, cmp_literal_tuple(a, b));
    }

    if (!order_op) {
        return apply_op(op, lhs == rhs ? std::weak_ordering::equivalent
                                       : std::weak_ordering::less);
    }
    if (is_iri(lhs) && is_iri(rhs)) {
        return apply_op(op,
                        from_strong(std::get<Iri>(lhs).value <=> std::get<Iri>(rhs).value));
    }
    return std::nullopt;  // blanks or mixed kinds are unorderable
}

std::weak_ordering order_compare(const std::optional<Term>& a, const std::optional<Term>& b) {
    if (!a || !b) {
        if (!a && !b) return std::weak_ordering::equivalent;
        return !a ? std::weak_ordering::less : std::weak_ordering::greater;
    }
    auto rank = [](const Term& t) { return is_blank(t) ? 0 : is_iri(t) ? 1 : 2; };
    if (rank(*a) != rank(*b))
        return rank(*a) < rank(*b) ? std::weak_ordering::less : std::weak_ordering::greater;
    if (is_blank(*a))
        return from_strong(std::get<BlankNode>(*a).label <=> std::get<BlankNode>(*b).label);
    if (is_iri(*a)) return from_strong(std::get<Iri>(*a).value <=> std::get<Iri>(*b).value);

    const Literal& la = std::get<Literal>(*a);
    const Literal& lb = std::get<Literal>(*b);
    LiteralBand ba = band_of(la);
    LiteralBand bb = band_of(lb);
    if (ba != bb)
        return static_cast<int>(ba) < static_cast<int>(bb) ? std::weak_ordering::less
                                                           : std::weak_ordering::greater;
    switch (ba) {
        case LiteralBand::Numeric: return cmp_double(*numeric_value(la), *numeric_value(lb));
        case LiteralBand::Date: return from_strong(*date_value(la) <=> *date_value(lb));
        case LiteralBand::Other: return cmp_literal_tuple(la, lb);
    }
    return std::weak_ordering::equivalent;
}

// --------------------------------------------------------------- evaluation

namespace {

constexpr TermId kUnbound = kWildcardId;

struct VarTable {
    std::vector<std::string> names;
    std::map<std::string, std::size_t> index;

    std::size_t intern(const std::string& name) {
        auto [it, fresh] = index.try_emplace(name, names.size());
        if (fresh) names.push_back(name);
        return it->second;
    }
};

struct Slot {
    bool is_var = false;
    std::size_t var = 0;
    TermId constant = kUnbound;
    bool known = true;  // false: constant absent from the dictionary
};

struct CompiledPattern {
    Slot subject, predicate, object;
    bool known = true;
};

Slot compile_slot(const PatternTerm& pt, VarTable& vars, const QuadStore::Snapshot& snap) {
    Slot s;
    if (const Variable* v = std::get_if<Variable>(&pt)) {
        s.is_var = true;
        s.var = vars.intern(v->name);
    } else {
        auto id = snap.find_term(std::get<Term>(pt));
        if (id) {
            s.constant = *id;
        } else {
            s.known = false;
        }
    }
    return s;
}

struct Plan {
    std::vector<std::size_t> order;
    std::vector<std::uint64_t> estimates;   // by pattern index
    std::vector<IndexKind> indexes;         // by plan position
};

IdPattern base_pattern(const CompiledPattern& cp, std::optional<GraphId> gid) {
    IdPattern ip;
    if (gid) ip.graph = *gid;
    if (!cp.subject.is_var) ip.subject = cp.subject.constant;
    if (!cp.predicate.is_var) ip.predicate = cp.predicate.constant;
    if (!cp.object.is_var) ip.object = cp.object.constant;
    return ip;
}

Plan build_plan(const QuadStore::Snapshot& snap, const std::vector<CompiledPattern>& compiled,
                const std::vector<GraphId>& scope, bool scoped) {
    Plan plan;
    std::size_t n = compiled.size();
    plan.estimates.resize(n, 0);
    std::optional<GraphId> single_gid;
    if (scoped && scope.size() == 1) single_gid = scope[0];

    for (std::size_t i = 0; i < n; ++i) {
        if (!compiled[i].known) {
            plan.estimates[i] = 0;
            continue;
        }
        plan.estimates[i] = snap.estimate(base_pattern(compiled[i], single_gid));
    }

    std::vector<bool> taken(n, false);
    std::set<std::size_t> bound_vars;
    auto shares_var = [&](const CompiledPattern& cp) {
        for (const Slot* s : {&cp.subject, &cp.predicate, &cp.object}) {
            if (s->is_var && bound_vars.contains(s->var)) return true;
        }
        return false;
    };

    for (std::size_t step = 0; step < n; ++step) {
        std::size_t best = n;
        bool best_connected = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (taken[i]) continue;
            bool connected = step > 0 && shares_var(compiled[i]);
            if (best == n || (connected && !best_connected) ||
                (connected == best_connected && plan.estimates[i] < plan.estimates[best])) {
                best = i;
                best_connected = connected;
            }
        }
        taken[best] = true;
        plan.order.push_back(best);
        for (const Slot* s :
             {&compiled[best].subject, &compiled[best].predicate, &compiled[best].object}) {
            if (s->is_var) bound_vars.insert(s->var);
        }
    }
    return plan;
}

using Row = std::vector<TermId>;

bool bind_slot(const Slot& slot, TermId value, Row& row) {
    if (!slot.is_var) return true;  // constant already satisfied by the match
    TermId& cell = row[slot.var];
    if (cell == kUnbound) {
        cell = value;
        return true;
    }
    return cell == value;
}

}  // namespace

ResultTable evaluate(const QuadStore::Snapshot& snap, const Query& query,
                     const std::vector<NamedGraphId>* scope) {
    VarTable vars;
    std::vector<CompiledPattern> compiled;
    compiled.reserve(query.patterns.size());
    for (const TriplePattern& p : query.patterns) {
        CompiledPattern cp;
        cp.subject = compile_slot(p.subject, vars, snap);
        cp.predicate = compile_slot(p.predicate, vars, snap);
        cp.object = compile_slot(p.object, vars, snap);
        cp.known = cp.subject.known && cp.predicate.known && cp.object.known;
        compiled.push_back(cp);
    }
    // filter/order variables may not occur in any pattern; they stay unbound
    for (const FilterExpr& f : query.filters) {
        if (const Variable* v = std::get_if<Variable>(&f.lhs)) vars.intern(v->name);
        if (const Variable* v = std::get_if<Variable>(&f.rhs)) vars.intern(v->name);
    }
    for (const OrderKey& k : query.order) vars.intern(k.var.name);

    std::vector<GraphId> scope_gids;
    bool scoped = scope != nullptr;
    if (scoped) {
        for (const NamedGraphId& g : *scope) {
            if (auto gid = snap.find_graph(g.name)) scope_gids.push_back(*gid);
        }
    }

    Plan plan = build_plan(snap, compiled, scope_gids, scoped);

    std::vector<Row> rows{Row(vars.names.size(), kUnbound)};
    for (std::size_t pos = 0; pos < plan.order.size() && !rows.empty(); ++pos) {
        const CompiledPattern& cp = compiled[plan.order[pos]];
        if (!cp.known || (scoped && scope_gids.empty())) {
            rows.clear();
            break;
        }
        std::vector<Row> next;
        for (const Row& row : rows) {
            IdPattern ip = base_pattern(cp, std::nullopt);
            if (cp.subject.is_var && row[cp.subject.var] != kUnbound)
                ip.subject = row[cp.subject.var];
            if (cp.predicate.is_var && row[cp.predicate.var] != kUnbound)
                ip.predicate = row[cp.predicate.var];
            if (cp.object.is_var && row[cp.object.var] != kUnbound)
                ip.object = row[cp.object.var];

            auto emit = [&](const IdQuad& q) {
                Row extended = row;
                if (bind_slot(cp.subject, q.subject, extended) &&
                    bind_slot(cp.predicate, q.predicate, extended) &&
                    bind_slot(cp.object, q.object, extended)) {
                    next.push_back(std::move(extended));
                }
            };
            if (scoped) {
                for (GraphId gid : scope_gids) {
                    ip.graph = gid;
                    for (const IdQuad& q : snap.match(ip)) emit(q);
                }
            } else {
                for (const IdQuad& q : snap.match(ip)) emit(q);
            }
        }
        rows = std::move(next);
    }

    // FILTER with SPARQL error-as-false semantics
    if (!query.filters.empty()) {
        std::vector<Row> kept;
        for (Row& row : rows) {
            bool ok = true;
            for (const FilterExpr& f : query.filters) {
                auto resolve = [&](const std::variant<Term, Variable>& operand)
                    -> std::optional<Term> {
                    if (const Term* t = std::get_if<Term>(&operand)) return *t;
                    TermId id = row[vars.index.at(std::get<Variable>(operand).name)];
                    if (id == kUnbound) return std::nullopt;
                    return snap.term(id);
                };
                auto lhs = resolve(f.lhs);
                auto rhs = resolve(f.rhs);
                std::optional<bool> verdict;
                if (lhs && rhs) verdict = eval_compare(*lhs, f.op, *rhs);
                if (!verdict.has_value() || !*verdict) {
                    ok = false;
                    break;
                }
            }
            if (ok) kept.push_back(std::move(row));
        }
        rows = std::move(kept);
    }

    auto decode = [&](TermId id) -> std::optional<Term> {
        if (id == kUnbound) return std::nullopt;
        return snap.term(id);
    };

    // keep the order-key cells next to the projected row, then sort by the
    // requested keys with the visible row as the deterministic tie-break
    std::vector<std::size_t> key_vars;
    for (const OrderKey& k : query.order) key_vars.push_back(vars.index.at(k.var.name));
    struct OutRow {
        Row keys;
        Row projected;
    };
    std::vector<OutRow> out_rows;
    out_rows.reserve(rows.size());
    for (const Row& row : rows) {
        OutRow o;
        o.keys.reserve(key_vars.size());
        for (std::size_t v : key_vars) o.keys.push_back(row[v]);
        o.projected.reserve(query.projected.size());
        for (const std::string& name : query.projected) {
            auto it = vars.index.find(name);
            o.projected.push_back(it == vars.index.end() ? kUnbound : row[it->second]);
        }
        out_rows.push_back(std::move(o));
    }
    auto row_less = [&](const OutRow& a, const OutRow& b) {
        for (std::size_t i = 0; i < key_vars.size(); ++i) {
            auto c = order_compare(decode(a.keys[i]), decode(b.keys[i]));
            if (c != 0) return query.order[i].ascending ? c < 0 : c > 0;
        }
        for (std::size_t i = 0; i < a.projected.size(); ++i) {
            auto c = order_compare(decode(a.projected[i]), decode(b.projected[i]));
            if (c != 0) return c < 0;
        }
        return false;
    };
    std::sort(out_rows.begin(), out_rows.end(), row_less);

    ResultTable table;
    table.vars = query.projected;
    std::set<Row> seen;
    for (const OutRow& o : out_rows) {
        if (query.distinct && !seen.insert(o.projected).second) continue;
        std::vector<std::optional<Term>> cells;
        cells.reserve(o.projected.size());
        for (TermId id : o.projected) cells.push_back(decode(id));
        table.rows.push_back(std::move(cells));
    }
    return table;
}

ResultTable evaluate(const QuadStore& store, const Query& query,
                     const std::vector<NamedGraphId>* scope) {
    auto snap = store.snapshot();
    return evaluate(snap, query, scope);
}

// ------------------------------------------------------------------ explain

namespace {

std::string render_pattern_term(const PatternTerm& pt, const PrefixTable& prefixes) {
    if (const Variable* v = std::get_if<Variable>(&pt)) {
        if (v->name.starts_with("_:")) return v->name;
        return "?" + v->name;
    }
    const Term& t = std::get<Term>(pt);
    if (const Iri* iri = std::get_if<Iri>(&t)) return prefixes.compact(*iri);
    return ntriples::term_string(t);
}

}  // namespace

QueryPlan explain(const QuadStore::Snapshot& snap, const Query& query,
                  const PrefixTable& prefixes, const std::vector<NamedGraphId>* scope) {
    VarTable vars;
    std::vector<CompiledPattern> compiled;
    for (const TriplePattern& p : query.patterns) {
        CompiledPattern cp;
        cp.subject = compile_slot(p.subject, vars, snap);
        cp.predicate = compile_slot(p.predicate, vars, snap);
        cp.object = compile_slot(p.object, vars, snap);
        cp.known = cp.subject.known && cp.predicate.known && cp.object.known;
        compiled.push_back(cp);
    }
    std::vector<GraphId> scope_gids;
    bool scoped = scope != nullptr;
    if (scoped) {
        for (const NamedGraphId& g : *scope) {
            if (auto gid = snap.find_graph(g.name)) scope_gids.push_back(*gid);
        }
    }
    Plan plan = build_plan(snap, compiled, scope_gids, scoped);

    QueryPlan out;
    std::set<std::size_t> bound;
    std::optional<GraphId> single_gid;
    if (scoped && scope_gids.size() == 1) single_gid = scope_gids[0];
    for (std::size_t pos = 0; pos < plan.order.size(); ++pos) {
        std::size_t i = plan.order[pos];
        const CompiledPattern& cp = compiled[i];
        IdPattern effective = base_pattern(cp, single_gid);
        // a variable bound by an earlier step behaves like a constant here;
        // any in-dictionary id stands in for the bound shape
        auto mark = [&](const Slot& s, TermId& slot_value) {
            if (s.is_var && bound.contains(s.var)) slot_value = 0;
        };
        mark(cp.subject, effective.subject);
        mark(cp.predicate, effective.predicate);
        mark(cp.object, effective.object);

        PlanStep step;
        step.pattern_index = i;
        step.estimate = plan.estimates[i];
        step.index = snap.index_for(effective);
        const TriplePattern& p = query.patterns[i];
        step.pattern = render_pattern_term(p.subject, prefixes) + " " +
                       render_pattern_term(p.predicate, prefixes) + " " +
                       render_pattern_term(p.object, prefixes);
        out.steps.push_back(std::move(step));

        for (const Slot* s : {&cp.subject, &cp.predicate, &cp.object}) {
            if (s->is_var) bound.insert(s->var);
        }
    }
    return out;
}

std::string to_string(const QueryPlan& plan) {
    std::string out;
    for (std::size_t i = 0; i < plan.steps.size(); ++i) {
        const PlanStep& s = plan.steps[i];
        out += std::to_string(i + 1) + ". " + s.pattern + "  [index=" +
               std::string(index_name(s.index)) + " est=" + std::to_string(s.estimate) + "]\n";
    }
    return out;
}

// ------------------------------------------------------------------ output

std::string to_tsv(const ResultTable& table) {
    std::string out;
    for (std::size_t i = 0; i < table.vars.size(); ++i) {
        if (i) out.push_back('\t');
        out.push_back('?');
        out += table.vars[i];
    }
    out.push_back('\n');
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out.push_back('\t');
            if (row[i]) out += ntriples::term_string(*row[i]);
        }
        out.push_back('\n');
    }
    return out;
}

namespace {

void json_escape(const std::string& s, std::string& out) {
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default: {
                unsigned char uc = static_cast<unsigned char>(c);
                if (uc < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04X", uc);
                    out += buf;
                } else {
                    out.push_back(c);
                }
            }
        }
    }
}

}  // namespace

std::string to_json(const ResultTable& table) {
    std::string out = "{\"vars\":[";
    for (std::size_t i = 0; i < table.vars.size(); ++i) {
        if (i) out.push_back(',');
        out.push_back('"');
        json_escape(table.vars[i], out);
        out.push_back('"');
    }
    out += "],\"rows\":[";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        if (r) out.push_back(',');
        out.push_back('[');
        const auto& row = table.rows[r];
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out.push_back(',');
            if (row[i]) {
                out.push_back('"');
                json_escape(ntriples::term_string(*row[i]), out);
                out.push_back('"');
            } else {
                out += "null";
            }
        }
        out.push_back(']');
    }
    out += "]}";
    return out;
}

}  // namespace oekg
