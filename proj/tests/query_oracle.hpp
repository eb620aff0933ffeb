#pragma once
// Independent reference implementation of the query semantics: nested-loop
// join over all quads in pattern order as written, post-hoc filter,
// projection, ORDER BY with the visible-row tie-break, DISTINCT by first
// occurrence. Deliberately shares no code with the engine's evaluator.

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "oekg/ntriples.hpp"
#include "oekg/query.hpp"
#include "oekg/rdf.hpp"

namespace oekg::testoracle {

using Binding = std::map<std::string, Term>;

inline bool try_bind(const PatternTerm& pt, const Term& value, Binding& b) {
    if (const Term* c = std::get_if<Term>(&pt)) return *c == value;
    const std::string& name = std::get<Variable>(pt).name;
    auto it = b.find(name);
    if (it == b.end()) {
        b.emplace(name, value);
        return true;
    }
    return it->second == value;
}

inline bool numeric_dt(const Iri& dt) {
    return dt.value == "http://www.w3.org/2001/XMLSchema#integer" ||
           dt.value == "http://www.w3.org/2001/XMLSchema#decimal" ||
           dt.value == "http://www.w3.org/2001/XMLSchema#double" ||
           dt.value == "http://www.w3.org/2001/XMLSchema#float";
}

inline std::optional<double> num_of(const Term& t) {
    const Literal* l = std::get_if<Literal>(&t);
    if (!l || !numeric_dt(l->datatype)) return std::nullopt;
    const std::string& s = l->lexical;
    if (s.empty()) return std::nullopt;
    std::size_t i = 0;
    if (s[i] == '+' || s[i] == '-') ++i;
    int digits = 0;
    while (i < s.size() && isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
    if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
    }
    if (!digits) return std::nullopt;
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
        int e = 0;
        while (i < s.size() && isdigit(static_cast<unsigned char>(s[i]))) ++i, ++e;
        if (!e) return std::nullopt;
    }
    if (i != s.size()) return std::nullopt;
    return std::stod(s);
}

inline std::optional<std::array<int, 3>> date_of(const Term& t) {
    const Literal* l = std::get_if<Literal>(&t);
    if (!l || l->datatype.value != "http://www.w3.org/2001/XMLSchema#date") return std::nullopt;
    int y, m, d;
    char tail;
    int got = std::sscanf(l->lexical.c_str(), "%d-%2d-%2d%c", &y, &m, &d, &tail);
    if (got != 3) return std::nullopt;
    if (l->lexical.size() < 10) return std::nullopt;
    if (m < 1 || m > 12 || d < 1 || d > 31) return std::nullopt;
    return std::array<int, 3>{y, m, d};
}

// -1 / 0 / +1, or nullopt when the pair is unorderable
inline std::optional<int> order_cmp_terms(const Term& a, const Term& b) {
    auto na = num_of(a);
    auto nb = num_of(b);
    if (na && nb) return *na < *nb ? -1 : *na > *nb ? 1 : 0;
    auto da = date_of(a);
    auto db = date_of(b);
    if (da && db) return *da < *db ? -1 : *da > *db ? 1 : 0;
    if (na || nb || da || db) return std::nullopt;  // value-typed vs plain
    if (is_iri(a) && is_iri(b)) {
        const auto& x = std::get<Iri>(a).value;
        const auto& y = std::get<Iri>(b).value;
        return x < y ? -1 : x > y ? 1 : 0;
    }
    if (is_literal(a) && is_literal(b)) {
        const Literal& x = std::get<Literal>(a);
        const Literal& y = std::get<Literal>(b);
        auto tx = std::tie(x.datatype.value, x.lexical, x.language);
        auto ty = std::tie(y.datatype.value, y.lexical, y.language);
        return tx < ty ? -1 : ty < tx ? 1 : 0;
    }
    return std::nullopt;
}

inline std::optional<bool> filter_verdict(const Term& a, CompareOp op, const Term& b) {
    if (op == CompareOp::Eq || op == CompareOp::Ne) {
        auto na = num_of(a);
        auto nb = num_of(b);
        bool eq = (na && nb) ? *na == *nb : a == b;
        return op == CompareOp::Eq ? eq : !eq;
    }
    auto c = order_cmp_terms(a, b);
    if (!c) return std::nullopt;
    switch (op) {
        case CompareOp::Lt: return *c < 0;
        case CompareOp::Le: return *c <= 0;
        case CompareOp::Gt: return *c > 0;
        case CompareOp::Ge: return *c >= 0;
        default: return std::nullopt;
    }
}

// total order over optional terms: unbound < blank < iri < literal, with
// numeric / date / other bands inside literals
inline int full_order_cmp(const std::optional<Term>& a, const std::optional<Term>& b) {
    if (!a || !b) return !a && !b ? 0 : (!a ? -1 : 1);
    auto kind = [](const Term& t) { return is_blank(t) ? 0 : is_iri(t) ? 1 : 2; };
    if (kind(*a) != kind(*b)) return kind(*a) < kind(*b) ? -1 : 1;
    if (is_blank(*a)) {
        const auto& x = std::get<BlankNode>(*a).label;
        const auto& y = std::get<BlankNode>(*b).label;
        return x < y ? -1 : x > y ? 1 : 0;
    }
    if (is_iri(*a)) {
        const auto& x = std::get<Iri>(*a).value;
        const auto& y = std::get<Iri>(*b).value;
        return x < y ? -1 : x > y ? 1 : 0;
    }
    auto band = [](const Term& t) { return num_of(t) ? 0 : date_of(t) ? 1 : 2; };
    if (band(*a) != band(*b)) return band(*a) < band(*b) ? -1 : 1;
    if (auto c = order_cmp_terms(*a, *b)) return *c;
    return 0;
}

inline std::vector<std::vector<std::optional<Term>>> run(const Query& q,
                                                         const std::vector<Quad>& quads) {
    std::vector<Binding> rows{Binding{}};
    for (const TriplePattern& p : q.patterns) {
        std::vector<Binding> next;
        for (const Binding& row : rows) {
            for (const Quad& quad : quads) {
                Binding nb = row;
                if (try_bind(p.subject, quad.triple.subject, nb) &&
                    try_bind(p.predicate, Term{quad.triple.predicate}, nb) &&
                    try_bind(p.object, quad.triple.object, nb)) {
                    next.push_back(std::move(nb));
                }
            }
        }
        rows = std::move(next);
    }

    std::vector<Binding> kept;
    for (const Binding& row : rows) {
        bool ok = true;
        for (const FilterExpr& f : q.filters) {
            auto value = [&](const std::variant<Term, Variable>& v) -> std::optional<Term> {
                if (const Term* t = std::get_if<Term>(&v)) return *t;
                auto it = row.find(std::get<Variable>(v).name);
                if (it == row.end()) return std::nullopt;
                return it->second;
            };
            auto lhs = value(f.lhs);
            auto rhs = value(f.rhs);
            std::optional<bool> verdict;
            if (lhs && rhs) verdict = filter_verdict(*lhs, f.op, *rhs);
            if (!verdict || !*verdict) {
                ok = false;
                break;
            }
        }
        if (ok) kept.push_back(row);
    }

    struct ORow {
        std::vector<std::optional<Term>> keys;
        std::vector<std::optional<Term>> projected;
    };
    std::vector<ORow> out;
    for (const Binding& row : kept) {
        ORow o;
        auto cell = [&](const std::string& name) -> std::optional<Term> {
            auto it = row.find(name);
            if (it == row.end()) return std::nullopt;
            return it->second;
        };
        for (const OrderKey& k : q.order) o.keys.push_back(cell(k.var.name));
        for (const std::string& v : q.projected) o.projected.push_back(cell(v));
        out.push_back(std::move(o));
    }
    std::sort(out.begin(), out.end(), [&](const ORow& a, const ORow& b) {
        for (std::size_t i = 0; i < a.keys.size(); ++i) {
            int c = full_order_cmp(a.keys[i], b.keys[i]);
            if (c != 0) return q.order[i].ascending ? c < 0 : c > 0;
        }
        for (std::size_t i = 0; i < a.projected.size(); ++i) {
            int c = full_order_cmp(a.projected[i], b.projected[i]);
            if (c != 0) return c < 0;
        }
        return false;
    });

    std::vector<std::vector<std::optional<Term>>> result;
    std::set<std::string> seen;
    for (const ORow& o : out) {
        if (q.distinct) {
            std::string key;
            for (const auto& cell : o.projected) {
                key += cell ? ntriples::term_string(*cell) : std::string("∅");
                key.push_back('\x1f');
            }
            if (!seen.insert(key).second) continue;
        }
        result.push_back(o.projected);
    }
    return result;
}

// random store + query instances for the oracle-equivalence suites
class CaseGen {
public:
    explicit CaseGen(std::uint32_t seed) : rng_(seed) {}

    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    Term vocab_iri() { return Term{Iri{"http://v/r" + std::to_string(pick(0, 11))}}; }
    Iri vocab_pred() { return Iri{"http://v/p" + std::to_string(pick(0, 4))}; }

    Term vocab_object() {
        switch (pick(0, 9)) {
            case 0: return Term{integer_literal(pick(0, 9))};
            case 1: return Term{decimal_literal(std::to_string(pick(0, 9)) + "." +
                                                std::to_string(pick(0, 9)))};
            case 2:
                return Term{date_literal("19" + std::to_string(pick(10, 99)) + "-0" +
                                         std::to_string(pick(1, 9)) + "-1" +
                                         std::to_string(pick(0, 9)))};
            case 3: return Term{lang_literal("w" + std::to_string(pick(0, 5)),
                                             pick(0, 1) ? "en" : "ru")};
            case 4: return Term{plain_literal("s" + std::to_string(pick(0, 5)))};
            default: return vocab_iri();
        }
    }

    std::vector<Triple> store_doc(std::size_t n) {
        std::vector<Triple> doc;
        for (std::size_t i = 0; i < n; ++i)
            doc.push_back(Triple{vocab_iri(), vocab_pred(), vocab_object()});
        return doc;
    }

    Query random_query() {
        Query q;
        int npat = pick(1, 4);
        std::vector<std::string> pool{"a", "b", "c", "d"};
        std::set<std::string> used;
        for (int i = 0; i < npat; ++i) {
            auto var_or = [&](int var_chance, auto make_const) -> PatternTerm {
                if (pick(0, 99) < var_chance) {
                    std::string v = pool[static_cast<std::size_t>(pick(0, 3))];
                    used.insert(v);
                    return Variable{v};
                }
                return make_const();
            };
            TriplePattern p{
                var_or(75, [&] { return vocab_iri(); }),
                var_or(20, [&]() -> PatternTerm { return Term{vocab_pred()}; }),
                var_or(55, [&] { return vocab_object(); }),
            };
            // chain onto an already-used variable to keep joins bounded
            if (i > 0 && !used.empty()) {
                std::string v = *std::next(used.begin(), pick(0, static_cast<int>(used.size()) - 1));
                switch (pick(0, 2)) {
                    case 0: p.subject = Variable{v}; break;
                    case 1: p.object = Variable{v}; break;
                    default: break;
                }
            }
            for (const PatternTerm* pt : {&p.subject, &p.predicate, &p.object}) {
                if (const Variable* v = std::get_if<Variable>(pt)) used.insert(v->name);
            }
            q.patterns.push_back(p);
        }

        std::vector<std::string> used_list(used.begin(), used.end());
        if (used_list.empty()) used_list.push_back("a");
        int nproj = pick(1, static_cast<int>(used_list.size()));
        for (int i = 0; i < nproj; ++i)
            q.projected.push_back(used_list[static_cast<std::size_t>(i)]);
        q.distinct = pick(0, 1) == 1;

        if (pick(0, 1)) {
            FilterExpr f;
            f.lhs = Variable{used_list[static_cast<std::size_t>(
                pick(0, static_cast<int>(used_list.size()) - 1))]};
            f.op = static_cast<CompareOp>(pick(0, 5));
            f.rhs = pick(0, 3) == 0
                        ? std::variant<Term, Variable>{Variable{used_list[static_cast<std::size_t>(
                              pick(0, static_cast<int>(used_list.size()) - 1))]}}
                        : std::variant<Term, Variable>{vocab_object()};
            q.filters.push_back(std::move(f));
        }
        if (pick(0, 1)) {
            int nkeys = pick(1, 2);
            for (int i = 0; i < nkeys; ++i) {
                q.order.push_back(OrderKey{Variable{used_list[static_cast<std::size_t>(pick(
                                      0, static_cast<int>(used_list.size()) - 1))]},
                                  pick(0, 1) == 1});
            }
        }
        return q;
    }

private:
    std::mt19937 rng_;
};

}  // namespace oekg::testoracle
