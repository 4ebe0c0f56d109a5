#include "eagerpi/lambda.hpp"

#include <cctype>
#include <unordered_map>

namespace eagerpi::lambda {

Term Term::var(std::string name) {
    return Term(std::make_shared<const Node>(Node{Kind::Var, std::move(name), {}}));
}

Term Term::abs(std::string binder, Term body) {
    return Term(std::make_shared<const Node>(Node{Kind::Abs, std::move(binder), {std::move(body)}}));
}

Term Term::app(Term fun, Term arg) {
    return Term(std::make_shared<const Node>(Node{Kind::App, {}, {std::move(fun), std::move(arg)}}));
}

bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case Term::Kind::Var: return a.name() == b.name();
        case Term::Kind::Abs: return a.name() == b.name() && a.body() == b.body();
        case Term::Kind::App: return a.fun() == b.fun() && a.arg() == b.arg();
    }
    return false;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
public:
    explicit Parser(std::string_view s) : src_(s) {}

    Term parse_all() {
        Term t = term();
        skip_ws();
        if (pos_ != src_.size()) throw ParseError("unexpected '" + std::string(1, src_[pos_]) + "'", pos_);
        return t;
    }

private:
    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    bool at_ident() {
        skip_ws();
        return pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]));
    }
    std::string ident() {
        skip_ws();
        if (!at_ident()) throw ParseError("expected identifier", pos_);
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' || src_[pos_] == '\'')) {
            ++pos_;
        }
        return std::string(src_.substr(start, pos_ - start));
    }
    bool peek(char c) {
        skip_ws();
        return pos_ < src_.size() && src_[pos_] == c;
    }
    void expect(char c) {
        if (!peek(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
        ++pos_;
    }

    Term term() {
        if (peek('\\')) {
            ++pos_;
            std::vector<std::string> binders;
            binders.push_back(ident());
            while (at_ident()) binders.push_back(ident());
            expect('.');
            Term body = term();
            for (auto it = binders.rbegin(); it != binders.rend(); ++it) body = Term::abs(*it, body);
            return body;
        }
        Term t = atom();
        for (;;) {
            if (peek('\\')) {
                // a trailing abstraction extends as far right as possible
                t = Term::app(t, term());
                break;
            }
            if (!at_ident() && !peek('(')) break;
            t = Term::app(t, atom());
        }
        return t;
    }

    Term atom() {
        if (peek('(')) {
            ++pos_;
            Term t = term();
            expect(')');
            return t;
        }
        if (at_ident()) return Term::var(ident());
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
        throw ParseError("unexpected '" + std::string(1, src_[pos_]) + "'", pos_);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

void print(const Term& t, std::string& out);

void print_atom(const Term& t, std::string& out) {
    if (t.is_var()) {
        out += t.name();
    } else {
        out += '(';
        print(t, out);
        out += ')';
    }
}

void print(const Term& t, std::string& out) {
    switch (t.kind()) {
        case Term::Kind::Var: out += t.name(); break;
        case Term::Kind::Abs: {
            out += '\\';
            out += t.name();
            const Term* b = &t.body();
            while (b->is_abs()) {
                out += ' ';
                out += b->name();
                b = &b->body();
            }
            out += '.';
            print(*b, out);
            break;
        }
        case Term::Kind::App: {
            if (t.fun().is_abs()) {
                print_atom(t.fun(), out);
            } else {
                print(t.fun(), out);
            }
            out += ' ';
            print_atom(t.arg(), out);
            break;
        }
    }
}

void collect_free(const Term& t, std::vector<std::string>& bound, std::set<std::string>& out) {
    switch (t.kind()) {
        case Term::Kind::Var:
            for (const auto& b : bound)
                if (b == t.name()) return;
            out.insert(t.name());
            break;
        case Term::Kind::Abs:
            bound.push_back(t.name());
            collect_free(t.body(), bound, out);
            bound.pop_back();
            break;
        case Term::Kind::App:
            collect_free(t.fun(), bound, out);
            collect_free(t.arg(), bound, out);
            break;
    }
}

void collect_all(const Term& t, std::set<std::string>& out) {
    switch (t.kind()) {
        case Term::Kind::Var: out.insert(t.name()); break;
        case Term::Kind::Abs:
            out.insert(t.name());
            collect_all(t.body(), out);
            break;
        case Term::Kind::App:
            collect_all(t.fun(), out);
            collect_all(t.arg(), out);
            break;
    }
}

bool occurs_free(const Term& t, const std::string& x) {
    switch (t.kind()) {
        case Term::Kind::Var: return t.name() == x;
        case Term::Kind::Abs: return t.name() != x && occurs_free(t.body(), x);
        case Term::Kind::App: return occurs_free(t.fun(), x) || occurs_free(t.arg(), x);
    }
    return false;
}

void canon(const Term& t, std::vector<std::string>& bound, std::string& out) {
    switch (t.kind()) {
        case Term::Kind::Var:
            for (std::size_t i = bound.size(); i-- > 0;) {
                if (bound[i] == t.name()) {
                    out += '#';
                    out += std::to_string(bound.size() - 1 - i);
                    return;
                }
            }
            out += t.name();
            break;
        case Term::Kind::Abs:
            out += "\\.";
            bound.push_back(t.name());
            canon(t.body(), bound, out);
            bound.pop_back();
            break;
        case Term::Kind::App:
            out += '(';
            canon(t.fun(), bound, out);
            out += ' ';
            canon(t.arg(), bound, out);
            out += ')';
            break;
    }
}

void canon_free(const Term& t, std::vector<std::string>& bound, std::vector<std::string>& frees, std::string& out) {
    switch (t.kind()) {
        case Term::Kind::Var: {
            for (std::size_t i = bound.size(); i-- > 0;) {
                if (bound[i] == t.name()) {
                    out += '#';
                    out += std::to_string(bound.size() - 1 - i);
                    return;
                }
            }
            std::size_t idx = 0;
            while (idx < frees.size() && frees[idx] != t.name()) ++idx;
            if (idx == frees.size()) frees.push_back(t.name());
            out += '$';
            out += std::to_string(idx);
            break;
        }
        case Term::Kind::Abs:
            out += "\\.";
            bound.push_back(t.name());
            canon_free(t.body(), bound, frees, out);
            bound.pop_back();
            break;
        case Term::Kind::App:
            out += '(';
            canon_free(t.fun(), bound, frees, out);
            out += ' ';
            canon_free(t.arg(), bound, frees, out);
            out += ')';
            break;
    }
}

Term subst_impl(const Term& m, const std::string& x, const Term& v, const std::set<std::string>& fv_v) {
    switch (m.kind()) {
        case Term::Kind::Var: return m.name() == x ? v : m;
        case Term::Kind::App: {
            Term f = subst_impl(m.fun(), x, v, fv_v);
            Term a = subst_impl(m.arg(), x, v, fv_v);
            return Term::app(std::move(f), std::move(a));
        }
        case Term::Kind::Abs: {
            const std::string& y = m.name();
            if (y == x || !occurs_free(m.body(), x)) return m;
            if (fv_v.count(y) != 0) {
                std::set<std::string> avoid = fv_v;
                std::vector<std::string> no_bound;
                collect_free(m.body(), no_bound, avoid);
                avoid.insert(x);
                std::string y2 = fresh_name(y, avoid);
                Term renamed = subst_impl(m.body(), y, Term::var(y2), {y2});
                return Term::abs(y2, subst_impl(renamed, x, v, fv_v));
            }
            return Term::abs(y, subst_impl(m.body(), x, v, fv_v));
        }
    }
    return m;
}

}  // namespace

Term parse(std::string_view text) { return Parser(text).parse_all(); }

std::string to_string(const Term& t) {
    std::string out;
    print(t, out);
    return out;
}

std::set<std::string> free_vars(const Term& t) {
    std::set<std::string> out;
    std::vector<std::string> bound;
    collect_free(t, bound, out);
    return out;
}

std::set<std::string> all_names(const Term& t) {
    std::set<std::string> out;
    collect_all(t, out);
    return out;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
    if (avoid.count(base) == 0) return base;
    for (std::size_t i = 1;; ++i) {
        std::string candidate = base + std::to_string(i);
        if (avoid.count(candidate) == 0) return candidate;
    }
}

std::string canonical_key(const Term& t) {
    std::string out;
    std::vector<std::string> bound;
    canon(t, bound, out);
    return out;
}

bool alpha_equal(const Term& a, const Term& b) { return canonical_key(a) == canonical_key(b); }

PairKey pair_key(const Term& a, const Term& b) {
    PairKey k;
    std::vector<std::string> bound;
    canon_free(a, bound, k.free_order, k.key);
    k.key += " , ";
    canon_free(b, bound, k.free_order, k.key);
    return k;
}

Term subst_value(const Term& m, const std::string& x, const Term& value) {
    if (!value.is_value()) throw std::invalid_argument("subst_value: substituted term is not a value");
    return subst_impl(m, x, value, free_vars(value));
}

// ---------------------------------------------------------------------------
// Evaluation contexts

void EvalContext::push_left(Term arg) { frames_.push_back({Frame::Side::AppL, std::move(arg)}); }

void EvalContext::push_right(Term value) {
    if (!value.is_value()) throw std::invalid_argument("EvalContext: left of the hole must be a value");
    frames_.push_back({Frame::Side::AppR, std::move(value)});
}

Term EvalContext::plug(const Term& t) const {
    Term out = t;
    for (auto it = frames_.rbegin(); it != frames_.rend(); ++it) {
        out = it->side == Frame::Side::AppL ? Term::app(out, it->other) : Term::app(it->other, out);
    }
    return out;
}

bool operator==(const EvalContext& a, const EvalContext& b) {
    if (a.frames_.size() != b.frames_.size()) return false;
    for (std::size_t i = 0; i < a.frames_.size(); ++i) {
        if (a.frames_[i].side != b.frames_[i].side || !(a.frames_[i].other == b.frames_[i].other)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Reduction

std::optional<Term> step(const Term& m) {
    if (!m.is_app()) return std::nullopt;
    const Term& f = m.fun();
    const Term& a = m.arg();
    if (!f.is_value()) {
        if (auto s = step(f)) return Term::app(*s, a);
        return std::nullopt;
    }
    if (!a.is_value()) {
        if (auto s = step(a)) return Term::app(f, *s);
        return std::nullopt;
    }
    if (f.is_abs()) return subst_value(f.body(), f.name(), a);
    return std::nullopt;
}

EvalOutcome evaluate(const Term& m, std::size_t fuel) {
    std::unordered_map<std::string, std::size_t> seen;
    std::vector<Term> history;
    Term cur = m;
    seen.emplace(canonical_key(cur), 0);
    history.push_back(cur);
    for (std::size_t steps = 0;; ++steps) {
        auto next = step(cur);
        if (!next) return Enf{cur, steps};
        if (steps == fuel) return FuelExhausted{cur};
        auto key = canonical_key(*next);
        if (auto it = seen.find(key); it != seen.end()) {
            return Diverged{std::vector<Term>(history.begin() + static_cast<std::ptrdiff_t>(it->second), history.end())};
        }
        seen.emplace(std::move(key), history.size());
        history.push_back(*next);
        cur = *next;
    }
}

EnfShape classify_enf(const Term& m) {
    if (m.is_var()) return ValueVar{m.name()};
    if (m.is_abs()) return ValueAbs{m.name(), m.body()};
    if (step(m)) throw std::invalid_argument("classify_enf: term is not in eager normal form: " + to_string(m));
    EvalContext ctx;
    const Term* cur = &m;
    for (;;) {
        if (!cur->fun().is_value()) {
            ctx.push_left(cur->arg());
            cur = &cur->fun();
        } else if (!cur->arg().is_value()) {
            ctx.push_right(cur->fun());
            cur = &cur->arg();
        } else {
            return Stuck{std::move(ctx), cur->fun().name(), cur->arg()};
        }
    }
}

Term rebuild(const Stuck& s) { return s.context.plug(Term::app(Term::var(s.head), s.arg)); }

}  // namespace eagerpi::lambda
