#include "eagerpi/pi.hpp"

#include <cctype>
#include <functional>
#include <numeric>

namespace eagerpi::pi {

namespace {

using Kind = Process::Kind;

enum class Tok { Ident, Zero, LParen, RParen, Comma, Dot, Bar, Bang, Caret, Lt, Gt, Eq, Colon, Semi, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t pos;
};

std::vector<Token> lex(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '#') {
            while (i < s.size() && s[i] != '\n') ++i;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = i;
            while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' || s[i] == '\'')) ++i;
            if (i < s.size() && s[i] == '{') {
                while (i < s.size() && s[i] != '}') ++i;
                if (i == s.size()) throw PiParseError("unterminated '{' in identifier", start);
                ++i;
            }
            out.push_back({Tok::Ident, std::string(s.substr(start, i - start)), start});
            continue;
        }
        if (c == '0') {
            out.push_back({Tok::Zero, "0", i++});
            continue;
        }
        Tok k;
        switch (c) {
            case '(': k = Tok::LParen; break;
            case ')': k = Tok::RParen; break;
            case ',': k = Tok::Comma; break;
            case '.': k = Tok::Dot; break;
            case '|': k = Tok::Bar; break;
            case '!': k = Tok::Bang; break;
            case '^': k = Tok::Caret; break;
            case '<': k = Tok::Lt; break;
            case '>': k = Tok::Gt; break;
            case '=': k = Tok::Eq; break;
            case ':': k = Tok::Colon; break;
            case ';': k = Tok::Semi; break;
            default: throw PiParseError(std::string("unexpected character '") + c + "'", i);
        }
        out.push_back({k, std::string(1, c), i++});
    }
    out.push_back({Tok::End, "", s.size()});
    return out;
}

bool is_keyword(const std::string& s) { return s == "new" || s == "in" || s == "def" || s == "sort" || s == "linear"; }

// Raw tree whose names are indices into the variable table.
struct RNode {
    Kind kind = Kind::Nil;
    int subject = -1;
    std::vector<int> names;
    std::vector<RNode> children;
    std::string constant;
    std::size_t pos = 0;
};

struct Var {
    std::string id;
    std::size_t pos;
};

struct RawDef {
    std::string name;
    std::vector<int> params;
    RNode body;
    std::size_t pos;
};

class Parser {
public:
    explicit Parser(std::string_view text) : toks_(lex(text)) {}

    void run() {
        while (true) {
            if (peek().kind == Tok::Semi) {
                ++at_;
                continue;
            }
            if (peek_kw("sort")) {
                sort_decl();
            } else if (peek_kw("def")) {
                def_decl();
            } else {
                break;
            }
        }
        if (peek().kind != Tok::End) {
            in_def_ = false;
            main_ = par();
            has_main_ = true;
            while (peek().kind == Tok::Semi) ++at_;
        }
        if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    }

    std::vector<Var> vars;
    std::vector<SortDecl> sorts;
    std::vector<RawDef> defs;
    RNode main_;
    bool has_main_ = false;
    std::vector<int> free_vars;

private:
    const Token& peek(std::size_t k = 0) const { return toks_[std::min(at_ + k, toks_.size() - 1)]; }
    bool peek_kw(const char* kw) const { return peek().kind == Tok::Ident && peek().text == kw; }
    [[noreturn]] void fail(const std::string& msg) const { throw PiParseError(msg, peek().pos); }

    const Token& expect(Tok k, const char* what) {
        if (peek().kind != k) fail(std::string("expected ") + what);
        return toks_[at_++];
    }

    std::string ident(const char* what) {
        if (peek().kind != Tok::Ident || is_keyword(peek().text)) fail(std::string("expected ") + what);
        return toks_[at_++].text;
    }

    void sort_decl() {
        ++at_;
        SortDecl d;
        d.name = ident("sort name");
        expect(Tok::Colon, "':'");
        if (peek_kw("linear")) {
            ++at_;
            d.linear = true;
        }
        expect(Tok::LParen, "'('");
        if (peek().kind != Tok::RParen) {
            d.payload.push_back(ident("sort name"));
            while (peek().kind == Tok::Comma) {
                ++at_;
                d.payload.push_back(ident("sort name"));
            }
        }
        expect(Tok::RParen, "')'");
        sorts.push_back(std::move(d));
    }

    void def_decl() {
        std::size_t pos = peek().pos;
        ++at_;
        RawDef d;
        d.pos = pos;
        d.name = ident("constant name");
        if (d.name == ConstantEnv::kForwarder) fail("fwd is built in and cannot be redefined");
        expect(Tok::LParen, "'('");
        in_def_ = true;
        scope_.clear();
        d.params = binders();
        expect(Tok::RParen, "')'");
        expect(Tok::Eq, "'='");
        d.body = par();
        unbind(d.params.size());
        in_def_ = false;
        defs.push_back(std::move(d));
    }

    int new_var(const std::string& id, std::size_t pos) {
        vars.push_back({id, pos});
        return static_cast<int>(vars.size()) - 1;
    }

    std::vector<int> binders() {
        std::vector<int> out;
        if (peek().kind == Tok::RParen) return out;
        do {
            if (!out.empty()) ++at_;
            if (peek().kind == Tok::Caret && !out.empty()) ++at_;
            std::size_t pos = peek().pos;
            std::string id = ident("name");
            int v = new_var(id, pos);
            out.push_back(v);
        } while (peek().kind == Tok::Comma);
        for (int v : out) scope_.push_back(v);
        return out;
    }

    void unbind(std::size_t n) { scope_.resize(scope_.size() - n); }

    int use(const std::string& id, std::size_t pos) {
        for (std::size_t i = scope_.size(); i-- > 0;) {
            if (vars[static_cast<std::size_t>(scope_[i])].id == id) return scope_[i];
        }
        if (in_def_) throw PiParseError("definition is not name-closed: free name " + id, pos);
        auto it = globals_.find(id);
        if (it != globals_.end()) return it->second;
        int v = new_var(id, pos);
        globals_[id] = v;
        free_vars.push_back(v);
        return v;
    }

    int use_ident(const char* what) {
        std::size_t pos = peek().pos;
        return use(ident(what), pos);
    }

    std::vector<int> uses(Tok close) {
        std::vector<int> out;
        if (peek().kind == close) return out;
        out.push_back(use_ident("name"));
        while (peek().kind == Tok::Comma) {
            ++at_;
            out.push_back(use_ident("name"));
        }
        return out;
    }

    RNode par() {
        RNode left = seq();
        while (peek().kind == Tok::Bar) {
            ++at_;
            RNode right = seq();
            RNode p;
            p.kind = Kind::Parallel;
            p.pos = left.pos;
            p.children = {std::move(left), std::move(right)};
            left = std::move(p);
        }
        return left;
    }

    RNode seq() {
        RNode n;
        n.pos = peek().pos;
        const Token& t = peek();
        if (t.kind == Tok::Zero) {
            ++at_;
            return n;
        }
        if (t.kind == Tok::LParen) {
            ++at_;
            RNode inner = par();
            expect(Tok::RParen, "')'");
            return inner;
        }
        if (t.kind == Tok::Bang) {
            ++at_;
            n.kind = Kind::Replicated;
            n.subject = use_ident("input subject");
            expect(Tok::LParen, "'('");
            n.names = binders();
            expect(Tok::RParen, "')'");
            expect(Tok::Dot, "'.'");
            n.children.push_back(seq());
            unbind(n.names.size());
            return n;
        }
        if (t.kind == Tok::Ident && t.text == "new") {
            ++at_;
            std::vector<int> bound;
            do {
                if (!bound.empty()) ++at_;
                std::size_t pos = peek().pos;
                bound.push_back(new_var(ident("name"), pos));
            } while (peek().kind == Tok::Comma);
            if (!peek_kw("in")) fail("expected 'in'");
            ++at_;
            for (int v : bound) scope_.push_back(v);
            RNode body = seq();
            unbind(bound.size());
            for (auto it = bound.rbegin(); it != bound.rend(); ++it) {
                RNode r;
                r.kind = Kind::Restriction;
                r.pos = n.pos;
                r.subject = *it;
                r.children.push_back(std::move(body));
                body = std::move(r);
            }
            return body;
        }
        if (t.kind != Tok::Ident || is_keyword(t.text)) fail("expected a process");
        std::string head = t.text;
        std::size_t head_pos = t.pos;
        ++at_;
        if (peek().kind == Tok::Lt) {
            ++at_;
            n.kind = Kind::Apply;
            n.constant = head;
            n.names = uses(Tok::Gt);
            expect(Tok::Gt, "'>'");
            return n;
        }
        if (peek().kind == Tok::LParen) {
            ++at_;
            n.kind = Kind::Input;
            n.subject = use(head, head_pos);
            n.names = binders();
            expect(Tok::RParen, "')'");
            expect(Tok::Dot, "'.'");
            n.children.push_back(seq());
            unbind(n.names.size());
            return n;
        }
        if (peek().kind == Tok::Bang) {
            ++at_;
            n.subject = use(head, head_pos);
            expect(Tok::LParen, "'('");
            if (peek().kind == Tok::Caret) {
                ++at_;
                n.kind = Kind::BoundOutput;
                if (peek().kind == Tok::RParen) fail("expected a bound name");
                n.names = binders();
                expect(Tok::RParen, "')'");
                if (peek().kind == Tok::Dot) {
                    ++at_;
                    n.children.push_back(seq());
                } else {
                    n.children.emplace_back();
                }
                unbind(n.names.size());
                return n;
            }
            n.kind = Kind::Output;
            n.names = uses(Tok::RParen);
            expect(Tok::RParen, "')'");
            if (peek().kind == Tok::Dot) {
                ++at_;
                n.children.push_back(seq());
            } else {
                n.children.emplace_back();
            }
            return n;
        }
        fail("expected '(', '!(' or '<' after " + head);
    }

    std::vector<Token> toks_;
    std::size_t at_ = 0;
    std::vector<int> scope_;
    std::map<std::string, int> globals_;
    bool in_def_ = false;
};

// Union-find over name variables and registered sorts.
class Inference {
public:
    Inference(const std::vector<Var>& vars) : vars_(vars) {
        for (std::size_t i = 0; i < vars.size(); ++i) add_node();
    }

    int find(int a) {
        while (parent_[static_cast<std::size_t>(a)] != a) {
            auto& p = parent_[static_cast<std::size_t>(a)];
            p = parent_[static_cast<std::size_t>(p)];
            a = p;
        }
        return a;
    }

    int node_for_sort(SortId s) {
        auto it = sort_nodes_.find(s);
        if (it != sort_nodes_.end()) return it->second;
        int n = add_node();
        sort_nodes_[s] = n;
        concrete_[static_cast<std::size_t>(n)] = s;
        SortInfo info = sort_info(s);
        std::vector<int> payload;
        for (SortId p : info.payload) payload.push_back(node_for_sort(p));
        payload_[static_cast<std::size_t>(n)] = std::move(payload);
        return n;
    }

    void unify(int a, int b, int blame) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        auto& ca = concrete_[static_cast<std::size_t>(a)];
        auto& cb = concrete_[static_cast<std::size_t>(b)];
        if (ca && cb && *ca != *cb) {
            conflict(blame, "sorts " + sort_info(*ca).name + " and " + sort_info(*cb).name);
        }
        parent_[static_cast<std::size_t>(b)] = a;
        if (!ca) ca = cb;
        auto pb = std::move(payload_[static_cast<std::size_t>(b)]);
        auto& pa = payload_[static_cast<std::size_t>(a)];
        if (!pb) return;
        if (!pa) {
            pa = std::move(pb);
            return;
        }
        if (pa->size() != pb->size()) {
            conflict(blame, "arities " + std::to_string(pa->size()) + " and " + std::to_string(pb->size()));
        }
        auto copy = *pa;
        for (std::size_t i = 0; i < copy.size(); ++i) unify(copy[i], (*pb)[i], blame);
    }

    void carries(int subject, const std::vector<int>& objects) {
        int s = find(subject);
        auto& p = payload_[static_cast<std::size_t>(s)];
        if (!p) {
            p = objects;
            return;
        }
        if (p->size() != objects.size()) {
            conflict(subject, "arities " + std::to_string(p->size()) + " and " + std::to_string(objects.size()));
        }
        auto copy = *p;
        for (std::size_t i = 0; i < copy.size(); ++i) unify(copy[i], objects[i], subject);
    }

    // Assigns a sort to every class: a concrete one, the first declared sort that fits, or a new anonymous one.
    SortId resolve(int v) {
        int c = find(v);
        auto it = resolved_.find(c);
        if (it != resolved_.end()) return it->second;
        if (auto& k = concrete_[static_cast<std::size_t>(c)]) {
            resolved_[c] = *k;
            return *k;
        }
        for (SortId s : declared_sorts()) {
            std::set<std::pair<int, SortId>> assume;
            if (matches(c, s, assume)) {
                commit(c, s);
                return s;
            }
        }
        SortId fresh = new_anonymous_sort();
        resolved_[c] = fresh;
        std::vector<SortId> payload;
        if (auto& p = payload_[static_cast<std::size_t>(c)]) {
            auto copy = *p;
            for (int x : copy) payload.push_back(resolve(x));
        }
        set_anonymous_payload(fresh, std::move(payload));
        return fresh;
    }

    // Outermost channels first, so that carried names inherit their sorts from the carrier.
    void resolve_all(std::size_t count) {
        std::set<int> carried;
        for (std::size_t v = 0; v < count; ++v) {
            if (const auto& p = payload_[static_cast<std::size_t>(find(static_cast<int>(v)))]) {
                for (int x : *p) carried.insert(find(x));
            }
        }
        auto subject = [&](int v) { return payload_[static_cast<std::size_t>(find(v))].has_value(); };
        for (std::size_t v = 0; v < count; ++v) {
            int i = static_cast<int>(v);
            if (subject(i) && carried.count(find(i)) == 0) resolve(i);
        }
        for (std::size_t v = 0; v < count; ++v) {
            if (subject(static_cast<int>(v))) resolve(static_cast<int>(v));
        }
        for (std::size_t v = 0; v < count; ++v) resolve(static_cast<int>(v));
    }

private:
    int add_node() {
        parent_.push_back(static_cast<int>(parent_.size()));
        payload_.emplace_back();
        concrete_.emplace_back();
        return parent_.back();
    }

    [[noreturn]] void conflict(int blame, const std::string& what) {
        std::string name = blame >= 0 && static_cast<std::size_t>(blame) < vars_.size() ? vars_[static_cast<std::size_t>(blame)].id : "?";
        throw SortError("sort error: name " + name + " is used with incompatible " + what, name);
    }

    bool matches(int c, SortId s, std::set<std::pair<int, SortId>>& assume) {
        c = find(c);
        auto it = resolved_.find(c);
        if (it != resolved_.end()) return it->second == s;
        if (auto& k = concrete_[static_cast<std::size_t>(c)]) return *k == s;
        if (!assume.insert({c, s}).second) return true;
        const auto& p = payload_[static_cast<std::size_t>(c)];
        if (!p) return true;
        SortInfo info = sort_info(s);
        if (info.payload.size() != p->size()) return false;
        auto copy = *p;
        for (std::size_t i = 0; i < copy.size(); ++i) {
            if (!matches(copy[i], info.payload[i], assume)) return false;
        }
        return true;
    }

    void commit(int c, SortId s) {
        c = find(c);
        if (resolved_.count(c) != 0) return;
        resolved_[c] = s;
        if (auto& p = payload_[static_cast<std::size_t>(c)]) {
            auto copy = *p;
            SortInfo info = sort_info(s);
            for (std::size_t i = 0; i < copy.size(); ++i) commit(copy[i], info.payload[i]);
        }
    }

    const std::vector<Var>& vars_;
    std::vector<int> parent_;
    std::vector<std::optional<std::vector<int>>> payload_;
    std::vector<std::optional<SortId>> concrete_;
    std::map<SortId, int> sort_nodes_;
    std::map<int, SortId> resolved_;
};

}  // namespace

Process parse_pi(std::string_view text, ConstantEnv& env) {
    Parser ps(text);
    ps.run();
    if (!ps.sorts.empty()) {
        try {
            declare_sorts(ps.sorts);
        } catch (const std::invalid_argument& e) {
            throw SortError(e.what(), ps.sorts.front().name);
        }
    }

    Inference inf(ps.vars);
    std::map<std::string, const RawDef*> local;
    for (const auto& d : ps.defs) {
        if (!local.emplace(d.name, &d).second) throw PiParseError("constant " + d.name + " defined twice", d.pos);
    }

    std::function<void(const RNode&)> constrain = [&](const RNode& n) {
        switch (n.kind) {
            case Kind::Nil: return;
            case Kind::Parallel:
                constrain(n.children[0]);
                constrain(n.children[1]);
                return;
            case Kind::Restriction: constrain(n.children[0]); return;
            case Kind::Apply: {
                const auto& args = n.names;
                if (n.constant == ConstantEnv::kForwarder) {
                    if (args.size() != 2) throw PiParseError("fwd expects 2 arguments", n.pos);
                    inf.unify(args[0], args[1], args[0]);
                    return;
                }
                if (auto it = local.find(n.constant); it != local.end()) {
                    const auto& params = it->second->params;
                    if (params.size() != args.size()) {
                        throw PiParseError(n.constant + " expects " + std::to_string(params.size()) + " arguments", n.pos);
                    }
                    for (std::size_t i = 0; i < args.size(); ++i) inf.unify(args[i], params[i], args[i]);
                    return;
                }
                const auto* def = env.find(n.constant);
                if (def == nullptr) throw PiParseError("undefined constant " + n.constant, n.pos);
                if (def->params.size() != args.size()) {
                    throw PiParseError(n.constant + " expects " + std::to_string(def->params.size()) + " arguments", n.pos);
                }
                for (std::size_t i = 0; i < args.size(); ++i) inf.unify(args[i], inf.node_for_sort(def->params[i].sort), args[i]);
                return;
            }
            default:
                inf.carries(n.subject, n.names);
                constrain(n.children[0]);
                return;
        }
    };
    for (const auto& d : ps.defs) constrain(d.body);
    if (ps.has_main_) constrain(ps.main_);
    inf.resolve_all(ps.vars.size());

    auto name_of = [&](int v) { return Name{ps.vars[static_cast<std::size_t>(v)].id, inf.resolve(v)}; };
    auto names_of = [&](const std::vector<int>& vs) {
        std::vector<Name> out;
        for (int v : vs) out.push_back(name_of(v));
        return out;
    };
    std::function<Process(const RNode&)> build = [&](const RNode& n) -> Process {
        switch (n.kind) {
            case Kind::Nil: return Process::nil();
            case Kind::Parallel: return Process::par(build(n.children[0]), build(n.children[1]));
            case Kind::Restriction: return Process::restrict(name_of(n.subject), build(n.children[0]));
            case Kind::Apply: return Process::apply(n.constant, names_of(n.names));
            case Kind::Input: return Process::input(name_of(n.subject), names_of(n.names), build(n.children[0]));
            case Kind::Replicated: return Process::replicated(name_of(n.subject), names_of(n.names), build(n.children[0]));
            case Kind::Output: return Process::output(name_of(n.subject), names_of(n.names), build(n.children[0]));
            case Kind::BoundOutput: return Process::bound_output(name_of(n.subject), names_of(n.names), build(n.children[0]));
        }
        return Process::nil();
    };
    for (const auto& d : ps.defs) env.define(d.name, Abstraction{names_of(d.params), build(d.body)});
    return ps.has_main_ ? build(ps.main_) : Process::nil();
}

Process parse_pi(std::string_view text) {
    ConstantEnv env;
    return parse_pi(text, env);
}

}  // namespace eagerpi::pi
