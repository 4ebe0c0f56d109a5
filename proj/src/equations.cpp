#include "eagerpi/equations.hpp"

#include "eagerpi/encodings.hpp"
#include "eagerpi/lts.hpp"

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <unordered_map>
#include <unordered_set>

namespace eagerpi::eqn {

using lambda::Term;
using pi::Abstraction;
using pi::Name;
using pi::Process;
using Kind = pi::Process::Kind;

std::string x_var(std::size_t i) { return "X_{" + std::to_string(i) + "}"; }
std::string xv_var(std::size_t i) { return "XV_{" + std::to_string(i) + "}"; }

const char* to_string(CaseTag t) {
    switch (t) {
        case CaseTag::Var: return "var";
        case CaseTag::Div: return "div";
        case CaseTag::Abs: return "abs";
        case CaseTag::Stuck: return "stuck";
        case CaseTag::EtaLeft: return "eta-left";
        case CaseTag::EtaRight: return "eta-right";
        case CaseTag::ValueAux: return "value-aux";
    }
    return "?";
}

const Equation* EquationSystem::find(const std::string& var) const {
    for (const auto& e : equations) {
        if (e.var == var) return &e;
    }
    return nullptr;
}

std::vector<std::string> EquationSystem::variables() const {
    std::vector<std::string> out;
    for (const auto& e : equations) out.push_back(e.var);
    return out;
}

std::string to_string(const EquationSystem& sys) {
    std::string s;
    for (const auto& e : sys.equations) s += e.var + " = " + pi::to_string(e.body) + "\n";
    return s;
}

const PairEntry* PairTable::find(const std::string& var) const {
    for (const auto& e : entries) {
        if (e.var == var) return &e;
    }
    return nullptr;
}

std::string PairTable::to_json() const {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& e : entries) {
        nlohmann::json j;
        j["var"] = e.var;
        j["left"] = lambda::to_string(e.left);
        j["right"] = lambda::to_string(e.right);
        j["tag"] = to_string(e.tag);
        j["params"] = e.params;
        if (!e.fresh.empty()) j["fresh"] = e.fresh;
        nlohmann::json parts = nlohmann::json::object();
        for (const auto& [role, pr] : e.parts) parts[role] = {pr.first, pr.second};
        j["parts"] = parts;
        if (!e.audit.empty()) j["audit"] = e.audit;
        out.push_back(std::move(j));
    }
    return out.dump(2);
}

Relation parse_relation(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("relation: ") + e.what());
    }
    if (!j.is_array()) throw std::invalid_argument("relation: expected a list of pairs");
    Relation r;
    for (const auto& pr : j) {
        if (!pr.is_array() || pr.size() != 2 || !pr[0].is_string() || !pr[1].is_string()) {
            throw std::invalid_argument("relation: every entry must be a list of two terms");
        }
        r.emplace_back(lambda::parse(pr[0].get<std::string>()), lambda::parse(pr[1].get<std::string>()));
    }
    return r;
}

namespace {

std::vector<std::string> sorted_fv(const Term& m, const Term& n) {
    auto a = lambda::free_vars(m);
    auto b = lambda::free_vars(n);
    a.insert(b.begin(), b.end());
    return {a.begin(), a.end()};
}

std::vector<Name> vals(const std::vector<std::string>& ids) {
    std::vector<Name> out;
    for (const auto& id : ids) out.push_back(pi::val(id));
    return out;
}

std::string fresh_lambda(const std::string& base, const std::set<std::string>& avoid) { return lambda::fresh_name(base, avoid); }

struct Child {
    std::string role;
    Term left;
    Term right;
};

// One pair of the closure with its classification.
struct Item {
    Term m = Term::var("x");
    Term n = Term::var("x");
    std::vector<std::string> free_order;
    std::vector<std::string> params;
    std::string cont;
    CaseTag tag = CaseTag::Var;
    bool processed = false;
    // Normal forms when both are values.
    std::optional<Term> vm;
    std::optional<Term> vn;
    std::string head;
    // Abstraction binder (Abs, Eta) and decomposition variable (Stuck, Eta).
    std::string binder;
    std::string fresh;
    std::vector<Child> children;
};

class Closure {
public:
    explicit Closure(const BuildConfig& cfg) : cfg_(cfg) {}

    std::vector<Item> items;
    bool complete = true;

    std::size_t intern(const Term& m, const Term& n) {
        auto k = lambda::pair_key(m, n);
        auto it = index_.find(k.key);
        if (it != index_.end()) return it->second;
        Item item;
        item.m = m;
        item.n = n;
        item.free_order = k.free_order;
        item.params = sorted_fv(m, n);
        item.cont = pi::fresh_id("p", {item.params.begin(), item.params.end()});
        items.push_back(std::move(item));
        index_.emplace(k.key, items.size() - 1);
        return items.size() - 1;
    }

    // Arguments for a reference to the class of (m, n), in the order of its parameters.
    std::vector<Name> args(std::size_t rep, const Term& m, const Term& n) const {
        auto k = lambda::pair_key(m, n);
        const Item& r = items[rep];
        std::vector<Name> out;
        for (const auto& y : r.params) {
            auto pos = std::find(r.free_order.begin(), r.free_order.end(), y) - r.free_order.begin();
            out.push_back(pi::val(k.free_order[static_cast<std::size_t>(pos)]));
        }
        return out;
    }

    std::size_t find(const Term& m, const Term& n) const { return index_.at(lambda::pair_key(m, n).key); }

    void run(const Relation& r) {
        for (const auto& [m, n] : r) intern(m, n);
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (i >= cfg_.cap) {
                complete = false;
                break;
            }
            classify(i);
            for (const auto& c : items[i].children) intern(c.left, c.right);
        }
    }

private:
    const lambda::EvalOutcome& eval(const Term& t) {
        auto key = lambda::canonical_key(t);
        auto it = evals_.find(key);
        if (it == evals_.end()) it = evals_.emplace(std::move(key), lambda::evaluate(t, cfg_.eval_fuel)).first;
        return it->second;
    }

    [[noreturn]] void fail(const Item& it, const std::string& why) const {
        std::string l = lambda::to_string(it.m);
        std::string r = lambda::to_string(it.n);
        throw BuildError("relation is not closed at (" + l + ", " + r + "): " + why, l, r);
    }

    std::set<std::string> avoid_of(const Item& it) const {
        std::set<std::string> a(it.params.begin(), it.params.end());
        a.insert(it.cont);
        return a;
    }

    // Splits an eta-expansion: nf_abs is \z.B with B converging to E[x V].
    void eta(Item& it, const std::string& x, const Term& nf_abs, bool abs_on_right) {
        std::set<std::string> avoid = avoid_of(it);
        std::string z = nf_abs.name();
        Term body = nf_abs.body();
        if (z == x || avoid.count(z) != 0) {
            std::set<std::string> all = avoid;
            auto fv = lambda::free_vars(body);
            all.insert(fv.begin(), fv.end());
            all.insert(x);
            std::string fresh = fresh_lambda("z", all);
            body = lambda::subst_value(body, z, Term::var(fresh));
            z = fresh;
        }
        const auto& ob = eval(body);
        if (std::holds_alternative<lambda::FuelExhausted>(ob)) fail(it, "evaluation fuel exhausted");
        if (std::holds_alternative<lambda::Diverged>(ob)) fail(it, "eta: body of the abstraction diverges");
        Term nf = std::get<lambda::Enf>(ob).term;
        auto shape = lambda::classify_enf(nf);
        const auto* st = std::get_if<lambda::Stuck>(&shape);
        if (st == nullptr || st->head != x) fail(it, "eta: body is not stuck on " + x);
        avoid.insert(z);
        auto fv = lambda::free_vars(nf);
        avoid.insert(fv.begin(), fv.end());
        std::string w = fresh_lambda("w", avoid);
        Term zv = Term::var(z);
        Term wv = Term::var(w);
        Term ew = st->context.plug(wv);
        it.tag = abs_on_right ? CaseTag::EtaRight : CaseTag::EtaLeft;
        it.head = x;
        it.binder = z;
        it.fresh = w;
        if (abs_on_right) {
            it.children = {{"arg", zv, st->arg}, {"ctx", wv, ew}};
        } else {
            it.children = {{"arg", st->arg, zv}, {"ctx", ew, wv}};
        }
    }

    void classify(std::size_t i) {
        Item& it = items[i];
        it.processed = true;
        const auto& om = eval(it.m);
        const auto& on = eval(it.n);
        if (std::holds_alternative<lambda::FuelExhausted>(om) || std::holds_alternative<lambda::FuelExhausted>(on)) {
            fail(it, "evaluation fuel exhausted");
        }
        bool m_div = std::holds_alternative<lambda::Diverged>(om);
        bool n_div = std::holds_alternative<lambda::Diverged>(on);
        if ((m_div && n_div) || (m_div && cfg_.preorder)) {
            it.tag = CaseTag::Div;
            return;
        }
        if (m_div || n_div) fail(it, "only one side diverges");
        Term mn = std::get<lambda::Enf>(om).term;
        Term nn = std::get<lambda::Enf>(on).term;
        auto sm = lambda::classify_enf(mn);
        auto sn = lambda::classify_enf(nn);
        if (mn.is_value() && nn.is_value()) {
            it.vm = mn;
            it.vn = nn;
        }
        if (auto* xm = std::get_if<lambda::ValueVar>(&sm)) {
            if (auto* xn = std::get_if<lambda::ValueVar>(&sn)) {
                if (xm->name != xn->name) fail(it, "different variables");
                it.tag = CaseTag::Var;
                it.head = xm->name;
                return;
            }
            if (cfg_.eta && nn.is_abs()) return eta(it, xm->name, nn, true);
            fail(it, "variable against non-variable");
        }
        if (auto* am = std::get_if<lambda::ValueAbs>(&sm)) {
            if (auto* an = std::get_if<lambda::ValueAbs>(&sn)) {
                std::set<std::string> avoid = avoid_of(it);
                std::string b = am->binder;
                if (avoid.count(b) != 0 || (an->binder != b && lambda::free_vars(nn).count(b) != 0)) {
                    auto fm = lambda::free_vars(am->body);
                    auto fn = lambda::free_vars(an->body);
                    avoid.insert(fm.begin(), fm.end());
                    avoid.insert(fn.begin(), fn.end());
                    b = fresh_lambda("z", avoid);
                }
                Term bv = Term::var(b);
                it.tag = CaseTag::Abs;
                it.binder = b;
                it.children = {{"body", lambda::subst_value(am->body, am->binder, bv), lambda::subst_value(an->body, an->binder, bv)}};
                return;
            }
            if (auto* xn = std::get_if<lambda::ValueVar>(&sn); xn && cfg_.eta) return eta(it, xn->name, mn, false);
            fail(it, "abstraction against non-abstraction");
        }
        const auto& stm = std::get<lambda::Stuck>(sm);
        const auto* stn = std::get_if<lambda::Stuck>(&sn);
        if (stn == nullptr) fail(it, "stuck term against value");
        if (stm.head != stn->head) fail(it, "stuck on different variables");
        std::set<std::string> avoid = avoid_of(it);
        auto fm = lambda::free_vars(mn);
        auto fn = lambda::free_vars(nn);
        avoid.insert(fm.begin(), fm.end());
        avoid.insert(fn.begin(), fn.end());
        std::string z = fresh_lambda("z", avoid);
        Term zv = Term::var(z);
        it.tag = CaseTag::Stuck;
        it.head = stm.head;
        it.fresh = z;
        it.children = {{"arg", stm.arg, stn->arg}, {"ctx", stm.context.plug(zv), stn->context.plug(zv)}};
    }

    BuildConfig cfg_;
    std::unordered_map<std::string, std::size_t> index_;
    std::unordered_map<std::string, lambda::EvalOutcome> evals_;
};

const Term kOmega = lambda::parse("(\\x.x x)(\\x.x x)");

PairEntry entry_for(const Item& it, const std::string& var) {
    PairEntry e;
    e.var = var;
    e.left = it.m;
    e.right = it.n;
    e.tag = it.tag;
    e.params = it.params;
    e.fresh = it.fresh;
    for (const auto& c : it.children) e.parts[c.role] = {lambda::to_string(c.left), lambda::to_string(c.right)};
    return e;
}

const Child& child(const Item& it, const std::string& role) {
    for (const auto& c : it.children) {
        if (c.role == role) return c;
    }
    throw std::logic_error("missing sub-pair " + role);
}

// References to equation variables of the closure.
class Refs {
public:
    explicit Refs(const Closure& c) : c_(c) {}

    Process x(const Term& m, const Term& n, const Name& cont) const {
        std::size_t j = c_.find(m, n);
        auto a = c_.args(j, m, n);
        a.push_back(cont);
        return Process::apply(x_var(j), a);
    }

    const Closure& closure() const { return c_; }

private:
    const Closure& c_;
};

// Encodes `shape` into Internal pi at `cont`, with placeholder variables #0, #1 standing
// for the given references.
Process encode_with_holes(const Term& shape, const Name& cont, const std::set<std::string>& reserved,
                          const std::vector<std::function<Process(const Name&)>>& holes) {
    enc::Hooks hooks;
    for (std::size_t i = 0; i < holes.size(); ++i) hooks.placeholders.insert("#" + std::to_string(i));
    hooks.placeholder = [&](const std::string& var, const Name& q) { return holes[std::stoul(var.substr(1))](q); };
    std::set<std::string> names = lambda::all_names(shape);
    names.insert(reserved.begin(), reserved.end());
    enc::NameSupply supply(std::move(names));
    return enc::encode(enc::Encoding::InternalPi, shape, cont, supply, hooks);
}

Process eqcbv_body(const Item& it, const Refs& refs) {
    Name p = pi::cont(it.cont);
    std::set<std::string> reserved(it.params.begin(), it.params.end());
    reserved.insert(it.cont);
    auto ref = [&](const std::string& role) {
        const Child& c = child(it, role);
        return std::function<Process(const Name&)>([&refs, c](const Name& q) { return refs.x(c.left, c.right, q); });
    };
    Term h0 = Term::var("#0");
    Term h1 = Term::var("#1");
    switch (it.tag) {
        case CaseTag::Var: return encode_with_holes(Term::var(it.head), p, reserved, {});
        case CaseTag::Div: return encode_with_holes(kOmega, p, reserved, {});
        case CaseTag::Abs: return encode_with_holes(Term::abs(it.binder, h0), p, reserved, {ref("body")});
        case CaseTag::Stuck: {
            Term shape = Term::app(Term::abs(it.fresh, h0), Term::app(Term::var(it.head), h1));
            return encode_with_holes(shape, p, reserved, {ref("ctx"), ref("arg")});
        }
        case CaseTag::EtaLeft:
        case CaseTag::EtaRight: {
            Term shape = Term::abs(it.binder, Term::app(Term::abs(it.fresh, h0), Term::app(Term::var(it.head), h1)));
            return encode_with_holes(shape, p, reserved, {ref("ctx"), ref("arg")});
        }
        case CaseTag::ValueAux: break;
    }
    throw std::logic_error("eqcbv: unexpected case");
}

void check_relation(const Relation& r) {
    if (r.empty()) throw std::invalid_argument("relation is empty");
}

}  // namespace

BuildResult build_eqcbv(const Relation& r, const BuildConfig& cfg) {
    check_relation(r);
    Closure c(cfg);
    c.run(r);
    Refs refs(c);
    BuildResult out;
    for (std::size_t i = 0; i < c.items.size(); ++i) {
        const Item& it = c.items[i];
        if (!it.processed) continue;
        auto params = vals(it.params);
        params.push_back(pi::cont(it.cont));
        out.system.equations.push_back({x_var(i), {params, eqcbv_body(it, refs)}});
        out.table.entries.push_back(entry_for(it, x_var(i)));
    }
    out.complete = c.complete;
    if (!c.complete) {
        out.report = "partial closure: stopped after " + std::to_string(cfg.cap) + " pairs, " +
                     std::to_string(c.items.size() - cfg.cap) + " pending";
    }
    return out;
}

namespace {

// The value family of the optimised system, keyed by normal-form pairs.
class ValueFamily {
public:
    explicit ValueFamily(const Closure& c) : c_(c) {
        for (std::size_t i = 0; i < c.items.size(); ++i) {
            const Item& it = c.items[i];
            if (it.processed && it.vm) intern(*it.vm, *it.vn, i);
        }
    }

    struct Entry {
        Term vm;
        Term vn;
        std::vector<std::string> free_order;
        std::vector<std::string> params;
        std::optional<std::size_t> source;
    };

    std::vector<Entry> entries;

    std::size_t intern(const Term& vm, const Term& vn, std::optional<std::size_t> source = std::nullopt) {
        auto k = lambda::pair_key(vm, vn);
        auto it = index_.find(k.key);
        if (it != index_.end()) {
            if (!entries[it->second].source && source) entries[it->second].source = source;
            return it->second;
        }
        entries.push_back({vm, vn, k.free_order, sorted_fv(vm, vn), source});
        index_.emplace(k.key, entries.size() - 1);
        return entries.size() - 1;
    }

    Process ref(const Term& vm, const Term& vn, const Name& chan) {
        std::size_t j = intern(vm, vn);
        auto k = lambda::pair_key(vm, vn);
        const Entry& e = entries[j];
        std::vector<Name> a{chan};
        for (const auto& y : e.params) {
            auto pos = std::find(e.free_order.begin(), e.free_order.end(), y) - e.free_order.begin();
            a.push_back(pi::val(k.free_order[static_cast<std::size_t>(pos)]));
        }
        return Process::apply(xv_var(j), a);
    }

private:
    const Closure& c_;
    std::unordered_map<std::string, std::size_t> index_;
};

Name fresh_val(const std::string& base, std::set<std::string>& avoid) {
    Name n = pi::val(pi::fresh_id(base, avoid));
    avoid.insert(n.id);
    return n;
}

Name fresh_cont(const std::string& base, std::set<std::string>& avoid) {
    Name n = pi::cont(pi::fresh_id(base, avoid));
    avoid.insert(n.id);
    return n;
}

}  // namespace

BuildResult build_eqcbvp(const Relation& r, const BuildConfig& cfg) {
    check_relation(r);
    Closure c(cfg);
    c.run(r);
    Refs refs(c);
    ValueFamily xv(c);
    BuildResult out;

    for (std::size_t i = 0; i < c.items.size(); ++i) {
        const Item& it = c.items[i];
        if (!it.processed) continue;
        Name p = pi::cont(it.cont);
        std::set<std::string> avoid(it.params.begin(), it.params.end());
        avoid.insert(it.cont);
        Process body = Process::nil();
        if (it.tag == CaseTag::Div) {
            body = Process::nil();
        } else if (it.tag == CaseTag::Stuck) {
            avoid.insert(it.fresh);
            Name z = fresh_val("z", avoid);
            Name q = fresh_cont("q", avoid);
            const Child& arg = child(it, "arg");
            const Child& ctx = child(it, "ctx");
            Process wait = Process::input(q, {pi::val(it.fresh)}, refs.x(ctx.left, ctx.right, p));
            body = Process::bound_output(pi::val(it.head), {z, q}, Process::par(xv.ref(arg.left, arg.right, z), wait));
        } else {
            Name z = fresh_val("z", avoid);
            body = Process::bound_output(p, {z}, xv.ref(*it.vm, *it.vn, z));
        }
        auto params = vals(it.params);
        params.push_back(p);
        out.system.equations.push_back({x_var(i), {params, body}});
        out.table.entries.push_back(entry_for(it, x_var(i)));
    }

    // Value equations; referencing may add entries, which are handled as they appear.
    for (std::size_t j = 0; j < xv.entries.size(); ++j) {
        auto e = xv.entries[j];
        if (!e.source) {
            out.complete = false;
            continue;
        }
        const Item& it = c.items[*e.source];
        std::set<std::string> avoid(e.params.begin(), e.params.end());
        Process body = Process::nil();
        Name chan = pi::val("z");
        PairEntry pe;
        pe.var = xv_var(j);
        pe.left = e.vm;
        pe.right = e.vn;
        pe.tag = CaseTag::ValueAux;
        pe.params = e.params;
        // The children of the source item, renamed to the names of this entry.
        auto key_src = lambda::pair_key(*it.vm, *it.vn);
        std::map<std::string, std::string> ren;
        for (std::size_t k = 0; k < key_src.free_order.size(); ++k) ren[key_src.free_order[k]] = e.free_order[k];
        auto rn = [&](const Term& t) {
            Term out_t = t;
            // Simultaneous renaming through fresh intermediates.
            std::map<std::string, std::string> tmp;
            std::set<std::string> used = lambda::all_names(t);
            for (const auto& [a, b] : ren) used.insert(b);
            for (const auto& [a, b] : ren) {
                if (a == b) continue;
                std::string mid = lambda::fresh_name("_r", used);
                used.insert(mid);
                out_t = lambda::subst_value(out_t, a, Term::var(mid));
                tmp[mid] = b;
            }
            for (const auto& [mid, b] : tmp) out_t = lambda::subst_value(out_t, mid, Term::var(b));
            return out_t;
        };
        auto rn_name = [&](const std::string& s) {
            auto f = ren.find(s);
            return f == ren.end() ? s : f->second;
        };
        switch (it.tag) {
            case CaseTag::Var: {
                avoid.insert(rn_name(it.head));
                chan = fresh_val("z", avoid);
                body = pi::forwarder(chan, pi::val(rn_name(it.head)));
                break;
            }
            case CaseTag::Abs: {
                avoid.insert(it.binder);
                chan = fresh_val("z", avoid);
                Name q = fresh_cont("q", avoid);
                const Child& b = child(it, "body");
                body = Process::replicated(chan, {pi::val(it.binder), q}, refs.x(rn(b.left), rn(b.right), q));
                pe.parts["body"] = {lambda::to_string(rn(b.left)), lambda::to_string(rn(b.right))};
                break;
            }
            case CaseTag::EtaLeft:
            case CaseTag::EtaRight: {
                avoid.insert(it.binder);
                avoid.insert(it.fresh);
                chan = fresh_val("y", avoid);
                Name q = fresh_cont("q", avoid);
                Name z2 = fresh_val("z", avoid);
                Name q2 = fresh_cont("q", avoid);
                const Child& arg = child(it, "arg");
                const Child& ctx = child(it, "ctx");
                Term al = rn(arg.left), ar = rn(arg.right), cl = rn(ctx.left), cr = rn(ctx.right);
                Process wait = Process::input(q2, {pi::val(it.fresh)}, refs.x(cl, cr, q));
                Process call = Process::bound_output(pi::val(rn_name(it.head)), {z2, q2}, Process::par(xv.ref(al, ar, z2), wait));
                body = Process::replicated(chan, {pi::val(it.binder), q}, call);
                pe.parts["arg"] = {lambda::to_string(al), lambda::to_string(ar)};
                pe.parts["ctx"] = {lambda::to_string(cl), lambda::to_string(cr)};
                pe.fresh = it.fresh;
                auto fa = sorted_fv(al, ar);
                auto fc = sorted_fv(cl, cr);
                auto join = [](const std::vector<std::string>& v) {
                    std::string s;
                    for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
                    return s;
                };
                pe.audit = "y' = fv(arg) = (" + join(fa) + "), y'' = fv(ctx) = (" + join(fc) + ")";
                break;
            }
            default: throw std::logic_error("eqcbvp: value family built from a non-value pair");
        }
        std::vector<Name> params{chan};
        for (const auto& y : e.params) params.push_back(pi::val(y));
        out.system.equations.push_back({xv_var(j), {params, body}});
        out.table.entries.push_back(std::move(pe));
    }

    out.complete = out.complete && c.complete;
    if (!out.complete) {
        out.report = "partial closure: stopped after " + std::to_string(cfg.cap) + " pairs";
    }
    return out;
}

// ---------------------------------------------------------------- checks

namespace {

bool is_variable(const std::string& k) { return k.rfind("X_{", 0) == 0 || k.rfind("XV_{", 0) == 0; }

void unguarded(const Process& p, const std::string& var, std::vector<std::string>& problems) {
    switch (p.kind()) {
        case Kind::Parallel:
            unguarded(p.left(), var, problems);
            unguarded(p.right(), var, problems);
            return;
        case Kind::Restriction: unguarded(p.body(), var, problems); return;
        case Kind::Apply:
            if (is_variable(p.constant())) problems.push_back(var + ": unguarded occurrence of " + p.constant());
            return;
        default: return;
    }
}

Process rename_constants(const Process& p, const std::map<std::string, std::string>& m) {
    switch (p.kind()) {
        case Kind::Nil: return p;
        case Kind::Input: return Process::input(p.subject(), p.names(), rename_constants(p.body(), m));
        case Kind::Replicated: return Process::replicated(p.subject(), p.names(), rename_constants(p.body(), m));
        case Kind::Output: return Process::output(p.subject(), p.names(), rename_constants(p.body(), m));
        case Kind::BoundOutput: return Process::bound_output(p.subject(), p.names(), rename_constants(p.body(), m));
        case Kind::Restriction: return Process::restrict(p.restricted(), rename_constants(p.body(), m));
        case Kind::Parallel: return Process::par(rename_constants(p.left(), m), rename_constants(p.right(), m));
        case Kind::Apply: {
            auto it = m.find(p.constant());
            return it == m.end() ? p : Process::apply(it->second, p.names());
        }
    }
    return p;
}

// Tracks subject polarities per binding occurrence.
class Separation {
public:
    Separation(const std::map<std::string, std::vector<pi::Polarity>>& pol, std::vector<std::string>& problems)
        : pol_(pol), problems_(problems) {}

    void run(const std::string& where, const Abstraction& a) {
        where_ = where;
        scopes_.clear();
        use_.clear();
        for (const auto& x : a.params) bind(x.id);
        walk(a.body);
        report();
    }

private:
    struct Use {
        std::string name;
        bool in = false;
        bool out = false;
    };

    void bind(const std::string& id) {
        use_.push_back({id});
        scopes_[id].push_back(use_.size() - 1);
    }

    void unbind(const std::string& id) { scopes_[id].pop_back(); }

    void mark(const std::string& id, bool in) {
        auto it = scopes_.find(id);
        std::size_t slot;
        if (it == scopes_.end() || it->second.empty()) {
            bind(id);
            slot = use_.size() - 1;
        } else {
            slot = it->second.back();
        }
        (in ? use_[slot].in : use_[slot].out) = true;
    }

    void walk(const Process& p) {
        switch (p.kind()) {
            case Kind::Nil: return;
            case Kind::Input:
            case Kind::Replicated:
                mark(p.subject().id, true);
                for (const auto& x : p.names()) bind(x.id);
                walk(p.body());
                for (const auto& x : p.names()) unbind(x.id);
                return;
            case Kind::Output:
                mark(p.subject().id, false);
                walk(p.body());
                return;
            case Kind::BoundOutput:
                mark(p.subject().id, false);
                for (const auto& x : p.names()) bind(x.id);
                walk(p.body());
                for (const auto& x : p.names()) unbind(x.id);
                return;
            case Kind::Restriction:
                bind(p.restricted().id);
                walk(p.body());
                unbind(p.restricted().id);
                return;
            case Kind::Parallel:
                walk(p.left());
                walk(p.right());
                return;
            case Kind::Apply: {
                auto it = pol_.find(p.constant());
                if (it == pol_.end()) return;
                for (std::size_t k = 0; k < p.names().size() && k < it->second.size(); ++k) {
                    if (it->second[k].input) mark(p.names()[k].id, true);
                    if (it->second[k].output) mark(p.names()[k].id, false);
                }
                return;
            }
        }
    }

    void report() {
        for (const auto& u : use_) {
            if (u.in && u.out) problems_.push_back(where_ + ": name " + u.name + " is used both as input and as output subject");
        }
    }

    const std::map<std::string, std::vector<pi::Polarity>>& pol_;
    std::vector<std::string>& problems_;
    std::string where_;
    std::map<std::string, std::vector<std::size_t>> scopes_;
    std::vector<Use> use_;
};

pi::ConstantEnv variables_as_constants(const EquationSystem& sys, const pi::ConstantEnv& env) {
    pi::ConstantEnv out = env;
    for (const auto& e : sys.equations) out.define(e.var, e.body);
    return out;
}

}  // namespace

CheckReport check_guarded(const EquationSystem& sys) {
    CheckReport r;
    for (const auto& e : sys.equations) unguarded(e.body.body, e.var, r.problems);
    r.ok = r.problems.empty();
    return r;
}

CheckReport static_io_separation(const EquationSystem& sys, const pi::ConstantEnv& env) {
    CheckReport r;
    pi::ConstantEnv all = variables_as_constants(sys, env);
    auto pol = pi::parameter_polarities(all);
    Separation s(pol, r.problems);
    for (const auto& e : sys.equations) s.run(e.var, e.body);
    for (const auto& [k, def] : env.definitions()) s.run(k, def);
    r.ok = r.problems.empty();
    return r;
}

SyntacticSolution syntactic_solution(const EquationSystem& sys) {
    SyntacticSolution s;
    for (const auto& e : sys.equations) {
        std::string k = e.var;
        k.replace(0, k.find('_'), e.var.rfind("XV", 0) == 0 ? "KV" : "K");
        s.constant_of[e.var] = k;
    }
    for (const auto& e : sys.equations) {
        s.env.define(s.constant_of.at(e.var), {e.body.params, rename_constants(e.body.body, s.constant_of)});
    }
    return s;
}

Abstraction SyntacticSolution::agent(const EquationSystem& sys, const std::string& var) const {
    const Equation* e = sys.find(var);
    if (e == nullptr) throw std::invalid_argument("no equation for " + var);
    return {e->body.params, Process::apply(constant_of.at(var), e->body.params)};
}

// ---------------------------------------------------------------- divergence

namespace {

class DivergenceScan {
public:
    DivergenceScan(const pi::Lts& lts, std::size_t tau_fuel) : lts_(lts), tau_fuel_(tau_fuel) {}

    static constexpr std::size_t kStateLimit = 20000;

    std::size_t tau_steps = 0;
    bool truncated = false;
    bool bound_hit = false;
    std::optional<std::vector<std::string>> witness;

    void visit(const pi::State& s, std::size_t depth, std::vector<std::string>& prefix) {
        if (witness || truncated) return;
        std::string key = pi::state_key(s);
        auto [it, fresh] = seen_.emplace(key, depth);
        if (!fresh) {
            if (it->second >= depth) return;
            it->second = depth;
        }
        if (seen_.size() > kStateLimit) {
            truncated = true;
            return;
        }
        // Internal closure with cycle detection.
        std::vector<std::pair<std::string, pi::State>> closure;
        std::unordered_map<std::string, int> colour;
        std::vector<std::string> stack;
        std::function<void(const std::string&, const pi::State&, std::size_t)> dfs = [&](const std::string& k, const pi::State& st,
                                                                                        std::size_t level) {
            if (witness || truncated) return;
            colour[k] = 1;
            stack.push_back(k);
            closure.emplace_back(k, st);
            for (auto& t : lts_.tau_steps(st)) {
                ++tau_steps;
                auto c = colour.find(t.target_key);
                if (c != colour.end() && c->second == 1) {
                    auto from = std::find(stack.begin(), stack.end(), t.target_key);
                    std::vector<std::string> w = prefix;
                    w.push_back("tau cycle of length " + std::to_string(stack.end() - from));
                    w.push_back("at " + pi::to_string(t.target));
                    witness = std::move(w);
                    return;
                }
                if (c != colour.end()) continue;
                if (level + 1 > tau_fuel_) {
                    truncated = true;
                    return;
                }
                dfs(t.target_key, t.target, level + 1);
                if (witness || truncated) return;
            }
            stack.pop_back();
            colour[k] = 2;
        };
        dfs(key, s, 0);
        if (witness || truncated) return;
        for (const auto& [k, st] : closure) {
            for (auto& t : lts_.step(st, 0)) {
                if (t.action.kind == pi::Action::Kind::Tau) continue;
                if (depth == 0) {
                    bound_hit = true;
                    return;
                }
                prefix.push_back(pi::to_string(t.action));
                visit(t.target, depth - 1, prefix);
                prefix.pop_back();
                if (witness || truncated) return;
            }
        }
    }

private:
    const pi::Lts& lts_;
    std::size_t tau_fuel_;
    std::unordered_map<std::string, std::size_t> seen_;
};

}  // namespace

DivergenceReport divergence_scan(const Abstraction& agent, const pi::ConstantEnv& env, std::size_t depth,
                                 std::size_t tau_fuel, bool use_static) {
    if (depth == 0 || tau_fuel == 0) throw std::invalid_argument("divergence_scan: bounds must be positive");
    DivergenceReport r;
    if (use_static) {
        EquationSystem single{{{"agent", agent}}};
        if (static_io_separation(single, env).ok) {
            r.static_argument = true;
            r.verdict = EquivalentUpTo{depth, true};
            return r;
        }
    }
    std::set<std::string> avoid = pi::all_ids(agent.body);
    for (const auto& x : agent.params) avoid.insert(x.id);
    Process p = pi::instantiate(agent, equiv::fresh_arguments(agent.params, avoid));
    pi::Lts lts(env, pi::Dialect::Internal);
    DivergenceScan scan(lts, tau_fuel);
    std::vector<std::string> prefix;
    scan.visit(lts.initial(p), depth, prefix);
    r.tau_steps = scan.tau_steps;
    if (scan.witness) {
        r.verdict = Inequivalent{*scan.witness, {pi::to_string(p), "divergent"}};
    } else if (scan.truncated) {
        r.verdict = Unknown{UnknownReason::Truncated, "state or internal-step bound reached"};
    } else {
        r.verdict = EquivalentUpTo{depth, !scan.bound_hit};
    }
    return r;
}

// ---------------------------------------------------------------- solutions

namespace {

Abstraction value_part(const Term& v, const std::vector<std::string>& params) {
    std::set<std::string> names = lambda::all_names(v);
    names.insert(params.begin(), params.end());
    Name p = pi::cont(pi::fresh_id("p", names));
    Process enc = enc::encode_internal(v, p);
    // enc = p!(^y).B
    const Name& y = enc.names().front();
    std::set<std::string> avoid(params.begin(), params.end());
    Name chan = pi::val(pi::fresh_id("z", avoid));
    std::vector<Name> ps{chan};
    for (const auto& x : params) ps.push_back(pi::val(x));
    return {ps, pi::rename(enc.body(), {{y.id, chan}})};
}

Abstraction term_part(const Term& m, const std::vector<std::string>& params) {
    std::set<std::string> names = lambda::all_names(m);
    names.insert(params.begin(), params.end());
    Name p = pi::cont(pi::fresh_id("p", names));
    auto ps = vals(params);
    ps.push_back(p);
    return {ps, enc::encode_internal(m, p)};
}

// E[F~]: every variable application replaced by the instantiated candidate.
Process substitute(const Process& p, const Candidates& f) {
    switch (p.kind()) {
        case Kind::Nil: return p;
        case Kind::Input: return Process::input(p.subject(), p.names(), substitute(p.body(), f));
        case Kind::Replicated: return Process::replicated(p.subject(), p.names(), substitute(p.body(), f));
        case Kind::Output: return Process::output(p.subject(), p.names(), substitute(p.body(), f));
        case Kind::BoundOutput: return Process::bound_output(p.subject(), p.names(), substitute(p.body(), f));
        case Kind::Restriction: return Process::restrict(p.restricted(), substitute(p.body(), f));
        case Kind::Parallel: return Process::par(substitute(p.left(), f), substitute(p.right(), f));
        case Kind::Apply: {
            auto it = f.find(p.constant());
            return it == f.end() ? p : pi::instantiate(it->second, p.names());
        }
    }
    return p;
}

Abstraction substitute(const Abstraction& a, const Candidates& f) { return {a.params, substitute(a.body, f)}; }

const Abstraction& candidate(const Candidates& f, const std::string& var) {
    auto it = f.find(var);
    if (it == f.end()) throw std::invalid_argument("no candidate for " + var);
    return it->second;
}

std::pair<Process, Process> instantiate_both(const Abstraction& a, const Abstraction& b) {
    if (a.params.size() != b.params.size()) throw std::invalid_argument("abstractions of different arity");
    std::set<std::string> avoid = pi::all_ids(a.body);
    auto more = pi::all_ids(b.body);
    avoid.insert(more.begin(), more.end());
    for (const auto& x : a.params) avoid.insert(x.id);
    for (const auto& x : b.params) avoid.insert(x.id);
    auto args = equiv::fresh_arguments(a.params, avoid);
    return {pi::instantiate(a, args), pi::instantiate(b, args)};
}

}  // namespace

Candidates encoding_family(const PairTable& table, bool left) {
    Candidates f;
    for (const auto& e : table.entries) {
        const Term& t = left ? e.left : e.right;
        f[e.var] = e.tag == CaseTag::ValueAux ? value_part(t, e.params) : term_part(t, e.params);
    }
    return f;
}

std::vector<IndexVerdict> verify_solution(const EquationSystem& sys, const Candidates& f, const pi::ConstantEnv& env,
                                          const equiv::BisimConfig& cfg) {
    equiv::BisimConfig c = cfg;
    c.dialect = pi::Dialect::Internal;
    std::vector<IndexVerdict> out;
    for (const auto& e : sys.equations) {
        out.push_back({e.var, equiv::weak_bisim(candidate(f, e.var), substitute(e.body, f), env, c)});
    }
    return out;
}

namespace {

std::vector<IndexVerdict> fixpoint_check(const EquationSystem& sys, const Candidates& f, const pi::ConstantEnv& env,
                                         const TraceBounds& b, bool pre) {
    std::vector<IndexVerdict> out;
    for (const auto& e : sys.equations) {
        auto [fi, ei] = instantiate_both(candidate(f, e.var), substitute(e.body, f));
        Verdict v = pre ? equiv::trace_incl(ei, fi, env, pi::Dialect::Internal, b.max_len, b.tau_fuel)
                        : equiv::trace_incl(fi, ei, env, pi::Dialect::Internal, b.max_len, b.tau_fuel);
        out.push_back({e.var, std::move(v)});
    }
    return out;
}

}  // namespace

std::vector<IndexVerdict> prefix_point_check(const EquationSystem& sys, const Candidates& f, const pi::ConstantEnv& env,
                                             const TraceBounds& b) {
    return fixpoint_check(sys, f, env, b, true);
}

std::vector<IndexVerdict> postfix_point_check(const EquationSystem& sys, const Candidates& f, const pi::ConstantEnv& env,
                                              const TraceBounds& b) {
    return fixpoint_check(sys, f, env, b, false);
}

ExtendsReport check_extends(const EquationSystem& wider, const EquationSystem& narrower,
                            const std::vector<std::string>& extra, const Candidates& f, const pi::ConstantEnv& env,
                            const equiv::BisimConfig& cfg, const TraceBounds& b) {
    std::set<std::string> w;
    for (const auto& v : wider.variables()) w.insert(v);
    std::set<std::string> expected;
    for (const auto& v : narrower.variables()) expected.insert(v);
    for (const auto& v : extra) {
        if (!expected.insert(v).second) throw std::invalid_argument("extra index " + v + " is already an index of the narrower system");
    }
    if (w != expected) throw std::invalid_argument("index sets do not match: the wider system must have the narrower indices plus the extra ones");
    equiv::BisimConfig c = cfg;
    c.dialect = pi::Dialect::Internal;
    ExtendsReport r;
    for (const auto& e : narrower.equations) {
        Abstraction aw = substitute(wider.find(e.var)->body, f);
        Abstraction an = substitute(e.body, f);
        Verdict v = equiv::weak_bisim(aw, an, env, c);
        r.ok = r.ok && v.equivalent();
        r.bisim.push_back({e.var, std::move(v)});
        auto [pw, pn] = instantiate_both(aw, an);
        r.traces.push_back({e.var, equiv::trace_eq(pw, pn, env, pi::Dialect::Internal, b.max_len, b.tau_fuel)});
    }
    return r;
}

}  // namespace eagerpi::eqn
