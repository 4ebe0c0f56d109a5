#include "eagerpi/pi.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace eagerpi::pi {

const char* to_string(Dialect d) {
    switch (d) {
        case Dialect::Full: return "full";
        case Dialect::Internal: return "internal";
        case Dialect::Alpi: return "alpi";
    }
    return "?";
}

std::optional<Dialect> parse_dialect(std::string_view s) {
    if (s == "full" || s == "pi") return Dialect::Full;
    if (s == "internal" || s == "ipi") return Dialect::Internal;
    if (s == "alpi") return Dialect::Alpi;
    return std::nullopt;
}

// ---------------------------------------------------------------- construction

Process Process::make(Node n) { return Process(std::make_shared<const Node>(std::move(n))); }

Process Process::nil() {
    static const Process p = make({Kind::Nil, {}, {}, {}, {}});
    return p;
}

Process Process::input(Name subject, std::vector<Name> objects, Process body) {
    return make({Kind::Input, std::move(subject), std::move(objects), {std::move(body)}, {}});
}

Process Process::output(Name subject, std::vector<Name> objects, Process body) {
    return make({Kind::Output, std::move(subject), std::move(objects), {std::move(body)}, {}});
}

Process Process::bound_output(Name subject, std::vector<Name> objects, Process body) {
    return make({Kind::BoundOutput, std::move(subject), std::move(objects), {std::move(body)}, {}});
}

Process Process::restrict(Name n, Process body) {
    return make({Kind::Restriction, std::move(n), {}, {std::move(body)}, {}});
}

Process Process::restrict(const std::vector<Name>& ns, Process body) {
    for (auto it = ns.rbegin(); it != ns.rend(); ++it) body = restrict(*it, std::move(body));
    return body;
}

Process Process::par(Process l, Process r) {
    return make({Kind::Parallel, {}, {}, {std::move(l), std::move(r)}, {}});
}

Process Process::par(const std::vector<Process>& ps) {
    if (ps.empty()) return nil();
    Process acc = ps.back();
    for (auto it = ps.rbegin() + 1; it != ps.rend(); ++it) acc = par(*it, std::move(acc));
    return acc;
}

Process Process::replicated(Name subject, std::vector<Name> objects, Process body) {
    return make({Kind::Replicated, std::move(subject), std::move(objects), {std::move(body)}, {}});
}

Process Process::apply(std::string constant, std::vector<Name> args) {
    return make({Kind::Apply, {}, std::move(args), {}, std::move(constant)});
}

bool operator==(const Process& a, const Process& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    return x.subject == y.subject && x.names == y.names && x.constant == y.constant && x.children == y.children;
}

// ---------------------------------------------------------------- printing

namespace {

using Kind = Process::Kind;

class Printer {
public:
    // Binders are printed as levels when `levels` is set; free names go through `free_tokens`.
    Printer(bool levels, const std::map<std::string, std::string>* free_tokens)
        : levels_(levels), free_tokens_(free_tokens) {}

    void print(const Process& p, bool in_body) {
        switch (p.kind()) {
            case Kind::Nil: out_ += "0"; return;
            case Kind::Parallel: {
                if (in_body) out_ += "(";
                print(p.left(), false);
                out_ += " | ";
                print(p.right(), false);
                if (in_body) out_ += ")";
                return;
            }
            case Kind::Restriction: {
                out_ += "new ";
                Process cur = p;
                std::size_t pushed = 0;
                bool first = true;
                while (cur.kind() == Kind::Restriction) {
                    if (!first) out_ += ",";
                    first = false;
                    out_ += bind(cur.restricted().id);
                    ++pushed;
                    cur = cur.body();
                }
                out_ += " in ";
                print(cur, true);
                unbind(pushed);
                return;
            }
            case Kind::Apply: {
                out_ += p.constant() + "<";
                names(p.names());
                out_ += ">";
                return;
            }
            case Kind::Input:
            case Kind::Replicated: {
                if (p.kind() == Kind::Replicated) out_ += "!";
                out_ += use(p.subject().id) + "(";
                std::size_t n = bind_all(p.names());
                out_ += ").";
                print(p.body(), true);
                unbind(n);
                return;
            }
            case Kind::Output: {
                out_ += use(p.subject().id) + "!(";
                names(p.names());
                out_ += ")";
                if (!p.body().is_nil()) {
                    out_ += ".";
                    print(p.body(), true);
                }
                return;
            }
            case Kind::BoundOutput: {
                out_ += use(p.subject().id) + "!(^";
                std::size_t n = bind_all(p.names());
                out_ += ").";
                print(p.body(), true);
                unbind(n);
                return;
            }
        }
    }

    std::string take() { return std::move(out_); }

private:
    std::string use(const std::string& id) const {
        if (levels_) {
            for (std::size_t i = scope_.size(); i-- > 0;) {
                if (scope_[i] == id) return "%" + std::to_string(i);
            }
        }
        if (free_tokens_ != nullptr) {
            auto it = free_tokens_->find(id);
            if (it != free_tokens_->end()) return it->second;
        }
        return id;
    }

    std::string bind(const std::string& id) {
        scope_.push_back(id);
        return levels_ ? "%" + std::to_string(scope_.size() - 1) : id;
    }

    std::size_t bind_all(const std::vector<Name>& ns) {
        for (std::size_t i = 0; i < ns.size(); ++i) {
            if (i > 0) out_ += ",";
            out_ += bind(ns[i].id);
        }
        return ns.size();
    }

    void unbind(std::size_t n) { scope_.resize(scope_.size() - n); }

    void names(const std::vector<Name>& ns) {
        for (std::size_t i = 0; i < ns.size(); ++i) {
            if (i > 0) out_ += ",";
            out_ += use(ns[i].id);
        }
    }

    bool levels_;
    const std::map<std::string, std::string>* free_tokens_;
    std::vector<std::string> scope_;
    std::string out_;
};

void collect_free(const Process& p, std::vector<std::string>& bound, std::set<Name>& out) {
    auto add = [&](const Name& n) {
        if (std::find(bound.begin(), bound.end(), n.id) == bound.end()) out.insert(n);
    };
    switch (p.kind()) {
        case Kind::Nil: return;
        case Kind::Parallel:
            collect_free(p.left(), bound, out);
            collect_free(p.right(), bound, out);
            return;
        case Kind::Restriction:
            bound.push_back(p.restricted().id);
            collect_free(p.body(), bound, out);
            bound.pop_back();
            return;
        case Kind::Apply:
            for (const auto& n : p.names()) add(n);
            return;
        case Kind::Output:
            add(p.subject());
            for (const auto& n : p.names()) add(n);
            collect_free(p.body(), bound, out);
            return;
        case Kind::Input:
        case Kind::Replicated:
        case Kind::BoundOutput:
            add(p.subject());
            for (const auto& n : p.names()) bound.push_back(n.id);
            collect_free(p.body(), bound, out);
            bound.resize(bound.size() - p.names().size());
            return;
    }
}

void collect_all(const Process& p, std::set<std::string>& out) {
    switch (p.kind()) {
        case Kind::Nil: return;
        case Kind::Parallel:
            collect_all(p.left(), out);
            collect_all(p.right(), out);
            return;
        case Kind::Restriction:
            out.insert(p.restricted().id);
            collect_all(p.body(), out);
            return;
        case Kind::Apply:
            for (const auto& n : p.names()) out.insert(n.id);
            return;
        default:
            out.insert(p.subject().id);
            for (const auto& n : p.names()) out.insert(n.id);
            collect_all(p.body(), out);
            return;
    }
}

}  // namespace

std::string to_string(const Process& p) {
    Printer pr(false, nullptr);
    pr.print(p, false);
    return pr.take();
}

std::string to_string(const Abstraction& a) {
    std::string s = "(";
    for (std::size_t i = 0; i < a.params.size(); ++i) {
        if (i > 0) s += ",";
        s += a.params[i].id;
    }
    return s + ") " + to_string(a.body);
}

std::string canonical_key(const Process& p, const std::map<std::string, std::string>& free_tokens) {
    Printer pr(true, &free_tokens);
    pr.print(p, false);
    return pr.take();
}

bool alpha_equal(const Process& a, const Process& b) { return canonical_key(a) == canonical_key(b); }

std::set<Name> free_names(const Process& p) {
    std::vector<std::string> bound;
    std::set<Name> out;
    collect_free(p, bound, out);
    return out;
}

std::set<std::string> free_ids(const Process& p) {
    std::set<std::string> out;
    for (const auto& n : free_names(p)) out.insert(n.id);
    return out;
}

std::set<std::string> all_ids(const Process& p) {
    std::set<std::string> out;
    collect_all(p, out);
    return out;
}

std::string fresh_id(const std::string& base, const std::set<std::string>& avoid) {
    std::string stem = base;
    while (stem.size() > 1 && std::isdigit(static_cast<unsigned char>(stem.back()))) stem.pop_back();
    if (stem.empty()) stem = "n";
    if (avoid.count(stem) == 0) return stem;
    for (std::size_t i = 1;; ++i) {
        std::string c = stem + std::to_string(i);
        if (avoid.count(c) == 0) return c;
    }
}

// ---------------------------------------------------------------- substitution

namespace {

class Renamer {
public:
    explicit Renamer(const std::map<std::string, Name>& sub) {
        for (const auto& [k, v] : sub) {
            map_[k] = v;
            range_.insert(v.id);
        }
    }

    Process run(const Process& p) { return go(p); }

private:
    Name apply(const Name& n) const {
        auto it = map_.find(n.id);
        return it == map_.end() ? n : it->second;
    }

    std::vector<Name> apply_all(const std::vector<Name>& ns) const {
        std::vector<Name> out;
        out.reserve(ns.size());
        for (const auto& n : ns) out.push_back(apply(n));
        return out;
    }

    // Enters the scope of `binders`: shadows them and renames those that would capture.
    struct Saved {
        std::vector<std::pair<std::string, std::optional<Name>>> entries;
    };

    std::vector<Name> enter(const std::vector<Name>& binders, const Process& body, Saved& saved) {
        std::vector<Name> out;
        std::set<std::string> avoid;
        bool need_avoid = false;
        for (const auto& b : binders) need_avoid = need_avoid || range_.count(b.id) != 0;
        if (need_avoid) {
            avoid = all_ids(body);
            avoid.insert(range_.begin(), range_.end());
            for (const auto& [k, v] : map_) avoid.insert(k);
            for (const auto& b : binders) avoid.insert(b.id);
        }
        for (const auto& b : binders) {
            auto it = map_.find(b.id);
            saved.entries.emplace_back(b.id, it == map_.end() ? std::nullopt : std::optional<Name>(it->second));
            if (range_.count(b.id) != 0) {
                Name fresh{fresh_id(b.id, avoid), b.sort};
                avoid.insert(fresh.id);
                range_.insert(fresh.id);
                map_[b.id] = fresh;
                out.push_back(fresh);
            } else {
                map_.erase(b.id);
                out.push_back(b);
            }
        }
        return out;
    }

    void leave(Saved& saved) {
        for (auto it = saved.entries.rbegin(); it != saved.entries.rend(); ++it) {
            if (it->second) {
                map_[it->first] = *it->second;
            } else {
                map_.erase(it->first);
            }
        }
    }

    Process go(const Process& p) {
        if (map_.empty()) return p;
        switch (p.kind()) {
            case Kind::Nil: return p;
            case Kind::Parallel: return Process::par(go(p.left()), go(p.right()));
            case Kind::Apply: return Process::apply(p.constant(), apply_all(p.names()));
            case Kind::Output: return Process::output(apply(p.subject()), apply_all(p.names()), go(p.body()));
            case Kind::Restriction: {
                Saved s;
                auto b = enter({p.restricted()}, p.body(), s);
                Process body = go(p.body());
                leave(s);
                return Process::restrict(b[0], body);
            }
            case Kind::Input:
            case Kind::Replicated:
            case Kind::BoundOutput: {
                Name subj = apply(p.subject());
                Saved s;
                auto b = enter(p.names(), p.body(), s);
                Process body = go(p.body());
                leave(s);
                if (p.kind() == Kind::Input) return Process::input(subj, b, body);
                if (p.kind() == Kind::Replicated) return Process::replicated(subj, b, body);
                return Process::bound_output(subj, b, body);
            }
        }
        return p;
    }

    std::map<std::string, Name> map_;
    std::set<std::string> range_;
};

}  // namespace

Process rename(const Process& p, const std::map<std::string, Name>& sub) {
    if (sub.empty()) return p;
    return Renamer(sub).run(p);
}

Process instantiate(const Abstraction& a, const std::vector<Name>& args) {
    if (args.size() != a.params.size()) {
        throw std::invalid_argument("abstraction expects " + std::to_string(a.params.size()) + " arguments, got " +
                                    std::to_string(args.size()));
    }
    std::map<std::string, Name> sub;
    for (std::size_t i = 0; i < args.size(); ++i) sub[a.params[i].id] = args[i];
    return rename(a.body, sub);
}

// ---------------------------------------------------------------- constants

Process forwarder(const Name& a, const Name& b) { return Process::apply(ConstantEnv::kForwarder, {a, b}); }

Process forwarder_body(const Name& a, const Name& b) {
    SortInfo info = sort_info(a.sort);
    std::set<std::string> avoid{a.id, b.id};
    std::vector<Name> xs, ys;
    for (SortId s : info.payload) {
        xs.push_back({fresh_id("x", avoid), s});
        avoid.insert(xs.back().id);
    }
    for (SortId s : info.payload) {
        ys.push_back({fresh_id("y", avoid), s});
        avoid.insert(ys.back().id);
    }
    std::vector<Process> links;
    for (std::size_t i = 0; i < xs.size(); ++i) links.push_back(forwarder(ys[i], xs[i]));
    Process inner = Process::bound_output(b, ys, Process::par(links));
    if (info.linear) return Process::input(a, xs, inner);
    return Process::replicated(a, xs, inner);
}

void ConstantEnv::define(const std::string& name, Abstraction def) {
    if (name == kForwarder) throw std::invalid_argument("fwd is built in and cannot be redefined");
    std::set<std::string> params;
    for (const auto& p : def.params) {
        if (!params.insert(p.id).second) throw std::invalid_argument("repeated parameter " + p.id + " in " + name);
    }
    for (const auto& n : free_ids(def.body)) {
        if (params.count(n) == 0) throw std::invalid_argument("definition of " + name + " is not name-closed: free name " + n);
    }
    defs_[name] = std::move(def);
}

bool ConstantEnv::contains(const std::string& name) const { return name == kForwarder || defs_.count(name) != 0; }

const Abstraction* ConstantEnv::find(const std::string& name) const {
    auto it = defs_.find(name);
    return it == defs_.end() ? nullptr : &it->second;
}

Process ConstantEnv::unfold(const Process& application) const {
    if (application.kind() != Kind::Apply) throw std::invalid_argument("unfold expects a constant application");
    const auto& args = application.names();
    if (application.constant() == kForwarder) {
        if (args.size() != 2) throw std::invalid_argument("fwd expects 2 arguments");
        return forwarder_body(args[0], args[1]);
    }
    const Abstraction* def = find(application.constant());
    if (def == nullptr) throw std::invalid_argument("undefined constant " + application.constant());
    return instantiate(*def, args);
}

void ConstantEnv::merge(const ConstantEnv& other) {
    for (const auto& [k, v] : other.defs_) defs_[k] = v;
}

// ---------------------------------------------------------------- analyses

std::map<std::string, std::vector<Polarity>> parameter_polarities(const ConstantEnv& env) {
    std::map<std::string, std::vector<Polarity>> pol;
    pol[ConstantEnv::kForwarder] = {{true, false}, {false, true}};
    for (const auto& [k, def] : env.definitions()) pol[k] = std::vector<Polarity>(def.params.size());

    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [k, def] : env.definitions()) {
            // Tracks which parameter each name in scope stands for (-1: not a parameter).
            std::map<std::string, int> index;
            for (std::size_t i = 0; i < def.params.size(); ++i) index[def.params[i].id] = static_cast<int>(i);
            auto& mine = pol[k];
            auto mark = [&](const std::string& id, bool in, bool out) {
                auto it = index.find(id);
                if (it == index.end() || it->second < 0) return;
                auto& slot = mine[static_cast<std::size_t>(it->second)];
                if (in && !slot.input) slot.input = changed = true;
                if (out && !slot.output) slot.output = changed = true;
            };
            std::function<void(const Process&)> walk = [&](const Process& p) {
                auto shadow = [&](const std::vector<Name>& ns, const Process& body) {
                    std::vector<std::pair<std::string, std::optional<int>>> saved;
                    for (const auto& n : ns) {
                        auto it = index.find(n.id);
                        saved.emplace_back(n.id, it == index.end() ? std::nullopt : std::optional<int>(it->second));
                        index[n.id] = -1;
                    }
                    walk(body);
                    for (auto it = saved.rbegin(); it != saved.rend(); ++it) {
                        if (it->second) {
                            index[it->first] = *it->second;
                        } else {
                            index.erase(it->first);
                        }
                    }
                };
                switch (p.kind()) {
                    case Kind::Nil: return;
                    case Kind::Parallel: walk(p.left()); walk(p.right()); return;
                    case Kind::Restriction: shadow({p.restricted()}, p.body()); return;
                    case Kind::Output: mark(p.subject().id, false, true); walk(p.body()); return;
                    case Kind::BoundOutput: mark(p.subject().id, false, true); shadow(p.names(), p.body()); return;
                    case Kind::Input:
                    case Kind::Replicated: mark(p.subject().id, true, false); shadow(p.names(), p.body()); return;
                    case Kind::Apply: {
                        auto it = pol.find(p.constant());
                        if (it == pol.end()) return;
                        const auto callee = it->second;
                        for (std::size_t i = 0; i < p.names().size() && i < callee.size(); ++i) {
                            mark(p.names()[i].id, callee[i].input, callee[i].output);
                        }
                        return;
                    }
                }
            };
            walk(def.body);
        }
    }
    return pol;
}

namespace {

// Collects constants reachable from p through env definitions.
void reachable_constants(const Process& p, const ConstantEnv& env, std::set<std::string>& seen) {
    switch (p.kind()) {
        case Kind::Nil: return;
        case Kind::Parallel:
            reachable_constants(p.left(), env, seen);
            reachable_constants(p.right(), env, seen);
            return;
        case Kind::Apply: {
            if (!seen.insert(p.constant()).second) return;
            if (const auto* def = env.find(p.constant())) reachable_constants(def->body, env, seen);
            return;
        }
        default: reachable_constants(p.body(), env, seen); return;
    }
}

bool distinct(const std::vector<Name>& ns) {
    std::set<std::string> s;
    for (const auto& n : ns) {
        if (!s.insert(n.id).second) return false;
    }
    return true;
}

void check_internal(const Process& p, const std::string& where, std::vector<std::string>& out) {
    switch (p.kind()) {
        case Kind::Nil: return;
        case Kind::Parallel:
            check_internal(p.left(), where, out);
            check_internal(p.right(), where, out);
            return;
        case Kind::Restriction: check_internal(p.body(), where, out); return;
        case Kind::Apply: return;
        case Kind::Output:
            if (!p.names().empty()) out.push_back(where + "free output on " + p.subject().id);
            if (!distinct(p.names())) out.push_back(where + "repeated component in output on " + p.subject().id);
            check_internal(p.body(), where, out);
            return;
        default:
            if (!distinct(p.names())) out.push_back(where + "repeated component in tuple at " + p.subject().id);
            check_internal(p.body(), where, out);
            return;
    }
}

struct AlpiChecker {
    const std::map<std::string, std::vector<Polarity>>& pol;
    std::vector<std::string>& out;
    std::string where;

    void walk(const Process& p, std::set<std::string> received) {
        switch (p.kind()) {
            case Kind::Nil: return;
            case Kind::Parallel:
                walk(p.left(), received);
                walk(p.right(), received);
                return;
            case Kind::Restriction:
                received.erase(p.restricted().id);
                walk(p.body(), received);
                return;
            case Kind::Output:
                if (!p.body().is_nil()) out.push_back(where + "output on " + p.subject().id + " has a continuation");
                return;
            case Kind::BoundOutput:
                for (const auto& n : p.names()) received.erase(n.id);
                walk(p.body(), received);
                return;
            case Kind::Input:
            case Kind::Replicated:
                if (received.count(p.subject().id) != 0) {
                    out.push_back(where + "received name " + p.subject().id + " used as input subject");
                }
                for (const auto& n : p.names()) received.insert(n.id);
                walk(p.body(), received);
                return;
            case Kind::Apply: {
                auto it = pol.find(p.constant());
                if (it == pol.end()) return;
                for (std::size_t i = 0; i < p.names().size() && i < it->second.size(); ++i) {
                    if (it->second[i].input && received.count(p.names()[i].id) != 0) {
                        out.push_back(where + "received name " + p.names()[i].id + " passed to an input position of " +
                                      p.constant());
                    }
                }
                return;
            }
        }
    }
};

void check_sorts(const Process& p, const ConstantEnv& env, std::vector<std::string>& out) {
    auto sort_name = [](SortId s) { return sort_info(s).name; };
    switch (p.kind()) {
        case Kind::Nil: return;
        case Kind::Parallel:
            check_sorts(p.left(), env, out);
            check_sorts(p.right(), env, out);
            return;
        case Kind::Restriction: check_sorts(p.body(), env, out); return;
        case Kind::Apply: {
            const auto& args = p.names();
            if (p.constant() == ConstantEnv::kForwarder) {
                if (args.size() != 2) {
                    out.push_back("fwd applied to " + std::to_string(args.size()) + " names");
                } else if (args[0].sort != args[1].sort) {
                    out.push_back("fwd<" + args[0].id + "," + args[1].id + "> joins names of sorts " +
                                  sort_name(args[0].sort) + " and " + sort_name(args[1].sort));
                }
                return;
            }
            const auto* def = env.find(p.constant());
            if (def == nullptr) {
                out.push_back("undefined constant " + p.constant());
                return;
            }
            if (def->params.size() != args.size()) {
                out.push_back(p.constant() + " applied to " + std::to_string(args.size()) + " names, expects " +
                              std::to_string(def->params.size()));
                return;
            }
            for (std::size_t i = 0; i < args.size(); ++i) {
                if (args[i].sort != def->params[i].sort) {
                    out.push_back("argument " + args[i].id + " of " + p.constant() + " has sort " + sort_name(args[i].sort) +
                                  ", expected " + sort_name(def->params[i].sort));
                }
            }
            return;
        }
        default: {
            SortInfo info = sort_info(p.subject().sort);
            if (info.payload.size() != p.names().size()) {
                out.push_back("subject " + p.subject().id + " of sort " + info.name + " carries " +
                              std::to_string(info.payload.size()) + " names, used with " + std::to_string(p.names().size()));
            } else {
                for (std::size_t i = 0; i < info.payload.size(); ++i) {
                    if (p.names()[i].sort != info.payload[i]) {
                        out.push_back("object " + p.names()[i].id + " at " + p.subject().id + " has sort " +
                                      sort_name(p.names()[i].sort) + ", expected " + sort_name(info.payload[i]));
                    }
                }
            }
            check_sorts(p.body(), env, out);
            return;
        }
    }
}

}  // namespace

ValidationReport validate_internal(const Process& p, const ConstantEnv* env) {
    ValidationReport r;
    check_internal(p, "", r.violations);
    if (env != nullptr) {
        std::set<std::string> seen;
        reachable_constants(p, *env, seen);
        for (const auto& k : seen) {
            if (const auto* def = env->find(k)) check_internal(def->body, "in " + k + ": ", r.violations);
        }
    }
    return r;
}

ValidationReport validate_alpi(const Process& p, const ConstantEnv* env) {
    ValidationReport r;
    ConstantEnv empty;
    auto pol = parameter_polarities(env != nullptr ? *env : empty);
    AlpiChecker{pol, r.violations, ""}.walk(p, {});
    if (env != nullptr) {
        std::set<std::string> seen;
        reachable_constants(p, *env, seen);
        for (const auto& k : seen) {
            if (const auto* def = env->find(k)) AlpiChecker{pol, r.violations, "in " + k + ": "}.walk(def->body, {});
        }
    }
    return r;
}

ValidationReport validate_sorts(const Process& p, const ConstantEnv& env) {
    ValidationReport r;
    check_sorts(p, env, r.violations);
    std::set<std::string> seen;
    reachable_constants(p, env, seen);
    for (const auto& k : seen) {
        const auto* def = env.find(k);
        if (def == nullptr) continue;
        std::vector<std::string> inner;
        check_sorts(def->body, env, inner);
        for (auto& v : inner) r.violations.push_back("in " + k + ": " + v);
    }
    return r;
}

ValidationReport validate(const Process& p, const ConstantEnv& env, Dialect d) {
    ValidationReport r = validate_sorts(p, env);
    ValidationReport extra;
    if (d == Dialect::Internal) extra = validate_internal(p, &env);
    if (d == Dialect::Alpi) extra = validate_alpi(p, &env);
    r.violations.insert(r.violations.end(), extra.violations.begin(), extra.violations.end());
    return r;
}

std::set<std::string> free_input_subjects(const Process& p, const ConstantEnv* env) {
    ConstantEnv empty;
    auto pol = parameter_polarities(env != nullptr ? *env : empty);
    std::set<std::string> out;
    std::function<void(const Process&, std::set<std::string>&)> walk = [&](const Process& q, std::set<std::string>& bound) {
        auto scoped = [&](const std::vector<Name>& ns, const Process& body) {
            std::vector<std::string> added;
            for (const auto& n : ns) {
                if (bound.insert(n.id).second) added.push_back(n.id);
            }
            walk(body, bound);
            for (const auto& a : added) bound.erase(a);
        };
        switch (q.kind()) {
            case Kind::Nil: return;
            case Kind::Parallel: walk(q.left(), bound); walk(q.right(), bound); return;
            case Kind::Restriction: scoped({q.restricted()}, q.body()); return;
            case Kind::Output: walk(q.body(), bound); return;
            case Kind::BoundOutput: scoped(q.names(), q.body()); return;
            case Kind::Input:
            case Kind::Replicated:
                if (bound.count(q.subject().id) == 0) out.insert(q.subject().id);
                scoped(q.names(), q.body());
                return;
            case Kind::Apply: {
                auto it = pol.find(q.constant());
                if (it == pol.end()) return;
                for (std::size_t i = 0; i < q.names().size() && i < it->second.size(); ++i) {
                    if (it->second[i].input && bound.count(q.names()[i].id) == 0) out.insert(q.names()[i].id);
                }
                return;
            }
        }
    };
    std::set<std::string> bound;
    walk(p, bound);
    return out;
}

}  // namespace eagerpi::pi
