#include "eagerpi/lts.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <stdexcept>

namespace eagerpi::pi {

using Kind = Process::Kind;

bool operator==(const Action& a, const Action& b) {
    return a.kind == b.kind && a.subject == b.subject && a.objects == b.objects && a.bound == b.bound;
}

std::string to_string(const Action& a) {
    if (a.kind == Action::Kind::Tau) return "tau";
    std::string s = a.subject.id + (a.kind == Action::Kind::Out ? "!(" : "(");
    for (std::size_t i = 0; i < a.objects.size(); ++i) {
        if (i > 0) s += ",";
        if (a.kind == Action::Kind::Out && i < a.bound.size() && a.bound[i]) s += "^";
        s += a.objects[i].id;
    }
    return s + ")";
}

Process to_process(const State& s) { return Process::restrict(s.restricted, Process::par(s.threads)); }

std::string to_string(const State& s) { return to_string(to_process(s)); }

std::set<std::string> free_ids(const State& s) {
    std::set<std::string> out;
    for (const auto& t : s.threads) {
        for (const auto& n : free_names(t)) out.insert(n.id);
    }
    for (const auto& r : s.restricted) out.erase(r.id);
    return out;
}

namespace {

bool label_like(const std::string& id) {
    if (id.size() < 2 || id[0] != '_') return false;
    return std::all_of(id.begin() + 1, id.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; });
}

// Free names of p in order of first occurrence (printing order).
void ordered_free(const Process& p, std::vector<std::string>& bound, std::vector<std::string>& out) {
    auto use = [&](const Name& n) {
        if (std::find(bound.begin(), bound.end(), n.id) != bound.end()) return;
        if (std::find(out.begin(), out.end(), n.id) == out.end()) out.push_back(n.id);
    };
    switch (p.kind()) {
        case Kind::Nil: return;
        case Kind::Parallel:
            ordered_free(p.left(), bound, out);
            ordered_free(p.right(), bound, out);
            return;
        case Kind::Restriction:
            bound.push_back(p.restricted().id);
            ordered_free(p.body(), bound, out);
            bound.pop_back();
            return;
        case Kind::Apply:
            for (const auto& n : p.names()) use(n);
            return;
        case Kind::Output:
            use(p.subject());
            for (const auto& n : p.names()) use(n);
            ordered_free(p.body(), bound, out);
            return;
        default:
            use(p.subject());
            for (const auto& n : p.names()) bound.push_back(n.id);
            ordered_free(p.body(), bound, out);
            bound.resize(bound.size() - p.names().size());
            return;
    }
}

constexpr int kUnfoldBudget = 256;

// Full pi: a(^b).P becomes new b in a!(b).P at every depth.
Process desugar_bound_outputs(const Process& p) {
    switch (p.kind()) {
        case Kind::Nil:
        case Kind::Apply: return p;
        case Kind::Input: return Process::input(p.subject(), p.names(), desugar_bound_outputs(p.body()));
        case Kind::Replicated: return Process::replicated(p.subject(), p.names(), desugar_bound_outputs(p.body()));
        case Kind::Output: return Process::output(p.subject(), p.names(), desugar_bound_outputs(p.body()));
        case Kind::BoundOutput:
            return Process::restrict(p.names(), Process::output(p.subject(), p.names(), desugar_bound_outputs(p.body())));
        case Kind::Restriction: return Process::restrict(p.restricted(), desugar_bound_outputs(p.body()));
        case Kind::Parallel: return Process::par(desugar_bound_outputs(p.left()), desugar_bound_outputs(p.right()));
    }
    return p;
}

bool contains(const std::vector<Name>& ns, const std::string& id) {
    return std::any_of(ns.begin(), ns.end(), [&](const Name& n) { return n.id == id; });
}

// Every top-level thread of p waits for an input on one of `ys`.
bool guarded_by(const Process& p, const std::vector<Name>& ys) {
    switch (p.kind()) {
        case Kind::Nil: return true;
        case Kind::Parallel: return guarded_by(p.left(), ys) && guarded_by(p.right(), ys);
        case Kind::Restriction: return !contains(ys, p.restricted().id) && guarded_by(p.body(), ys);
        case Kind::Input:
        case Kind::Replicated: return contains(ys, p.subject().id);
        case Kind::Apply: return p.constant() == ConstantEnv::kForwarder && contains(ys, p.names()[0].id);
        default: return false;
    }
}

// Free occurrences of a in p are outputs only, each with a continuation that stays inert
// until the emitted names are received.
bool output_only(const Process& p, const std::string& a) {
    switch (p.kind()) {
        case Kind::Nil: return true;
        case Kind::Parallel: return output_only(p.left(), a) && output_only(p.right(), a);
        case Kind::Restriction: return p.restricted().id == a || output_only(p.body(), a);
        case Kind::Input:
        case Kind::Replicated:
            if (p.subject().id == a) return false;
            return contains(p.names(), a) || output_only(p.body(), a);
        case Kind::Output:
            if (contains(p.names(), a)) return false;
            if (p.subject().id == a && !p.body().is_nil()) return false;
            return output_only(p.body(), a);
        case Kind::BoundOutput:
            if (contains(p.names(), a)) return p.subject().id != a || guarded_by(p.body(), p.names());
            if (p.subject().id == a && !guarded_by(p.body(), p.names())) return false;
            return output_only(p.body(), a);
        case Kind::Apply:
            if (p.constant() == ConstantEnv::kForwarder) return p.names()[0].id != a;
            return !contains(p.names(), a);
    }
    return false;
}

// Target of t when t is the unfolded forwarder from its subject.
std::optional<Name> forwarder_target(const Process& t) {
    if (!t.is_input() || t.body().kind() != Kind::BoundOutput) return std::nullopt;
    Name b = t.body().subject();
    if (b.id == t.subject().id) return std::nullopt;
    if (canonical_key(t) != canonical_key(forwarder_body(t.subject(), b))) return std::nullopt;
    return b;
}

// Occurrences of a channel in a state, by position.
struct Uses {
    std::vector<std::size_t> in_top;
    std::vector<std::size_t> out_top;
    bool replicated = false;
    std::size_t in_nested = 0;
    std::size_t out_nested = 0;
    std::size_t objects = 0;
    std::size_t opaque = 0;
};

void count_uses(const Process& p, const std::string& c, std::size_t thread, bool top, Uses& u) {
    auto shadowed = [&](const std::vector<Name>& ns) { return contains(ns, c); };
    switch (p.kind()) {
        case Kind::Nil: return;
        case Kind::Parallel:
            count_uses(p.left(), c, thread, false, u);
            count_uses(p.right(), c, thread, false, u);
            return;
        case Kind::Restriction:
            if (p.restricted().id != c) count_uses(p.body(), c, thread, false, u);
            return;
        case Kind::Input:
        case Kind::Replicated:
            if (p.subject().id == c) {
                if (top) {
                    u.in_top.push_back(thread);
                    u.replicated = p.kind() == Kind::Replicated;
                } else {
                    ++u.in_nested;
                }
            }
            if (!shadowed(p.names())) count_uses(p.body(), c, thread, false, u);
            return;
        case Kind::Output:
            if (p.subject().id == c) {
                if (top) u.out_top.push_back(thread);
                else ++u.out_nested;
            }
            u.objects += static_cast<std::size_t>(std::count(p.names().begin(), p.names().end(), Name{c, kVal}));
            count_uses(p.body(), c, thread, false, u);
            return;
        case Kind::BoundOutput:
            if (p.subject().id == c) {
                if (top) u.out_top.push_back(thread);
                else ++u.out_nested;
            }
            if (!shadowed(p.names())) count_uses(p.body(), c, thread, false, u);
            return;
        case Kind::Apply:
            for (std::size_t k = 0; k < p.names().size(); ++k) {
                if (p.names()[k].id != c) continue;
                if (p.constant() != ConstantEnv::kForwarder) ++u.opaque;
                else if (k == 0) ++u.in_nested;
                else ++u.out_nested;
            }
            return;
    }
}

class Builder {
public:
    Builder(const ConstantEnv& env, Dialect d) : env_(env), dialect_(d) {}

    std::vector<Name> restricted;
    std::vector<Process> threads;
    std::set<std::string> taken;

    void add(const Process& p, int budget = kUnfoldBudget) {
        switch (p.kind()) {
            case Kind::Nil: return;
            case Kind::Parallel:
                add(p.left(), budget);
                add(p.right(), budget);
                return;
            case Kind::Restriction: {
                Name n = p.restricted();
                Process body = p.body();
                if (taken.count(n.id) != 0 || label_like(n.id)) {
                    Name m{fresh_id(label_like(n.id) ? "v" : n.id, taken), n.sort};
                    body = rename(body, {{n.id, m}});
                    n = m;
                }
                taken.insert(n.id);
                restricted.push_back(n);
                add(body, budget);
                return;
            }
            case Kind::BoundOutput:
                if (dialect_ == Dialect::Alpi) {
                    add(Process::restrict(p.names(), Process::par(Process::output(p.subject(), p.names()), p.body())), budget);
                } else if (dialect_ == Dialect::Full) {
                    add(desugar_bound_outputs(p), budget);
                } else {
                    threads.push_back(p);
                }
                return;
            case Kind::Apply:
                if (budget == 0) throw std::runtime_error("unguarded recursion while unfolding " + p.constant());
                add(env_.unfold(p), budget - 1);
                return;
            default: threads.push_back(dialect_ == Dialect::Full ? desugar_bound_outputs(p) : p); return;
        }
    }

    // Removes unused restrictions and threads stuck on a private channel nobody else can use.
    void collect_garbage() {
        bool changed = true;
        while (changed) {
            changed = false;
            std::vector<std::set<std::string>> fn;
            fn.reserve(threads.size());
            for (const auto& t : threads) fn.push_back(free_ids(t));
            std::vector<bool> drop(threads.size(), false);
            std::vector<Name> kept;
            for (const auto& r : restricted) {
                std::vector<std::size_t> users;
                for (std::size_t i = 0; i < threads.size(); ++i) {
                    if (!drop[i] && fn[i].count(r.id) != 0) users.push_back(i);
                }
                if (users.empty()) {
                    changed = true;
                    continue;
                }
                bool all_subject = true;
                bool all_in = true;
                bool all_out = true;
                for (auto i : users) {
                    all_subject = all_subject && threads[i].subject().id == r.id;
                    all_in = all_in && threads[i].is_input();
                    all_out = all_out && threads[i].is_output();
                }
                if (all_subject && (all_in || all_out)) {
                    for (auto i : users) drop[i] = true;
                    changed = true;
                    continue;
                }
                kept.push_back(r);
            }
            if (!changed) break;
            std::vector<Process> live;
            for (std::size_t i = 0; i < threads.size(); ++i) {
                if (!drop[i]) live.push_back(threads[i]);
            }
            threads = std::move(live);
            restricted = std::move(kept);
        }
    }

    // Internal pi only: a private forwarder a -> b is dropped and a replaced by b,
    // provided every other use of a is an output.
    void contract_links() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t i = 0; i < threads.size() && !changed; ++i) {
                auto b = forwarder_target(threads[i]);
                if (!b) continue;
                const Name a = threads[i].subject();
                auto r = std::find_if(restricted.begin(), restricted.end(), [&](const Name& n) { return n.id == a.id; });
                if (r == restricted.end()) continue;
                bool ok = true;
                for (std::size_t j = 0; j < threads.size() && ok; ++j) {
                    if (j != i) ok = output_only(threads[j], a.id);
                }
                if (!ok) continue;
                restricted.erase(r);
                threads.erase(threads.begin() + static_cast<std::ptrdiff_t>(i));
                for (auto& t : threads) t = rename(t, {{a.id, *b}});
                changed = true;
            }
            for (std::size_t i = 0; i < threads.size() && !changed; ++i) changed = absorb(i);
        }
    }

    // A forwarder a -> y into a private server on y, with y used nowhere else, becomes the
    // server on a, provided the server uses what it receives only as outputs.
    bool absorb(std::size_t i) {
        auto y = forwarder_target(threads[i]);
        if (!y) return false;
        auto r = std::find_if(restricted.begin(), restricted.end(), [&](const Name& n) { return n.id == y->id; });
        if (r == restricted.end()) return false;
        Uses u;
        for (std::size_t k = 0; k < threads.size(); ++k) count_uses(threads[k], y->id, k, true, u);
        if (u.in_top.size() != 1 || u.in_nested != 0 || u.out_top.size() != 0 || u.out_nested != 1 || u.objects != 0 || u.opaque != 0) {
            return false;
        }
        const std::size_t j = u.in_top.front();
        const Process& server = threads[j];
        if (server.kind() != threads[i].kind()) return false;
        for (const auto& x : server.names()) {
            if (!output_only(server.body(), x.id)) return false;
        }
        Process moved = rename(server, {{y->id, threads[i].subject()}});
        restricted.erase(r);
        threads[j] = moved;
        threads.erase(threads.begin() + static_cast<std::ptrdiff_t>(i));
        return true;
    }

    State finish() {
        if (dialect_ == Dialect::Internal) contract_links();
        collect_garbage();
        std::map<std::string, std::string> anon;
        for (const auto& r : restricted) anon[r.id] = "#";
        std::vector<std::pair<std::string, Process>> keyed;
        keyed.reserve(threads.size());
        for (auto& t : threads) keyed.emplace_back(canonical_key(t, anon), std::move(t));
        std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        State s;
        for (auto& [k, t] : keyed) s.threads.push_back(std::move(t));
        // Restricted names in order of first occurrence.
        std::vector<std::string> order;
        std::vector<std::string> bound;
        for (const auto& t : s.threads) ordered_free(t, bound, order);
        for (const auto& id : order) {
            for (const auto& r : restricted) {
                if (r.id == id) s.restricted.push_back(r);
            }
        }
        return s;
    }

private:
    const ConstantEnv& env_;
    Dialect dialect_;
};

Name fresh_label(std::size_t& counter, SortId sort) { return {"_" + std::to_string(counter++), sort}; }

}  // namespace

std::string state_key(const State& s) {
    std::map<std::string, std::string> tokens;
    std::set<std::string> restricted;
    for (const auto& r : s.restricted) restricted.insert(r.id);
    std::vector<std::string> order;
    std::vector<std::string> bound;
    for (const auto& t : s.threads) ordered_free(t, bound, order);
    for (const auto& id : order) {
        if (restricted.count(id) != 0 && tokens.count(id) == 0) tokens[id] = "#" + std::to_string(tokens.size());
    }
    std::string key;
    for (std::size_t i = 0; i < s.threads.size(); ++i) {
        if (i > 0) key += " | ";
        key += canonical_key(s.threads[i], tokens);
    }
    return key;
}

std::vector<State> components(const State& s) {
    const std::size_t n = s.threads.size();
    std::vector<std::size_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    std::vector<std::set<std::string>> fn;
    for (const auto& t : s.threads) fn.push_back(free_ids(t));
    for (const auto& r : s.restricted) {
        std::optional<std::size_t> first;
        for (std::size_t i = 0; i < n; ++i) {
            if (fn[i].count(r.id) == 0) continue;
            if (first) parent[find(i)] = find(*first);
            else first = i;
        }
    }
    std::map<std::size_t, State> groups;
    for (std::size_t i = 0; i < n; ++i) groups[find(i)].threads.push_back(s.threads[i]);
    std::vector<State> out;
    for (auto& [root, g] : groups) {
        for (const auto& r : s.restricted) {
            for (std::size_t i = 0; i < n; ++i) {
                if (find(i) == root && fn[i].count(r.id) != 0) {
                    g.restricted.push_back(r);
                    break;
                }
            }
        }
        out.push_back(std::move(g));
    }
    return out;
}

std::size_t fresh_base(const std::set<std::string>& ids) {
    std::size_t base = 0;
    for (const auto& id : ids) {
        if (label_like(id)) base = std::max(base, static_cast<std::size_t>(std::stoull(id.substr(1))) + 1);
    }
    return base;
}

State Lts::initial(const Process& p) const {
    Builder b(env_, dialect_);
    b.taken = free_ids(p);
    b.add(p);
    return b.finish();
}

std::vector<Transition> Lts::step(const State& s, std::size_t first_fresh) const {
    auto out = generate(s, first_fresh, true);
    auto taus = generate(s, first_fresh, false);
    out.insert(out.end(), std::make_move_iterator(taus.begin()), std::make_move_iterator(taus.end()));
    return out;
}

std::vector<Transition> Lts::tau_steps(const State& s) const { return generate(s, 0, false); }

std::vector<Transition> Lts::generate(const State& s, std::size_t first_fresh, bool visible, const std::pair<std::size_t, std::size_t>* only) const {
    std::set<std::string> restricted;
    for (const auto& r : s.restricted) restricted.insert(r.id);
    std::set<std::string> fn = free_ids(s);
    first_fresh = std::max(first_fresh, fresh_base(fn));

    std::vector<Transition> out;
    std::set<std::pair<std::string, std::string>> seen;

    // Builds the target from the untouched threads (renamed by `global`) plus new processes.
    auto emit = [&](Action act, std::vector<std::size_t> removed, std::vector<Process> added,
                    const std::map<std::string, Name>& global, std::vector<Name> extra_restricted,
                    const std::set<std::string>& unrestrict) {
        Builder b(env_, dialect_);
        for (const auto& r : s.restricted) {
            if (unrestrict.count(r.id) == 0) b.restricted.push_back(r);
        }
        for (auto& r : extra_restricted) b.restricted.push_back(r);
        for (std::size_t i = 0; i < s.threads.size(); ++i) {
            if (std::find(removed.begin(), removed.end(), i) == removed.end()) b.threads.push_back(rename(s.threads[i], global));
        }
        for (auto& p : added) p = rename(p, global);
        for (const auto& r : b.restricted) b.taken.insert(r.id);
        for (const auto& t : b.threads) {
            for (const auto& n : free_names(t)) b.taken.insert(n.id);
        }
        for (const auto& p : added) {
            for (const auto& n : free_names(p)) b.taken.insert(n.id);
        }
        for (const auto& p : added) b.add(p);
        State target = b.finish();
        std::string key = state_key(target);
        if (!seen.emplace(to_string(act), key).second) return;
        out.push_back({std::move(act), std::move(target), std::move(key)});
    };

    if (visible) {
        // In ALpi the environment holds only the output capability of names the process
        // receives on, so outputs on them are internal.
        std::set<std::string> owned;
        if (dialect_ == Dialect::Alpi) {
            for (const auto& t : s.threads) {
                auto in = free_input_subjects(t, &env_);
                owned.insert(in.begin(), in.end());
            }
        }
        for (std::size_t i = 0; i < s.threads.size(); ++i) {
            const Process& t = s.threads[i];
            if (restricted.count(t.subject().id) != 0) continue;
            if (t.is_output() && owned.count(t.subject().id) != 0) continue;
            std::size_t counter = first_fresh;
            Action act;
            act.subject = t.subject();
            switch (t.kind()) {
                case Kind::Input:
                case Kind::Replicated: {
                    act.kind = Action::Kind::In;
                    std::map<std::string, Name> sub;
                    for (const auto& x : t.names()) {
                        act.objects.push_back(fresh_label(counter, x.sort));
                        sub[x.id] = act.objects.back();
                    }
                    std::vector<std::size_t> removed;
                    if (t.kind() == Kind::Input) removed.push_back(i);
                    emit(act, removed, {rename(t.body(), sub)}, {}, {}, {});
                    break;
                }
                case Kind::BoundOutput: {
                    act.kind = Action::Kind::Out;
                    std::map<std::string, Name> sub;
                    for (const auto& b : t.names()) {
                        act.objects.push_back(fresh_label(counter, b.sort));
                        act.bound.push_back(true);
                        sub[b.id] = act.objects.back();
                    }
                    emit(act, {i}, {rename(t.body(), sub)}, {}, {}, {});
                    break;
                }
                case Kind::Output: {
                    act.kind = Action::Kind::Out;
                    std::map<std::string, Name> extruded;
                    std::set<std::string> unrestrict;
                    std::vector<Process> added{t.body()};
                    for (const auto& b : t.names()) {
                        if (restricted.count(b.id) != 0) {
                            auto it = extruded.find(b.id);
                            if (it == extruded.end()) {
                                it = extruded.emplace(b.id, fresh_label(counter, b.sort)).first;
                                unrestrict.insert(b.id);
                            }
                            act.objects.push_back(it->second);
                            act.bound.push_back(true);
                        } else if (dialect_ == Dialect::Alpi) {
                            Name c = fresh_label(counter, b.sort);
                            act.objects.push_back(c);
                            act.bound.push_back(true);
                            SortInfo info = sort_info(b.sort);
                            std::set<std::string> avoid{c.id, b.id};
                            std::vector<Name> ys;
                            for (SortId ps : info.payload) {
                                ys.push_back({fresh_id("y", avoid), ps});
                                avoid.insert(ys.back().id);
                            }
                            Process relay = Process::output(b, ys);
                            added.push_back(info.linear ? Process::input(c, ys, relay) : Process::replicated(c, ys, relay));
                        } else {
                            act.objects.push_back(b);
                            act.bound.push_back(false);
                        }
                    }
                    emit(act, {i}, added, extruded, {}, unrestrict);
                    break;
                }
                default: break;
            }
        }
        return out;
    }

    std::set<std::string> taken = fn;
    taken.insert(restricted.begin(), restricted.end());
    for (std::size_t i = 0; i < s.threads.size(); ++i) {
        const Process& o = s.threads[i];
        if (!o.is_output()) continue;
        for (std::size_t j = 0; j < s.threads.size(); ++j) {
            const Process& in = s.threads[j];
            if (i == j || !in.is_input() || in.subject().id != o.subject().id) continue;
            if (only != nullptr && (only->first != i || only->second != j)) continue;
            if (in.names().size() != o.names().size()) {
                throw std::runtime_error("arity mismatch in communication on " + o.subject().id);
            }
            std::vector<std::size_t> removed{i};
            if (in.kind() == Kind::Input) removed.push_back(j);
            Action tau;
            if (o.kind() == Kind::Output) {
                std::map<std::string, Name> sub;
                for (std::size_t k = 0; k < o.names().size(); ++k) sub[in.names()[k].id] = o.names()[k];
                emit(tau, removed, {o.body(), rename(in.body(), sub)}, {}, {}, {});
            } else {
                std::set<std::string> avoid = taken;
                std::vector<Name> fresh;
                std::map<std::string, Name> out_sub, in_sub;
                for (std::size_t k = 0; k < o.names().size(); ++k) {
                    const Name& b = o.names()[k];
                    Name nb{fresh_id(label_like(b.id) ? "v" : b.id, avoid), b.sort};
                    avoid.insert(nb.id);
                    fresh.push_back(nb);
                    out_sub[b.id] = nb;
                    in_sub[in.names()[k].id] = nb;
                }
                emit(tau, removed, {rename(o.body(), out_sub), rename(in.body(), in_sub)}, {}, fresh, {});
            }
        }
    }
    return out;
}

std::optional<Transition> Lts::inert_step(const State& s) const {
    for (const auto& r : s.restricted) {
        Uses u;
        for (std::size_t i = 0; i < s.threads.size(); ++i) count_uses(s.threads[i], r.id, i, true, u);
        if (u.in_top.size() != 1 || u.in_nested != 0 || u.opaque != 0 || u.out_top.empty()) continue;
        bool ok = false;
        if (u.replicated) {
            ok = u.objects == 0 || dialect_ != Dialect::Full;
        } else {
            ok = u.out_top.size() == 1 && u.out_nested == 0 && u.objects == 0;
        }
        if (!ok) continue;
        std::pair<std::size_t, std::size_t> pair{u.out_top.front(), u.in_top.front()};
        auto ts = generate(s, 0, false, &pair);
        if (!ts.empty()) return std::move(ts.front());
    }
    return std::nullopt;
}

TauClosure tau_closure(const Lts& lts, const State& s, std::size_t tau_fuel) {
    TauClosure c;
    std::unordered_map<std::string, std::size_t> index;
    std::string k0 = state_key(s);
    index[k0] = 0;
    c.states.emplace_back(k0, s);
    std::size_t level_start = 0;
    for (std::size_t level = 0; level_start < c.states.size(); ++level) {
        std::size_t level_end = c.states.size();
        for (std::size_t i = level_start; i < level_end; ++i) {
            auto taus = lts.tau_steps(c.states[i].second);
            for (auto& t : taus) {
                if (index.count(t.target_key) != 0) continue;
                if (level == tau_fuel) {
                    c.truncated = true;
                    continue;
                }
                index[t.target_key] = c.states.size();
                c.states.emplace_back(std::move(t.target_key), std::move(t.target));
            }
        }
        if (level == tau_fuel) break;
        level_start = level_end;
    }
    return c;
}

std::vector<std::pair<Action, Process>> transitions(const Process& p, const ConstantEnv& env, Dialect d) {
    Lts lts(env, d);
    State s = lts.initial(p);
    std::vector<std::pair<Action, Process>> out;
    for (auto& t : lts.step(s, fresh_base(free_ids(p)))) out.emplace_back(std::move(t.action), to_process(t.target));
    return out;
}

WeakTransitions weak_transitions(const Process& p, const ConstantEnv& env, Dialect d, std::size_t tau_fuel) {
    Lts lts(env, d);
    State s = lts.initial(p);
    std::size_t base = fresh_base(free_ids(p));
    WeakTransitions w;
    auto pre = tau_closure(lts, s, tau_fuel);
    w.truncated = pre.truncated;
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& [k, st] : pre.states) {
        seen.emplace("", k);
        w.moves.push_back({std::nullopt, to_process(st)});
    }
    for (const auto& [k, st] : pre.states) {
        for (auto& t : lts.step(st, base)) {
            if (!t.action.visible()) continue;
            auto post = tau_closure(lts, t.target, tau_fuel);
            w.truncated = w.truncated || post.truncated;
            std::string label = to_string(t.action);
            for (const auto& [k2, st2] : post.states) {
                if (seen.emplace(label, k2).second) w.moves.push_back({t.action, to_process(st2)});
            }
        }
    }
    return w;
}

Barbs barbs(const Lts& lts, const State& s, std::size_t tau_fuel) {
    auto c = tau_closure(lts, s, tau_fuel);
    Barbs b;
    b.truncated = c.truncated;
    for (const auto& [k, st] : c.states) {
        std::set<std::string> restricted;
        for (const auto& r : st.restricted) restricted.insert(r.id);
        for (const auto& t : st.threads) {
            if (t.is_output() && restricted.count(t.subject().id) == 0) b.names.insert(t.subject().id);
        }
    }
    return b;
}

Barbs barbs(const Process& p, const ConstantEnv& env, Dialect d, std::size_t tau_fuel) {
    Lts lts(env, d);
    return barbs(lts, lts.initial(p), tau_fuel);
}

}  // namespace eagerpi::pi
