#include "eagerpi/equivalence.hpp"

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace eagerpi::equiv {

using pi::Action;
using pi::Lts;
using pi::State;

namespace {

struct Node {
    std::string key;
    State state;
};

struct Answers {
    std::vector<Node> targets;
    bool truncated = false;
};

std::size_t fresh_count(const Action& a) {
    if (a.kind == Action::Kind::In) return a.objects.size();
    return static_cast<std::size_t>(std::count(a.bound.begin(), a.bound.end(), true));
}

std::set<std::string> joint_free(const State& s, const State& t) {
    auto a = pi::free_ids(s);
    auto b = pi::free_ids(t);
    a.insert(b.begin(), b.end());
    return a;
}

constexpr std::size_t kCompressionLimit = 2000;

// Memoised access to one LTS: strong steps, tau closures, compression, weak answers.
class Explorer {
public:
    Explorer(const pi::ConstantEnv& env, pi::Dialect d, std::size_t tau_fuel, bool compression)
        : lts_(env, d), fuel_(tau_fuel), compression_(compression) {}

    bool truncated = false;

    Node start(const pi::Process& p) {
        State s = lts_.initial(p);
        std::string k = pi::state_key(s);
        return compress({k, std::move(s)});
    }

    const std::vector<pi::Transition>& strong(const Node& n, std::size_t base) {
        auto key = n.key + "@" + std::to_string(base);
        auto it = strong_.find(key);
        if (it != strong_.end()) return it->second;
        return strong_.emplace(key, lts_.step(n.state, base)).first->second;
    }

    const pi::TauClosure& closure(const Node& n) {
        auto it = closure_.find(n.key);
        if (it != closure_.end()) return it->second;
        auto c = pi::tau_closure(lts_, n.state, fuel_);
        if (c.truncated) truncated = true;
        return closure_.emplace(n.key, std::move(c)).first->second;
    }

    // Fires inert internal steps, and a state's only internal step while it has nothing
    // else to do, until neither applies or a state repeats.
    Node compress(Node n) {
        if (!compression_) return n;
        auto it = compressed_.find(n.key);
        if (it != compressed_.end()) return it->second;
        std::vector<std::string> chain{n.key};
        std::unordered_set<std::string> seen{n.key};
        Node cur = n;
        for (std::size_t steps = 0; steps < kCompressionLimit; ++steps) {
            Node next;
            if (auto t = lts_.inert_step(cur.state)) {
                next = {std::move(t->target_key), std::move(t->target)};
            } else {
                const auto& ts = strong(cur, 0);
                if (ts.size() != 1 || ts[0].action.visible()) break;
                next = {ts[0].target_key, ts[0].target};
            }
            if (!seen.insert(next.key).second) break;
            auto cached = compressed_.find(next.key);
            if (cached != compressed_.end()) {
                cur = cached->second;
                break;
            }
            cur = std::move(next);
            chain.push_back(cur.key);
        }
        for (const auto& k : chain) compressed_.emplace(k, cur);
        return cur;
    }

    // Drops parallel components that can never perform a visible action.
    Node prune(Node n) {
        auto parts = pi::components(n.state);
        if (parts.size() < 2) return n;
        std::vector<pi::Process> keep;
        for (const auto& c : parts) {
            if (!mute(c)) keep.push_back(pi::to_process(c));
        }
        if (keep.size() == parts.size()) return n;
        State st = lts_.initial(pi::Process::par(keep));
        std::string k = pi::state_key(st);
        return compress({k, std::move(st)});
    }

    // Targets of e ==a==> (or ==> when a is tau), compressed and without duplicates.
    Answers answers(const Node& e, const Action& a, std::size_t base) {
        Answers out;
        std::set<std::string> seen;
        auto add = [&](const std::string& k, const State& s) {
            Node n = compress({k, s});
            if (seen.insert(n.key).second) out.targets.push_back(std::move(n));
        };
        const auto& c = closure(e);
        out.truncated = c.truncated;
        if (!a.visible()) {
            for (const auto& [k, s] : c.states) add(k, s);
            return out;
        }
        const std::string label = pi::to_string(a);
        for (const auto& [k, s] : c.states) {
            for (const auto& t : strong({k, s}, base)) {
                if (!t.action.visible() || pi::to_string(t.action) != label) continue;
                Node mid{t.target_key, t.target};
                const auto& c2 = closure(mid);
                out.truncated = out.truncated || c2.truncated;
                for (const auto& [k2, s2] : c2.states) add(k2, s2);
            }
        }
        return out;
    }

    pi::Barbs barbs(const Node& n) {
        pi::Barbs b;
        const auto& c = closure(n);
        b.truncated = c.truncated;
        for (const auto& [k, s] : c.states) {
            for (const auto& t : strong({k, s}, 0)) {
                if (t.action.kind == Action::Kind::Out) b.names.insert(t.action.subject.id);
            }
        }
        return b;
    }

    const Lts& lts() const { return lts_; }

private:
    static constexpr std::size_t kMuteLimit = 256;

    bool mute(const State& part) {
        State s0 = lts_.initial(pi::to_process(part));
        std::string k0 = pi::state_key(s0);
        auto it = mute_.find(k0);
        if (it != mute_.end()) return it->second;
        std::unordered_set<std::string> seen{k0};
        std::vector<State> todo{std::move(s0)};
        bool silent = true;
        while (silent && !todo.empty()) {
            State s = std::move(todo.back());
            todo.pop_back();
            for (auto& t : lts_.step(s, 0)) {
                if (t.action.visible() || seen.size() >= kMuteLimit) {
                    silent = false;
                    break;
                }
                if (seen.insert(t.target_key).second) todo.push_back(std::move(t.target));
            }
        }
        mute_.emplace(k0, silent);
        return silent;
    }

    Lts lts_;
    std::size_t fuel_;
    bool compression_;
    std::unordered_map<std::string, std::vector<pi::Transition>> strong_;
    std::unordered_map<std::string, pi::TauClosure> closure_;
    std::unordered_map<std::string, Node> compressed_;
    std::unordered_map<std::string, bool> mute_;
};

std::string barb_string(const std::set<std::string>& b) {
    std::string s = "{";
    for (const auto& n : b) s += (s.size() > 1 ? "," : "") + n;
    return s + "}";
}

constexpr std::size_t kUntainted = std::numeric_limits<std::size_t>::max();

class Game {
public:
    Game(const pi::ConstantEnv& env, const BisimConfig& cfg, bool barbed)
        : ex_(env, cfg.dialect, cfg.tau_fuel, cfg.tau_compression), cfg_(cfg), barbed_(barbed) {
        if (cfg.depth == 0 || cfg.tau_fuel == 0) throw std::invalid_argument("game depth and tau fuel must be positive");
    }

    GameResult run(const pi::Process& p, const pi::Process& q) {
        Node s = ex_.start(p);
        Node t = ex_.start(q);
        cancel_ = cfg_.cancel_common && cfg_.dialect != pi::Dialect::Full;
        Outcome o = deepen(s, t);
        if (cancel_ && o.kind != Outcome::Related) {
            cancel_ = false;
            lost_.clear();
            won_.clear();
            o = deepen(s, t);
        }
        GameResult r;
        switch (o.kind) {
            case Outcome::Related: r.verdict = EquivalentUpTo{cfg_.depth, !bound_hit_}; break;
            case Outcome::Unknown: r.verdict = Unknown{UnknownReason::Truncated, o.detail}; break;
            case Outcome::Distinguished: {
                Inequivalent ineq;
                const Strategy* st = o.strategy.get();
                while (st != nullptr) {
                    auto it = shown_.find(st);
                    if (it != shown_.end()) ineq.witness = it->second;
                    if (st->kind == Strategy::Kind::Barbs) {
                        ineq.evidence.push_back("barbs differ");
                        break;
                    }
                    ineq.evidence.push_back(std::string(st->left ? "L: " : "R: ") + pi::to_string(st->action));
                    if (st->replies.empty()) {
                        ineq.evidence.push_back("no answer");
                        break;
                    }
                    st = st->replies.front().second.get();
                }
                r.verdict = std::move(ineq);
                r.strategy = o.strategy;
                break;
            }
        }
        r.verdict.stats.states_visited = visited_.size();
        r.verdict.stats.truncated = ex_.truncated;
        return r;
    }

private:
    struct Outcome;

    // Iterative deepening, so that the shortest strategies are found first.
    Outcome deepen(const Node& s, const Node& t) {
        Outcome o;
        for (std::size_t d = 1; d <= cfg_.depth; ++d) {
            path_.clear();
            bound_hit_ = false;
            o = play(s, t, d);
            if (o.kind == Outcome::Distinguished) break;
            if (o.kind == Outcome::Related && !bound_hit_) break;
        }
        return o;
    }

    struct Outcome {
        enum Kind { Related, Distinguished, Unknown } kind = Related;
        std::shared_ptr<const Strategy> strategy;
        std::size_t taint = kUntainted;
        std::string detail;
    };

    Outcome distinguished(std::shared_ptr<Strategy> st, const Node& s, const Node& t) {
        shown_[st.get()] = {pi::to_string(s.state), pi::to_string(t.state)};
        return {Outcome::Distinguished, std::move(st), kUntainted, {}};
    }

    Outcome play(const Node& s, const Node& t, std::size_t d) {
        const std::string pair = s.key + "\x1f" + t.key;
        visited_.insert(pair);
        if (s.key == t.key) return {};
        if (cancel_) {
            if (auto reduced = cancel(s, t)) return play(reduced->first, reduced->second, d);
            if (!barbed_) {
                if (auto o = decompose(s, t, d)) return *o;
            }
        }
        if (auto it = lost_.find(pair); it != lost_.end()) return {Outcome::Distinguished, it->second, kUntainted, {}};
        if (auto it = path_.find(pair); it != path_.end()) return {Outcome::Related, nullptr, it->second, {}};
        if (auto it = won_.find(pair); it != won_.end() && it->second >= d) return {};
        if (d == 0) {
            bound_hit_ = true;
            return {};
        }
        if (barbed_) {
            auto bs = ex_.barbs(s);
            auto bt = ex_.barbs(t);
            if (bs.names != bt.names) {
                bool missing_left = !std::includes(bs.names.begin(), bs.names.end(), bt.names.begin(), bt.names.end());
                bool missing_right = !std::includes(bt.names.begin(), bt.names.end(), bs.names.begin(), bs.names.end());
                if ((missing_left && bs.truncated) || (missing_right && bt.truncated)) {
                    return {Outcome::Unknown, nullptr, kUntainted, "barbs " + barb_string(bs.names) + " vs " + barb_string(bt.names) + " on a truncated closure"};
                }
                auto st = std::make_shared<Strategy>();
                st->kind = Strategy::Kind::Barbs;
                auto o = distinguished(st, s, t);
                lost_[pair] = o.strategy;
                return o;
            }
        }

        const std::size_t index = path_.size();
        path_.emplace(pair, index);
        std::size_t taint = kUntainted;
        bool unknown = false;
        std::string unknown_detail;
        const std::size_t base = pi::fresh_base(joint_free(s.state, t.state));
        Outcome result;
        bool decided = false;

        for (bool left : {true, false}) {
            const Node& c = left ? s : t;
            const Node& e = left ? t : s;
            auto moves = ex_.strong(c, base);
            for (const auto& tr : moves) {
                if (barbed_ && tr.action.visible()) continue;
                Node c2 = ex_.compress({tr.target_key, tr.target});
                Answers ans = ex_.answers(e, tr.action, base);
                bool answered = false;
                bool open = ans.truncated;
                std::vector<std::pair<std::string, std::shared_ptr<const Strategy>>> replies;
                for (const auto& e2 : ans.targets) {
                    Outcome o = left ? play(c2, e2, d - 1) : play(e2, c2, d - 1);
                    if (o.kind == Outcome::Related) {
                        answered = true;
                        taint = std::min(taint, o.taint);
                        break;
                    }
                    if (o.kind == Outcome::Unknown) {
                        open = true;
                        if (unknown_detail.empty()) unknown_detail = o.detail;
                        continue;
                    }
                    replies.emplace_back(e2.key, o.strategy);
                }
                if (answered) continue;
                if (open) {
                    unknown = true;
                    if (unknown_detail.empty()) {
                        unknown_detail = std::string(left ? "L: " : "R: ") + pi::to_string(tr.action) + " has no answer within the tau fuel";
                    }
                    continue;
                }
                auto st = std::make_shared<Strategy>();
                st->left = left;
                st->action = tr.action;
                st->target_key = c2.key;
                st->replies = std::move(replies);
                result = distinguished(st, s, t);
                decided = true;
                break;
            }
            if (decided) break;
        }
        path_.erase(pair);

        if (decided) {
            lost_[pair] = result.strategy;
            return result;
        }
        if (unknown) return {Outcome::Unknown, nullptr, kUntainted, unknown_detail};
        if (taint >= index) {
            auto& w = won_[pair];
            w = std::max(w, d);
            taint = kUntainted;
        }
        return {Outcome::Related, nullptr, taint, {}};
    }

    Node single(const State& part) {
        State st = ex_.lts().initial(pi::to_process(part));
        std::string k = pi::state_key(st);
        return ex_.compress({k, std::move(st)});
    }

    // Related when the components pair up by free names and every pair is related.
    std::optional<Outcome> decompose(const Node& s, const Node& t, std::size_t d) {
        auto cs = pi::components(s.state);
        auto ct = pi::components(t.state);
        if (cs.size() < 2 || cs.size() != ct.size()) return std::nullopt;
        auto by_names = [](const std::vector<State>& parts) {
            std::map<std::set<std::string>, std::size_t> m;
            for (std::size_t i = 0; i < parts.size(); ++i) {
                if (!m.emplace(pi::free_ids(parts[i]), i).second) return std::map<std::set<std::string>, std::size_t>{};
            }
            return m;
        };
        auto ms = by_names(cs);
        auto mt = by_names(ct);
        if (ms.size() != cs.size() || mt.size() != ct.size()) return std::nullopt;
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (const auto& [names, i] : ms) {
            auto it = mt.find(names);
            if (it == mt.end()) return std::nullopt;
            pairs.emplace_back(i, it->second);
        }
        std::size_t taint = kUntainted;
        for (const auto& [i, j] : pairs) {
            Outcome o = play(single(cs[i]), single(ct[j]), d);
            if (o.kind != Outcome::Related) return std::nullopt;
            taint = std::min(taint, o.taint);
        }
        return Outcome{Outcome::Related, nullptr, taint, {}};
    }

    // Both sides without their common components, when there are any.
    std::optional<std::pair<Node, Node>> cancel(const Node& s, const Node& t) {
        auto cs = pi::components(s.state);
        auto ct = pi::components(t.state);
        if (cs.size() < 2 && ct.size() < 2) return std::nullopt;
        std::multimap<std::string, std::size_t> right;
        for (std::size_t j = 0; j < ct.size(); ++j) right.emplace(pi::state_key(ct[j]), j);
        std::vector<bool> drop_left(cs.size(), false), drop_right(ct.size(), false);
        bool any = false;
        for (std::size_t i = 0; i < cs.size(); ++i) {
            auto it = right.find(pi::state_key(cs[i]));
            if (it == right.end()) continue;
            drop_left[i] = true;
            drop_right[it->second] = true;
            right.erase(it);
            any = true;
        }
        if (!any) return std::nullopt;
        auto rebuild = [&](const std::vector<State>& parts, const std::vector<bool>& drop) {
            std::vector<pi::Process> keep;
            for (std::size_t i = 0; i < parts.size(); ++i) {
                if (!drop[i]) keep.push_back(pi::to_process(parts[i]));
            }
            State st = ex_.lts().initial(pi::Process::par(keep));
            std::string k = pi::state_key(st);
            return ex_.compress({k, std::move(st)});
        };
        return std::make_pair(rebuild(cs, drop_left), rebuild(ct, drop_right));
    }

    Explorer ex_;
    BisimConfig cfg_;
    bool barbed_;
    bool cancel_ = false;
    bool bound_hit_ = false;
    std::unordered_map<std::string, std::size_t> path_;
    std::unordered_map<std::string, std::shared_ptr<const Strategy>> lost_;
    std::unordered_map<std::string, std::size_t> won_;
    std::unordered_set<std::string> visited_;
    std::unordered_map<const Strategy*, std::pair<std::string, std::string>> shown_;
};

bool replay_node(Explorer& ex, const Strategy& st, const Node& s, const Node& t, bool barbed) {
    if (st.kind == Strategy::Kind::Barbs) {
        auto bs = ex.barbs(s);
        auto bt = ex.barbs(t);
        return !bs.truncated && !bt.truncated && bs.names != bt.names;
    }
    const Node& c = st.left ? s : t;
    const Node& e = st.left ? t : s;
    if (barbed && st.action.visible()) return false;
    const std::size_t base = pi::fresh_base(joint_free(s.state, t.state));
    const std::string label = pi::to_string(st.action);
    for (const auto& tr : ex.strong(c, base)) {
        if (pi::to_string(tr.action) != label) continue;
        Node c2 = ex.compress({tr.target_key, tr.target});
        if (c2.key != st.target_key) continue;
        Answers ans = ex.answers(e, tr.action, base);
        if (ans.truncated) return false;
        for (const auto& e2 : ans.targets) {
            auto it = std::find_if(st.replies.begin(), st.replies.end(), [&](const auto& r) { return r.first == e2.key; });
            if (it == st.replies.end()) return false;
            bool ok = st.left ? replay_node(ex, *it->second, c2, e2, barbed) : replay_node(ex, *it->second, e2, c2, barbed);
            if (!ok) return false;
        }
        return true;
    }
    return false;
}

}  // namespace

GameResult weak_bisim_game(const pi::Process& p, const pi::Process& q, const pi::ConstantEnv& env, const BisimConfig& cfg) {
    return Game(env, cfg, false).run(p, q);
}

GameResult barbed_bisim_game(const pi::Process& p, const pi::Process& q, const pi::ConstantEnv& env, const BisimConfig& cfg) {
    return Game(env, cfg, true).run(p, q);
}

Verdict weak_bisim(const pi::Process& p, const pi::Process& q, const pi::ConstantEnv& env, const BisimConfig& cfg) {
    return weak_bisim_game(p, q, env, cfg).verdict;
}

std::vector<pi::Name> fresh_arguments(const std::vector<pi::Name>& params, const std::set<std::string>& avoid) {
    std::set<std::string> taken = avoid;
    std::vector<pi::Name> out;
    for (const auto& x : params) {
        pi::Name n{pi::fresh_id(x.id, taken), x.sort};
        taken.insert(n.id);
        out.push_back(n);
    }
    return out;
}

Verdict weak_bisim(const pi::Abstraction& f, const pi::Abstraction& g, const pi::ConstantEnv& env, const BisimConfig& cfg) {
    if (f.params.size() != g.params.size()) throw std::invalid_argument("abstractions of different arity");
    std::set<std::string> avoid = pi::all_ids(f.body);
    auto more = pi::all_ids(g.body);
    avoid.insert(more.begin(), more.end());
    for (const auto& x : f.params) avoid.insert(x.id);
    for (const auto& x : g.params) avoid.insert(x.id);
    auto args = fresh_arguments(f.params, avoid);
    return weak_bisim(pi::instantiate(f, args), pi::instantiate(g, args), env, cfg);
}

Verdict barbed_bisim(const pi::Process& p, const pi::Process& q, const pi::ConstantEnv& env, const BisimConfig& cfg) {
    return barbed_bisim_game(p, q, env, cfg).verdict;
}

bool replay(const Strategy& s, const pi::Process& p, const pi::Process& q, const pi::ConstantEnv& env, const BisimConfig& cfg,
            bool barbed) {
    Explorer ex(env, cfg.dialect, cfg.tau_fuel, cfg.tau_compression);
    return replay_node(ex, s, ex.start(p), ex.start(q), barbed);
}

// Traces.

std::string to_string(const Trace& t) {
    if (t.empty()) return "ε";
    std::string s;
    for (const auto& a : t) {
        if (!s.empty()) s += ' ';
        s += pi::to_string(a);
    }
    return s;
}

bool TraceSet::contains(const std::string& printed) const {
    return std::any_of(traces.begin(), traces.end(), [&](const Trace& t) { return to_string(t) == printed; });
}

namespace {

// A set of states closed under internal steps.
struct StateSet {
    std::vector<Node> states;
    std::string key;
    bool truncated = false;
};

class SubsetExplorer {
public:
    SubsetExplorer(const pi::ConstantEnv& env, pi::Dialect d, std::size_t tau_fuel) : ex_(env, d, tau_fuel, true) {}

    StateSet start(const pi::Process& p) { return close({ex_.start(p)}); }

    // Silent components are weakly equivalent to 0 and are dropped before closing.
    StateSet close(const std::vector<Node>& seeds) {
        std::map<std::string, Node> all;
        StateSet out;
        for (const auto& seed : seeds) {
            const auto& c = ex_.closure(ex_.prune(ex_.compress(seed)));
            out.truncated = out.truncated || c.truncated;
            for (const auto& [k, s] : c.states) {
                Node n = ex_.prune(ex_.compress({k, s}));
                all.emplace(n.key, std::move(n));
            }
        }
        for (auto& [k, n] : all) {
            out.key += k;
            out.key += '\x1e';
            out.states.push_back(std::move(n));
        }
        return out;
    }

    // Visible moves of the set, grouped by label in label order.
    std::map<std::string, std::pair<Action, StateSet>> moves(const StateSet& set, std::size_t base) {
        std::map<std::string, std::pair<Action, std::vector<Node>>> seeds;
        for (const auto& n : set.states) {
            for (const auto& t : ex_.strong(n, base)) {
                if (!t.action.visible()) continue;
                auto& slot = seeds[pi::to_string(t.action)];
                slot.first = t.action;
                slot.second.push_back({t.target_key, t.target});
            }
        }
        std::map<std::string, std::pair<Action, StateSet>> out;
        for (auto& [label, v] : seeds) out.emplace(label, std::make_pair(v.first, close(v.second)));
        return out;
    }

    bool truncated() const { return ex_.truncated; }

private:
    Explorer ex_;
};

}  // namespace

TraceSet traces(const pi::Process& p, const pi::ConstantEnv& env, pi::Dialect d, std::size_t max_len, std::size_t tau_fuel) {
    SubsetExplorer ex(env, d, tau_fuel);
    std::map<std::string, Trace> found;
    TraceSet out;
    Trace prefix;
    std::function<void(const StateSet&, std::size_t)> walk = [&](const StateSet& set, std::size_t base) {
        out.truncated = out.truncated || set.truncated;
        found.emplace(to_string(prefix), prefix);
        if (prefix.size() == max_len) return;
        for (auto& [label, mv] : ex.moves(set, base)) {
            prefix.push_back(mv.first);
            walk(mv.second, base + fresh_count(mv.first));
            prefix.pop_back();
        }
    };
    walk(ex.start(p), pi::fresh_base(pi::free_ids(p)));
    for (auto& [k, t] : found) out.traces.push_back(std::move(t));
    return out;
}

Verdict trace_incl(const pi::Process& p, const pi::Process& q, const pi::ConstantEnv& env, pi::Dialect d, std::size_t max_len,
                   std::size_t tau_fuel) {
    SubsetExplorer ex(env, d, tau_fuel);
    auto fn = pi::free_ids(p);
    auto fq = pi::free_ids(q);
    fn.insert(fq.begin(), fq.end());

    Trace prefix;
    std::optional<Trace> witness;
    std::string unknown;
    bool p_truncated = false;
    bool bound_hit = false;
    std::set<std::string> done;
    std::size_t visited = 0;

    std::function<void(const StateSet&, const StateSet&, std::size_t, bool)> walk = [&](const StateSet& sp, const StateSet& sq,
                                                                                         std::size_t base, bool q_cut) {
        if (witness) return;
        ++visited;
        p_truncated = p_truncated || sp.truncated;
        q_cut = q_cut || sq.truncated;
        auto mp = ex.moves(sp, base);
        if (prefix.size() == max_len) {
            if (!mp.empty()) bound_hit = true;
            return;
        }
        std::string memo = sp.key + "\x1f" + sq.key + "\x1f" + std::to_string(prefix.size()) + (q_cut ? "!" : "");
        if (!done.insert(memo).second) return;
        auto mq = ex.moves(sq, base);
        for (auto& [label, mv] : mp) {
            prefix.push_back(mv.first);
            auto it = mq.find(label);
            if (it == mq.end()) {
                if (q_cut) {
                    if (unknown.empty()) unknown = "no match for " + to_string(prefix) + " on a truncated closure";
                } else {
                    witness = prefix;
                }
            } else {
                walk(mv.second, it->second.second, base + fresh_count(mv.first), q_cut);
            }
            prefix.pop_back();
            if (witness) return;
        }
    };
    walk(ex.start(p), ex.start(q), pi::fresh_base(fn), false);

    Verdict v;
    if (witness) {
        Inequivalent ineq;
        for (const auto& a : *witness) ineq.evidence.push_back(pi::to_string(a));
        ineq.witness = {to_string(*witness), "no matching trace"};
        v = std::move(ineq);
    } else if (!unknown.empty()) {
        v = Unknown{UnknownReason::Truncated, unknown};
    } else if (p_truncated) {
        v = Unknown{UnknownReason::Truncated, "traces of the left process were cut by the tau fuel"};
    } else {
        v = EquivalentUpTo{max_len, !bound_hit};
    }
    v.stats.states_visited = visited;
    v.stats.truncated = ex.truncated();
    return v;
}

Verdict trace_eq(const pi::Process& p, const pi::Process& q, const pi::ConstantEnv& env, pi::Dialect d, std::size_t max_len,
                 std::size_t tau_fuel) {
    Verdict a = trace_incl(p, q, env, d, max_len, tau_fuel);
    Verdict b = trace_incl(q, p, env, d, max_len, tau_fuel);
    Verdict out;
    if (a.inequivalent()) {
        out = a;
    } else if (b.inequivalent()) {
        Inequivalent ineq = b.as_inequivalent();
        std::swap(ineq.witness.first, ineq.witness.second);
        out = ineq;
    } else if (a.unknown()) {
        out = a;
    } else if (b.unknown()) {
        out = b;
    } else {
        out = EquivalentUpTo{max_len, a.as_equivalent().closed && b.as_equivalent().closed};
    }
    out.stats.states_visited = a.stats.states_visited + b.stats.states_visited;
    out.stats.truncated = a.stats.truncated || b.stats.truncated;
    return out;
}

std::string verdict_json(const Verdict& v, std::size_t depth, std::size_t tau_fuel) {
    nlohmann::json j;
    j["verdict"] = v.label();
    j["depth"] = depth;
    j["tau_fuel"] = tau_fuel;
    nlohmann::json ev = nlohmann::json::array();
    if (v.inequivalent()) {
        for (const auto& e : v.as_inequivalent().evidence) ev.push_back(e);
    } else if (v.unknown()) {
        ev.push_back(v.as_unknown().detail);
    }
    j["evidence"] = ev;
    j["truncated"] = v.stats.truncated;
    j["states_visited"] = v.stats.states_visited;
    return j.dump();
}

}  // namespace eagerpi::equiv
