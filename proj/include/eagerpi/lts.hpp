#pragma once

// Ground early labelled transition systems for full pi, Internal pi and
// Asynchronous Local pi. States are parallel compositions of prefixed threads
// under top-level restrictions, kept in a normal form that yields canonical keys.

#include "eagerpi/pi.hpp"

#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace eagerpi::pi {

struct Action {
    enum class Kind { Tau, In, Out };
    Kind kind = Kind::Tau;
    Name subject;
    std::vector<Name> objects;
    /// For outputs: which objects are fresh (extruded) names.
    std::vector<bool> bound;

    bool visible() const { return kind != Kind::Tau; }
    friend bool operator==(const Action& a, const Action& b);
};

/// `tau`, `a(_0,_1)`, `a!(b,^_2)`.
std::string to_string(const Action& a);

struct State {
    std::vector<Name> restricted;
    std::vector<Process> threads;
};

Process to_process(const State& s);
std::string to_string(const State& s);
/// Invariant under reordering of threads and renaming of restricted and bound names
/// (up to ties between threads of identical shape).
std::string state_key(const State& s);
std::set<std::string> free_ids(const State& s);
/// Ids of the form `_k` are reserved for fresh names; returns one more than the largest k in use.
std::size_t fresh_base(const std::set<std::string>& ids);

/// Groups of threads linked by shared restricted names, each with the restricted names it uses.
std::vector<State> components(const State& s);

struct Transition {
    Action action;
    State target;
    std::string target_key;
};

class Lts {
public:
    Lts(const ConstantEnv& env, Dialect dialect) : env_(env), dialect_(dialect) {}

    /// Normal form of p. Top-level constant applications are unfolded; throws on unguarded recursion.
    State initial(const Process& p) const;
    /// Transitions whose fresh names are `_k`, `_k+1`, ... for k = first_fresh, allocated
    /// afresh for every transition so that equal labels coincide across processes.
    std::vector<Transition> step(const State& s, std::size_t first_fresh) const;
    std::vector<Transition> tau_steps(const State& s) const;
    /// An internal step that commutes with every other transition of s: a communication on a
    /// private channel whose only receiver is either linear with a single sender, or a
    /// replicated input whose name is never sent in full pi. Such a step preserves weak
    /// bisimilarity.
    std::optional<Transition> inert_step(const State& s) const;

    const ConstantEnv& env() const { return env_; }
    Dialect dialect() const { return dialect_; }

private:
    std::vector<Transition> generate(const State& s, std::size_t first_fresh, bool visible,
                                     const std::pair<std::size_t, std::size_t>* only = nullptr) const;
    const ConstantEnv& env_;
    Dialect dialect_;
};

struct TauClosure {
    /// Reachable states with their keys, the source first, without duplicates.
    std::vector<std::pair<std::string, State>> states;
    bool truncated = false;
};
/// States reachable by at most `tau_fuel` internal steps.
TauClosure tau_closure(const Lts& lts, const State& s, std::size_t tau_fuel);

// Process-level entry points.

std::vector<std::pair<Action, Process>> transitions(const Process& p, const ConstantEnv& env, Dialect d);

struct WeakMove {
    std::optional<Action> action;  // empty for the internal (epsilon) move
    Process target;
};
struct WeakTransitions {
    std::vector<WeakMove> moves;
    bool truncated = false;
};
WeakTransitions weak_transitions(const Process& p, const ConstantEnv& env, Dialect d, std::size_t tau_fuel);

struct Barbs {
    std::set<std::string> names;
    bool truncated = false;
};
/// Output subjects reachable within `tau_fuel` internal steps.
Barbs barbs(const Process& p, const ConstantEnv& env, Dialect d, std::size_t tau_fuel);
Barbs barbs(const Lts& lts, const State& s, std::size_t tau_fuel);

}  // namespace eagerpi::pi
