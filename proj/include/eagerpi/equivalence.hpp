#pragma once

// Bounded checkers for weak ground bisimilarity, barbed bisimilarity and weak
// trace inclusion over the labelled transition systems of lts.hpp.

#include "eagerpi/lts.hpp"
#include "eagerpi/verdict.hpp"

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace eagerpi::equiv {

struct BisimConfig {
    /// Challenger rounds.
    std::size_t depth = 8;
    /// Internal steps allowed in each weak answer.
    std::size_t tau_fuel = 64;
    pi::Dialect dialect = pi::Dialect::Internal;
    /// Skip states whose only move is a single internal step.
    bool tau_compression = true;
    /// In Internal pi and ALpi, drop parallel components common to both sides before each
    /// round (sound there because bisimilarity is preserved by parallel composition). Only
    /// Equivalent verdicts rely on it; other outcomes are recomputed without it.
    bool cancel_common = true;
};

/// A distinguishing strategy. The challenger plays `action` on its side; every weak
/// answer of the defender (identified by the key of its target) has a continuation.
/// No replies means the defender cannot answer at all. A `Barbs` node states that
/// the two current states have different weak barbs.
struct Strategy {
    enum class Kind { Move, Barbs };
    Kind kind = Kind::Move;
    bool left = true;
    pi::Action action;
    std::string target_key;
    std::vector<std::pair<std::string, std::shared_ptr<const Strategy>>> replies;
};

struct GameResult {
    Verdict verdict;
    /// Set exactly when the verdict is Inequivalent.
    std::shared_ptr<const Strategy> strategy;
};

GameResult weak_bisim_game(const pi::Process& p, const pi::Process& q, const pi::ConstantEnv& env, const BisimConfig& cfg);
GameResult barbed_bisim_game(const pi::Process& p, const pi::Process& q, const pi::ConstantEnv& env, const BisimConfig& cfg);

Verdict weak_bisim(const pi::Process& p, const pi::Process& q, const pi::ConstantEnv& env, const BisimConfig& cfg = {});
/// Abstractions are compared on a common tuple of fresh arguments.
Verdict weak_bisim(const pi::Abstraction& f, const pi::Abstraction& g, const pi::ConstantEnv& env, const BisimConfig& cfg = {});
Verdict barbed_bisim(const pi::Process& p, const pi::Process& q, const pi::ConstantEnv& env, const BisimConfig& cfg = {});

/// Plays `s` against the LTS again: every challenger move must exist and every weak
/// answer of the defender must be refuted. `barbed` selects the barbed game.
bool replay(const Strategy& s, const pi::Process& p, const pi::Process& q, const pi::ConstantEnv& env,
            const BisimConfig& cfg, bool barbed = false);

/// Instances of an abstraction's parameters that avoid the given ids.
std::vector<pi::Name> fresh_arguments(const std::vector<pi::Name>& params, const std::set<std::string>& avoid);

using Trace = std::vector<pi::Action>;
/// Actions separated by spaces; the empty trace prints as `ε`.
std::string to_string(const Trace& t);

struct TraceSet {
    /// Sorted by printed form, without duplicates.
    std::vector<Trace> traces;
    bool truncated = false;
    bool contains(const std::string& printed) const;
};

/// Weak traces of length at most `max_len`. Fresh names are `_k, _k+1, ...` in order of
/// appearance, with k above every `_n` free in p.
TraceSet traces(const pi::Process& p, const pi::ConstantEnv& env, pi::Dialect d, std::size_t max_len, std::size_t tau_fuel);
/// Inequivalent carries the first trace of p (in exploration order) that q cannot perform.
Verdict trace_incl(const pi::Process& p, const pi::Process& q, const pi::ConstantEnv& env, pi::Dialect d,
                   std::size_t max_len, std::size_t tau_fuel);
Verdict trace_eq(const pi::Process& p, const pi::Process& q, const pi::ConstantEnv& env, pi::Dialect d,
                 std::size_t max_len, std::size_t tau_fuel);

/// `{verdict, depth, tau_fuel, evidence, truncated, states_visited}` as JSON text.
std::string verdict_json(const Verdict& v, std::size_t depth, std::size_t tau_fuel);

}  // namespace eagerpi::equiv
