#pragma once

// Systems of equations over pi abstractions built from relations on lambda terms,
// their syntactic solutions, and bounded checks of the unique-solution premises.

#include "eagerpi/equivalence.hpp"
#include "eagerpi/lambda.hpp"
#include "eagerpi/pi.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace eagerpi::eqn {

/// Equation variables occur in bodies as applications `X_{i}<names>` / `XV_{i}<names>`.
struct Equation {
    std::string var;
    pi::Abstraction body;
};

struct EquationSystem {
    std::vector<Equation> equations;

    const Equation* find(const std::string& var) const;
    std::vector<std::string> variables() const;
};

/// One `var = (params) body` line per equation.
std::string to_string(const EquationSystem& sys);

/// Variable names of the two families.
std::string x_var(std::size_t i);
std::string xv_var(std::size_t i);

enum class CaseTag { Var, Div, Abs, Stuck, EtaLeft, EtaRight, ValueAux };
const char* to_string(CaseTag t);

struct PairEntry {
    std::string var;
    lambda::Term left = lambda::Term::var("x");
    lambda::Term right = lambda::Term::var("x");
    CaseTag tag = CaseTag::Var;
    /// The tuple of free variables, in lexicographic order.
    std::vector<std::string> params;
    /// Fresh variable introduced by the decomposition, if any.
    std::string fresh;
    /// Sub-pairs referenced by the equation, printed, keyed by role.
    std::map<std::string, std::pair<std::string, std::string>> parts;
    /// How the primed parameter tuples were chosen (eta value equations only).
    std::string audit;
};

struct PairTable {
    std::vector<PairEntry> entries;

    const PairEntry* find(const std::string& var) const;
    std::string to_json() const;
};

struct BuildConfig {
    std::size_t eval_fuel = lambda::kDefaultFuel;
    bool eta = false;
    /// A diverging left term is related to anything.
    bool preorder = false;
    /// Maximal number of pairs in the closure.
    std::size_t cap = 200;
};

struct BuildResult {
    EquationSystem system;
    PairTable table;
    /// False when the cap stopped the closure; some variables then lack an equation.
    bool complete = true;
    std::string report;
};

class BuildError : public std::runtime_error {
public:
    BuildError(const std::string& msg, std::string l, std::string r)
        : std::runtime_error(msg), left(std::move(l)), right(std::move(r)) {}
    std::string left;
    std::string right;
};

using Relation = std::vector<std::pair<lambda::Term, lambda::Term>>;

/// The system whose bodies are encodings into Internal pi with variables in place of
/// sub-terms. Throws BuildError when a pair fits no case or evaluation runs out of fuel.
BuildResult build_eqcbv(const Relation& r, const BuildConfig& cfg = {});
/// The optimised system: same X indices, plus the value family XV.
BuildResult build_eqcbvp(const Relation& r, const BuildConfig& cfg = {});

/// Reads a JSON list of two-element lists of lambda terms.
Relation parse_relation(const std::string& json_text);

struct CheckReport {
    bool ok = true;
    std::vector<std::string> problems;
};

/// Every variable occurrence lies under a prefix.
CheckReport check_guarded(const EquationSystem& sys);
/// No name, bound or free, is used both as an input subject and as an output subject,
/// following applications of variables and constants.
CheckReport static_io_separation(const EquationSystem& sys, const pi::ConstantEnv& env = {});

struct SyntacticSolution {
    /// `K_{i}` for `X_{i}` and `KV_{i}` for `XV_{i}`.
    pi::ConstantEnv env;
    std::map<std::string, std::string> constant_of;

    /// The solution component of a variable, as the abstraction `(params) K<params>`.
    pi::Abstraction agent(const EquationSystem& sys, const std::string& var) const;
};
SyntacticSolution syntactic_solution(const EquationSystem& sys);

struct DivergenceReport {
    /// Inequivalent when a divergence is found (evidence: visible prefix, then the cycle).
    Verdict verdict;
    /// Set when the static input/output argument applies.
    bool static_argument = false;
    /// Internal steps seen during the scan.
    std::size_t tau_steps = 0;
};

/// Scans up to `depth` visible actions with internal closures. With `use_static`, a
/// passing static_io_separation of the agent settles the question without exploration.
DivergenceReport divergence_scan(const pi::Abstraction& agent, const pi::ConstantEnv& env, std::size_t depth,
                                 std::size_t tau_fuel, bool use_static = true);

/// Candidate solution components, by variable.
using Candidates = std::map<std::string, pi::Abstraction>;

/// `(y~,p) [[M]]` for every X pair (M,N) of the table, and the value part of `[[V]]`
/// for every XV pair (V,V'). `left` selects the component.
Candidates encoding_family(const PairTable& table, bool left);

struct IndexVerdict {
    std::string var;
    Verdict verdict;
};

/// F_i against E_i[F~] by bounded weak bisimilarity in Internal pi.
std::vector<IndexVerdict> verify_solution(const EquationSystem& sys, const Candidates& f, const pi::ConstantEnv& env,
                                          const equiv::BisimConfig& cfg = {});

struct TraceBounds {
    std::size_t max_len = 6;
    std::size_t tau_fuel = 64;
};

/// Pre-fixed point: E_i[F~] included in F_i.
std::vector<IndexVerdict> prefix_point_check(const EquationSystem& sys, const Candidates& f, const pi::ConstantEnv& env,
                                             const TraceBounds& b = {});
/// Post-fixed point: F_i included in E_i[F~].
std::vector<IndexVerdict> postfix_point_check(const EquationSystem& sys, const Candidates& f, const pi::ConstantEnv& env,
                                              const TraceBounds& b = {});

struct ExtendsReport {
    bool ok = true;
    /// Bisimilarity of the two closed bodies, per shared index.
    std::vector<IndexVerdict> bisim;
    /// Trace equivalence of the same bodies, per shared index.
    std::vector<IndexVerdict> traces;
};

/// Bounded check that `wider` extends `narrower` along `extra`: for every shared index the
/// two bodies, closed with the same candidates, are bisimilar. Throws std::invalid_argument
/// unless the variables of `wider` are those of `narrower` plus `extra`.
ExtendsReport check_extends(const EquationSystem& wider, const EquationSystem& narrower,
                            const std::vector<std::string>& extra, const Candidates& f, const pi::ConstantEnv& env,
                            const equiv::BisimConfig& cfg = {}, const TraceBounds& b = {});

}  // namespace eagerpi::eqn
