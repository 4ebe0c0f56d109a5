#pragma once

// Call-by-value lambda calculus: terms, value substitution, eager reduction,
// eager normal forms and divergence detection.

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace eagerpi::lambda {

class Term {
public:
    enum class Kind { Var, Abs, App };

    static Term var(std::string name);
    static Term abs(std::string binder, Term body);
    static Term app(Term fun, Term arg);

    Kind kind() const { return node_->kind; }
    bool is_var() const { return kind() == Kind::Var; }
    bool is_abs() const { return kind() == Kind::Abs; }
    bool is_app() const { return kind() == Kind::App; }
    /// Values are variables and abstractions.
    bool is_value() const { return kind() != Kind::App; }

    /// Variable name for Var, binder for Abs.
    const std::string& name() const { return node_->name; }
    const Term& body() const { return node_->children[0]; }
    const Term& fun() const { return node_->children[0]; }
    const Term& arg() const { return node_->children[1]; }

    /// Structural identity (no alpha conversion).
    friend bool operator==(const Term& a, const Term& b);

private:
    struct Node {
        Kind kind;
        std::string name;
        std::vector<Term> children;
    };
    explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
    std::size_t position;
};

/// `term ::= '\' ident+ '.' term | atom+`, `atom ::= ident | '(' term ')'`.
Term parse(std::string_view text);

/// Prints with minimal parentheses; `\x y.M` sugar for nested abstractions.
std::string to_string(const Term& t);

std::set<std::string> free_vars(const Term& t);
/// Every name occurring in the term, free or bound.
std::set<std::string> all_names(const Term& t);

/// First of `base`, `base1`, `base2`, ... not contained in `avoid`.
std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);

/// Binders become de Bruijn indices, free names keep their identity.
std::string canonical_key(const Term& t);
bool alpha_equal(const Term& a, const Term& b);

/// Joint canonical form of a pair in which free names are also renamed, by order of
/// first occurrence. Pairs that differ by an injective renaming of free names share a key.
struct PairKey {
    std::string key;
    /// Free names of the pair in order of first occurrence.
    std::vector<std::string> free_order;
};
PairKey pair_key(const Term& a, const Term& b);

/// Capture-avoiding M{V/x}. Throws std::invalid_argument if `value` is an application.
Term subst_value(const Term& m, const std::string& x, const Term& value);

/// Evaluation context E ::= [] | E M | V E, stored outermost frame first.
class EvalContext {
public:
    struct Frame {
        enum class Side { AppL, AppR };
        Side side;
        Term other;  // the argument for AppL, the value for AppR
    };

    EvalContext() = default;
    static EvalContext hole() { return {}; }

    bool is_hole() const { return frames_.empty(); }
    const std::vector<Frame>& frames() const { return frames_; }

    /// Adds an innermost frame.
    void push_left(Term arg);
    void push_right(Term value);

    Term plug(const Term& t) const;
    friend bool operator==(const EvalContext& a, const EvalContext& b);

private:
    std::vector<Frame> frames_;
};

/// The unique eager contractum, if the term has a redex in evaluation position.
std::optional<Term> step(const Term& m);

struct Enf {
    Term term;
    std::size_t steps;
};
struct Diverged {
    /// A reduction cycle: each term reduces to the next, the last one to the first.
    std::vector<Term> cycle;
};
struct FuelExhausted {
    Term last;
};
using EvalOutcome = std::variant<Enf, Diverged, FuelExhausted>;

inline constexpr std::size_t kDefaultFuel = 10'000;

/// Iterates `step`; divergence is reported only when a cycle on canonical forms is seen.
EvalOutcome evaluate(const Term& m, std::size_t fuel = kDefaultFuel);

struct ValueVar {
    std::string name;
};
struct ValueAbs {
    std::string binder;
    Term body;
};
struct Stuck {
    EvalContext context;
    std::string head;
    Term arg;  // a value
};
using EnfShape = std::variant<ValueVar, ValueAbs, Stuck>;

/// Throws std::invalid_argument when the term still reduces.
EnfShape classify_enf(const Term& m);
/// plug(ctx, head arg) for a Stuck shape.
Term rebuild(const Stuck& s);

}  // namespace eagerpi::lambda
