#pragma once

// Polyadic pi-calculus with sorted names, recursive constants and the built-in
// forwarder constant `fwd`.

#include "eagerpi/sorts.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace eagerpi::pi {

/// Names are identified by `id`; the sort travels with every occurrence.
struct Name {
    std::string id;
    SortId sort = kVal;

    friend bool operator==(const Name& a, const Name& b) { return a.id == b.id; }
    friend bool operator<(const Name& a, const Name& b) { return a.id < b.id; }
};

inline Name val(std::string id) { return {std::move(id), kVal}; }
inline Name cont(std::string id) { return {std::move(id), kCont}; }

enum class Dialect { Full, Internal, Alpi };
const char* to_string(Dialect d);
/// Accepts "full", "internal" / "ipi", "alpi".
std::optional<Dialect> parse_dialect(std::string_view s);

class Process {
public:
    enum class Kind { Nil, Input, Output, BoundOutput, Restriction, Parallel, Replicated, Apply };

    static Process nil();
    static Process input(Name subject, std::vector<Name> objects, Process body);
    static Process output(Name subject, std::vector<Name> objects, Process body = nil());
    /// a(^b~).P: the objects are fresh names bound in the body.
    static Process bound_output(Name subject, std::vector<Name> objects, Process body);
    static Process restrict(Name n, Process body);
    /// Nested restrictions, outermost first.
    static Process restrict(const std::vector<Name>& ns, Process body);
    static Process par(Process l, Process r);
    /// Right-nested parallel composition; Nil for an empty list.
    static Process par(const std::vector<Process>& ps);
    static Process replicated(Name subject, std::vector<Name> objects, Process body);
    static Process apply(std::string constant, std::vector<Name> args);

    Kind kind() const { return node_->kind; }
    bool is_nil() const { return kind() == Kind::Nil; }
    /// Input and replicated input.
    bool is_input() const { return kind() == Kind::Input || kind() == Kind::Replicated; }
    /// Free and bound output.
    bool is_output() const { return kind() == Kind::Output || kind() == Kind::BoundOutput; }
    bool is_prefix() const { return is_input() || is_output(); }

    const Name& subject() const { return node_->subject; }
    /// Objects of a prefix, arguments of an application.
    const std::vector<Name>& names() const { return node_->names; }
    const Name& restricted() const { return node_->subject; }
    const Process& body() const { return node_->children[0]; }
    const Process& left() const { return node_->children[0]; }
    const Process& right() const { return node_->children[1]; }
    const std::string& constant() const { return node_->constant; }

    /// Structural identity, no alpha conversion.
    friend bool operator==(const Process& a, const Process& b);

private:
    struct Node {
        Kind kind;
        Name subject;
        std::vector<Name> names;
        std::vector<Process> children;
        std::string constant;
    };
    explicit Process(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static Process make(Node n);
    std::shared_ptr<const Node> node_;
};

struct Abstraction {
    std::vector<Name> params;
    Process body = Process::nil();
};

/// `0`, `a(x,y).P`, `a!(b)`, `a!(^y).P`, `new a,b in P`, `P | Q`, `!a(x).P`, `K<a,b>`.
std::string to_string(const Process& p);
std::string to_string(const Abstraction& a);

std::set<Name> free_names(const Process& p);
std::set<std::string> free_ids(const Process& p);
/// Every identifier occurring in p, bound or free.
std::set<std::string> all_ids(const Process& p);

/// First of `base`, `base1`, `base2`, ... (trailing digits of `base` dropped) not in `avoid`.
std::string fresh_id(const std::string& base, const std::set<std::string>& avoid);

/// Capture-avoiding simultaneous renaming of free names.
Process rename(const Process& p, const std::map<std::string, Name>& sub);
Process instantiate(const Abstraction& a, const std::vector<Name>& args);

/// Bound names become binding levels; free names found in `free_tokens` print as the mapped token.
std::string canonical_key(const Process& p, const std::map<std::string, std::string>& free_tokens = {});
bool alpha_equal(const Process& a, const Process& b);

/// Recursive constants. `fwd` is built in: fwd<a,b> re-emits at b whatever arrives at a,
/// replicated unless the sort of a is linear.
class ConstantEnv {
public:
    static constexpr const char* kForwarder = "fwd";

    /// Throws std::invalid_argument when the definition is not name-closed or redefines `fwd`.
    void define(const std::string& name, Abstraction def);
    bool contains(const std::string& name) const;
    /// Nullptr for `fwd` and for unknown constants.
    const Abstraction* find(const std::string& name) const;
    /// One unfolding of an application. Throws on unknown constants and arity mismatches.
    Process unfold(const Process& application) const;
    const std::map<std::string, Abstraction>& definitions() const { return defs_; }
    /// Adds every definition of `other`, replacing same-named ones.
    void merge(const ConstantEnv& other);

private:
    std::map<std::string, Abstraction> defs_;
};

Process forwarder(const Name& a, const Name& b);
/// The defining body of fwd<a,b>.
Process forwarder_body(const Name& a, const Name& b);

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
    explicit operator bool() const { return ok(); }
};

/// All outputs bound; components of every tuple pairwise distinct. With an environment,
/// the definitions of constants reachable from p are checked as well.
ValidationReport validate_internal(const Process& p, const ConstantEnv* env = nullptr);
/// Outputs without continuation; received names never used as input subjects.
ValidationReport validate_alpi(const Process& p, const ConstantEnv* env = nullptr);
/// Subject payloads agree with object sorts; applications agree with parameter sorts.
ValidationReport validate_sorts(const Process& p, const ConstantEnv& env);
/// Sorts plus the dialect-specific checks.
ValidationReport validate(const Process& p, const ConstantEnv& env, Dialect d);
/// Free names used as input subjects (agents of this kind fall outside the ALpi characterisation).
std::set<std::string> free_input_subjects(const Process& p, const ConstantEnv* env = nullptr);

struct Polarity {
    bool input = false;
    bool output = false;
};
/// For every constant (including `fwd`), how each parameter can end up being used as a
/// channel subject, following constant applications to a fixpoint.
std::map<std::string, std::vector<Polarity>> parameter_polarities(const ConstantEnv& env);

class PiParseError : public std::runtime_error {
public:
    PiParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
    std::size_t position;
};

class SortError : public std::runtime_error {
public:
    SortError(const std::string& msg, std::string offending)
        : std::runtime_error(msg), name(std::move(offending)) {}
    std::string name;
};

/// Parses `sort` and `def` declarations followed by an optional process (Nil when absent).
/// Definitions are added to `env`; sorts of all names are inferred.
Process parse_pi(std::string_view text, ConstantEnv& env);
Process parse_pi(std::string_view text);

}  // namespace eagerpi::pi
