#pragma once

// Call-by-value encodings of the lambda calculus: Milner's V and V' into full pi,
// and the encoding into Internal pi built on the forwarder constant.

#include "eagerpi/lambda.hpp"
#include "eagerpi/pi.hpp"

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace eagerpi::enc {

enum class Encoding { MilnerV, MilnerVPrime, InternalPi };

const char* to_string(Encoding e);
/// "milner", "milner-prime", "internal".
std::optional<Encoding> parse_encoding(std::string_view s);

/// Deterministic supply of encoder names: `stem`, `stem1`, ... skipping reserved ids.
/// The counter starts at the value of EAGERPI_SEED when set.
class NameSupply {
public:
    explicit NameSupply(std::set<std::string> reserved);
    NameSupply(std::set<std::string> reserved, std::size_t base);
    pi::Name next(const std::string& stem, pi::SortId sort);
    void reserve(const std::string& id) { reserved_.insert(id); }

private:
    std::set<std::string> reserved_;
    std::size_t base_;
};

/// Base counter taken from EAGERPI_SEED (0 when unset or malformed).
std::size_t seed_base();

/// Lambda variables become value names with the same id.
pi::Name var_name(const std::string& x);

pi::Process encode_milner(const lambda::Term& m, const pi::Name& p);
pi::Process encode_milner_prime(const lambda::Term& m, const pi::Name& p);
pi::Process encode_internal(const lambda::Term& m, const pi::Name& p);

/// Same encodings with an explicit name supply. `hole` maps placeholder lambda
/// variables to processes that stand for the encoding at a given continuation.
struct Hooks {
    /// Called for a variable listed in `placeholders` instead of the variable clause.
    std::function<pi::Process(const std::string& var, const pi::Name& cont)> placeholder;
    std::set<std::string> placeholders;
};
pi::Process encode(Encoding e, const lambda::Term& m, const pi::Name& p, NameSupply& names, const Hooks& hooks = {});

struct Encoded {
    pi::Process process;
    /// Dialects whose LTS the result is meant to be analysed with, preferred one first.
    std::vector<pi::Dialect> dialects;
};
Encoded encode_with(Encoding e, const lambda::Term& m, const pi::Name& p);

}  // namespace eagerpi::enc
