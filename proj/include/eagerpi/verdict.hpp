#pragma once

// Three-valued result of every bounded check in the toolkit.

#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace eagerpi {

struct Inequivalent {
    /// Clause choices (trees) or challenger moves (processes) leading to the mismatch.
    std::vector<std::string> evidence;
    /// The pair at which the mismatch was observed, printed.
    std::pair<std::string, std::string> witness;
};

struct EquivalentUpTo {
    std::size_t depth = 0;
    /// No bound was reached: every explored branch closed on an assumption or a leaf.
    bool closed = false;
};

enum class UnknownReason { Fuel, Depth, Truncated };

struct Unknown {
    UnknownReason reason = UnknownReason::Fuel;
    std::string detail;
};

struct CheckStats {
    std::size_t states_visited = 0;
    bool truncated = false;
};

class Verdict {
public:
    Verdict() : value_(EquivalentUpTo{}) {}
    Verdict(Inequivalent v) : value_(std::move(v)) {}
    Verdict(EquivalentUpTo v) : value_(v) {}
    Verdict(Unknown v) : value_(std::move(v)) {}

    bool inequivalent() const { return std::holds_alternative<Inequivalent>(value_); }
    bool equivalent() const { return std::holds_alternative<EquivalentUpTo>(value_); }
    bool unknown() const { return std::holds_alternative<Unknown>(value_); }

    const Inequivalent& as_inequivalent() const { return std::get<Inequivalent>(value_); }
    const EquivalentUpTo& as_equivalent() const { return std::get<EquivalentUpTo>(value_); }
    const Unknown& as_unknown() const { return std::get<Unknown>(value_); }

    const std::variant<Inequivalent, EquivalentUpTo, Unknown>& value() const { return value_; }

    CheckStats stats;

    /// "inequivalent", "equivalent-up-to" or "unknown".
    std::string label() const;
    /// One line, human readable.
    std::string summary() const;

private:
    std::variant<Inequivalent, EquivalentUpTo, Unknown> value_;
};

const char* to_string(UnknownReason r);

}  // namespace eagerpi
