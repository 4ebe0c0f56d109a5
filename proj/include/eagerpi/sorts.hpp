#pragma once

// Process-wide registry of name sorts. A sort fixes the sorts of the names
// carried by a channel of that sort.

#include <optional>
#include <string>
#include <vector>

namespace eagerpi::pi {

using SortId = int;

/// Value names carry a (value, continuation) pair.
inline constexpr SortId kVal = 0;
/// Continuation names carry one value name and are used linearly.
inline constexpr SortId kCont = 1;

struct SortInfo {
    std::string name;
    std::vector<SortId> payload;
    /// Forwarders between linear names are not replicated.
    bool linear = false;
    /// False for sorts synthesised by sort inference.
    bool declared = true;
};

struct SortDecl {
    std::string name;
    std::vector<std::string> payload;
    bool linear = false;
};

SortInfo sort_info(SortId id);
std::optional<SortId> find_sort(const std::string& name);
/// Registers a group of possibly mutually recursive sorts. Redeclaring a name with
/// the same signature returns the existing id; a different signature throws.
std::vector<SortId> declare_sorts(const std::vector<SortDecl>& decls);
/// A fresh sort named `_sN` whose payload is filled in later by `set_anonymous_payload`.
SortId new_anonymous_sort();
void set_anonymous_payload(SortId id, std::vector<SortId> payload);
/// Declared sorts in the order sort inference tries them: user sorts, then VAL, then CONT.
std::vector<SortId> declared_sorts();

}  // namespace eagerpi::pi
