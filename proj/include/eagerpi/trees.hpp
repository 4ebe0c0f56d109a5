#pragma once

// Bounded checkers for eager normal-form bisimilarity, its eta variant, and
// eta-eager normal-form similarity.

#include "eagerpi/lambda.hpp"
#include "eagerpi/verdict.hpp"

namespace eagerpi::trees {

enum class TreeMode { Bisimulation, Similarity };

struct TreeCheckConfig {
    std::size_t eval_fuel = lambda::kDefaultFuel;
    /// Maximum number of pairs on one coinductive assumption chain.
    std::size_t depth = 32;
    bool eta = false;
    TreeMode mode = TreeMode::Bisimulation;
};

/// Generic entry point; the three wrappers below fix `eta` and `mode`.
Verdict tree_check(const lambda::Term& m, const lambda::Term& n, const TreeCheckConfig& cfg);

Verdict enf_bisim(const lambda::Term& m, const lambda::Term& n, TreeCheckConfig cfg = {});
Verdict enfe_bisim(const lambda::Term& m, const lambda::Term& n, TreeCheckConfig cfg = {});
Verdict enfe_sim(const lambda::Term& m, const lambda::Term& n, TreeCheckConfig cfg = {});

}  // namespace eagerpi::trees
