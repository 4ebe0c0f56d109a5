#pragma once

// The built-in suite of laws and non-laws with their expected verdicts.

#include "eagerpi/verdict.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace eagerpi::cli {

struct Bounds {
    std::size_t depth = 8;
    std::size_t tau_fuel = 64;
    std::size_t trace_len = 6;
    std::size_t eval_fuel = 10000;
};

struct Law {
    std::string id;
    std::string encoding;
    std::string dialect;
    /// Expected outcome: the law holds (Equivalent) or fails (Inequivalent).
    bool holds = true;
    std::function<Verdict(const Bounds&)> run;
};

std::vector<Law> law_suite();

struct LawRecord {
    const Law* law;
    Verdict verdict;
    double seconds = 0;
    /// Verdict agrees with the expectation.
    bool matches = false;
};

}  // namespace eagerpi::cli
