#include "eagerpi/verdict.hpp"

namespace eagerpi {

const char* to_string(UnknownReason r) {
    switch (r) {
        case UnknownReason::Fuel: return "fuel";
        case UnknownReason::Depth: return "depth";
        case UnknownReason::Truncated: return "truncated";
    }
    return "?";
}

std::string Verdict::label() const {
    if (inequivalent()) return "inequivalent";
    if (equivalent()) return "equivalent-up-to";
    return "unknown";
}

std::string Verdict::summary() const {
    if (const auto* e = std::get_if<EquivalentUpTo>(&value_)) {
        std::string s = "equivalent up to depth " + std::to_string(e->depth);
        if (e->closed) s += " (closed)";
        return s;
    }
    if (const auto* u = std::get_if<Unknown>(&value_)) {
        std::string s = std::string("unknown (") + to_string(u->reason) + ")";
        if (!u->detail.empty()) s += ": " + u->detail;
        return s;
    }
    const auto& i = std::get<Inequivalent>(value_);
    std::string s = "inequivalent";
    if (!i.evidence.empty()) {
        s += ":";
        for (const auto& e : i.evidence) s += " " + e;
    }
    return s;
}

}  // namespace eagerpi
