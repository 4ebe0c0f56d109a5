#include "laws.hpp"

#include "eagerpi/encodings.hpp"
#include "eagerpi/equivalence.hpp"
#include "eagerpi/trees.hpp"

namespace eagerpi::cli {

namespace {

const char* const kOmega = "(\\x.x x)(\\x.x x)";
const char* const kZ = "(\\f.(\\x.f (\\v.x x v))(\\x.f (\\v.x x v)))";

const char* dialect_name(pi::Dialect d) {
    switch (d) {
        case pi::Dialect::Full: return "full";
        case pi::Dialect::Internal: return "internal";
        case pi::Dialect::Alpi: return "alpi";
    }
    return "?";
}

const char* encoding_name(enc::Encoding e) {
    switch (e) {
        case enc::Encoding::MilnerV: return "milner";
        case enc::Encoding::MilnerVPrime: return "milner-prime";
        case enc::Encoding::InternalPi: return "internal";
    }
    return "?";
}

Law bisim_law(std::string id, enc::Encoding e, pi::Dialect d, std::string m, std::string n, bool holds) {
    Law l{std::move(id), encoding_name(e), dialect_name(d), holds, nullptr};
    l.run = [e, d, m = std::move(m), n = std::move(n)](const Bounds& b) {
        pi::Name p = pi::cont("p");
        equiv::BisimConfig cfg;
        cfg.depth = b.depth;
        cfg.tau_fuel = b.tau_fuel;
        cfg.dialect = d;
        return equiv::weak_bisim(enc::encode_with(e, lambda::parse(m), p).process,
                                 enc::encode_with(e, lambda::parse(n), p).process, {}, cfg);
    };
    return l;
}

Law trace_law(std::string id, enc::Encoding e, pi::Dialect d, std::string m, std::string n, bool holds, bool inclusion) {
    Law l{std::move(id), encoding_name(e), dialect_name(d), holds, nullptr};
    l.run = [e, d, m = std::move(m), n = std::move(n), inclusion](const Bounds& b) {
        pi::Name p = pi::cont("p");
        auto pm = enc::encode_with(e, lambda::parse(m), p).process;
        auto pn = enc::encode_with(e, lambda::parse(n), p).process;
        return inclusion ? equiv::trace_incl(pm, pn, {}, d, b.trace_len, b.tau_fuel)
                         : equiv::trace_eq(pm, pn, {}, d, b.trace_len, b.tau_fuel);
    };
    return l;
}

enum class Tree { Enf, Enfe, Sim };

Law tree_law(std::string id, Tree t, std::string m, std::string n, bool holds) {
    const char* kind = t == Tree::Enf ? "enf" : t == Tree::Enfe ? "enfe" : "enfe-sim";
    Law l{std::move(id), kind, "lambda", holds, nullptr};
    l.run = [t, m = std::move(m), n = std::move(n)](const Bounds& b) {
        trees::TreeCheckConfig cfg;
        cfg.eval_fuel = b.eval_fuel;
        auto lm = lambda::parse(m);
        auto ln = lambda::parse(n);
        switch (t) {
            case Tree::Enf: return trees::enf_bisim(lm, ln, cfg);
            case Tree::Enfe: return trees::enfe_bisim(lm, ln, cfg);
            case Tree::Sim: return trees::enfe_sim(lm, ln, cfg);
        }
        return Verdict{};
    };
    return l;
}

}  // namespace

std::vector<Law> law_suite() {
    using enc::Encoding;
    using pi::Dialect;
    std::vector<Law> out;

    const std::pair<const char*, const char*> beta[] = {
        {"(\\x.x)(\\y.y)", "\\y.y"},
        {"(\\x.x x)(\\y.y)", "\\y.y"},
        {"(\\x.x y)(\\z.z)", "y"},
        {"(\\x.\\y.x)(\\z.z)", "\\y.\\z.z"},
    };
    int i = 0;
    for (const auto& [m, n] : beta) {
        std::string k = std::to_string(i++);
        out.push_back(bisim_law("beta-" + k, Encoding::InternalPi, Dialect::Internal, m, n, true));
        out.push_back(bisim_law("beta-" + k, Encoding::MilnerV, Dialect::Alpi, m, n, true));
        out.push_back(bisim_law("beta-" + k, Encoding::MilnerVPrime, Dialect::Full, m, n, true));
    }

    const char* ixy = "(\\z.z)(x y)";
    out.push_back(bisim_law("nonlaw-bisim", Encoding::MilnerV, Dialect::Full, ixy, "x y", false));
    out.push_back(bisim_law("nonlaw-bisim", Encoding::MilnerVPrime, Dialect::Full, ixy, "x y", false));
    out.push_back(trace_law("nonlaw-traces", Encoding::MilnerV, Dialect::Full, ixy, "x y", false, false));
    out.push_back(trace_law("nonlaw-traces", Encoding::MilnerVPrime, Dialect::Full, ixy, "x y", false, false));
    out.push_back(bisim_law("nonlaw-rectified", Encoding::InternalPi, Dialect::Internal, ixy, "x y", true));
    out.push_back(bisim_law("nonlaw-rectified", Encoding::MilnerV, Dialect::Alpi, ixy, "x y", true));

    out.push_back(bisim_law("eta", Encoding::InternalPi, Dialect::Internal, "\\y.x y", "x", true));
    out.push_back(bisim_law("eta", Encoding::MilnerVPrime, Dialect::Full, "\\y.x y", "x", false));

    for (const char* v : {"y", "\\z.z"}) {
        std::string xv = std::string("x (") + v + ")";
        out.push_back(tree_law("tree-omega", Tree::Enf, kOmega, "(\\y." + std::string(kOmega) + ")(" + xv + ")", false));
        out.push_back(tree_law("tree-dup", Tree::Enf, xv, "(\\y." + xv + ")(" + xv + ")", false));
    }
    out.push_back(tree_law("tree-eta", Tree::Enf, "\\y.x y", "x", false));
    out.push_back(tree_law("tree-eta", Tree::Enfe, "\\y.x y", "x", true));
    out.push_back(tree_law("tree-fix", Tree::Enfe, "x", std::string(kZ) + "(\\z x y.x (z y)) x", true));

    for (const char* n : {"\\x.x", "x y", "x (\\z.z)"}) {
        out.push_back(trace_law("preorder-omega", Encoding::InternalPi, Dialect::Internal, kOmega, n, true, true));
    }
    out.push_back(tree_law("preorder-sim", Tree::Sim, kOmega, "\\x.x", true));
    out.push_back(tree_law("preorder-sim", Tree::Sim, "\\x.x", kOmega, false));

    out.push_back(bisim_law("stuck-commute", Encoding::InternalPi, Dialect::Internal, "(\\z.z (\\w.w))(x y)", "x y (\\w.w)", true));
    out.push_back(bisim_law("eta-value", Encoding::InternalPi, Dialect::Internal, "x", "\\z.x z", true));
    return out;
}

}  // namespace eagerpi::cli
