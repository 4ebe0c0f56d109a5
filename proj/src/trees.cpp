#include "eagerpi/trees.hpp"

#include <unordered_map>
#include <unordered_set>

namespace eagerpi::trees {

using lambda::Term;

namespace {

struct Result {
    enum class Kind { Related, Mismatch, Unknown } kind = Kind::Related;
    std::vector<std::string> evidence;
    std::pair<std::string, std::string> witness;
    std::string detail;
    bool bound_hit = false;

    static Result related() { return {}; }
    static Result mismatch(const Term& m, const Term& n, std::string why) {
        Result r;
        r.kind = Kind::Mismatch;
        r.evidence.push_back(std::move(why));
        r.witness = {lambda::to_string(m), lambda::to_string(n)};
        return r;
    }
    static Result unknown(std::string detail) {
        Result r;
        r.kind = Kind::Unknown;
        r.detail = std::move(detail);
        return r;
    }
};

class Checker {
public:
    explicit Checker(const TreeCheckConfig& cfg) : cfg_(cfg) {}

    Result check(const Term& m, const Term& n, std::size_t remaining) {
        auto key = lambda::pair_key(m, n).key;
        if (path_.count(key) != 0) return Result::related();
        if (remaining == 0) {
            Result r;
            r.bound_hit = true;
            return r;
        }
        ++visited_;
        path_.insert(key);
        Result r = expand(m, n, remaining - 1);
        path_.erase(key);
        return r;
    }

    std::size_t visited() const { return visited_; }

private:
    const lambda::EvalOutcome& eval(const Term& t) {
        auto key = lambda::canonical_key(t);
        auto it = evals_.find(key);
        if (it == evals_.end()) it = evals_.emplace(std::move(key), lambda::evaluate(t, cfg_.eval_fuel)).first;
        return it->second;
    }

    static std::string fresh_for(std::initializer_list<const Term*> terms) {
        std::set<std::string> avoid;
        for (const Term* t : terms) {
            auto fv = lambda::free_vars(*t);
            avoid.insert(fv.begin(), fv.end());
        }
        return lambda::fresh_name("z", avoid);
    }

    // Children are explored in order; the first mismatch wins, then unknowns.
    Result both(const char* tag1, const Term& a1, const Term& b1, const char* tag2, const Term& a2,
                const Term& b2, std::size_t remaining) {
        Result r1 = check(a1, b1, remaining);
        if (r1.kind == Result::Kind::Mismatch) {
            r1.evidence.insert(r1.evidence.begin(), tag1);
            return r1;
        }
        Result r2 = check(a2, b2, remaining);
        if (r2.kind == Result::Kind::Mismatch) {
            r2.evidence.insert(r2.evidence.begin(), tag2);
            return r2;
        }
        if (r1.kind == Result::Kind::Unknown) return r1;
        if (r2.kind == Result::Kind::Unknown) return r2;
        Result ok;
        ok.bound_hit = r1.bound_hit || r2.bound_hit;
        return ok;
    }

    Result one(const char* tag, const Term& a, const Term& b, std::size_t remaining) {
        Result r = check(a, b, remaining);
        if (r.kind == Result::Kind::Mismatch) r.evidence.insert(r.evidence.begin(), tag);
        return r;
    }

    // Clause 5: m converged to variable x, n converged to \y.body.
    Result eta_clause(const std::string& x, const Term& m_nf, std::string y, Term body, const Term& n_nf,
                      bool mirrored, std::size_t remaining) {
        if (y == x) {
            std::string fresh = fresh_for({&body, &m_nf});
            body = lambda::subst_value(body, y, Term::var(fresh));
            y = fresh;
        }
        const auto& ob = eval(body);
        if (std::holds_alternative<lambda::FuelExhausted>(ob)) return Result::unknown("evaluation fuel exhausted");
        auto mism = [&](std::string why) {
            return mirrored ? Result::mismatch(n_nf, m_nf, std::move(why)) : Result::mismatch(m_nf, n_nf, std::move(why));
        };
        if (std::holds_alternative<lambda::Diverged>(ob)) return mism("eta: body of the abstraction diverges");
        auto shape = lambda::classify_enf(std::get<lambda::Enf>(ob).term);
        const auto* st = std::get_if<lambda::Stuck>(&shape);
        if (st == nullptr || st->head != x) return mism("eta: body is not stuck on " + x);
        Term yv = Term::var(y);
        Term ev_body = std::get<lambda::Enf>(ob).term;
        std::string z = fresh_for({&ev_body, &m_nf, &n_nf});
        Term zv = Term::var(z);
        Term ez = st->context.plug(zv);
        if (mirrored) return both("eta-arg", st->arg, yv, "eta-ctx", ez, zv, remaining);
        return both("eta-arg", yv, st->arg, "eta-ctx", zv, ez, remaining);
    }

    Result expand(const Term& m, const Term& n, std::size_t remaining) {
        const auto& om = eval(m);
        const auto& on = eval(n);
        bool sim = cfg_.mode == TreeMode::Similarity;
        if (std::holds_alternative<lambda::FuelExhausted>(om)) return Result::unknown("evaluation fuel exhausted on the left");
        bool m_div = std::holds_alternative<lambda::Diverged>(om);
        if (sim && m_div) return Result::related();
        if (std::holds_alternative<lambda::FuelExhausted>(on)) return Result::unknown("evaluation fuel exhausted on the right");
        bool n_div = std::holds_alternative<lambda::Diverged>(on);
        if (m_div && n_div) return Result::related();
        if (m_div) return Result::mismatch(m, n, "divergence: only the left term diverges");
        if (n_div) return Result::mismatch(m, n, "divergence: only the right term diverges");

        const Term& mn = std::get<lambda::Enf>(om).term;
        const Term& nn = std::get<lambda::Enf>(on).term;
        auto sm = lambda::classify_enf(mn);
        auto sn = lambda::classify_enf(nn);

        if (auto* xm = std::get_if<lambda::ValueVar>(&sm)) {
            if (auto* xn = std::get_if<lambda::ValueVar>(&sn)) {
                if (xm->name == xn->name) return Result::related();
                return Result::mismatch(mn, nn, "variables differ");
            }
            if (auto* an = std::get_if<lambda::ValueAbs>(&sn); an && cfg_.eta) {
                return eta_clause(xm->name, mn, an->binder, an->body, nn, false, remaining);
            }
            return Result::mismatch(mn, nn, "shape: variable against non-variable");
        }
        if (auto* am = std::get_if<lambda::ValueAbs>(&sm)) {
            if (auto* an = std::get_if<lambda::ValueAbs>(&sn)) {
                std::string z = fresh_for({&mn, &nn});
                Term zv = Term::var(z);
                Term bm = lambda::subst_value(am->body, am->binder, zv);
                Term bn = lambda::subst_value(an->body, an->binder, zv);
                return one("abs-body", bm, bn, remaining);
            }
            if (auto* xn = std::get_if<lambda::ValueVar>(&sn); xn && cfg_.eta) {
                return eta_clause(xn->name, nn, am->binder, am->body, mn, true, remaining);
            }
            return Result::mismatch(mn, nn, "shape: abstraction against non-abstraction");
        }
        const auto& stm = std::get<lambda::Stuck>(sm);
        const auto* stn = std::get_if<lambda::Stuck>(&sn);
        if (stn == nullptr) return Result::mismatch(mn, nn, "shape: stuck term against value");
        if (stm.head != stn->head) return Result::mismatch(mn, nn, "stuck on different variables");
        std::string z = fresh_for({&mn, &nn});
        Term zv = Term::var(z);
        return both("stuck-arg", stm.arg, stn->arg, "stuck-ctx", stm.context.plug(zv), stn->context.plug(zv), remaining);
    }

    TreeCheckConfig cfg_;
    std::unordered_set<std::string> path_;
    std::unordered_map<std::string, lambda::EvalOutcome> evals_;
    std::size_t visited_ = 0;
};

}  // namespace

Verdict tree_check(const Term& m, const Term& n, const TreeCheckConfig& cfg) {
    if (cfg.depth == 0 || cfg.eval_fuel == 0) throw std::invalid_argument("tree_check: depth and eval fuel must be positive");
    Checker c(cfg);
    Result r = c.check(m, n, cfg.depth);
    Verdict v;
    switch (r.kind) {
        case Result::Kind::Mismatch: v = Inequivalent{std::move(r.evidence), std::move(r.witness)}; break;
        case Result::Kind::Unknown: v = Unknown{UnknownReason::Fuel, std::move(r.detail)}; break;
        case Result::Kind::Related: v = EquivalentUpTo{cfg.depth, !r.bound_hit}; break;
    }
    v.stats.states_visited = c.visited();
    return v;
}

Verdict enf_bisim(const Term& m, const Term& n, TreeCheckConfig cfg) {
    cfg.eta = false;
    cfg.mode = TreeMode::Bisimulation;
    return tree_check(m, n, cfg);
}

Verdict enfe_bisim(const Term& m, const Term& n, TreeCheckConfig cfg) {
    cfg.eta = true;
    cfg.mode = TreeMode::Bisimulation;
    return tree_check(m, n, cfg);
}

Verdict enfe_sim(const Term& m, const Term& n, TreeCheckConfig cfg) {
    cfg.eta = true;
    cfg.mode = TreeMode::Similarity;
    return tree_check(m, n, cfg);
}

}  // namespace eagerpi::trees
