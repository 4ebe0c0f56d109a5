// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "eagerpi/encodings.hpp"
#include "eagerpi/equations.hpp"
#include "eagerpi/equivalence.hpp"
#include "eagerpi/lambda.hpp"
#include "eagerpi/lts.hpp"
#include "eagerpi/trees.hpp"
#include "generators.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

using namespace eagerpi;
using enc::Encoding;
using pi::Dialect;

namespace {

constexpr double kLawSeconds = 60;
const char* const kOmega = "(\\x.x x)(\\x.x x)";
const char* const kZ = "(\\f.(\\x.f (\\v.x x v))(\\x.f (\\v.x x v)))";
const pi::Name kP = pi::cont("p");
const pi::ConstantEnv kEnv;

// Failures and timings of one criterion.
class Run {
public:
    explicit Run(std::string title) : title_(std::move(title)) {}

    void check(bool ok, const std::string& what) {
        if (ok) return;
        ++failures_;
        std::cerr << "  [" << title_ << "] " << what << "\n";
    }

    // Times one law against the per-law budget.
    void law(const std::string& what, const std::function<bool()>& f) {
        auto t0 = std::chrono::steady_clock::now();
        bool ok = f();
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        slowest_ = std::max(slowest_, s);
        check(ok, what);
        check(s < kLawSeconds, what + ": took " + std::to_string(s) + " s");
    }

    bool passed() const { return failures_ == 0; }
    int failures() const { return failures_; }
    double slowest() const { return slowest_; }

private:
    std::string title_;
    int failures_ = 0;
    double slowest_ = 0;
};

lambda::Term lam(const std::string& s) { return lambda::parse(s); }

pi::Process encode(Encoding e, const lambda::Term& m) { return enc::encode_with(e, m, kP).process; }

equiv::BisimConfig config(Dialect d) {
    equiv::BisimConfig c;
    c.depth = 8;
    c.tau_fuel = 64;
    c.dialect = d;
    return c;
}

bool bisim_equivalent(Encoding e, Dialect d, const lambda::Term& m, const lambda::Term& n) {
    auto v = equiv::weak_bisim(encode(e, m), encode(e, n), kEnv, config(d));
    return v.equivalent() && v.as_equivalent().depth >= 8;
}

std::string pair_text(const std::string& m, const std::string& n) { return m + " vs " + n; }

void beta(Run& r) {
    const char* redexes[] = {
        "(\\x.x)(\\y.y)",
        "(\\x.x x)(\\y.y)",
        "(\\x.x y)(\\z.z)",
        "(\\x.\\y.x)(\\z.z)",
        "(\\x.x) y",
        "(\\x.y)(\\z.z)",
        "(\\x.x)(\\y.w y)",
        "(\\x.\\y.y x)(\\z.z)",
        "(\\x.x x) y",
        "(\\x.y x)(\\z.z)",
        "(\\x.x)((\\y.y) z)",
        "((\\x.x)(\\y.y)) z",
        "(\\x.\\y.x y)(\\z.z)",
        "(\\x.x (\\y.y))(\\z.z z)",
        "z ((\\x.x)(\\y.y))",
        "(\\x.x x x)(\\y.y)",
        "(\\x.x)(\\y.\\z.y)",
        "(\\x.x y z)(\\w.w)",
        "(\\f.f (f y))(\\z.z)",
        "(\\x.\\y.\\z.x)(\\w.w)",
    };
    for (const char* text : redexes) {
        lambda::Term m = lam(text);
        auto n = lambda::step(m);
        r.check(n.has_value(), std::string(text) + " is not a redex");
        if (!n) continue;
        const std::string what = pair_text(text, lambda::to_string(*n));
        r.law("internal " + what, [&] { return bisim_equivalent(Encoding::InternalPi, Dialect::Internal, m, *n); });
        r.law("milner/alpi " + what, [&] { return bisim_equivalent(Encoding::MilnerV, Dialect::Alpi, m, *n); });
        r.law("milner-prime/full " + what, [&] { return bisim_equivalent(Encoding::MilnerVPrime, Dialect::Full, m, *n); });
    }
}

void nonlaw(Run& r) {
    lambda::Term m = lam("(\\z.z)(x y)");
    lambda::Term n = lam("x y");
    for (Encoding e : {Encoding::MilnerV, Encoding::MilnerVPrime}) {
        const std::string name = enc::to_string(e);
        r.law(name + " weak bisim", [&] {
            auto cfg = config(Dialect::Full);
            auto g = equiv::weak_bisim_game(encode(e, m), encode(e, n), kEnv, cfg);
            return g.verdict.inequivalent() && g.strategy && equiv::replay(*g.strategy, encode(e, m), encode(e, n), kEnv, cfg);
        });
        r.law(name + " traces", [&] { return equiv::trace_eq(encode(e, m), encode(e, n), kEnv, Dialect::Full, 6, 64).inequivalent(); });
    }
}

void rectified(Run& r) {
    lambda::Term m = lam("(\\z.z)(x y)");
    lambda::Term n = lam("x y");
    r.law("internal", [&] { return bisim_equivalent(Encoding::InternalPi, Dialect::Internal, m, n); });
    r.law("milner/alpi", [&] { return bisim_equivalent(Encoding::MilnerV, Dialect::Alpi, m, n); });
}

void eta(Run& r) {
    lambda::Term m = lam("\\y.x y");
    lambda::Term n = lam("x");
    r.law("internal", [&] { return bisim_equivalent(Encoding::InternalPi, Dialect::Internal, m, n); });
    r.law("milner-prime/full", [&] {
        return equiv::weak_bisim(encode(Encoding::MilnerVPrime, m), encode(Encoding::MilnerVPrime, n), kEnv, config(Dialect::Full))
            .inequivalent();
    });
}

void tree_laws(Run& r) {
    for (std::string v : {"y", "\\z.z"}) {
        const std::string xv = "x (" + v + ")";
        const std::string a = "(\\y." + std::string(kOmega) + ")(" + xv + ")";
        const std::string b = "(\\y." + xv + ")(" + xv + ")";
        r.law(pair_text(kOmega, a), [&] { return trees::enf_bisim(lam(kOmega), lam(a)).inequivalent(); });
        r.law(pair_text(xv, b), [&] { return trees::enf_bisim(lam(xv), lam(b)).inequivalent(); });
    }
}

void eta_trees(Run& r) {
    r.law("enf eta", [] { return trees::enf_bisim(lam("\\y.x y"), lam("x")).inequivalent(); });
    r.law("enfe eta", [] { return trees::enfe_bisim(lam("\\y.x y"), lam("x")).equivalent(); });
    r.law("enfe fixed point", [] {
        auto v = trees::enfe_bisim(lam("x"), lam(std::string(kZ) + " (\\z x y.x (z y)) x"));
        return v.equivalent() && v.as_equivalent().closed;
    });
}

bool all_equivalent(const std::vector<eqn::IndexVerdict>& vs) {
    for (const auto& v : vs) {
        if (!v.verdict.equivalent()) return false;
    }
    return !vs.empty();
}

void pipeline(Run& r) {
    eqn::Relation rel{{lam("\\x.x"), lam("\\x.(\\z y.z) x x1")}};
    r.law("eqcbv", [&] {
        auto e = eqn::build_eqcbv(rel);
        const std::string expected =
            "X_{0} = (x1,p) p!(^y).!y(x,q).X_{1}<x,x1,q>\n"
            "X_{1} = (x,x1,p) p!(^y).fwd<y,x>\n";
        return e.complete && eqn::to_string(e.system) == expected;
    });
    auto o = eqn::build_eqcbvp(rel);
    r.check(o.complete, "eqcbvp closure incomplete");
    r.law("guarded", [&] { return eqn::check_guarded(o.system).ok; });
    r.law("static separation", [&] { return eqn::static_io_separation(o.system).ok; });
    auto sol = eqn::syntactic_solution(o.system);
    for (const auto& var : o.system.variables()) {
        r.law("divergence " + var, [&] {
            auto d = eqn::divergence_scan(sol.agent(o.system, var), sol.env, 8, 64, true);
            return d.static_argument && d.verdict.equivalent();
        });
    }
    for (bool left : {true, false}) {
        r.law(std::string(left ? "left" : "right") + " family", [&] {
            return all_equivalent(eqn::verify_solution(o.system, eqn::encoding_family(o.table, left), kEnv, config(Dialect::Internal)));
        });
    }
}

void cross_check(Run& r) {
    const std::pair<const char*, const char*> corpus[] = {
        {"x", "x"},
        {"x", "y"},
        {"\\y.x y", "x"},
        {"\\z.x z", "\\w.x w"},
        {"x y", "x y"},
        {"x y", "x z"},
        {"x y", "y x"},
        {"(\\z.z)(x y)", "x y"},
        {"(\\x.x x)(\\x.x x)", "x y"},
        {"(\\x.x x)(\\x.x x)", "(\\y.y y)(\\y.y y)"},
        {"(\\x.x x)(\\x.x x)", "\\x.x"},
        {"x (\\z.z)", "x (\\w.w)"},
        {"x (\\z.z)", "x (\\z.z z)"},
        {"x (\\z.(\\x.x x)(\\x.x x))", "x (\\z.z)"},
        {"(\\y.(\\x.x x)(\\x.x x))(x y)", "(\\x.x x)(\\x.x x)"},
        {"(\\y.x y)(x y)", "x y"},
        {"(\\y.x (\\w.w))(x y)", "x (\\w.w)"},
        {"\\x.x", "\\y.y"},
        {"\\x.x", "\\x.\\y.x y"},
        {"\\x.\\y.x", "\\x.\\y.y"},
        {"x y z", "(x y) z"},
        {"x (y z)", "(\\w.x w)(y z)"},
        {"(\\z.z (\\w.w))(x y)", "x y (\\w.w)"},
        {"x y (\\w.w)", "x y (\\w.w w)"},
        {"\\y.x y y", "\\y.x y"},
        {"x (\\y.x y)", "x x"},
        {"x (\\y.z y)", "x z"},
        {"(\\f.f y)(x)", "x y"},
        {"\\z.x", "\\z.y"},
        {"(\\x.\\y.y)(z w)", "\\y.y"},
    };
    static_assert(std::size(corpus) == 30);
    int related = 0;
    int separated = 0;
    for (const auto& [m, n] : corpus) {
        r.law(pair_text(m, n), [&] {
            auto t = trees::enfe_bisim(lam(m), lam(n));
            auto b = equiv::weak_bisim(encode(Encoding::InternalPi, lam(m)), encode(Encoding::InternalPi, lam(n)), kEnv,
                                       config(Dialect::Internal));
            if (t.unknown() || b.unknown()) return false;
            (t.equivalent() ? related : separated) += 1;
            return t.label() == b.label();
        });
    }
    r.check(related >= 10 && separated >= 10, "corpus unbalanced: " + std::to_string(related) + " related, " +
                                                  std::to_string(separated) + " separated");
}

void preorder(Run& r) {
    const char* targets[] = {"\\x.x", "x", "x y", "x (\\z.z)", "\\y.x y", "(\\z.z)(x y)", "\\x.\\y.x", "x y z", kOmega, "(\\x.x)(\\y.y)"};
    for (const char* n : targets) {
        r.law(pair_text(kOmega, n), [&] {
            return equiv::trace_incl(encode(Encoding::InternalPi, lam(kOmega)), encode(Encoding::InternalPi, lam(n)), kEnv,
                                     Dialect::Internal, 6, 64)
                .equivalent();
        });
    }
    r.law("sim omega below identity", [] { return trees::enfe_sim(lam(kOmega), lam("\\x.x")).equivalent(); });
    r.law("sim identity not below omega", [] { return trees::enfe_sim(lam("\\x.x"), lam(kOmega)).inequivalent(); });

    const std::string omega = kOmega;
    const std::pair<std::string, std::string> sims[] = {
        {omega, "\\x.x"},
        {omega, "x y"},
        {"x (\\y." + omega + ")", "x (\\y.y)"},
        {"\\y." + omega, "\\y.y y"},
        {"x y (\\z." + omega + ")", "x y (\\z.z)"},
    };
    eqn::BuildConfig cfg;
    cfg.preorder = true;
    eqn::TraceBounds tb{6, 64};
    for (const auto& [m, n] : sims) {
        r.law("similar " + pair_text(m, n), [&] { return trees::enfe_sim(lam(m), lam(n)).equivalent(); });
        auto built = eqn::build_eqcbv({{lam(m), lam(n)}}, cfg);
        r.check(built.complete, "closure incomplete for " + pair_text(m, n));
        r.law("left post-fixed " + pair_text(m, n), [&] {
            return all_equivalent(eqn::postfix_point_check(built.system, eqn::encoding_family(built.table, true), kEnv, tb));
        });
        r.law("right pre-fixed " + pair_text(m, n), [&] {
            return all_equivalent(eqn::prefix_point_check(built.system, eqn::encoding_family(built.table, false), kEnv, tb));
        });
    }
}

void properties(Run& r) {
    r.law("step determinism", [] {
        std::mt19937 rng(2024);
        for (int i = 0; i < 10000; ++i) {
            lambda::Term m = testing::random_term(rng, 5);
            auto a = lambda::step(m);
            auto b = lambda::step(m);
            if (a.has_value() != b.has_value()) return false;
            if (a && !(*a == *b)) return false;
        }
        return true;
    });

    std::size_t transitions = 0;
    bool valid = true;
    bool fresh = true;
    r.law("validators and ground freshness", [&] {
        std::mt19937 rng(17);
        while (transitions < 1000) {
            lambda::Term m = testing::random_term(rng, 4);
            for (Dialect d : {Dialect::Internal, Dialect::Alpi}) {
                pi::Process start = encode(d == Dialect::Internal ? Encoding::InternalPi : Encoding::MilnerV, m);
                pi::Lts lts(kEnv, d);
                pi::State s = lts.initial(start);
                for (int i = 0; i < 12; ++i) {
                    auto ts = lts.step(s, 0);
                    if (ts.empty()) break;
                    auto fn = pi::free_ids(s);
                    for (const auto& t : ts) {
                        ++transitions;
                        for (std::size_t k = 0; k < t.action.objects.size(); ++k) {
                            bool binding = t.action.kind == pi::Action::Kind::In ||
                                           (t.action.kind == pi::Action::Kind::Out && t.action.bound[k]);
                            if (binding && fn.count(t.action.objects[k].id) != 0) fresh = false;
                        }
                        pi::Process q = pi::to_process(t.target);
                        auto v = d == Dialect::Internal ? pi::validate_internal(q, &kEnv) : pi::validate_alpi(q, &kEnv);
                        valid = valid && v.ok();
                    }
                    s = ts[std::uniform_int_distribution<std::size_t>(0, ts.size() - 1)(rng)].target;
                }
            }
        }
        return valid;
    });
    r.check(fresh, "a binding label object is not fresh");

    r.law("compression agreement", [] {
        const std::pair<const char*, const char*> corpus[] = {
            {"(\\z.z)(x y)", "x y"}, {"\\y.x y", "x"}, {"(\\x.x)(\\y.y)", "\\y.y"},
            {"x y", "x z"},          {"\\x.x", kOmega}, {"x (\\z.z)", "x (\\z.z z)"},
        };
        for (const auto& [m, n] : corpus) {
            auto on = config(Dialect::Internal);
            auto off = on;
            off.tau_compression = false;
            auto p = encode(Encoding::InternalPi, lam(m));
            auto q = encode(Encoding::InternalPi, lam(n));
            if (equiv::weak_bisim(p, q, kEnv, on).label() != equiv::weak_bisim(p, q, kEnv, off).label()) return false;
        }
        return true;
    });

    std::mt19937 rng(7);
    for (int i = 0; i < 10; ++i) {
        lambda::EvalContext ctx = testing::random_context(rng, 2);
        lambda::Term v = testing::random_value(rng, 1);
        lambda::Term xv = lambda::Term::app(lambda::Term::var("x"), v);
        std::string z = lambda::fresh_name("z", lambda::all_names(ctx.plug(xv)));
        lambda::Term lhs = lambda::Term::app(lambda::Term::abs(z, ctx.plug(lambda::Term::var(z))), xv);
        lambda::Term rhs = ctx.plug(xv);
        r.law("stuck commutation " + pair_text(lambda::to_string(lhs), lambda::to_string(rhs)),
              [&] { return bisim_equivalent(Encoding::InternalPi, Dialect::Internal, lhs, rhs); });
    }
}

}  // namespace

int main() {
    const std::pair<const char*, void (*)(Run&)> criteria[] = {
        {"beta-v validity on a 20-redex corpus", beta},
        {"I(xy) and xy separated under full pi", nonlaw},
        {"I(xy) and xy equated in Internal pi and ALpi", rectified},
        {"eta law", eta},
        {"eager-tree laws", tree_laws},
        {"eta-tree laws", eta_trees},
        {"equation pipeline on the worked example", pipeline},
        {"tree and encoding verdicts agree on 30 open pairs", cross_check},
        {"preorder results", preorder},
        {"property suites", properties},
    };
    int failed = 0;
    int index = 1;
    for (const auto& [title, body] : criteria) {
        Run r(title);
        try {
            body(r);
        } catch (const std::exception& e) {
            r.check(false, std::string("exception: ") + e.what());
        }
        std::printf("%s %2d %s (slowest law %.2f s)\n", r.passed() ? "PASS" : "FAIL", index++, title, r.slowest());
        std::fflush(stdout);
        if (!r.passed()) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
