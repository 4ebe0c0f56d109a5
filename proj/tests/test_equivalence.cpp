#include "doctest.h"

#include "eagerpi/encodings.hpp"
#include "eagerpi/equivalence.hpp"

#include <json.hpp>

#include <string>

using namespace eagerpi;
using namespace eagerpi::pi;
using namespace eagerpi::equiv;

namespace {

const Name p = cont("p");
const ConstantEnv kEnv;

Process ipi(const char* m) { return enc::encode_internal(lambda::parse(m), p); }
Process mv(const char* m) { return enc::encode_milner(lambda::parse(m), p); }
Process mvp(const char* m) { return enc::encode_milner_prime(lambda::parse(m), p); }

BisimConfig in(Dialect d) {
    BisimConfig c;
    c.dialect = d;
    return c;
}

const char* const kOmega = "(\\x.x x)(\\x.x x)";

}  // namespace

TEST_CASE("weak bisim: V' breaks I(xy) = xy under full pi") {
    auto r = weak_bisim_game(mvp("(\\z.z)(x y)"), mvp("x y"), kEnv, in(Dialect::Full));
    REQUIRE(r.verdict.inequivalent());
    REQUIRE(r.strategy);
    CHECK_FALSE(r.verdict.as_inequivalent().evidence.empty());
    CHECK(replay(*r.strategy, mvp("(\\z.z)(x y)"), mvp("x y"), kEnv, in(Dialect::Full)));
    CHECK_FALSE(replay(*r.strategy, mvp("x y"), mvp("x y"), kEnv, in(Dialect::Full)));
}

TEST_CASE("weak bisim: rectified settings validate I(xy) = xy") {
    auto a = weak_bisim(ipi("(\\z.z)(x y)"), ipi("x y"), kEnv, in(Dialect::Internal));
    CHECK(a.equivalent());
    CHECK(a.as_equivalent().depth == 8);
    CHECK(weak_bisim(mv("(\\z.z)(x y)"), mv("x y"), kEnv, in(Dialect::Alpi)).equivalent());
    CHECK(weak_bisim(mv("(\\z.z)(x y)"), mv("x y"), kEnv, in(Dialect::Full)).inequivalent());
}

TEST_CASE("weak bisim: reflexivity and abstractions") {
    for (const char* m : {"x", "\\x.x", "x y", kOmega, "(\\x.x x)(\\y.y)"}) {
        CAPTURE(m);
        CHECK(weak_bisim(ipi(m), ipi(m), kEnv).equivalent());
        CHECK(weak_bisim(mvp(m), mvp(m), kEnv, in(Dialect::Full)).equivalent());
    }
    Abstraction f{{val("x"), p}, ipi("\\y.x y")};
    Abstraction g{{val("x"), p}, ipi("x")};
    Abstraction h{{val("x"), p}, ipi(kOmega)};
    CHECK(weak_bisim(f, g, kEnv).equivalent());
    CHECK(weak_bisim(f, h, kEnv).inequivalent());
}

TEST_CASE("weak bisim: free names and evidence") {
    Process a = Process::output(val("a"), {val("b")});
    auto v = weak_bisim(a, Process::nil(), kEnv, in(Dialect::Full));
    REQUIRE(v.inequivalent());
    CHECK(v.as_inequivalent().evidence == std::vector<std::string>{"L: a!(b)", "no answer"});
    CHECK(weak_bisim(ipi("x"), ipi("y"), kEnv).inequivalent());
}

TEST_CASE("barbed bisim") {
    Process omega = ipi(kOmega);
    Process nil_same = Process::restrict(val("u"), Process::input(val("u"), {val("x"), cont("q")}, Process::bound_output(p, {val("y")}, Process::nil())));
    CHECK(free_ids(nil_same) == free_ids(omega));
    CHECK(barbed_bisim(omega, Process::nil(), kEnv).equivalent());
    CHECK(barbed_bisim(omega, nil_same, kEnv).equivalent());
    auto v = barbed_bisim(Process::output(val("a"), {val("b")}), Process::nil(), kEnv, in(Dialect::Full));
    REQUIRE(v.inequivalent());
    CHECK(v.as_inequivalent().evidence.back() == "barbs differ");
    auto g = barbed_bisim_game(Process::output(val("a"), {val("b")}), Process::nil(), kEnv, in(Dialect::Full));
    REQUIRE(g.strategy);
    CHECK(replay(*g.strategy, Process::output(val("a"), {val("b")}), Process::nil(), kEnv, in(Dialect::Full), true));
    CHECK(barbed_bisim(ipi("(\\z.z)(x y)"), ipi("x y"), kEnv).equivalent());
    CHECK(barbed_bisim(ipi("\\x.x"), ipi(kOmega), kEnv).inequivalent());
}

TEST_CASE("traces") {
    auto omega = traces(ipi(kOmega), kEnv, Dialect::Internal, 5, 50);
    CHECK_FALSE(omega.truncated);
    REQUIRE(omega.traces.size() == 1);
    CHECK(to_string(omega.traces[0]) == "ε");
    CHECK(omega.contains("ε"));

    auto nil = traces(Process::nil(), kEnv, Dialect::Full, 5, 50);
    REQUIRE(nil.traces.size() == 1);
    CHECK(nil.traces[0].empty());

    auto id = traces(ipi("\\x.x"), kEnv, Dialect::Internal, 1, 50);
    REQUIRE(id.traces.size() == 2);
    CHECK(id.contains("ε"));
    CHECK(id.contains("p!(^_0)"));
    CHECK(traces(ipi("\\x.x"), kEnv, Dialect::Internal, 3, 50).traces.size() > 2);
}

TEST_CASE("trace inclusion and equivalence") {
    CHECK(trace_incl(ipi(kOmega), ipi("\\x.x"), kEnv, Dialect::Internal, 6, 64).equivalent());
    CHECK(trace_incl(ipi(kOmega), ipi("x y"), kEnv, Dialect::Internal, 6, 64).equivalent());
    auto v = trace_incl(ipi("\\x.x"), ipi(kOmega), kEnv, Dialect::Internal, 6, 64);
    REQUIRE(v.inequivalent());
    CHECK(v.as_inequivalent().evidence == std::vector<std::string>{"p!(^_0)"});
    CHECK(trace_incl(ipi("x y"), ipi("x y"), kEnv, Dialect::Internal, 6, 64).equivalent());

    CHECK(trace_eq(ipi("\\y.x y"), ipi("x"), kEnv, Dialect::Internal, 6, 64).equivalent());
    CHECK(trace_eq(mvp("(\\z.z)(x y)"), mvp("x y"), kEnv, Dialect::Full, 6, 64).inequivalent());
    CHECK(trace_eq(mvp("x"), mvp("x"), kEnv, Dialect::Full, 6, 64).equivalent());
    CHECK(trace_eq(ipi(kOmega), ipi("\\x.x"), kEnv, Dialect::Internal, 6, 64).inequivalent());
}

TEST_CASE("trace inclusion with divergent copies spawned by a server") {
    const std::string m = std::string("x (\\y.") + kOmega + ")";
    CHECK(trace_incl(ipi(m.c_str()), ipi("x (\\y.y)"), kEnv, Dialect::Internal, 6, 64).equivalent());
    CHECK(trace_incl(ipi("x (\\y.y)"), ipi(m.c_str()), kEnv, Dialect::Internal, 6, 64).inequivalent());
    auto t = traces(ipi(m.c_str()), kEnv, Dialect::Internal, 6, 64);
    CHECK_FALSE(t.truncated);
}

TEST_CASE("verdict json") {
    auto v = weak_bisim(Process::output(val("a"), {val("b")}), Process::nil(), kEnv, in(Dialect::Full));
    auto j = nlohmann::json::parse(verdict_json(v, 8, 64));
    CHECK(j["verdict"] == "inequivalent");
    CHECK(j["depth"] == 8);
    CHECK(j["tau_fuel"] == 64);
    CHECK(j["evidence"].size() == 2);
    CHECK(j["truncated"] == false);
    CHECK(j["states_visited"].get<std::size_t>() >= 1);
    auto e = nlohmann::json::parse(verdict_json(weak_bisim(ipi("x"), ipi("x"), kEnv), 8, 64));
    CHECK(e["verdict"] == "equivalent-up-to");
    CHECK(e["evidence"].empty());
}

namespace {

struct Pair {
    const char* m;
    const char* n;
    enc::Encoding e;
    Dialect d;
};

const Pair kCorpus[] = {
    {"(\\z.z)(x y)", "x y", enc::Encoding::MilnerVPrime, Dialect::Full},
    {"(\\z.z)(x y)", "x y", enc::Encoding::MilnerV, Dialect::Full},
    {"\\y.x y", "x", enc::Encoding::MilnerVPrime, Dialect::Full},
    {"(\\z.z)(x y)", "x y", enc::Encoding::InternalPi, Dialect::Internal},
    {"(\\z.z)(x y)", "x y", enc::Encoding::MilnerV, Dialect::Alpi},
    {"\\y.x y", "x", enc::Encoding::InternalPi, Dialect::Internal},
    {"(\\x.x)(\\y.y)", "\\y.y", enc::Encoding::InternalPi, Dialect::Internal},
    {"(\\x.x)(\\y.y)", "\\y.y", enc::Encoding::MilnerV, Dialect::Alpi},
    {"x", "y", enc::Encoding::InternalPi, Dialect::Internal},
    {"x y", "x z", enc::Encoding::InternalPi, Dialect::Internal},
    {"\\x.x", "(\\x.x x)(\\x.x x)", enc::Encoding::InternalPi, Dialect::Internal},
    {"x (\\z.z)", "x (\\z.z z)", enc::Encoding::InternalPi, Dialect::Internal},
};

Process encode(const Pair& c, const char* m) { return enc::encode_with(c.e, lambda::parse(m), p).process; }

}  // namespace

TEST_CASE("property: distinguishing strategies replay") {
    for (const auto& c : kCorpus) {
        CAPTURE(c.m);
        CAPTURE(c.n);
        auto r = weak_bisim_game(encode(c, c.m), encode(c, c.n), kEnv, in(c.d));
        if (!r.verdict.inequivalent()) continue;
        REQUIRE(r.strategy);
        CHECK(replay(*r.strategy, encode(c, c.m), encode(c, c.n), kEnv, in(c.d)));
    }
}

TEST_CASE("property: inequivalence is monotone in depth") {
    for (const auto& c : kCorpus) {
        CAPTURE(c.m);
        CAPTURE(c.n);
        for (std::size_t d = 1; d < 8; ++d) {
            BisimConfig lo = in(c.d);
            lo.depth = d;
            if (!weak_bisim(encode(c, c.m), encode(c, c.n), kEnv, lo).inequivalent()) continue;
            BisimConfig hi = in(c.d);
            hi.depth = d + 2;
            CHECK(weak_bisim(encode(c, c.m), encode(c, c.n), kEnv, hi).inequivalent());
            break;
        }
    }
}

TEST_CASE("property: bisimilar pairs are trace equivalent") {
    for (const auto& c : kCorpus) {
        CAPTURE(c.m);
        CAPTURE(c.n);
        Verdict b = weak_bisim(encode(c, c.m), encode(c, c.n), kEnv, in(c.d));
        if (!b.equivalent()) continue;
        CHECK(trace_eq(encode(c, c.m), encode(c, c.n), kEnv, c.d, 5, 64).equivalent());
    }
}

TEST_CASE("property: compression and cancellation do not change verdicts") {
    for (const auto& c : kCorpus) {
        CAPTURE(c.m);
        CAPTURE(c.n);
        BisimConfig on = in(c.d);
        BisimConfig off = in(c.d);
        off.tau_compression = false;
        off.depth = 6;
        on.depth = 6;
        Verdict a = weak_bisim(encode(c, c.m), encode(c, c.n), kEnv, on);
        Verdict b = weak_bisim(encode(c, c.m), encode(c, c.n), kEnv, off);
        CHECK_MESSAGE(a.label() == b.label(), (std::string(c.m) + " vs " + c.n));
        BisimConfig plain = in(c.d);
        plain.cancel_common = false;
        plain.depth = 6;
        CHECK(weak_bisim(encode(c, c.m), encode(c, c.n), kEnv, plain).label() == a.label());
    }
}
