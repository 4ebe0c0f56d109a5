#include "doctest.h"

#include "eagerpi/encodings.hpp"
#include "eagerpi/lts.hpp"
#include "generators.hpp"

#include <algorithm>

using namespace eagerpi;
using namespace eagerpi::pi;

namespace {

const char* kOmega = "(\\x.x x)(\\x.x x)";

using P = Process;

Process desugar(const Process& p) {
    switch (p.kind()) {
        case P::Kind::Nil:
        case P::Kind::Apply: return p;
        case P::Kind::Input: return P::input(p.subject(), p.names(), desugar(p.body()));
        case P::Kind::Replicated: return P::replicated(p.subject(), p.names(), desugar(p.body()));
        case P::Kind::Output: return P::output(p.subject(), p.names(), desugar(p.body()));
        case P::Kind::BoundOutput: return P::restrict(p.names(), P::output(p.subject(), p.names(), desugar(p.body())));
        case P::Kind::Restriction: return P::restrict(p.restricted(), desugar(p.body()));
        case P::Kind::Parallel: return P::par(desugar(p.left()), desugar(p.right()));
    }
    return p;
}

std::set<std::string> signature(const Process& p, Dialect d) {
    ConstantEnv env;
    Lts lts(env, d);
    std::set<std::string> out;
    for (const auto& t : lts.step(lts.initial(p), 0)) out.insert(to_string(t.action) + " -> " + t.target_key);
    return out;
}

std::vector<std::string> visible(const WeakTransitions& w) {
    std::vector<std::string> out;
    for (const auto& m : w.moves) {
        if (m.action) out.push_back(to_string(*m.action));
    }
    return out;
}

lambda::Term lam(const char* s) { return lambda::parse(s); }

}  // namespace

TEST_CASE("parse: basic shapes") {
    CHECK(parse_pi("0").is_nil());

    Process p = parse_pi("p!(^y). !y(x,q). 0");
    REQUIRE(p.kind() == P::Kind::BoundOutput);
    CHECK(p.subject().id == "p");
    REQUIRE(p.names().size() == 1);
    CHECK(p.names()[0].id == "y");
    const Process& r = p.body();
    REQUIRE(r.kind() == P::Kind::Replicated);
    CHECK(r.subject().id == "y");
    CHECK(r.names() == std::vector<Name>{val("x"), cont("q")});
    CHECK(r.body().is_nil());
    CHECK(p.subject().sort == kCont);
    CHECK(r.subject().sort == kVal);
    CHECK(r.names()[1].sort == kCont);

    Process n = parse_pi("new q in (q!(^y).0 | q(y).y!(a,b))");
    REQUIRE(n.kind() == P::Kind::Restriction);
    CHECK(n.restricted().id == "q");
    CHECK(n.body().kind() == P::Kind::Parallel);
}

TEST_CASE("parse: printing round-trips") {
    const char* samples[] = {
        "0",
        "a!(b)",
        "a!(b).c(x).0",
        "p!(^y).!y(x,q).q!(^z).fwd<z,x>",
        "new a,b in (a!(b) | b(x).x!(a))",
        "a(x).(x!(y) | x!(z)) | !b(u).u!(u)",
        "new q in (q!(^y).fwd<y,x> | q(y).new r in (r!(^w).fwd<w,x> | r(w).y!(^w1,p1).(fwd<w1,w> | fwd<p1,p>)))",
    };
    for (const char* s : samples) {
        CAPTURE(s);
        Process p = parse_pi(s);
        Process q = parse_pi(to_string(p));
        CHECK(p == q);
        CHECK(to_string(p) == to_string(q));
    }
}

TEST_CASE("parse: definitions, sorts and errors") {
    ConstantEnv env;
    Process p = parse_pi("def Echo(a) = a(x).a!(x)\nEcho<c>", env);
    CHECK(p.kind() == P::Kind::Apply);
    REQUIRE(env.contains("Echo"));
    CHECK(to_string(env.unfold(p)) == "c(x).c!(x)");

    Process s = parse_pi("sort tri_s : (tri_s, tri_s, tri_s)\nt!(t,t,t)");
    CHECK(s.subject().sort == *find_sort("tri_s"));

    try {
        parse_pi("a!(b) | a!(b,c)");
        FAIL("expected a sort error");
    } catch (const SortError& e) {
        CHECK(e.name == "a");
    }
    try {
        parse_pi("a(x).x!(y) | a(z).z!(y,y)");
        FAIL("expected a sort error");
    } catch (const SortError& e) {
        CHECK((e.name == "x" || e.name == "z"));
    }
    CHECK_NOTHROW(parse_pi("a!(b) | b!(a,a)"));
    CHECK_THROWS_AS(parse_pi("a!("), PiParseError);
    CHECK_THROWS_AS(parse_pi("a(x)"), PiParseError);
    CHECK_THROWS_AS(parse_pi("def K(a) = a!(b)\n0"), PiParseError);
    CHECK_THROWS(parse_pi("Unknown<a>"));
    CHECK_THROWS(parse_pi("def fwd(a,b) = 0\n0"));
}

TEST_CASE("parse: unguarded recursion is rejected by the LTS") {
    ConstantEnv env;
    Process p = parse_pi("def Loop(a) = Loop<a>\nLoop<x>", env);
    Lts lts(env, Dialect::Full);
    CHECK_THROWS_AS(lts.initial(p), std::runtime_error);
}

TEST_CASE("forwarder bodies follow the sort") {
    Process v = forwarder_body(val("a"), val("b"));
    CHECK(v.kind() == P::Kind::Replicated);
    CHECK(v.names().size() == 2);
    Process c = forwarder_body(cont("p"), cont("q"));
    CHECK(c.kind() == P::Kind::Input);
    CHECK(c.names().size() == 1);
    CHECK(c.body().kind() == P::Kind::BoundOutput);
    CHECK(c.body().subject().id == "q");
}

TEST_CASE("validators") {
    CHECK(validate_internal(enc::encode_internal(lam("x"), cont("p"))).ok());
    CHECK_FALSE(validate_internal(P::output(val("a"), {val("b")})).ok());
    CHECK_FALSE(validate_internal(P::bound_output(val("a"), {val("b"), val("b")}, P::nil())).ok());
    CHECK(validate_internal(P::output(cont("a"), {})).ok());

    CHECK(validate_alpi(enc::encode_milner(lam("\\x.x y"), cont("p"))).ok());
    CHECK_FALSE(validate_alpi(desugar(enc::encode_milner(lam("\\x.x y"), cont("p")))).ok());
    CHECK_FALSE(validate_alpi(P::input(val("a"), {val("x")}, P::input(val("x"), {val("y")}, P::nil()))).ok());
    CHECK_FALSE(validate_alpi(P::output(val("a"), {val("b")}, P::output(val("c"), {val("d")}))).ok());

    CHECK(free_input_subjects(parse_pi("a(x).x!(b) | c!(a)")) == std::set<std::string>{"a"});
}

TEST_CASE("transitions: worked examples") {
    ConstantEnv env;
    auto ts = transitions(enc::encode_internal(lam("x"), cont("p")), env, Dialect::Internal);
    REQUIRE(ts.size() == 1);
    const Action& a = ts[0].first;
    CHECK(a.kind == Action::Kind::Out);
    CHECK(a.subject.id == "p");
    REQUIRE(a.objects.size() == 1);
    CHECK(a.bound == std::vector<bool>{true});
    CHECK(alpha_equal(ts[0].second, forwarder_body(a.objects[0], val("x"))));

    auto tau = transitions(P::par(P::output(val("a"), {val("b")}), P::input(val("a"), {val("x")}, P::nil())), env, Dialect::Full);
    bool found = false;
    for (const auto& [act, target] : tau) {
        if (act.kind == Action::Kind::Tau) {
            found = true;
            CHECK(target.is_nil());
        }
    }
    CHECK(found);

    auto link = transitions(P::output(val("a"), {val("b")}), env, Dialect::Alpi);
    REQUIRE(link.size() == 1);
    const Action& o = link[0].first;
    CHECK(o.kind == Action::Kind::Out);
    CHECK(o.subject.id == "a");
    REQUIRE(o.objects.size() == 1);
    CHECK(o.bound == std::vector<bool>{true});
    const Process& l = link[0].second;
    REQUIRE(l.kind() == P::Kind::Replicated);
    CHECK(l.subject().id == o.objects[0].id);
    REQUIRE(l.body().kind() == P::Kind::Output);
    CHECK(l.body().subject().id == "b");
    CHECK(l.body().names() == l.names());

    auto full = transitions(P::output(val("a"), {val("b")}), env, Dialect::Full);
    REQUIRE(full.size() == 1);
    CHECK(to_string(full[0].first) == "a!(b)");

    auto in = transitions(parse_pi("a(x).x!(c)"), env, Dialect::Full);
    REQUIRE(in.size() == 1);
    CHECK(to_string(in[0].first) == "a(_0)");
    CHECK(to_string(in[0].second) == "_0!(c)");
}

TEST_CASE("transitions: alpi outputs on owned names are internal") {
    ConstantEnv env;
    auto owned = signature(parse_pi("a!(b) | !a(x).x!(c)"), Dialect::Alpi);
    CHECK(std::none_of(owned.begin(), owned.end(), [](const std::string& s) { return s.rfind("a!", 0) == 0; }));
    CHECK(std::any_of(owned.begin(), owned.end(), [](const std::string& s) { return s.rfind("a(", 0) == 0; }));
    CHECK(std::any_of(owned.begin(), owned.end(), [](const std::string& s) { return s.rfind("tau", 0) == 0; }));
    auto full = signature(parse_pi("a!(b) | !a(x).x!(c)"), Dialect::Full);
    CHECK(std::any_of(full.begin(), full.end(), [](const std::string& s) { return s.rfind("a!(b)", 0) == 0; }));
}

TEST_CASE("weak transitions and barbs") {
    ConstantEnv env;
    auto nil = weak_transitions(P::nil(), env, Dialect::Full, 10);
    REQUIRE(nil.moves.size() == 1);
    CHECK_FALSE(nil.moves[0].action.has_value());
    CHECK(nil.moves[0].target.is_nil());
    CHECK_FALSE(nil.truncated);

    auto redex = visible(weak_transitions(enc::encode_internal(lam("(\\x.x)(\\y.y)"), cont("p")), env, Dialect::Internal, 64));
    auto value = visible(weak_transitions(enc::encode_internal(lam("\\y.y"), cont("p")), env, Dialect::Internal, 64));
    REQUIRE(value.size() == 1);
    CHECK(std::find(redex.begin(), redex.end(), value[0]) != redex.end());

    Process omega = enc::encode_internal(lam(kOmega), cont("p"));
    for (std::size_t fuel : {1, 5, 50, 200}) {
        auto w = weak_transitions(omega, env, Dialect::Internal, fuel);
        CHECK(visible(w).empty());
        CHECK(barbs(omega, env, Dialect::Internal, fuel).names.empty());
    }
    CHECK_FALSE(weak_transitions(omega, env, Dialect::Internal, 50).truncated);

    CHECK(barbs(enc::encode_internal(lam("\\x.x"), cont("p")), env, Dialect::Internal, 10).names == std::set<std::string>{"p"});
    CHECK(barbs(P::output(val("a"), {val("b")}), env, Dialect::Full, 10).names == std::set<std::string>{"a"});
    CHECK(barbs(parse_pi("new a in (a!(b) | a(x).c!(x))"), env, Dialect::Full, 10).names == std::set<std::string>{"c"});
}

TEST_CASE("state keys ignore thread order and restricted names") {
    ConstantEnv env;
    Lts lts(env, Dialect::Full);
    State a = lts.initial(parse_pi("new u in (u!(c) | b(x).u(y).0)"));
    State b = lts.initial(parse_pi("b(z).new v in v(y).0 | new w in w!(c)"));
    State c = lts.initial(parse_pi("new u in (u!(c) | b(x).u(y).0) | d!(c)"));
    CHECK(state_key(lts.initial(parse_pi("a!(b) | c!(d)"))) == state_key(lts.initial(parse_pi("c!(d) | a!(b)"))));
    CHECK(state_key(a) != state_key(c));
    (void)b;
    CHECK(fresh_base({"a", "_3", "_10x", "_1"}) == 4);
}

TEST_CASE("property: ground freshness, validity and sorts along random runs") {
    std::mt19937 rng(17);
    ConstantEnv env;
    const Name p = cont("p");
    int checked = 0;
    for (int run = 0; run < 60; ++run) {
        lambda::Term m = testing::random_term(rng, 4);
        for (Dialect d : {Dialect::Internal, Dialect::Alpi, Dialect::Full}) {
            Process start = d == Dialect::Internal ? enc::encode_internal(m, p) : enc::encode_milner(m, p);
            Lts lts(env, d);
            State s = lts.initial(start);
            for (int i = 0; i < 12; ++i) {
                auto ts = lts.step(s, 0);
                if (ts.empty()) break;
                std::set<std::string> fn = free_ids(s);
                for (const auto& t : ts) {
                    ++checked;
                    if (t.action.kind == Action::Kind::In) {
                        for (const auto& o : t.action.objects) CHECK(fn.count(o.id) == 0);
                    }
                    if (t.action.kind == Action::Kind::Out) {
                        for (std::size_t k = 0; k < t.action.objects.size(); ++k) {
                            if (t.action.bound[k]) CHECK(fn.count(t.action.objects[k].id) == 0);
                        }
                    }
                    Process q = to_process(t.target);
                    CHECK(validate_sorts(q, env).ok());
                    if (d == Dialect::Internal) CHECK(validate_internal(q, &env).ok());
                    if (d == Dialect::Alpi) CHECK(validate_alpi(q, &env).ok());
                }
                s = ts[std::uniform_int_distribution<std::size_t>(0, ts.size() - 1)(rng)].target;
            }
        }
    }
    CHECK(checked > 1000);
}

TEST_CASE("property: bound outputs behave as restricted free outputs in full pi") {
    std::mt19937 rng(5);
    for (int i = 0; i < 80; ++i) {
        lambda::Term m = testing::random_term(rng, 4);
        for (Process p : {enc::encode_milner(m, cont("p")), enc::encode_milner_prime(m, cont("p"))}) {
            CAPTURE(to_string(p));
            CHECK(signature(p, Dialect::Full) == signature(desugar(p), Dialect::Full));
        }
    }
}

TEST_CASE("rename avoids capture under nested binders") {
    Process b = parse_pi("new y,y1 in a!(y,y1).(b!(y,x) | c!(y1,x1))");
    Process r = rename(b, {{"x", val("y")}, {"x1", val("y1")}});
    CHECK(alpha_equal(r, parse_pi("new u,v in a!(u,v).(b!(u,y) | c!(v,y1))")));
    CHECK(free_ids(r) == std::set<std::string>{"a", "b", "c", "y", "y1"});
}
