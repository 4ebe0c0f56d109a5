#include "doctest.h"

#include "eagerpi/encodings.hpp"
#include "eagerpi/equations.hpp"
#include "generators.hpp"

#include <json.hpp>

#include <algorithm>
#include <random>

using namespace eagerpi;
using namespace eagerpi::eqn;
using pi::Abstraction;
using pi::Process;

namespace {

const char* const kOmega = "(\\x.x x)(\\x.x x)";

Relation rel(const char* m, const char* n) { return {{lambda::parse(m), lambda::parse(n)}}; }

BuildConfig with_eta() {
    BuildConfig c;
    c.eta = true;
    return c;
}

BuildConfig preorder() {
    BuildConfig c;
    c.preorder = true;
    return c;
}

std::vector<std::string> value_vars(const EquationSystem& s) {
    std::vector<std::string> out;
    for (const auto& v : s.variables()) {
        if (v.rfind("XV_", 0) == 0) out.push_back(v);
    }
    return out;
}

bool all_equivalent(const std::vector<IndexVerdict>& vs) {
    return std::all_of(vs.begin(), vs.end(), [](const IndexVerdict& v) { return v.verdict.equivalent(); });
}

const pi::Name a = pi::val("a");

}  // namespace

TEST_CASE("eqcbv: worked example") {
    auto r = build_eqcbv(rel("\\x.x", "\\x.(\\z y.z) x x1"));
    CHECK(r.complete);
    CHECK(to_string(r.system) ==
          "X_{0} = (x1,p) p!(^y).!y(x,q).X_{1}<x,x1,q>\n"
          "X_{1} = (x,x1,p) p!(^y).fwd<y,x>\n");
    REQUIRE(r.table.entries.size() == 2);
    CHECK(r.table.entries[0].tag == CaseTag::Abs);
    CHECK(r.table.entries[1].tag == CaseTag::Var);
    CHECK(r.table.entries[1].params == std::vector<std::string>{"x", "x1"});
}

TEST_CASE("eqcbv: variable and divergence cases") {
    CHECK(to_string(build_eqcbv(rel("x", "x")).system) == "X_{0} = (x,p) p!(^y).fwd<y,x>\n");
    auto d = build_eqcbv(rel(kOmega, kOmega));
    REQUIRE(d.system.equations.size() == 1);
    CHECK(d.table.entries[0].tag == CaseTag::Div);
    const auto& body = d.system.equations[0].body;
    REQUIRE(body.params.size() == 1);
    CHECK(pi::alpha_equal(body.body, enc::encode_internal(lambda::parse(kOmega), body.params[0])));
}

TEST_CASE("eqcbvp: optimised equations") {
    CHECK(to_string(build_eqcbvp(rel("x", "x")).system) ==
          "X_{0} = (x,p) p!(^z).XV_{0}<z,x>\n"
          "XV_{0} = (z,x) fwd<z,x>\n");
    CHECK(to_string(build_eqcbvp(rel(kOmega, kOmega)).system) == "X_{0} = (p) 0\n");
    CHECK(to_string(build_eqcbvp(rel("\\x.x", "\\x.(\\z y.z) x x1")).system) ==
          "X_{0} = (x1,p) p!(^z).XV_{0}<z,x1>\n"
          "X_{1} = (x,x1,p) p!(^z).XV_{1}<z,x>\n"
          "XV_{0} = (z,x1) !z(x,q).X_{1}<x,x1,q>\n"
          "XV_{1} = (z,x) fwd<z,x>\n");
    CHECK(to_string(build_eqcbvp(rel("(\\z.z)(x y)", "x y")).system) ==
          "X_{0} = (x,y,p) x!(^z1,q).(XV_{0}<z1,y> | q(z).X_{2}<z,p>)\n"
          "X_{1} = (y,p) p!(^z).XV_{0}<z,y>\n"
          "X_{2} = (z,p) p!(^z1).XV_{0}<z1,z>\n"
          "XV_{0} = (z,y) fwd<z,y>\n");
}

TEST_CASE("builders: case tags and sub-pairs") {
    auto s = build_eqcbv(rel("(\\z.z)(x y)", "x y"));
    REQUIRE(s.table.entries.size() == 3);
    const auto& e = s.table.entries[0];
    CHECK(e.tag == CaseTag::Stuck);
    CHECK(e.fresh == "z");
    CHECK(e.parts.at("arg") == std::pair<std::string, std::string>{"y", "y"});
    CHECK(e.parts.at("ctx") == std::pair<std::string, std::string>{"(\\z.z) z", "z"});

    auto eta = build_eqcbvp(rel("\\y.x y", "x"), with_eta());
    CHECK(eta.table.find("X_{0}")->tag == CaseTag::EtaLeft);
    CHECK(eta.table.find("XV_{0}")->tag == CaseTag::ValueAux);
    CHECK_FALSE(eta.table.find("XV_{0}")->audit.empty());
    CHECK(build_eqcbv(rel("x", "\\y.x y"), with_eta()).table.entries[0].tag == CaseTag::EtaRight);
    CHECK_THROWS_AS(build_eqcbv(rel("\\y.x y", "x")), BuildError);

    auto j = nlohmann::json::parse(eta.table.to_json());
    CHECK(j[0]["tag"] == "eta-left");
    CHECK(j[0]["params"] == nlohmann::json::array({"x"}));
}

TEST_CASE("builders: x against its fixed-point expansion closes by a cycle") {
    std::string z = "(\\f.(\\x.f (\\v.x x v))(\\x.f (\\v.x x v)))";
    auto r = build_eqcbvp({{lambda::parse("x"), lambda::parse(z + "(\\z x y.x (z y)) x")}}, with_eta());
    CHECK(r.complete);
    CHECK(r.table.find("X_{1}")->tag == CaseTag::EtaRight);
    auto x1 = r.system.find("X_{1}");
    REQUIRE(x1);
    CHECK(check_guarded(r.system).ok);
    CHECK(static_io_separation(r.system).ok);
    auto fam = encoding_family(r.table, true);
    CHECK(all_equivalent(verify_solution(r.system, fam, {})));
}

TEST_CASE("builders: failures and partial closure") {
    CHECK_THROWS_AS(build_eqcbv(rel("x", "y")), BuildError);
    CHECK_THROWS_AS(build_eqcbv(rel("x", kOmega)), BuildError);
    CHECK_THROWS_AS(build_eqcbv(rel(kOmega, "x")), BuildError);
    CHECK(build_eqcbv(rel(kOmega, "x"), preorder()).table.entries[0].tag == CaseTag::Div);
    CHECK(to_string(build_eqcbvp(rel(kOmega, "\\x.x"), preorder()).system) == "X_{0} = (p) 0\n");
    try {
        build_eqcbv(rel("x y", "x z"));
        FAIL("expected a build error");
    } catch (const BuildError& e) {
        CHECK(e.left == "y");
        CHECK(e.right == "z");
    }
    BuildConfig low;
    low.eval_fuel = 3;
    CHECK_THROWS_WITH_AS(build_eqcbv(rel("(\\x.x)((\\x.x)((\\x.x)((\\x.x) y)))", "y"), low),
                         doctest::Contains("fuel"), BuildError);
    CHECK_THROWS_AS(build_eqcbv({}), std::invalid_argument);

    BuildConfig cap;
    cap.cap = 1;
    auto part = build_eqcbv(rel("\\x.x", "\\x.(\\z y.z) x x1"), cap);
    CHECK_FALSE(part.complete);
    CHECK(part.system.equations.size() == 1);
    CHECK_FALSE(part.report.empty());
}

TEST_CASE("parse_relation") {
    auto r = parse_relation(R"([["\\x.x", "\\y.y"], ["x y", "x y"]])");
    REQUIRE(r.size() == 2);
    CHECK(lambda::to_string(r[1].first) == "x y");
    CHECK_THROWS_AS(parse_relation("[[\"x\"]]"), std::invalid_argument);
    CHECK_THROWS_AS(parse_relation("{"), std::invalid_argument);
    CHECK_THROWS_AS(parse_relation("[[\"\\\\x.\", \"x\"]]"), lambda::ParseError);
}

TEST_CASE("check_guarded") {
    EquationSystem good{{{"X_{0}", {{a}, Process::bound_output(a, {pi::val("y")}, Process::apply("X_{0}", {pi::val("y")}))}}}};
    CHECK(check_guarded(good).ok);
    EquationSystem bad{{{"X_{0}", {{a}, Process::apply("X_{0}", {a})}}}};
    auto r = check_guarded(bad);
    CHECK_FALSE(r.ok);
    REQUIRE(r.problems.size() == 1);
    CHECK(r.problems[0].find("unguarded") != std::string::npos);
    EquationSystem under_par{{{"X_{0}", {{a}, Process::par(Process::nil(), Process::restrict(pi::val("b"), Process::apply("X_{0}", {a})))}}}};
    CHECK_FALSE(check_guarded(under_par).ok);
}

TEST_CASE("static_io_separation") {
    pi::Name x = pi::val("x");
    Process both = Process::par(Process::bound_output(x, {pi::val("z")}, Process::nil()), Process::input(x, {pi::val("w")}, Process::nil()));
    auto r = static_io_separation({{{"X_{0}", {{a}, Process::input(a, {x}, both)}}}});
    CHECK_FALSE(r.ok);
    REQUIRE(r.problems.size() == 1);
    CHECK(r.problems[0].find("name x") != std::string::npos);

    pi::ConstantEnv env;
    env.define("K", {{pi::val("b")}, Process::input(pi::val("b"), {pi::val("u")}, Process::nil())});
    pi::Name y = pi::val("y");
    Process via_constant = Process::bound_output(a, {y}, Process::par(Process::apply("K", {y}), Process::bound_output(y, {pi::val("c")}, Process::nil())));
    CHECK_FALSE(static_io_separation({{{"X_{0}", {{a}, via_constant}}}}, env).ok);
    Process fine = Process::bound_output(a, {y}, Process::apply("K", {y}));
    CHECK(static_io_separation({{{"X_{0}", {{a}, fine}}}}, env).ok);

    auto rel_ixy = rel("(\\z.z)(x y)", "x y");
    CHECK_FALSE(static_io_separation(build_eqcbv(rel_ixy).system).ok);
    CHECK(static_io_separation(build_eqcbvp(rel_ixy).system).ok);
}

TEST_CASE("syntactic solution") {
    auto sys = build_eqcbvp(rel("x", "x")).system;
    auto sol = syntactic_solution(sys);
    CHECK(sol.constant_of.at("X_{0}") == "K_{0}");
    CHECK(sol.constant_of.at("XV_{0}") == "KV_{0}");
    CHECK(pi::to_string(sol.env.definitions().at("K_{0}")) == "(x,p) p!(^z).KV_{0}<z,x>");
    CHECK(pi::to_string(sol.env.definitions().at("KV_{0}")) == "(z,x) fwd<z,x>");
    Abstraction agent = sol.agent(sys, "X_{0}");
    CHECK(pi::to_string(agent) == "(x,p) K_{0}<x,p>");
    equiv::BisimConfig one;
    one.depth = 1;
    CHECK(equiv::weak_bisim(agent, sol.env.definitions().at("K_{0}"), sol.env, one).equivalent());
    CHECK_THROWS_AS(sol.agent(sys, "X_{7}"), std::invalid_argument);
}

TEST_CASE("divergence_scan") {
    auto sys = build_eqcbvp(rel("\\x.x", "\\x.(\\z y.z) x x1")).system;
    auto sol = syntactic_solution(sys);
    auto stat = divergence_scan(sol.agent(sys, "X_{0}"), sol.env, 8, 64);
    CHECK(stat.static_argument);
    CHECK(stat.verdict.equivalent());
    auto dyn = divergence_scan(sol.agent(sys, "X_{0}"), sol.env, 8, 64, false);
    CHECK_FALSE(dyn.static_argument);
    CHECK(dyn.verdict.equivalent());
    CHECK(dyn.tau_steps == 0);

    // K(a) = new c in (c!(^x).0 | c(y).K<a>): an internal loop.
    pi::ConstantEnv env;
    pi::Name c = pi::val("c");
    env.define("K", {{a}, Process::restrict(c, Process::par(Process::bound_output(c, {pi::val("x")}, Process::nil()),
                                                             Process::input(c, {pi::val("y")}, Process::apply("K", {a}))))});
    auto loop = divergence_scan({{a}, Process::apply("K", {a})}, env, 4, 64);
    REQUIRE(loop.verdict.inequivalent());
    CHECK(loop.verdict.as_inequivalent().evidence.front().find("tau cycle") != std::string::npos);
    auto later = divergence_scan({{a}, Process::bound_output(a, {pi::val("b")}, Process::apply("K", {a}))}, env, 4, 64);
    REQUIRE(later.verdict.inequivalent());
    CHECK(later.verdict.as_inequivalent().evidence.front() == "a1!(^_0)");
    CHECK(divergence_scan({{a}, Process::bound_output(a, {pi::val("x")}, Process::nil())}, {}, 4, 64, false).verdict.equivalent());

    pi::Name p = pi::cont("p");
    CHECK(divergence_scan({{p}, enc::encode_internal(lambda::parse(kOmega), p)}, {}, 4, 64).verdict.inequivalent());
    CHECK_THROWS_AS(divergence_scan({{a}, Process::nil()}, {}, 0, 64), std::invalid_argument);
}

TEST_CASE("verify_solution: encodings solve both systems") {
    auto r = rel("\\x.x", "\\x.(\\z y.z) x x1");
    for (bool opt : {false, true}) {
        auto b = opt ? build_eqcbvp(r) : build_eqcbv(r);
        for (bool left : {true, false}) {
            CAPTURE(opt);
            CAPTURE(left);
            auto vs = verify_solution(b.system, encoding_family(b.table, left), {});
            CHECK(vs.size() == b.system.equations.size());
            CHECK(all_equivalent(vs));
        }
    }
}

TEST_CASE("verify_solution: syntactic solution and a wrong candidate") {
    auto b = build_eqcbvp(rel("(\\z.z)(x y)", "x y"));
    auto sol = syntactic_solution(b.system);
    Candidates k;
    for (const auto& v : b.system.variables()) k[v] = sol.agent(b.system, v);
    CHECK(all_equivalent(verify_solution(b.system, k, sol.env)));

    auto e = build_eqcbv(rel("\\x.x", "\\x.(\\z y.z) x x1"));
    auto f = encoding_family(e.table, true);
    pi::Name p = pi::cont("p");
    f["X_{0}"] = {{pi::val("x1"), p}, enc::encode_internal(lambda::parse(kOmega), p)};
    auto vs = verify_solution(e.system, f, {});
    CHECK(vs[0].verdict.inequivalent());
    f.erase("X_{1}");
    CHECK_THROWS_AS(verify_solution(e.system, f, {}), std::invalid_argument);
}

TEST_CASE("fixed-point checks") {
    TraceBounds tb{4, 64};
    auto b = build_eqcbv(rel(kOmega, "\\x.x"), preorder());
    auto left = encoding_family(b.table, true);
    auto right = encoding_family(b.table, false);
    CHECK(all_equivalent(postfix_point_check(b.system, left, {}, tb)));
    CHECK(all_equivalent(prefix_point_check(b.system, left, {}, tb)));
    CHECK(all_equivalent(prefix_point_check(b.system, right, {}, tb)));
    auto post = postfix_point_check(b.system, right, {}, tb);
    REQUIRE(post.size() == 1);
    CHECK(post[0].verdict.inequivalent());

    auto o = build_eqcbvp(rel("x", "x"));
    auto sol = syntactic_solution(o.system);
    Candidates k;
    for (const auto& v : o.system.variables()) k[v] = sol.agent(o.system, v);
    CHECK(all_equivalent(prefix_point_check(o.system, k, sol.env, tb)));
    CHECK(all_equivalent(postfix_point_check(o.system, k, sol.env, tb)));
}

TEST_CASE("check_extends") {
    TraceBounds tb{4, 64};
    auto r = rel("\\x.x", "\\x.(\\z y.z) x x1");
    auto e = build_eqcbv(r);
    auto o = build_eqcbvp(r);
    auto f = encoding_family(o.table, true);
    auto rep = check_extends(o.system, e.system, value_vars(o.system), f, {}, {}, tb);
    CHECK(rep.ok);
    CHECK(rep.bisim.size() == 2);
    CHECK(rep.traces.size() == 2);
    CHECK(all_equivalent(rep.traces));
    CHECK(check_extends(e.system, e.system, {}, f, {}, {}, tb).ok);
    CHECK_THROWS_AS(check_extends(o.system, e.system, {}, f, {}, {}, tb), std::invalid_argument);
    CHECK_THROWS_AS(check_extends(o.system, e.system, {"X_{0}", "XV_{0}", "XV_{1}"}, f, {}, {}, tb), std::invalid_argument);
}

namespace {

struct Seed {
    const char* m;
    const char* n;
    bool eta;
};

const Seed kRelations[] = {
    {"\\x.x", "\\x.(\\z y.z) x x1", false},
    {"(\\z.z)(x y)", "x y", false},
    {"x", "x", false},
    {"(\\x.x x)(\\x.x x)", "(\\x.x x)(\\x.x x)", false},
    {"(\\x.x)(\\y.y)", "\\y.y", false},
    {"\\y.x y", "x", true},
    {"x (\\z.z)", "(\\w.x w)(\\z.z)", false},
    {"\\x.x x", "\\x.(\\y.y) x x", false},
    {"x y z", "(\\w.w) (x y) z", false},
    {"\\y.x (\\z.y z)", "x", true},
};

}  // namespace

TEST_CASE("property: optimised systems meet the unique-solution premises") {
    for (const auto& s : kRelations) {
        CAPTURE(s.m);
        CAPTURE(s.n);
        BuildConfig cfg;
        cfg.eta = s.eta;
        auto o = build_eqcbvp(rel(s.m, s.n), cfg);
        CHECK(o.complete);
        CHECK(check_guarded(o.system).ok);
        CHECK(static_io_separation(o.system).ok);
        auto sol = syntactic_solution(o.system);
        for (const auto& v : o.system.variables()) {
            auto d = divergence_scan(sol.agent(o.system, v), sol.env, 3, 64, false);
            CHECK(d.verdict.equivalent());
            CHECK(d.tau_steps == 0);
        }
    }
}

TEST_CASE("property: both encoding families solve both systems") {
    for (const auto& s : kRelations) {
        CAPTURE(s.m);
        CAPTURE(s.n);
        BuildConfig cfg;
        cfg.eta = s.eta;
        auto e = build_eqcbv(rel(s.m, s.n), cfg);
        auto o = build_eqcbvp(rel(s.m, s.n), cfg);
        for (bool left : {true, false}) {
            CHECK(all_equivalent(verify_solution(e.system, encoding_family(e.table, left), {})));
            CHECK(all_equivalent(verify_solution(o.system, encoding_family(o.table, left), {})));
        }
    }
}

TEST_CASE("property: application to a stuck value commutes with the context") {
    std::mt19937 rng(7);
    pi::Name p = pi::cont("p");
    for (int i = 0; i < 10; ++i) {
        lambda::EvalContext ctx = testing::random_context(rng, 2);
        lambda::Term v = testing::random_value(rng, 1);
        lambda::Term xv = lambda::Term::app(lambda::Term::var("x"), v);
        auto names = lambda::all_names(ctx.plug(xv));
        std::string z = lambda::fresh_name("z", names);
        lambda::Term lhs = lambda::Term::app(lambda::Term::abs(z, ctx.plug(lambda::Term::var(z))), xv);
        lambda::Term rhs = ctx.plug(xv);
        CAPTURE(lambda::to_string(lhs));
        CAPTURE(lambda::to_string(rhs));
        CHECK(equiv::weak_bisim(enc::encode_internal(lhs, p), enc::encode_internal(rhs, p), {}).equivalent());
    }
}

TEST_CASE("eta value law") {
    pi::Name p = pi::cont("p");
    CHECK(equiv::weak_bisim(enc::encode_internal(lambda::parse("x"), p), enc::encode_internal(lambda::parse("\\z.x z"), p), {})
              .equivalent());
}
