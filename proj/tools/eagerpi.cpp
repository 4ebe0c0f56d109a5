// eagerpi: command-line front-end.
//
// Exit codes: 0 success or Equivalent, 1 bad input, 2 eval diverged, 3 eval out of fuel,
// 4 Inequivalent or a failed check, 5 Unknown or a truncated result.

#include "laws.hpp"

#include "eagerpi/encodings.hpp"
#include "eagerpi/equations.hpp"
#include "eagerpi/equivalence.hpp"
#include "eagerpi/trees.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

using namespace eagerpi;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kBadInput = 1;
constexpr int kDiverged = 2;
constexpr int kFuel = 3;
constexpr int kFailed = 4;
constexpr int kUnknown = 5;

struct Globals {
    std::string dialect = "internal";
    std::size_t depth = 8;
    std::size_t tau_fuel = 64;
    std::size_t fuel = lambda::kDefaultFuel;
    bool json = false;
};

pi::Dialect dialect_of(const Globals& g) {
    auto d = pi::parse_dialect(g.dialect);
    if (!d) throw std::invalid_argument("unknown dialect " + g.dialect);
    return *d;
}

enc::Encoding default_encoding(pi::Dialect d) {
    switch (d) {
        case pi::Dialect::Full: return enc::Encoding::MilnerVPrime;
        case pi::Dialect::Alpi: return enc::Encoding::MilnerV;
        case pi::Dialect::Internal: return enc::Encoding::InternalPi;
    }
    return enc::Encoding::InternalPi;
}

enc::Encoding encoding_of(const std::string& s, pi::Dialect d) {
    if (s.empty()) return default_encoding(d);
    auto e = enc::parse_encoding(s);
    if (!e) throw std::invalid_argument("unknown encoding " + s);
    return *e;
}

int verdict_code(const Verdict& v) {
    if (v.equivalent()) return kOk;
    return v.inequivalent() ? kFailed : kUnknown;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int report(const Verdict& v, const Globals& g) {
    if (g.json) {
        std::cout << equiv::verdict_json(v, g.depth, g.tau_fuel) << "\n";
    } else {
        std::cout << v.summary() << "\n";
    }
    return verdict_code(v);
}

// ---------------------------------------------------------------- eval

int cmd_eval(const std::string& text, const Globals& g) {
    lambda::Term t = lambda::parse(text);
    auto out = lambda::evaluate(t, g.fuel);
    json j;
    int code = kOk;
    std::string line;
    if (const auto* e = std::get_if<lambda::Enf>(&out)) {
        line = "enf: " + lambda::to_string(e->term) + " (" + std::to_string(e->steps) + (e->steps == 1 ? " step)" : " steps)");
        j = {{"outcome", "enf"}, {"term", lambda::to_string(e->term)}, {"steps", e->steps}};
        auto shape = lambda::classify_enf(e->term);
        j["shape"] = std::holds_alternative<lambda::ValueVar>(shape) ? "variable"
                     : std::holds_alternative<lambda::ValueAbs>(shape) ? "abstraction"
                                                                      : "stuck";
    } else if (const auto* d = std::get_if<lambda::Diverged>(&out)) {
        line = "diverged (cycle length " + std::to_string(d->cycle.size()) + ")";
        j = {{"outcome", "diverged"}, {"cycle_length", d->cycle.size()}};
        code = kDiverged;
    } else {
        line = "fuel exhausted";
        j = {{"outcome", "fuel-exhausted"}, {"last", lambda::to_string(std::get<lambda::FuelExhausted>(out).last)}};
        code = kFuel;
    }
    std::cout << (g.json ? j.dump() : line) << "\n";
    return code;
}

// ---------------------------------------------------------------- trees

int cmd_enf_bisim(const std::string& m, const std::string& n, bool eta, bool sim, std::size_t tree_depth, const Globals& g) {
    trees::TreeCheckConfig cfg;
    cfg.eval_fuel = g.fuel;
    cfg.depth = tree_depth;
    auto lm = lambda::parse(m);
    auto ln = lambda::parse(n);
    Verdict v = sim ? trees::enfe_sim(lm, ln, cfg) : eta ? trees::enfe_bisim(lm, ln, cfg) : trees::enf_bisim(lm, ln, cfg);
    if (g.json) {
        std::cout << equiv::verdict_json(v, tree_depth, 0) << "\n";
    } else {
        std::cout << v.summary() << "\n";
    }
    return verdict_code(v);
}

// ---------------------------------------------------------------- encode

int cmd_encode(const std::string& text, const std::string& encoding, const std::string& cont, const Globals& g) {
    auto e = encoding_of(encoding, dialect_of(g));
    auto r = enc::encode_with(e, lambda::parse(text), pi::cont(cont));
    if (g.json) {
        json ds = json::array();
        for (auto d : r.dialects) ds.push_back(pi::to_string(d));
        std::cout << json{{"process", pi::to_string(r.process)}, {"dialects", ds}}.dump() << "\n";
    } else {
        std::cout << pi::to_string(r.process) << "\n";
    }
    return kOk;
}

// ---------------------------------------------------------------- processes

struct Inputs {
    bool lambda = false;
    std::string encoding;
};

// In ALpi, free names used in input are outside the characterisation of barbed
// congruence by the link LTS; such processes are checked with a warning.
void warn_free_inputs(const pi::Process& p, const pi::ConstantEnv& env, const Globals& g) {
    if (dialect_of(g) != pi::Dialect::Alpi) return;
    auto in = pi::free_input_subjects(p, &env);
    if (in.empty()) return;
    std::string names;
    for (const auto& n : in) names += (names.empty() ? "" : ",") + n;
    std::cerr << "warning: free names used in input under alpi: " << names << "\n";
}

pi::Process process_of(const std::string& text, const Inputs& in, pi::ConstantEnv& env, const Globals& g) {
    pi::Process p = in.lambda ? enc::encode_with(encoding_of(in.encoding, dialect_of(g)), lambda::parse(text), pi::cont("p")).process
                              : pi::parse_pi(text, env);
    warn_free_inputs(p, env, g);
    return p;
}

int cmd_lts(const std::string& text, const Inputs& in, std::size_t max_states, bool dot, const Globals& g) {
    pi::ConstantEnv env;
    pi::Process p = process_of(text, in, env, g);
    pi::Lts lts(env, dialect_of(g));
    std::vector<pi::State> states{lts.initial(p)};
    std::map<std::string, std::size_t> index{{pi::state_key(states[0]), 0}};
    struct Edge {
        std::size_t from;
        std::string label;
        std::size_t to;
    };
    std::vector<Edge> edges;
    bool truncated = false;
    for (std::size_t i = 0; i < states.size(); ++i) {
        for (auto& t : lts.step(states[i], 0)) {
            auto [it, fresh] = index.emplace(t.target_key, states.size());
            if (fresh) {
                if (states.size() >= max_states) {
                    index.erase(it);
                    truncated = true;
                    continue;
                }
                states.push_back(t.target);
            }
            edges.push_back({i, pi::to_string(t.action), it->second});
        }
    }
    if (dot) {
        std::cout << "digraph lts {\n";
        for (std::size_t i = 0; i < states.size(); ++i) {
            std::cout << "  s" << i << " [label=" << json(pi::to_string(states[i])).dump() << "];\n";
        }
        for (const auto& e : edges) std::cout << "  s" << e.from << " -> s" << e.to << " [label=" << json(e.label).dump() << "];\n";
        std::cout << "}\n";
    } else if (g.json) {
        json js = json::array();
        for (const auto& s : states) js.push_back(pi::to_string(s));
        json je = json::array();
        for (const auto& e : edges) je.push_back({{"from", e.from}, {"action", e.label}, {"to", e.to}});
        std::cout << json{{"states", js}, {"transitions", je}, {"truncated", truncated}}.dump(2) << "\n";
    } else {
        for (std::size_t i = 0; i < states.size(); ++i) std::cout << "s" << i << ": " << pi::to_string(states[i]) << "\n";
        for (const auto& e : edges) std::cout << "s" << e.from << " --" << e.label << "--> s" << e.to << "\n";
        if (truncated) std::cout << "(truncated at " << max_states << " states)\n";
    }
    return truncated ? kUnknown : kOk;
}

equiv::BisimConfig bisim_config(const Globals& g) {
    equiv::BisimConfig c;
    c.depth = g.depth;
    c.tau_fuel = g.tau_fuel;
    c.dialect = dialect_of(g);
    return c;
}

int cmd_bisim(const std::string& a, const std::string& b, const Inputs& in, bool barbed, const Globals& g) {
    pi::ConstantEnv env;
    pi::Process p = process_of(a, in, env, g);
    pi::Process q = process_of(b, in, env, g);
    auto cfg = bisim_config(g);
    auto r = barbed ? equiv::barbed_bisim_game(p, q, env, cfg) : equiv::weak_bisim_game(p, q, env, cfg);
    int code = report(r.verdict, g);
    if (r.strategy && !g.json) {
        bool ok = equiv::replay(*r.strategy, p, q, env, cfg, barbed);
        std::cout << "strategy replay: " << (ok ? "ok" : "FAILED") << "\n";
    }
    return code;
}

int cmd_traces(const std::string& a, const Inputs& in, std::size_t len, const Globals& g) {
    pi::ConstantEnv env;
    pi::Process p = process_of(a, in, env, g);
    auto ts = equiv::traces(p, env, dialect_of(g), len, g.tau_fuel);
    if (g.json) {
        json arr = json::array();
        for (const auto& t : ts.traces) arr.push_back(equiv::to_string(t));
        std::cout << json{{"traces", arr}, {"truncated", ts.truncated}}.dump(2) << "\n";
    } else {
        for (const auto& t : ts.traces) std::cout << equiv::to_string(t) << "\n";
        if (ts.truncated) std::cout << "(truncated)\n";
    }
    return ts.truncated ? kUnknown : kOk;
}

int cmd_trace_incl(const std::string& a, const std::string& b, const Inputs& in, std::size_t len, const Globals& g) {
    pi::ConstantEnv env;
    pi::Process p = process_of(a, in, env, g);
    pi::Process q = process_of(b, in, env, g);
    return report(equiv::trace_incl(p, q, env, dialect_of(g), len, g.tau_fuel), g);
}

// ---------------------------------------------------------------- laws

int cmd_laws(const std::string& filter, std::size_t len, const Globals& g) {
    cli::Bounds b{g.depth, g.tau_fuel, len, g.fuel};
    auto suite = cli::law_suite();
    std::vector<cli::LawRecord> records;
    for (const auto& law : suite) {
        if (!filter.empty() && law.id.find(filter) == std::string::npos) continue;
        auto t0 = std::chrono::steady_clock::now();
        Verdict v = law.run(b);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool matches = law.holds ? v.equivalent() : v.inequivalent();
        records.push_back({&law, std::move(v), secs, matches});
    }
    bool failed = false;
    bool warned = false;
    json arr = json::array();
    for (const auto& r : records) {
        const char* status = r.matches ? "ok" : r.verdict.unknown() ? "warn" : "FAIL";
        failed = failed || (!r.matches && !r.verdict.unknown());
        warned = warned || r.verdict.unknown();
        if (g.json) {
            arr.push_back({{"law", r.law->id},
                           {"encoding", r.law->encoding},
                           {"dialect", r.law->dialect},
                           {"expected", r.law->holds ? "holds" : "fails"},
                           {"verdict", r.verdict.label()},
                           {"depth", b.depth},
                           {"tau_fuel", b.tau_fuel},
                           {"seconds", r.seconds},
                           {"status", status}});
        } else {
            char buf[256];
            std::snprintf(buf, sizeof buf, "%-4s %-18s %-13s %-9s %-6s %-17s %7.3fs", status, r.law->id.c_str(),
                          r.law->encoding.c_str(), r.law->dialect.c_str(), r.law->holds ? "holds" : "fails",
                          r.verdict.label().c_str(), r.seconds);
            std::cout << buf << "\n";
        }
    }
    if (g.json) {
        std::cout << arr.dump(2) << "\n";
    } else {
        std::cout << records.size() << " laws, depth " << b.depth << ", tau fuel " << b.tau_fuel << ": "
                  << (failed ? "FAILED" : warned ? "passed with warnings" : "all as expected") << "\n";
    }
    return failed ? kFailed : kOk;
}

// ---------------------------------------------------------------- equations

struct EqOptions {
    std::string file;
    bool eta = false;
    bool preorder = false;
    bool table = false;
    std::string system = "opt";
    std::size_t cap = 200;
    std::size_t trace_len = 6;
};

eqn::BuildResult build(const EqOptions& o, bool optimised, const Globals& g) {
    eqn::BuildConfig cfg;
    cfg.eval_fuel = g.fuel;
    cfg.eta = o.eta;
    cfg.preorder = o.preorder;
    cfg.cap = o.cap;
    auto r = eqn::parse_relation(read_file(o.file));
    return optimised ? eqn::build_eqcbvp(r, cfg) : eqn::build_eqcbv(r, cfg);
}

json verdicts_json(const std::vector<eqn::IndexVerdict>& vs) {
    json j = json::object();
    for (const auto& v : vs) j[v.var] = v.verdict.summary();
    return j;
}

int cmd_equations_build(const EqOptions& o, bool optimised, const Globals& g) {
    auto r = build(o, optimised, g);
    if (g.json) {
        json lines = json::array();
        for (const auto& e : r.system.equations) lines.push_back(e.var + " = " + pi::to_string(e.body));
        json out{{"equations", lines}, {"complete", r.complete}};
        if (o.table) out["table"] = json::parse(r.table.to_json());
        if (!r.complete) out["report"] = r.report;
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << eqn::to_string(r.system);
        if (o.table) std::cout << r.table.to_json() << "\n";
        if (!r.complete) std::cerr << r.report << "\n";
    }
    return r.complete ? kOk : kUnknown;
}

int cmd_equations_check(const EqOptions& o, const Globals& g) {
    bool optimised = o.system == "opt";
    if (!optimised && o.system != "plain") throw std::invalid_argument("--system must be plain or opt");
    auto r = build(o, optimised, g);
    bool green = r.complete;
    auto guarded = eqn::check_guarded(r.system);
    auto separated = eqn::static_io_separation(r.system);
    green = green && guarded.ok && separated.ok;
    auto sol = eqn::syntactic_solution(r.system);
    json div = json::object();
    std::vector<std::string> lines;
    for (const auto& v : r.system.variables()) {
        auto d = eqn::divergence_scan(sol.agent(r.system, v), sol.env, g.depth, g.tau_fuel);
        green = green && d.verdict.equivalent();
        std::string s = d.static_argument ? "divergence-free (static argument)" : d.verdict.equivalent() ? "no divergence found, " + d.verdict.summary() : d.verdict.summary();
        div[v] = s;
        lines.push_back("divergence " + v + ": " + s);
    }
    auto cfg = bisim_config(g);
    auto left = eqn::verify_solution(r.system, eqn::encoding_family(r.table, true), {}, cfg);
    auto right = eqn::verify_solution(r.system, eqn::encoding_family(r.table, false), {}, cfg);
    for (const auto* vs : {&left, &right}) {
        for (const auto& v : *vs) green = green && v.verdict.equivalent();
    }
    if (g.json) {
        json out{{"system", optimised ? "opt" : "plain"},
                 {"complete", r.complete},
                 {"guarded", guarded.ok},
                 {"guarded_problems", guarded.problems},
                 {"static_io_separation", separated.ok},
                 {"separation_problems", separated.problems},
                 {"divergence", div},
                 {"left_solution", verdicts_json(left)},
                 {"right_solution", verdicts_json(right)},
                 {"ok", green}};
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "system: " << (optimised ? "optimised" : "plain") << ", " << r.system.equations.size() << " equations"
                  << (r.complete ? "" : " (partial closure)") << "\n";
        std::cout << "guarded: " << (guarded.ok ? "ok" : "no") << "\n";
        for (const auto& p : guarded.problems) std::cout << "  " << p << "\n";
        std::cout << "static input/output separation: " << (separated.ok ? "ok" : "no") << "\n";
        for (const auto& p : separated.problems) std::cout << "  " << p << "\n";
        for (const auto& l : lines) std::cout << l << "\n";
        for (const auto& v : left) std::cout << "left solution " << v.var << ": " << v.verdict.summary() << "\n";
        for (const auto& v : right) std::cout << "right solution " << v.var << ": " << v.verdict.summary() << "\n";
        std::cout << (green ? "all checks passed" : "some checks failed") << "\n";
    }
    return green ? kOk : kFailed;
}

int cmd_equations_fixpoints(const EqOptions& o, const Globals& g) {
    auto r = build(o, false, g);
    eqn::TraceBounds tb{o.trace_len, g.tau_fuel};
    auto left = eqn::encoding_family(r.table, true);
    auto right = eqn::encoding_family(r.table, false);
    auto lpre = eqn::prefix_point_check(r.system, left, {}, tb);
    auto lpost = eqn::postfix_point_check(r.system, left, {}, tb);
    auto rpre = eqn::prefix_point_check(r.system, right, {}, tb);
    auto rpost = eqn::postfix_point_check(r.system, right, {}, tb);
    // The left encodings must be a post-fixed point and the right ones a pre-fixed point.
    bool ok = true;
    for (std::size_t i = 0; i < r.system.equations.size(); ++i) ok = ok && lpost[i].verdict.equivalent() && rpre[i].verdict.equivalent();
    if (g.json) {
        json rows = json::array();
        for (std::size_t i = 0; i < r.system.equations.size(); ++i) {
            rows.push_back({{"var", lpre[i].var},
                            {"left_pre", lpre[i].verdict.label()},
                            {"left_post", lpost[i].verdict.label()},
                            {"right_pre", rpre[i].verdict.label()},
                            {"right_post", rpost[i].verdict.label()}});
        }
        std::cout << json{{"rows", rows}, {"ok", ok}}.dump(2) << "\n";
    } else {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%-8s %-17s %-17s %-17s %-17s", "var", "left pre", "left post", "right pre", "right post");
        std::cout << buf << "\n";
        for (std::size_t i = 0; i < r.system.equations.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%-8s %-17s %-17s %-17s %-17s", lpre[i].var.c_str(), lpre[i].verdict.label().c_str(),
                          lpost[i].verdict.label().c_str(), rpre[i].verdict.label().c_str(), rpost[i].verdict.label().c_str());
            std::cout << buf << "\n";
        }
        std::cout << (ok ? "left encodings post-fixed, right encodings pre-fixed" : "fixed-point checks failed") << "\n";
    }
    return ok ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Call-by-value lambda calculus, its pi-calculus encodings and bounded equivalence checkers"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--dialect", g.dialect, "full, internal or alpi")->capture_default_str();
    app.add_option("--depth", g.depth, "Game depth")->capture_default_str();
    app.add_option("--tau-fuel", g.tau_fuel, "Internal steps per weak move")->capture_default_str();
    app.add_option("--fuel", g.fuel, "Lambda evaluation fuel")->capture_default_str();
    app.add_flag("--json", g.json, "JSON output");
    app.fallthrough();

    std::function<int()> action;

    std::string term;
    auto* eval = app.add_subcommand("eval", "Evaluate a lambda term");
    eval->add_option("term", term)->required();
    eval->callback([&] { action = [&] { return cmd_eval(term, g); }; });

    std::string m, n;
    bool eta = false, sim = false;
    std::size_t tree_depth = 32;
    auto* enf = app.add_subcommand("enf-bisim", "Eager normal-form bisimilarity of two lambda terms");
    enf->add_option("m", m)->required();
    enf->add_option("n", n)->required();
    enf->add_flag("--eta", eta, "Eta variant");
    enf->add_flag("--sim", sim, "Eta similarity (m below n)");
    enf->add_option("--tree-depth", tree_depth, "Tree depth")->capture_default_str();
    enf->callback([&] { action = [&] { return cmd_enf_bisim(m, n, eta, sim, tree_depth, g); }; });

    std::string encoding, cont = "p";
    auto* encode = app.add_subcommand("encode", "Encode a lambda term");
    encode->add_option("term", term)->required();
    encode->add_option("--encoding", encoding, "milner, milner-prime or internal (default by dialect)");
    encode->add_option("--cont", cont, "Continuation name")->capture_default_str();
    encode->callback([&] { action = [&] { return cmd_encode(term, encoding, cont, g); }; });

    Inputs in;
    auto add_inputs = [&](CLI::App* sub) {
        sub->add_flag("--lambda", in.lambda, "Arguments are lambda terms, encoded first");
        sub->add_option("--encoding", in.encoding, "Encoding for --lambda (default by dialect)");
    };

    std::size_t max_states = 50;
    bool dot = false;
    auto* lts = app.add_subcommand("lts", "Explore the transitions of a process");
    lts->add_option("process", m)->required();
    lts->add_option("--states", max_states, "State limit")->capture_default_str();
    lts->add_flag("--dot", dot, "Graphviz output");
    add_inputs(lts);
    lts->callback([&] { action = [&] { return cmd_lts(m, in, max_states, dot, g); }; });

    for (bool barbed : {false, true}) {
        auto* b = app.add_subcommand(barbed ? "barbed" : "bisim", barbed ? "Barbed bisimilarity" : "Weak ground bisimilarity");
        b->add_option("p", m)->required();
        b->add_option("q", n)->required();
        add_inputs(b);
        b->callback([&, barbed] { action = [&, barbed] { return cmd_bisim(m, n, in, barbed, g); }; });
    }

    std::size_t len = 6;
    auto* traces = app.add_subcommand("traces", "Weak traces of a process");
    traces->add_option("p", m)->required();
    traces->add_option("--len", len, "Maximal trace length")->capture_default_str();
    add_inputs(traces);
    traces->callback([&] { action = [&] { return cmd_traces(m, in, len, g); }; });

    auto* incl = app.add_subcommand("trace-incl", "Weak trace inclusion of p in q");
    incl->add_option("p", m)->required();
    incl->add_option("q", n)->required();
    incl->add_option("--len", len, "Maximal trace length")->capture_default_str();
    add_inputs(incl);
    incl->callback([&] { action = [&] { return cmd_trace_incl(m, n, in, len, g); }; });

    std::string filter;
    auto* laws = app.add_subcommand("laws", "Run the built-in law suite");
    laws->add_option("--filter", filter, "Only laws whose id contains this text");
    laws->add_option("--len", len, "Trace length")->capture_default_str();
    laws->callback([&] { action = [&] { return cmd_laws(filter, len, g); }; });

    EqOptions eo;
    auto* eqs = app.add_subcommand("equations", "Equation systems from a relation file");
    eqs->require_subcommand(1);
    auto eq_common = [&](CLI::App* sub) {
        sub->add_option("relation", eo.file, "JSON list of term pairs")->required();
        sub->add_flag("--eta", eo.eta, "Eta cases");
        sub->add_flag("--preorder", eo.preorder, "A diverging left term is related to anything");
        sub->add_option("--cap", eo.cap, "Pair limit")->capture_default_str();
    };
    auto* eb = eqs->add_subcommand("build", "Print the plain system");
    eq_common(eb);
    eb->add_flag("--table", eo.table, "Also print the pair table");
    eb->callback([&] { action = [&] { return cmd_equations_build(eo, false, g); }; });
    auto* ebo = eqs->add_subcommand("build-opt", "Print the optimised system");
    eq_common(ebo);
    ebo->add_flag("--table", eo.table, "Also print the pair table");
    ebo->callback([&] { action = [&] { return cmd_equations_build(eo, true, g); }; });
    auto* ec = eqs->add_subcommand("check", "Guardedness, separation, divergence and solutions");
    eq_common(ec);
    ec->add_option("--system", eo.system, "plain or opt")->capture_default_str();
    ec->callback([&] { action = [&] { return cmd_equations_check(eo, g); }; });
    auto* ef = eqs->add_subcommand("fixpoints", "Pre- and post-fixed-point table for trace inclusion");
    eq_common(ef);
    ef->add_option("--len", eo.trace_len, "Trace length")->capture_default_str();
    ef->callback([&] { action = [&] { return cmd_equations_fixpoints(eo, g); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kBadInput;
    }
    try {
        return action();
    } catch (const lambda::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
    } catch (const pi::PiParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
    } catch (const eqn::BuildError& e) {
        std::cerr << e.what() << "\n";
        return kFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    return kBadInput;
}
