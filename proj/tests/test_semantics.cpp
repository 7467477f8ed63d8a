#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gen.hpp"
#include "pibound/congruence.hpp"
#include "pibound/parser.hpp"
#include "pibound/printer.hpp"
#include "pibound/semantics.hpp"

using namespace pibound;

namespace {

ProcRef parse_u(const std::string& text) {
    return parse_process(text, {true});
}

std::size_t count_outputs_on(const ProcRef& p, const std::string& base) {
    std::size_t count = 0;
    for (const auto& comp : flatten_par(inner_normal_form(p)))
        if (comp->is<OutputNode>() && comp->as<OutputNode>().subject.base == base)
            ++count;
    return count;
}

} // namespace

TEST_CASE("unfoldings") {
    ProcRef loop = rec("X", input(eps("a"), "y", pvar("X")));
    auto us = unfoldings(loop);
    REQUIRE(us.size() == 1);
    ProcRef expect = input(eps("a"), "y", loop);
    CHECK(alpha_equal(us[0], expect));

    CHECK(unfoldings(nil()).empty());
}

TEST_CASE("unfoldings find one context per active recursion") {
    // nu c ( mu X. a?(x).x!(x).X | mu Y. nu b ( a!(b).w?(y).Y ) )
    ProcRef p = parse_u(
        "new c in ((rec X. a?(x).x!(x).X) | rec Y. new b in a!(b).w?(y).Y)");
    auto us = unfoldings(p);
    CHECK(us.size() == 2);
    for (const auto& u : us)
        CHECK(has_distinct_bound_names(u));
    // recursions under prefixes are not active
    ProcRef guarded = parse_u("a?(x).rec X. b?(y).X");
    CHECK(unfoldings(guarded).empty());
}

TEST_CASE("unfolding contexts carry their known bound names") {
    ProcRef p = parse_u(
        "new c in ((rec X. a?(x).x!(x).X) | rec Y. new b in a!(b).w?(y).Y)");
    auto contexts = unfolding_contexts(p);
    REQUIRE(contexts.size() == 2);
    for (const auto& c : contexts) {
        CHECK(c.occupant()->is<RecNode>());
        CHECK(known_bound_names(c) == std::set<std::string>{"c"});
        CHECK(proc_equal(plug(c, c.occupant()), p));
    }
    // plugging a different process yields a well-formed term
    ProcRef swapped = plug(contexts[0], nil());
    CHECK(free_names(swapped).size() <= free_names(p).size() + 1);

    // names bound by an unfolding are fresh for the context
    auto us = unfoldings(p);
    REQUIRE(us.size() == 2);
    for (std::size_t i = 0; i < us.size(); ++i) {
        auto kn = known_bound_names(contexts[i]);
        for (const auto& n : bound_names(us[i]))
            CHECK((kn.count(n) == 0 || bound_names(p).count(n) == 1));
    }
}

TEST_CASE("base communication") {
    ProcRef p = parse_u("a?(x).0 | a!(b).0");
    auto rs = redexes(p);
    REQUIRE(rs.size() == 1);
    CHECK(rs[0].label.subject == "a");
    CHECK_FALSE(rs[0].label.unfolded);
    CHECK(rs[0].description.unfolded_binders.empty());
    CHECK(proc_equal(rs[0].result, par(nil(), nil())));
}

TEST_CASE("annotation steps with the communication") {
    ProcRef p = parse_process("new a : (?#end.end, !#end.end) in (a+?(x).0 | a-!(b).0)");
    auto rs = redexes(p);
    REQUIRE(rs.size() == 1);
    const auto& result = rs[0].result;
    REQUIRE(result->is<RestrictNode>());
    CHECK(type_equal(result->as<RestrictNode>().annot, ty_pair(ep_end(), ep_end())));
}

TEST_CASE("polarity discipline") {
    CHECK(redexes(parse_u("a+?(x).0 | a-!(b).0")).size() == 1);
    CHECK(redexes(parse_u("a-?(x).0 | a+!(b).0")).size() == 1);
    CHECK(redexes(parse_u("a+?(x).0 | a+!(b).0")).empty());
    CHECK(redexes(parse_u("a?(x).0 | a+!(b).0")).empty());
    CHECK(redexes(parse_u("a?(x).0 | b!(c).0")).empty());
}

TEST_CASE("substitution carries the sent polarity") {
    ProcRef p = parse_u("a?(x).x!(d).0 | a!(b+).0");
    auto rs = redexes(p);
    REQUIRE(rs.size() == 1);
    const auto& comps = flatten_par(rs[0].result);
    REQUIRE(comps.size() == 1);
    CHECK(comps[0]->as<OutputNode>().subject == plus("b"));
}

TEST_CASE("unfold-assisted redex") {
    ProcRef p = parse_u("rec X. a?(y).X | a!(b).0");
    auto rs = redexes(p);
    REQUIRE(rs.size() == 1);
    CHECK(rs[0].label.unfolded);
    CHECK(rs[0].label.subject == "a");
    CHECK(rs[0].label.str() == "{Rec,a}");
    CHECK(rs[0].description.unfolded_binders == std::vector<std::string>{"X"});
}

TEST_CASE("double unfolding synchronizes two recursive components") {
    ProcRef p = parse_u("(rec X. a?(y).X) | rec Y. a!(b).Y");
    auto rs = redexes(p);
    REQUIRE(rs.size() == 1);
    CHECK(rs[0].label.unfolded);
    CHECK(rs[0].description.unfolded_binders.size() == 2);
}

TEST_CASE("scope of a delegated bound name is lifted") {
    ProcRef p = parse_u("a?(x).x!(c).0 | new b in a!(b).b?(z).0");
    auto rs = redexes(p);
    REQUIRE(rs.size() == 1);
    const auto& result = rs[0].result;
    CHECK(has_distinct_bound_names(result));
    CHECK(free_names(result).count("b") == 0); // b stayed bound
    // and the delegated channel can now communicate
    auto rs2 = redexes(result);
    REQUIRE(rs2.size() == 1);
    CHECK(rs2[0].label.subject == "b");
}

TEST_CASE("step selects a redex by index") {
    ProcRef p = parse_u("a?(x).0 | a!(b).0");
    CHECK(proc_equal(step(p, 0), par(nil(), nil())));
    CHECK_THROWS_AS(step(p, 1), std::out_of_range);
    CHECK_THROWS_AS(step(nil(), 0), std::out_of_range);
}

TEST_CASE("run terminates when no redex remains") {
    Trace t = run(nil(), 10, Policy::Leftmost);
    CHECK(t.steps.empty());

    Trace ht = run(parse_u("a?(x).0 | a!(b).0"), 10, Policy::Leftmost);
    CHECK(ht.steps.size() == 1);
}

TEST_CASE("runs with a fixed seed are reproducible") {
    ProcRef p = parse_u(
        "a?(x).0 | a!(b).0 | c?(y).d!(y).0 | c!(e).0 | d?(z).0");
    Trace t1 = run(p, 10, Policy::Random, 424242);
    Trace t2 = run(p, 10, Policy::Random, 424242);
    REQUIRE(t1.steps.size() == t2.steps.size());
    for (std::size_t i = 0; i < t1.steps.size(); ++i) {
        CHECK(proc_equal(t1.steps[i].after, t2.steps[i].after));
        CHECK(t1.steps[i].redex.label.subject == t2.steps[i].redex.label.subject);
    }
}

TEST_CASE("the unbounded spawner emits one output per step") {
    ProcRef p = parse_process(
        "rec X. new a:(?#end.end, !#end.end) in (a+?(x).X | a-!(b).0 | b!(c).0)");
    Trace t = run(p, 5, Policy::Leftmost);
    REQUIRE(t.steps.size() == 5);
    CHECK(count_outputs_on(t.state(5), "b") == 5);
    for (std::size_t i = 0; i <= 5; ++i)
        CHECK(depth_estimate(t.state(i)) <= 1);
}

TEST_CASE("internal environments") {
    CHECK(internal_env(nil()).empty());

    ProcRef p = parse_process("new x : #end in 0");
    TypeEnv env = internal_env(p);
    REQUIRE(env.lookup(eps("x")) != nullptr);
    CHECK(type_equal(*env.lookup(eps("x")), ty_chan(ty_end())));

    ProcRef q = par(parse_process("new x : #end in x?(u).0"),
                    parse_process("new y : #(#end) in y?(v).0"));
    TypeEnv env2 = internal_env(q);
    CHECK(env2.size() == 2);
    REQUIRE(env2.lookup(eps("y")) != nullptr);
    CHECK(type_equal(*env2.lookup(eps("y")), ty_chan(ty_chan(ty_end()))));
    // restrictions under prefixes are collected as well
    ProcRef r = parse_process("a?(u).new z : #end in 0");
    CHECK(internal_env(r).contains(eps("z")));
}

TEST_CASE("reductions of an unfolding match reductions of the body") {
    // if P[mu X.P / X] steps with label {x}, P steps the same way and the
    // results agree after substitution
    testgen::Rng rng(37);
    const std::string pool[] = {"a", "b", "c"};
    int exercised = 0;
    for (int i = 0; i < 200; ++i) {
        // recursion body: parallel prefix chains, some looping back to X
        std::vector<ProcRef> comps;
        std::size_t k = rng.range(2, 4);
        for (std::size_t j = 0; j < k; ++j) {
            ProcRef tail = rng.chance(50) ? pvar("X") : nil();
            std::size_t chain = rng.range(1, 2);
            for (std::size_t h = 0; h < chain; ++h) {
                PolarizedName subject{pool[rng.below(3)], Polarity::Epsilon};
                if (rng.chance(50))
                    tail = input(subject, "o" + std::to_string(j * 7 + h), tail);
                else
                    tail = output(subject, eps(pool[rng.below(3)]), tail);
            }
            comps.push_back(tail);
        }
        ProcRef body = freshen_apart(repar(comps));
        ProcRef t = rec("X", body);
        REQUIRE(is_guarded(t));
        const auto& n = t->as<RecNode>();
        ProcRef unfolded = substitute_recvar(body, n.var, t);

        auto direct = [](const std::vector<Redex>& rs) {
            std::vector<Redex> out;
            for (const auto& r : rs)
                if (!r.label.unfolded)
                    out.push_back(r);
            return out;
        };
        auto body_redexes = direct(redexes(body));
        auto unfolded_redexes = direct(redexes(unfolded));
        REQUIRE(body_redexes.size() == unfolded_redexes.size());
        for (std::size_t r = 0; r < body_redexes.size(); ++r) {
            CHECK(body_redexes[r].label.subject == unfolded_redexes[r].label.subject);
            ProcRef substituted =
                substitute_recvar(body_redexes[r].result, n.var, t);
            CHECK(alpha_equal(substituted, unfolded_redexes[r].result));
            ++exercised;
        }
    }
    CHECK(exercised > 100);
}

TEST_CASE("fair policy cycles through the available redexes") {
    ProcRef p = parse_u("a?(x).0 | a!(b).0 | c?(y).0 | c!(d).0");
    Trace t = run(p, 10, Policy::Fair);
    CHECK(t.steps.size() == 2);
    CHECK(t.steps[0].redex.label.subject != t.steps[1].redex.label.subject);
}

TEST_CASE("direct redexes decompose through active positions only") {
    // the paths in the description witness a context of restrictions and
    // parallel compositions around a communication
    testgen::Rng rng(43);
    auto check_active_path = [](const ProcRef& root, const Path& path) {
        ProcRef cur = root;
        for (int idx : path) {
            if (cur->is<ParNode>()) {
                const auto& n = cur->as<ParNode>();
                cur = idx == 0 ? n.left : n.right;
            } else if (cur->is<RestrictNode>()) {
                cur = cur->as<RestrictNode>().body;
            } else {
                return false;
            }
        }
        return cur->is<InputNode>() || cur->is<OutputNode>();
    };
    const std::string pool[] = {"a", "b"};
    int seen = 0;
    for (int i = 0; i < 100; ++i) {
        std::vector<ProcRef> comps;
        std::size_t k = rng.range(2, 4);
        for (std::size_t j = 0; j < k; ++j) {
            PolarizedName subject{pool[rng.below(2)], Polarity::Epsilon};
            ProcRef comp = rng.chance(50)
                               ? input(subject, "o" + std::to_string(j), nil())
                               : output(subject, eps(pool[rng.below(2)]), nil());
            if (rng.chance(40))
                comp = restrict_("w" + std::to_string(j), nullptr, par(comp, nil()));
            comps.push_back(comp);
        }
        ProcRef t = freshen_apart(repar(comps));
        for (const auto& r : redexes(t)) {
            if (r.label.unfolded)
                continue;
            CHECK(check_active_path(t, r.description.input_path));
            CHECK(check_active_path(t, r.description.output_path));
            ++seen;
        }
    }
    CHECK(seen > 50);
}

TEST_CASE("redex results keep bound names distinct") {
    testgen::Rng rng(41);
    for (int i = 0; i < 150; ++i) {
        ProcRef t = testgen::random_term(rng);
        if (!is_recursion_closed(t))
            continue;
        for (const auto& r : redexes(t)) {
            CHECK(has_distinct_bound_names(r.result));
            // the description witnesses the decomposition
            CHECK(r.description.input_path != r.description.output_path);
            if (r.label.unfolded) {
                CHECK(r.description.unfolded_binders.size() >= 1);
                CHECK(r.description.unfolded_binders.size() <= 2);
            } else {
                CHECK(r.description.unfolded_binders.empty());
            }
        }
    }
}

TEST_CASE("trace rendering is line oriented") {
    ProcRef p = parse_u("a?(x).0 | a!(b).0");
    Trace t = run(p, 10, Policy::Leftmost);
    std::string rendered = render_trace(t);
    CHECK(rendered.find("{a}") != std::string::npos);
    CHECK(rendered.find("in=") != std::string::npos);
    CHECK(rendered.find("0 | 0") != std::string::npos);
}
