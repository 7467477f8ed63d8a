// Acceptance suite: runs every acceptance check and prints one line per
// criterion. Exits with the number of failed criteria.
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gen.hpp"
#include "pibound/analysis.hpp"
#include "pibound/checker.hpp"
#include "pibound/congruence.hpp"
#include "pibound/parser.hpp"
#include "pibound/printer.hpp"
#include "pibound/semantics.hpp"

using namespace pibound;

namespace {

std::string corpus_dir = "corpus";

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ProcRef load(const std::string& name) {
    return parse_process(read_file(corpus_dir + "/" + name));
}

struct Criterion {
    int number;
    std::string summary;
    bool pass = true;
    std::vector<std::string> failures;
    double millis = 0.0;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (failures.size() < 8)
                failures.push_back(what);
        }
    }
};

int run_all() {
    std::vector<Criterion> results;
    auto timed = [&](int number, const std::string& summary, double limit_ms,
                     auto&& body) {
        Criterion c{number, summary};
        auto start = std::chrono::steady_clock::now();
        body(c);
        c.millis = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
        if (limit_ms > 0)
            c.require(c.millis < limit_ms, "runtime " + std::to_string(c.millis) +
                                               " ms exceeds the limit of " +
                                               std::to_string(limit_ms) + " ms");
        results.push_back(std::move(c));
    };

    // 1. example depths: estimate and oracle agree on the two spawners
    timed(1, "example depths reproduced (p1 -> 1, p2 -> 2, oracle agrees, < 1s each)", 0,
          [&](Criterion& c) {
              struct Expectation {
                  const char* file;
                  std::size_t depth;
              } cases[] = {{"p1.pi", 1}, {"p2.pi", 2}};
              for (const auto& [file, expected] : cases) {
                  auto start = std::chrono::steady_clock::now();
                  ProcRef p = load(file);
                  DepthReport r = depth_report(p, 50000);
                  double ms = std::chrono::duration<double, std::milli>(
                                  std::chrono::steady_clock::now() - start)
                                  .count();
                  c.require(r.depth_estimate == expected,
                            std::string(file) + ": depth_estimate " +
                                std::to_string(r.depth_estimate) + " != " +
                                std::to_string(expected));
                  c.require(r.oracle_depth.has_value(), std::string(file) + ": oracle ran out of budget");
                  if (r.oracle_depth)
                      c.require(*r.oracle_depth == expected,
                                std::string(file) + ": oracle " +
                                    std::to_string(*r.oracle_depth) + " != " +
                                    std::to_string(expected));
                  c.require(ms < 1000.0, std::string(file) + ": took " + std::to_string(ms) + " ms");
              }
          });

    // 2. the recursive channel-binding example is rejected under every corpus
    //    annotation and both Var modes
    timed(2, "untypable example rejected under every corpus annotation, both var modes", 1000.0,
          [&](Criterion& c) {
              const char* files[] = {"sec4_chan.pi", "sec4_session.pi", "sec4_mixed.pi",
                                     "sec4_polarized.pi"};
              for (const char* file : files) {
                  ProcRef p = load(file);
                  for (VarMode mode : {VarMode::Strict, VarMode::Lenient}) {
                      auto r = check_depth(TypeEnv{}, RecEnv{}, p, mode);
                      c.require(!accepted(r), std::string(file) + " was accepted");
                      if (!accepted(r)) {
                          c.require(!check_error(r).attempts.empty(),
                                    std::string(file) + ": no rule named");
                          c.require(!check_error(r).attempts[0].rule.empty(),
                                    std::string(file) + ": empty rule name");
                      }
                  }
              }
          });

    // 3. fidelity over generated well-typed processes (lenient var mode)
    timed(3, "fidelity: 200 generated well-typed processes, <=30 step traces, "
             "100% matches and successor re-checks (lenient var mode)", 60000.0,
          [&](Criterion& c) {
              std::size_t records_total = 0;
              for (int i = 0; i < 200; ++i) {
                  testgen::Rng rng(10000 + i);
                  testgen::TypedTerm t = testgen::random_well_typed(rng);
                  auto r = check_depth(t.env, RecEnv{}, t.proc);
                  c.require(accepted(r), "generated term rejected: " + print_process(t.proc));
                  if (!accepted(r))
                      continue;
                  Policy policy = i % 2 == 0 ? Policy::Random : Policy::Leftmost;
                  Trace trace = run(t.proc, 30, policy, 77000 + i);
                  auto records = fidelity_check(t.env, trace);
                  records_total += records.size();
                  for (const auto& rec : records) {
                      c.require(rec.match, "mismatch at step " + std::to_string(rec.step) +
                                               " of " + print_process(t.proc));
                      c.require(rec.successor_accepted,
                                "successor re-check failed at step " +
                                    std::to_string(rec.step) + " of " +
                                    print_process(t.proc));
                  }
              }
              c.require(records_total >= 200, "too few fidelity records exercised: " +
                                                  std::to_string(records_total));
          });

    // 4. width bound 2 for bound session names on the same set plus the spawner
    timed(4, "width bound 2: bound session names occupy <= 2 components in every "
             "reachable inner normal form", 0,
          [&](Criterion& c) {
              auto check_states = [&](const ProcRef& p, std::size_t steps, Policy policy,
                                      std::uint64_t seed, const std::string& what) {
                  Trace trace = run(p, steps, policy, seed);
                  for (std::size_t s = 0; s < trace.state_count(); ++s) {
                      auto occupancy = component_occupancy(trace.state(s));
                      TypeEnv internal = internal_env(trace.state(s));
                      for (const auto& [name, count] : occupancy) {
                          const TypeRef* annot = internal.lookup(eps(name));
                          bool session = annot && (*annot)->kind() == Type::Kind::Pair;
                          if (session)
                              c.require(count <= 2, what + ": name " + name + " in " +
                                                        std::to_string(count) +
                                                        " components at state " +
                                                        std::to_string(s));
                      }
                  }
              };
              for (int i = 0; i < 200; ++i) {
                  testgen::Rng rng(10000 + i);
                  testgen::TypedTerm t = testgen::random_well_typed(rng);
                  check_states(t.proc, 30, i % 2 == 0 ? Policy::Random : Policy::Leftmost,
                               88000 + i, "generated " + std::to_string(i));
              }
              check_states(load("sec8.pi"), 50, Policy::Leftmost, 0, "sec8");
          });

    // 5. the spawner run for 50 steps: one emitted output per step, depth stays 1
    timed(5, "spawner behaviour: 50 steps yield >= 49 parallel outputs at depth <= 1", 0,
          [&](Criterion& c) {
              ProcRef p = load("sec8.pi");
              Trace trace = run(p, 50, Policy::Leftmost);
              c.require(trace.steps.size() == 50,
                        "expected 50 steps, got " + std::to_string(trace.steps.size()));
              std::size_t outputs = 0;
              for (const auto& comp : flatten_par(inner_normal_form(trace.state(50))))
                  if (comp->is<OutputNode>() && comp->as<OutputNode>().subject.base == "b")
                      ++outputs;
              c.require(outputs >= 49, "only " + std::to_string(outputs) + " outputs");
              BoundednessReport r = measure(p, 50, Policy::Leftmost);
              c.require(r.max_depth_estimate <= 1,
                        "max depth " + std::to_string(r.max_depth_estimate));
          });

    // 6. name soundness at desk scale. The d*k bound is stated for recursive
    //    processes (k = recursion instances); the generated corpus therefore
    //    consists of name-accepted recursive terms (k >= 1).
    timed(6, "name soundness: restriction count bounded by recs * depth bound on "
             "name-accepted recursive terms; spawners and double self-occurrences rejected", 60000.0,
          [&](Criterion& c) {
              for (int i = 0; i < 100; ++i) {
                  testgen::Rng rng(20000 + i);
                  testgen::TypedTerm t = testgen::random_nb_recursive(rng);
                  auto r = check_name(t.env, RecEnv{}, t.proc);
                  c.require(accepted(r), "nb term rejected: " + print_process(t.proc));
                  if (!accepted(r))
                      continue;
                  std::size_t k = recs(t.proc).count;
                  std::size_t d = depth_estimate(t.proc) + depth_budget(t.env, t.proc);
                  std::size_t bound = k * d;
                  Trace trace = run(t.proc, 100, Policy::Leftmost);
                  for (std::size_t s = 0; s < trace.state_count(); ++s) {
                      std::size_t count = count_restrictions(normalize(trace.state(s)));
                      c.require(count <= bound,
                                "restrictions " + std::to_string(count) + " > bound " +
                                    std::to_string(bound) + " at state " +
                                    std::to_string(s));
                  }
              }
              // the two-binder spawner is rejected
              ProcRef p2 = load("p2.pi");
              for (VarMode mode : {VarMode::Strict, VarMode::Lenient})
                  c.require(!accepted(check_name(TypeEnv{}, RecEnv{}, p2, mode)),
                            "p2 accepted by the name system");
              // recursion bodies with two parallel self-occurrences are rejected
              for (int i = 0; i < 100; ++i) {
                  testgen::Rng rng(30000 + i);
                  std::string subject = i % 2 == 0 ? "a" : "u";
                  ProcRef body = input(eps(subject), "y" + std::to_string(i),
                                       par(pvar("X"), pvar("X")));
                  ProcRef twice = rec("X", body);
                  TypeEnv env;
                  env.bind(eps(subject), ty_chan(ty_chan(ty_end())));
                  auto r = check_name(env, RecEnv{}, twice,
                                      i % 2 == 0 ? VarMode::Lenient : VarMode::Strict);
                  c.require(!accepted(r), "double self-occurrence accepted");
                  (void)rng;
              }
          });

    // 7. the bounded exhaustive search agrees with the estimate
    timed(7, "oracle equivalence: depth_estimate == depth_oracle on 500 random terms "
             "(<= 3 restrictions, <= 6 prefixes)", 30000.0,
          [&](Criterion& c) {
              for (int i = 0; i < 500; ++i) {
                  testgen::Rng rng(40000 + i);
                  ProcRef t = testgen::random_term(rng);
                  auto oracle = depth_oracle(t, 50000);
                  c.require(oracle.has_value(), "oracle budget exhausted on " + print_process(t));
                  if (!oracle)
                      continue;
                  std::size_t estimate = depth_estimate(t);
                  c.require(*oracle == estimate,
                            "estimate " + std::to_string(estimate) + " != oracle " +
                                std::to_string(*oracle) + " on " + print_process(t));
              }
          });

    // 8. algebra and property suites, >= 1000 cases each
    timed(8, "algebra suites: dual involution, successor decrement, environment "
             "addition laws, subject congruence, recs non-increase (>= 1000 cases each)", 0,
          [&](Criterion& c) {
              { // dual involution
                  testgen::Rng rng(1);
                  for (int i = 0; i < 1000; ++i) {
                      EndpointRef s = testgen::random_endpoint(rng, 5);
                      c.require(endpoint_equal(dual(dual(s)), s), "dual not involutive");
                      c.require(endpoint_depth(dual(s)) == endpoint_depth(s),
                                "dual changed the depth");
                  }
              }
              { // successor depth decrement on balanced pairs
                  testgen::Rng rng(2);
                  int done = 0;
                  while (done < 1000) {
                      TypeRef t = testgen::random_balanced_pair(rng, 4);
                      auto next = type_successor(t);
                      if (!next)
                          continue;
                      c.require(is_balanced(*next), "successor lost balance");
                      c.require(type_depth(*next) + 1 == type_depth(t),
                                "successor depth did not decrease by one");
                      ++done;
                  }
              }
              { // environment addition: unit and commutativity on disjoint domains
                  testgen::Rng rng(3);
                  for (int i = 0; i < 1000; ++i) {
                      TypeEnv a, b;
                      std::size_t an = rng.range(0, 3), bn = rng.range(0, 3);
                      for (std::size_t k = 0; k < an; ++k)
                          a.bind(eps("a" + std::to_string(k)), testgen::random_type(rng));
                      for (std::size_t k = 0; k < bn; ++k)
                          b.bind(eps("b" + std::to_string(k)), testgen::random_type(rng));
                      c.require(env_add(TypeEnv{}, a) == a, "empty env is not a unit");
                      c.require(env_add(a, b) == env_add(b, a), "env_add not commutative");
                      RecEnv da = RecEnv{}.with_binding("X" + std::to_string(i % 7), a);
                      RecEnv db = RecEnv{}.with_binding("Y" + std::to_string(i % 5), b);
                      c.require(recenv_add(RecEnv{}, da) == da, "empty recenv is not a unit");
                      c.require(recenv_add(da, db) == recenv_add(db, da),
                                "recenv_add not commutative");
                  }
              }
              { // subject congruence across one structural rewrite
                  int done = 0;
                  for (int i = 0; done < 1000; ++i) {
                      testgen::Rng rng(50000 + i);
                      testgen::TypedTerm t = testgen::random_well_typed(rng);
                      if (!accepted(check_depth(t.env, RecEnv{}, t.proc))) {
                          c.require(false, "generated term rejected");
                          break;
                      }
                      auto rewritten = testgen::random_congruence_rewrite(rng, t.proc);
                      if (!rewritten)
                          continue;
                      c.require(accepted(check_depth(t.env, RecEnv{}, *rewritten)),
                                "acceptance lost after rewrite of " + print_process(t.proc));
                      ++done;
                  }
              }
              { // recs non-increase across single unfoldings of accepted terms
                  int done = 0;
                  for (int i = 0; done < 1000; ++i) {
                      testgen::Rng rng(60000 + i);
                      testgen::TypedTerm t = i % 2 == 0
                                                 ? testgen::random_well_typed(rng)
                                                 : testgen::random_nb_recursive(rng);
                      std::size_t before = recs(t.proc).count;
                      for (const auto& u : unfoldings(t.proc)) {
                          c.require(recs(u).count <= before, "recs increased by unfolding");
                          ++done;
                      }
                      if (before == 0)
                          ++done; // recursion-free terms have nothing to unfold
                  }
              }
          });

    int failed = 0;
    for (const auto& c : results) {
        std::cout << "criterion " << c.number << ": " << (c.pass ? "PASS" : "FAIL")
                  << " [" << static_cast<long>(c.millis) << " ms] " << c.summary << "\n";
        if (!c.pass) {
            ++failed;
            for (const auto& f : c.failures)
                std::cout << "    " << f << "\n";
        }
    }
    std::cout << (failed == 0 ? "all criteria passed" : "criteria failed: ") << (failed == 0 ? "" : std::to_string(failed))
              << "\n";
    return failed;
}

} // namespace

int main(int argc, char** argv) {
    if (argc > 1)
        corpus_dir = argv[1];
    try {
        return run_all();
    } catch (const std::exception& e) {
        std::cerr << "acceptance harness error: " << e.what() << "\n";
        return 99;
    }
}
