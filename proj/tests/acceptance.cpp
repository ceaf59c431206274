// Acceptance suite: every criterion prints exactly one PASS/FAIL line.
// Tolerances are exact equality throughout; runtime bounds are asserted
// where stated.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "support/oracles.hpp"
#include "ua/builtins.hpp"
#include "ua/json_io.hpp"
#include "ua/maltsev.hpp"

using namespace ua;

namespace {

int failures = 0;

double run_criterion(int number, const std::string& title,
                     const std::function<bool(std::string&)>& body,
                     double time_limit_seconds = 0.0) {
  std::string detail;
  auto start = std::chrono::steady_clock::now();
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (time_limit_seconds > 0 && seconds > time_limit_seconds) {
    ok = false;
    detail += (detail.empty() ? "" : "; ") + std::string("time limit exceeded");
  }
  std::ostringstream line;
  line << (ok ? "PASS" : "FAIL") << " criterion " << number << ": " << title << " ["
       << seconds << "s]";
  if (!ok && !detail.empty()) line << " -- " << detail;
  std::cout << line.str() << "\n";
  if (!ok) ++failures;
  return seconds;
}

Term random_term(std::mt19937& rng, const Signature& sig, int width, int depth) {
  std::uniform_int_distribution<int> coin(0, 1);
  bool leaf = depth == 0 || sig.op_count() == 0 || coin(rng) == 0;
  if (leaf && width > 0) {
    std::uniform_int_distribution<int> var(0, width - 1);
    return Term::var(var(rng));
  }
  std::uniform_int_distribution<int> pick(0, sig.op_count() - 1);
  int op = pick(rng);
  std::vector<Term> args;
  for (int i = 0; i < sig.arity(op); ++i)
    args.push_back(random_term(rng, sig, width, depth - 1));
  return Term::app(op, std::move(args));
}

}  // namespace

int main() {
  VarietyPresentation lat2(builtin_lattice2());
  VarietyPresentation z2(builtin_z2xor());
  VarietyPresentation s2(builtin_set2());

  // 1. Example 3.6 reproduction: the built-in k=0, m=3, N=5 bundle passes
  // the weakly-Mal'tsev check on lattice2 with every identity over at most
  // 2^8 assignments; a single-term mutation fails with an assignment.
  run_criterion(1, "distributive-lattice witness bundle verifies (and mutations fail)",
                [&](std::string& detail) {
                  WitnessBundle b = builtin_dl_bundle();
                  if (b.k != 0 || b.m != 3 || b.N != 5) {
                    detail = "unexpected bundle shape";
                    return false;
                  }
                  if (b.wide_width() != 8) {
                    detail = "widest equation quantifies over more than 8 variables";
                    return false;
                  }
                  WitnessReport rep = verify_witness(lat2, b, WitnessTheorem::wm);
                  if (!rep.all_pass) {
                    for (const auto& eq : rep.equations)
                      if (!eq.pass) detail += eq.label + " failed; ";
                    return false;
                  }
                  // swap sigma1's a for b
                  WitnessBundle mut = b;
                  mut.sigma[0] = parse_term("(meet $0 $9)", lat2.sig());
                  WitnessReport mrep = verify_witness(lat2, mut, WitnessTheorem::wm);
                  if (mrep.all_pass) {
                    detail = "mutated bundle still passes";
                    return false;
                  }
                  for (const auto& eq : mrep.equations) {
                    if (eq.pass) continue;
                    if (eq.falsifying.empty()) {
                      detail = "failed equation lacks a falsifying assignment";
                      return false;
                    }
                    int lhs = eval_term(eq.identity.lhs, *lat2.generator(), eq.falsifying);
                    int rhs = eval_term(eq.identity.rhs, *lat2.generator(), eq.falsifying);
                    if (lhs == rhs) {
                      detail = "reported assignment does not falsify " + eq.label;
                      return false;
                    }
                  }
                  return true;
                },
                1.0);

  // 2. Decision trio at the stated modes, each decision under 10 seconds.
  run_criterion(2, "weakly-Mal'tsev decisions: lattice2 yes, n5 no, set2 no",
                [&](std::string& detail) {
                  auto timed = [&](const char* what, auto&& thunk) {
                    auto t0 = std::chrono::steady_clock::now();
                    bool ok = thunk();
                    double s = std::chrono::duration<double>(
                                   std::chrono::steady_clock::now() - t0)
                                   .count();
                    if (s > 10.0) {
                      detail += std::string(what) + " exceeded 10s; ";
                      return false;
                    }
                    return ok;
                  };
                  bool ok1 = timed("lattice2", [&] {
                    CoreObjects lcore = build_core(lat2);
                    if (weakly_maltsev(lcore, DominionMode::cd_complete).yes()) return true;
                    detail += "lattice2 not yes; ";
                    return false;
                  });
                  bool ok2 = timed("n5", [&] {
                    VarietyPresentation n5v(builtin_n5());
                    CoreObjects ncore = build_core(n5v);
                    Verdict v = weakly_maltsev(ncore, DominionMode::cd_complete);
                    if (!v.no() || !v.certificate.has_value()) {
                      detail += "n5 not no-with-certificate; ";
                      return false;
                    }
                    if (!check_certificate(*v.certificate, ncore.P.algebra, ncore.R).ok) {
                      detail += "n5 certificate fails its check; ";
                      return false;
                    }
                    return true;
                  });
                  bool ok3 = timed("set2", [&] {
                    CoreObjects score = build_core(s2);
                    if (weakly_maltsev(score, DominionMode::refute, 1).no()) return true;
                    detail += "set2 not no at power 1; ";
                    return false;
                  });
                  return ok1 && ok2 && ok3;
                });

  // 3. Mal'tsev detection, exact.
  run_criterion(3, "Mal'tsev term for z2xor is xor(x,y,z); none for lattice2; reg yes",
                [&](std::string& detail) {
                  auto p = maltsev_term(z2);
                  if (!p) {
                    detail = "no term for z2xor";
                    return false;
                  }
                  Term x = Term::var(0), y = Term::var(1);
                  if (!holds_identity(z2, Identity(substitute(*p, {x, x, y}), y, 2)) ||
                      !holds_identity(z2, Identity(substitute(*p, {x, y, y}), x, 2))) {
                    detail = "term fails the two defining equations";
                    return false;
                  }
                  Term xyz = parse_term("(xor (xor $0 $1) $2)", z2.sig());
                  if (term_function(*p, *z2.generator(), 3) !=
                      term_function(xyz, *z2.generator(), 3)) {
                    detail = "term function differs from x^y^z";
                    return false;
                  }
                  if (maltsev_term(lat2).has_value()) {
                    detail = "lattice2 unexpectedly Mal'tsev";
                    return false;
                  }
                  CoreObjects lcore = build_core(lat2);
                  if (!reg_maltsev(lcore, DominionMode::cd_complete).yes()) {
                    detail = "reg_maltsev(lattice2) not yes";
                    return false;
                  }
                  return true;
                });

  // 4. Free-algebra sizes, closure engine vs depth-6 brute force.
  run_criterion(4, "free-algebra sizes: lattice2 1/4/18, z2xor 2^n, against brute force",
                [&](std::string& detail) {
                  int expected_l[] = {1, 4, 18};
                  for (int n = 1; n <= 3; ++n) {
                    int size = free_algebra(lat2, n).size();
                    int oracle = static_cast<int>(
                        ua_test::term_functions_to_depth(builtin_lattice2(), n, 6).size());
                    if (size != expected_l[n - 1] || oracle != size) {
                      detail = "lattice2 F(" + std::to_string(n) + ") = " +
                               std::to_string(size) + ", oracle " + std::to_string(oracle);
                      return false;
                    }
                  }
                  for (int n = 1; n <= 4; ++n) {
                    int size = free_algebra(z2, n).size();
                    int oracle = static_cast<int>(
                        ua_test::term_functions_to_depth(builtin_z2xor(), n, 6).size());
                    if (size != (1 << n) || oracle != size) {
                      detail = "z2xor F(" + std::to_string(n) + ") = " + std::to_string(size);
                      return false;
                    }
                  }
                  return true;
                });

  // 5. Congruence generation equals the minimum over all congruences, on a
  // corpus of algebras with at most 4 elements.
  run_criterion(5, "generated congruences are least among those containing the pair",
                [&](std::string& detail) {
                  std::vector<AlgebraPtr> corpus = {
                      builtin_lattice2(), builtin_z2xor(), builtin_set2(),
                      product(builtin_lattice2(), builtin_lattice2()),
                      product(builtin_z2xor(), builtin_z2xor())};
                  for (const AlgebraPtr& A : corpus) {
                    auto lattice = all_congruences(A);
                    for (int a = 0; a < A->size(); ++a) {
                      for (int b = 0; b < A->size(); ++b) {
                        Congruence gen = congruence_generated(A, {{a, b}});
                        if (!gen.related(a, b)) {
                          detail = "pair not contained";
                          return false;
                        }
                        bool in_lattice = false;
                        for (const Congruence& c : lattice) {
                          if (c == gen) in_lattice = true;
                          if (c.related(a, b) && !gen.refines(c)) {
                            detail = "generated congruence is not minimal on " + A->name();
                            return false;
                          }
                        }
                        if (!in_lattice) {
                          detail = "generated congruence missing from the lattice";
                          return false;
                        }
                      }
                    }
                  }
                  return true;
                });

  // 6. Coproduct of Z2 with itself and the couniversal property, uniqueness
  // by exhaustive homomorphism enumeration.
  run_criterion(6, "coproduct z2xor+z2xor has size 4 and the couniversal property",
                [&](std::string& detail) {
                  AlgebraPtr Z = builtin_z2xor();
                  AlgebraPtr Z2sq = product(Z, Z);
                  Coproduct cop = coproduct(z2, Z, Z);
                  if (cop.algebra->size() != 4) {
                    detail = "size " + std::to_string(cop.algebra->size());
                    return false;
                  }
                  for (const AlgebraPtr& D : {Z, Z2sq}) {
                    auto from_summand = hom_enumerate(Z, D);
                    auto from_cop = hom_enumerate(cop.algebra, D);
                    if (!from_summand.complete || !from_cop.complete) {
                      detail = "hom enumeration incomplete";
                      return false;
                    }
                    for (const Homomorphism& f : from_summand.homs) {
                      for (const Homomorphism& g : from_summand.homs) {
                        Homomorphism phi = couniversal_factor(cop, f, g);
                        int matches = 0;
                        for (const Homomorphism& h : from_cop.homs)
                          if (compose(h, cop.inj1).map() == f.map() &&
                              compose(h, cop.inj2).map() == g.map()) {
                            ++matches;
                            if (h.map() != phi.map()) {
                              detail = "factoring hom differs from couniversal_factor";
                              return false;
                            }
                          }
                        if (matches != 1) {
                          detail = "factoring hom not unique (" +
                                   std::to_string(matches) + " found)";
                          return false;
                        }
                      }
                    }
                  }
                  return true;
                });

  // 7. Transitive closure of the one-step coproduct relation equals the
  // generated table congruence for B = C = Z2 in HSP(z2xor).
  run_criterion(7, "zigzag closure equals the coproduct congruence on HSP(z2xor)",
                [&](std::string& detail) {
                  AlgebraPtr Z = builtin_z2xor();
                  ZigzagRelation zig = zigzag_step_relation(z2, Z, Z);
                  Congruence closure = transitive_closure_partition(zig);
                  Congruence table = coproduct_table_congruence(z2, Z, Z);
                  if (!(closure == table)) {
                    detail = "partitions differ";
                    return false;
                  }
                  for (int e = 0; e < zig.free_alg->size(); ++e)
                    if (!zig.contains(e, e)) {
                      detail = "not reflexive";
                      return false;
                    }
                  for (auto [a, b] : zig.pairs)
                    if (!zig.contains(b, a)) {
                      detail = "not symmetric";
                      return false;
                    }
                  return true;
                });

  // 8. Property suites under default caps: term laws, certificate
  // self-checks, the N=0 collapse property, refute monotonicity.
  run_criterion(8, "property suites (term laws, certificates, N=0 collapse, monotonicity)",
                [&](std::string& detail) {
                  // substitution/evaluation laws on random terms
                  std::mt19937 rng(987123);
                  for (const AlgebraPtr& A : {builtin_lattice2(), builtin_z2xor()}) {
                    const Signature& sig = A->sig();
                    for (int rep = 0; rep < 50; ++rep) {
                      Term t = random_term(rng, sig, 2, 4);
                      std::vector<Term> args = {random_term(rng, sig, 2, 3),
                                                random_term(rng, sig, 2, 3)};
                      Term composed = substitute(t, args);
                      for (int a = 0; a < A->size(); ++a)
                        for (int b = 0; b < A->size(); ++b) {
                          std::vector<int> sigma = {a, b};
                          std::vector<int> inner = {eval_term(args[0], *A, sigma),
                                                    eval_term(args[1], *A, sigma)};
                          if (eval_term(composed, *A, sigma) != eval_term(t, *A, inner)) {
                            detail = "substitution law violated";
                            return false;
                          }
                        }
                      if (parse_term(render_term(t, sig), sig) != t) {
                        detail = "parse/render round trip violated";
                        return false;
                      }
                    }
                  }

                  // every No verdict's certificate passes its self-check
                  struct Query {
                    VarietyPresentation V;
                    DominionMode mode;
                    int power;
                  };
                  std::vector<Query> queries = {
                      {VarietyPresentation(builtin_n5()), DominionMode::cd_complete, 0},
                      {VarietyPresentation(builtin_m3()), DominionMode::cd_complete, 0},
                      {s2, DominionMode::refute, 1},
                  };
                  for (const Query& q : queries) {
                    CoreObjects core = build_core(q.V);
                    Verdict v = weakly_maltsev(core, q.mode, q.power);
                    if (!v.no() ||
                        !check_certificate(*v.certificate, core.P.algebra, core.R).ok) {
                      detail = "certificate self-check failed";
                      return false;
                    }
                  }

                  // N=0 bundles that pass force x = y (non-vacuous on the
                  // trivial variety, vacuous elsewhere)
                  SignaturePtr lsig = lattice_signature();
                  VarietyPresentation trivial(
                      FiniteAlgebra::make("one", lsig, 1, {{0}, {0}}));
                  for (const auto& V : {lat2, z2, trivial}) {
                    FreeAlgebra F1 = free_algebra(V, 1);
                    FreeAlgebra F4 = free_algebra(V, 4);
                    std::mt19937 prng(5150);
                    auto pick = [&](FreeAlgebra& F) {
                      std::uniform_int_distribution<int> d(0, F.size() - 1);
                      return F.witnesses[static_cast<std::size_t>(d(prng))];
                    };
                    bool xy = holds_identity(V, Identity(Term::var(0), Term::var(1), 2));
                    for (int rep = 0; rep < 30; ++rep) {
                      WitnessBundle b;
                      b.N = 0;
                      b.sigma = {pick(F4)};
                      b.eta1 = {pick(F1)};
                      b.eta2 = {pick(F1)};
                      b.eps1 = {pick(F1)};
                      b.eps2 = {pick(F1)};
                      if (verify_witness(V, b, WitnessTheorem::wm).all_pass && !xy) {
                        detail = "a passing N=0 bundle did not collapse the variety";
                        return false;
                      }
                    }
                    if (V.generator()->size() == 1) {
                      WitnessBundle b;
                      b.N = 0;
                      b.sigma = {Term::var(0)};
                      b.eta1 = b.eta2 = b.eps1 = b.eps2 = {Term::var(0)};
                      if (!verify_witness(V, b, WitnessTheorem::wm).all_pass) {
                        detail = "trivial variety rejected an N=0 bundle";
                        return false;
                      }
                    }
                  }

                  // monotonicity: refute(d) No stays No for d' >= d
                  CoreObjects score = build_core(s2);
                  Verdict v1 = weakly_maltsev(score, DominionMode::refute, 1);
                  Verdict v2 = weakly_maltsev(score, DominionMode::refute, 2);
                  if (!v1.no() || !v2.no()) {
                    detail = "refute verdict not monotone";
                    return false;
                  }
                  if (v1.certificate->u != v2.certificate->u ||
                      v1.certificate->v != v2.certificate->v) {
                    detail = "certificate not carried forward";
                    return false;
                  }
                  return true;
                },
                60.0);

  if (failures == 0) {
    std::cout << "acceptance: all criteria passed\n";
    return 0;
  }
  std::cout << "acceptance: " << failures << " criterion/criteria failed\n";
  return 1;
}
