#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ua/algebra.hpp"
#include "ua/congruence.hpp"
#include "ua/error.hpp"
#include "ua/relation.hpp"
#include "ua/term.hpp"
#include "ua/variety.hpp"

namespace ua {

// The canonical test objects of the theory: F(x,y), its square, the pullback
// P = {(t1,t2) : t1(x,x) = t2(x,x)}, the relation R generated by (x,x),
// (x,y), (y,y) inside P, the element (y,x), and the pullback injections.
struct CoreObjects {
  VarietyPresentation V;
  FreeAlgebra F2;        // generators x = $0, y = $1
  AlgebraPtr F2alg;
  AlgebraPtr F2sq;       // F2 x F2, product encoding
  Subalgebra P;          // subalgebra of F2sq
  std::vector<int> R;           // indices into P.algebra, discovery order
  std::vector<Term> R_witness;  // over the seeds (x,x), (x,y), (y,y)
  int xx = -1, xy = -1, yy = -1, yx = -1;  // indices into P.algebra
  Homomorphism e1, e2;   // F2alg -> P.algebra

  int p_code(int pi) const { return P.carrier[static_cast<std::size_t>(pi)]; }
};

// Builds the core objects through the pullback of the split epimorphism
// F(x,y) -> F(x), t -> t(x,x) along itself, with the two sections x -> x
// and x -> y.
inline CoreObjects build_core(const VarietyPresentation& V) {
  FreeAlgebra F2 = free_algebra(V, 2);
  AlgebraPtr F2alg = F2.algebra(*V.generator(), "F(x,y)");
  FreeAlgebra F1 = free_algebra(V, 1);
  AlgebraPtr F1alg = F1.algebra(*V.generator(), "F(x)");
  const FiniteAlgebra& A = *V.generator();
  int asize = A.size();
  std::size_t len2 = F2.elements.empty() ? 0 : F2.elements[0].size();

  // f(t) = t(x,x); r(u) = u(x); s(u) = u(y)
  std::vector<int> fmap(static_cast<std::size_t>(F2.size()));
  for (int t = 0; t < F2.size(); ++t) {
    std::vector<int> diag(static_cast<std::size_t>(asize));
    for (int a = 0; a < asize; ++a)
      diag[static_cast<std::size_t>(a)] = F2.elements[static_cast<std::size_t>(t)]
          [static_cast<std::size_t>(a + asize * a)];
    fmap[static_cast<std::size_t>(t)] = F1.require(diag);
  }
  std::vector<int> rmap(static_cast<std::size_t>(F1.size())),
      smap(static_cast<std::size_t>(F1.size()));
  for (int u = 0; u < F1.size(); ++u) {
    std::vector<int> first(len2), second(len2);
    for (int b = 0; b < asize; ++b)
      for (int a = 0; a < asize; ++a) {
        first[static_cast<std::size_t>(a + asize * b)] =
            F1.elements[static_cast<std::size_t>(u)][static_cast<std::size_t>(a)];
        second[static_cast<std::size_t>(a + asize * b)] =
            F1.elements[static_cast<std::size_t>(u)][static_cast<std::size_t>(b)];
      }
    rmap[static_cast<std::size_t>(u)] = F2.require(first);
    smap[static_cast<std::size_t>(u)] = F2.require(second);
  }
  Homomorphism f(F2alg, F1alg, fmap);
  Homomorphism r(F1alg, F2alg, rmap);
  Homomorphism s(F1alg, F2alg, smap);

  SplitPullback pb = pullback_split_epis(f, r, f, s);
  AlgebraPtr F2sq = product(F2alg, F2alg);

  int x = F2.generator_ids[0];
  int y = F2.generator_ids[1];
  auto p_index = [&](int t1, int t2) {
    int code = product_code(t1, t2, F2.size());
    int idx = pb.object.index_of[static_cast<std::size_t>(code)];
    if (idx < 0) throw Error("core pair unexpectedly missing from P");
    return idx;
  };
  int xx = p_index(x, x), xy = p_index(x, y), yy = p_index(y, y), yx = p_index(y, x);

  CoreObjects core{V,
                   std::move(F2),
                   F2alg,
                   F2sq,
                   std::move(pb.object),
                   {},
                   {},
                   xx,
                   xy,
                   yy,
                   yx,
                   std::move(pb.e1),
                   std::move(pb.e2)};

  auto gen = subalgebra_generate(*core.P.algebra, {core.xx, core.xy, core.yy});
  core.R = gen.elements;
  core.R_witness = gen.witnesses;

  // invariants: the injections act as e1(x) = (x,y), e1(y) = (y,y),
  // e2(x) = (x,x), e2(y) = (x,y), and R is the image of [e1, e2]
  if (core.e1(x) != core.xy || core.e1(y) != core.yy || core.e2(x) != core.xx ||
      core.e2(y) != core.xy)
    throw Error("pullback injections disagree with their defining equations");
  std::vector<int> image_seeds;
  for (int v : core.e1.map()) image_seeds.push_back(v);
  for (int v : core.e2.map()) image_seeds.push_back(v);
  auto image = subalgebra_generate(*core.P.algebra, image_seeds);
  std::set<int> lhs(image.elements.begin(), image.elements.end());
  std::set<int> rhs(core.R.begin(), core.R.end());
  if (lhs != rhs) throw Error("R differs from the image of [e1, e2]");

  return core;
}

// Mal'tsev term detection via R: the variety has a term p with
// p(x,x,y) = y and p(x,y,y) = x iff (y,x) lies in R; the witness term of
// (y,x) over the seeds (x,x), (x,y), (y,y), read with argument order
// (x, y, z), is such a term. Both equations are re-verified before returning.
inline std::optional<Term> maltsev_term(const CoreObjects& core) {
  auto it = std::find(core.R.begin(), core.R.end(), core.yx);
  if (it == core.R.end()) return std::nullopt;
  Term p = core.R_witness[static_cast<std::size_t>(it - core.R.begin())];
  Term x = Term::var(0), y = Term::var(1);
  Identity left(substitute(p, {x, x, y}), y, 2);
  Identity right(substitute(p, {x, y, y}), x, 2);
  if (!holds_identity(core.V, left) || !holds_identity(core.V, right))
    throw Error("internal: witness term failed the Mal'tsev equations");
  return p;
}

inline std::optional<Term> maltsev_term(const VarietyPresentation& V) {
  return maltsev_term(build_core(V));
}

// Congruence distributivity via a Jonsson chain search in F(3): restrict to
// term functions t with t(x,y,x) = x and look for an alternating chain from
// x to z whose consecutive members agree under (x,x,y) at even steps and
// under (x,y,y) at odd steps.
inline bool cd_certify(const VarietyPresentation& V) {
  FreeAlgebra F3 = free_algebra(V, 3);
  const FiniteAlgebra& A = *V.generator();
  int n = A.size();

  auto idx3 = [&](int a, int b, int c) {
    return static_cast<std::size_t>(a) + static_cast<std::size_t>(n) * static_cast<std::size_t>(b) +
           static_cast<std::size_t>(n) * static_cast<std::size_t>(n) * static_cast<std::size_t>(c);
  };

  std::vector<int> restricted;
  std::vector<std::vector<int>> sub_xxy, sub_xyy;  // parallel to `restricted`
  for (int t = 0; t < F3.size(); ++t) {
    const std::vector<int>& vec = F3.elements[static_cast<std::size_t>(t)];
    bool ok = true;
    for (int a = 0; a < n && ok; ++a)
      for (int b = 0; b < n && ok; ++b)
        if (vec[idx3(a, b, a)] != a) ok = false;
    if (!ok) continue;
    std::vector<int> xxy(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    std::vector<int> xyy(xxy.size());
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        xxy[static_cast<std::size_t>(a + n * b)] = vec[idx3(a, a, b)];
        xyy[static_cast<std::size_t>(a + n * b)] = vec[idx3(a, b, b)];
      }
    restricted.push_back(t);
    sub_xxy.push_back(std::move(xxy));
    sub_xyy.push_back(std::move(xyy));
  }

  int x = F3.generator_ids[0], z = F3.generator_ids[2];
  auto pos_of = [&](int t) {
    auto it = std::find(restricted.begin(), restricted.end(), t);
    return it == restricted.end() ? -1 : static_cast<int>(it - restricted.begin());
  };
  int xpos = pos_of(x), zpos = pos_of(z);
  if (xpos < 0 || zpos < 0) return false;  // cannot happen: projections satisfy t(x,y,x)=x

  // breadth-first over (position, parity); parity 0 means the next step is
  // an even-index transition (agreement under (x,x,y))
  std::size_t count = restricted.size();
  std::vector<char> seen(count * 2, 0);
  std::vector<std::pair<int, int>> queue{{xpos, 0}};
  seen[static_cast<std::size_t>(xpos) * 2] = 1;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    auto [pos, parity] = queue[qi];
    if (pos == zpos) return true;
    const auto& key = parity == 0 ? sub_xxy[static_cast<std::size_t>(pos)]
                                  : sub_xyy[static_cast<std::size_t>(pos)];
    const auto& table = parity == 0 ? sub_xxy : sub_xyy;
    for (std::size_t next = 0; next < count; ++next) {
      if (table[next] != key) continue;
      std::size_t state = next * 2 + static_cast<std::size_t>(1 - parity);
      if (!seen[state]) {
        seen[state] = 1;
        queue.emplace_back(static_cast<int>(next), 1 - parity);
      }
    }
  }
  return false;
}

// --- Dominion search ---------------------------------------------------------

enum class DominionMode { cd_complete, refute };

struct Provenance {
  int power = 1;
  std::vector<int> subalgebra;   // elements of A^power
  std::vector<int> congruence;   // canonical block ids on the subalgebra
};

// A checkable witness that `target` is NOT dominated by the subalgebra: two
// homomorphisms into S that agree on the subalgebra but differ at target.
struct SeparationCertificate {
  AlgebraPtr S;
  Provenance provenance;
  std::vector<int> u, v;  // value vectors on the ambient algebra
  int target = -1;
};

enum class VerdictKind { Yes, No, Unknown };

struct Verdict {
  VerdictKind kind = VerdictKind::Unknown;
  std::string justification;
  std::optional<SeparationCertificate> certificate;  // set for No
  int exhausted_power = 0;                           // set for Unknown

  bool yes() const { return kind == VerdictKind::Yes; }
  bool no() const { return kind == VerdictKind::No; }
};

struct CertificateCheck {
  bool ok = true;
  std::string reason;
};

// Independent re-verification of a certificate against the ambient algebra
// and subalgebra it talks about; does not trust the search that produced it.
inline CertificateCheck check_certificate(const SeparationCertificate& cert,
                                          const AlgebraPtr& ambient,
                                          std::span<const int> sub) {
  auto fail = [](std::string why) { return CertificateCheck{false, std::move(why)}; };
  if (static_cast<int>(cert.u.size()) != ambient->size() ||
      static_cast<int>(cert.v.size()) != ambient->size())
    return fail("map length does not match the ambient carrier");
  if (cert.target < 0 || cert.target >= ambient->size())
    return fail("target element out of carrier");
  try {
    Homomorphism u(ambient, cert.S, cert.u);
  } catch (const InvalidArgument& e) {
    return fail(std::string("u is not a homomorphism: ") + e.what());
  }
  try {
    Homomorphism v(ambient, cert.S, cert.v);
  } catch (const InvalidArgument& e) {
    return fail(std::string("v is not a homomorphism: ") + e.what());
  }
  for (int e : sub)
    if (cert.u[static_cast<std::size_t>(e)] != cert.v[static_cast<std::size_t>(e)])
      return fail("maps disagree on subalgebra element " + std::to_string(e));
  if (cert.u[static_cast<std::size_t>(cert.target)] ==
      cert.v[static_cast<std::size_t>(cert.target)])
    return fail("maps agree at the target (no separation)");
  return {};
}

// Decides whether `target` is dominated by `sub` inside `ambient` over all of
// HSP(A): every pair of homomorphisms out of `ambient` into a member of the
// variety that agrees on `sub` must agree on `target`.
//
// Candidate codomains are the subdirectly irreducible quotients of
// subalgebras of A^e. Every finite member of HSP(A) is a quotient of a
// subalgebra of a finite power, and a separating pair composes with the
// projection onto a subdirectly irreducible quotient splitting the separated
// values, so nothing is lost:
//   - refute(d) scans e <= d; No is sound, Unknown means the bound ran out.
//   - cd_complete scans e = 1 only: by Jonsson's lemma the subdirectly
//     irreducible members of a congruence-distributive HSP(A) lie in HS(A),
//     so the scan is complete and a clean pass means Yes.
inline Verdict dominion_member(const VarietyPresentation& V, const AlgebraPtr& ambient,
                               std::span<const int> sub, int target, DominionMode mode,
                               int max_power = 0) {
  for (int e : sub)
    if (e == target)
      return Verdict{VerdictKind::Yes, "target lies in the subalgebra itself", {}, 0};

  if (max_power <= 0) max_power = V.caps().max_power;
  bool complete = false;
  if (mode == DominionMode::cd_complete) {
    std::optional<bool> cd;
    try {
      cd = cd_certify(V);
    } catch (const CapExceeded&) {
      // certification unavailable; fall back to the bounded refute search
    }
    if (cd.has_value() && !*cd)
      throw InvalidArgument(
          "cd_complete mode requires a congruence-distributive variety "
          "(no Jonsson chain found in F(3))");
    if (cd.has_value()) {
      complete = true;
      max_power = 1;
    }
  }

  std::vector<int> sub_gens = greedy_generators(*ambient, sub);

  for (int e = 1; e <= max_power; ++e) {
    AlgebraPtr Ae = e == 1 ? V.generator() : power(V.generator(), e);
    for (const std::vector<int>& universe : enumerate_subuniverses(Ae)) {
      Subalgebra S0 = subset_algebra(Ae, universe, "S0");
      if (S0.algebra->size() < 2) continue;
      for (const Congruence& theta : all_congruences(S0.algebra)) {
        Quotient q = quotient(S0.algebra, theta, "S");
        if (q.algebra->size() < 2) continue;
        if (!is_subdirectly_irreducible(q.algebra)) continue;

        auto homs = hom_enumerate(ambient, q.algebra);
        for (std::size_t i = 0; i < homs.homs.size(); ++i) {
          for (std::size_t j = i + 1; j < homs.homs.size(); ++j) {
            const auto& u = homs.homs[i].map();
            const auto& v = homs.homs[j].map();
            bool agree = true;
            for (int g : sub_gens)
              if (u[static_cast<std::size_t>(g)] != v[static_cast<std::size_t>(g)]) {
                agree = false;
                break;
              }
            if (!agree) continue;
            if (u[static_cast<std::size_t>(target)] == v[static_cast<std::size_t>(target)])
              continue;
            SeparationCertificate cert{q.algebra,
                                       Provenance{e, universe, theta.block_id()},
                                       u,
                                       v,
                                       target};
            return Verdict{VerdictKind::No, "separating homomorphism pair found",
                           std::move(cert), 0};
          }
        }
      }
    }
  }

  if (complete)
    return Verdict{VerdictKind::Yes,
                   "no separation over the subdirectly irreducible members of HS(A); "
                   "complete by Jonsson's lemma for congruence-distributive varieties",
                   {},
                   0};
  return Verdict{VerdictKind::Unknown, "bounded search exhausted without separation", {},
                 max_power};
}

// Weakly Mal'tsev: q1(y,x) = q2(y,x) for the cokernel pair of [e1,e2], i.e.
// (y,x) is dominated by R inside P.
inline Verdict weakly_maltsev(const CoreObjects& core, DominionMode mode, int max_power = 0) {
  return dominion_member(core.V, core.P.algebra, core.R, core.yx, mode, max_power);
}

// Every reflexive regular relation an equivalence relation: (y,x) lies in the
// equalizer of the cokernel pair of R -> F(x,y)^2, i.e. (y,x) is dominated by
// R inside the full square.
inline Verdict reg_maltsev(const CoreObjects& core, DominionMode mode, int max_power = 0) {
  std::vector<int> sub_codes;
  sub_codes.reserve(core.R.size());
  for (int pi : core.R) sub_codes.push_back(core.p_code(pi));
  return dominion_member(core.V, core.F2sq, sub_codes, core.p_code(core.yx), mode,
                         max_power);
}

// --- Witness-bundle verification ---------------------------------------------

// The term system of the syntactic characterization: k binary pairs (f, g),
// m ternary terms p, N wide terms s, N+1 terms sigma, and per-index quadruples
// eta1, eta2, eps1, eps2. Argument orders are fixed:
//   s_i     on (u, v..., w..., w~..., u', v'..., w'..., w~'...)
//   sigma_i on (u, v..., w..., u', v'..., w'..., a, b)
//   eta/eps on (u, v..., w...)
struct WitnessBundle {
  int k = 0, m = 0, N = 0;
  std::vector<Term> f, g, p, s, sigma, eta1, eta2, eps1, eps2;

  int s_width() const { return 2 * (k + 2 * m + 1); }
  int sigma_width() const { return 2 * (k + m + 2); }
  int eta_width() const { return k + m + 1; }
  int wide_width() const { return 2 * (k + m + 1); }
};

inline void validate_bundle(const WitnessBundle& b, const Signature& sig) {
  if (b.k < 0 || b.m < 0 || b.N < 0)
    throw InvalidArgument("bundle sizes k, m, N must be non-negative");
  auto expect = [&](const std::vector<Term>& terms, std::size_t count, int width,
                    const char* what) {
    if (terms.size() != count)
      throw InvalidArgument(std::string("bundle has ") + std::to_string(terms.size()) + " " +
                            what + " terms, expected " + std::to_string(count));
    for (const Term& t : terms) check_term(t, sig, width);
  };
  expect(b.f, static_cast<std::size_t>(b.k), 2, "f");
  expect(b.g, static_cast<std::size_t>(b.k), 2, "g");
  expect(b.p, static_cast<std::size_t>(b.m), 3, "p");
  expect(b.s, static_cast<std::size_t>(b.N), b.s_width(), "s");
  expect(b.sigma, static_cast<std::size_t>(b.N) + 1, b.sigma_width(), "sigma");
  expect(b.eta1, static_cast<std::size_t>(b.N) + 1, b.eta_width(), "eta1");
  expect(b.eta2, static_cast<std::size_t>(b.N) + 1, b.eta_width(), "eta2");
  expect(b.eps1, static_cast<std::size_t>(b.N) + 1, b.eta_width(), "eps1");
  expect(b.eps2, static_cast<std::size_t>(b.N) + 1, b.eta_width(), "eps2");
}

enum class WitnessTheorem { wm, reg };

struct EquationReport {
  std::string label;
  Identity identity;
  bool pass = false;
  std::vector<int> falsifying;  // assignment, set when !pass
};

struct WitnessReport {
  bool all_pass = true;
  std::vector<EquationReport> equations;
};

namespace detail {

inline void check_equation(const VarietyPresentation& V, WitnessReport& report,
                           std::string label, Term lhs, Term rhs, int width) {
  EquationReport eq{std::move(label), Identity(std::move(lhs), std::move(rhs), width), false, {}};
  std::vector<int> lvec = term_function(eq.identity.lhs, *V.generator(), width);
  std::vector<int> rvec = term_function(eq.identity.rhs, *V.generator(), width);
  if (lvec == rvec) {
    eq.pass = true;
  } else {
    for (std::size_t i = 0; i < lvec.size(); ++i)
      if (lvec[i] != rvec[i]) {
        eq.falsifying = decode_tuple(i, V.generator()->size(), width);
        break;
      }
    report.all_pass = false;
  }
  report.equations.push_back(std::move(eq));
}

}  // namespace detail

// Checks the equation system of the syntactic characterization against V.
// theorem = wm checks the full list; theorem = reg drops the f_i(x,x) =
// g_i(x,x) equations (the pullback constraint on the pairs) and relabels.
inline WitnessReport verify_witness(const VarietyPresentation& V, const WitnessBundle& b,
                                    WitnessTheorem theorem) {
  validate_bundle(b, V.sig());
  WitnessReport report;

  bool wm = theorem == WitnessTheorem::wm;
  // labels (11)-(16) for the weakly-Mal'tsev system, (20)-(25) for the
  // regular variant, so reports stay auditable
  auto lbl = [&](int wm_no, int reg_no, std::string detail) {
    std::string out = "(" + std::to_string(wm ? wm_no : reg_no) + ")";
    if (!detail.empty()) out += " " + detail;
    return out;
  };

  Term x = Term::var(0), y = Term::var(1);

  if (wm) {
    for (int i = 0; i < b.k; ++i)
      detail::check_equation(V, report, "(11) i=" + std::to_string(i + 1),
                             substitute(b.f[static_cast<std::size_t>(i)], {x, x}),
                             substitute(b.g[static_cast<std::size_t>(i)], {x, x}), 2);
  }

  // arguments of eta/eps under the two substitutions of the eta equations
  std::vector<Term> at_y{y}, at_x{x};
  for (int j = 0; j < b.k; ++j) {
    at_y.push_back(b.f[static_cast<std::size_t>(j)]);
    at_x.push_back(b.g[static_cast<std::size_t>(j)]);
  }
  for (int j = 0; j < b.m; ++j) {
    at_y.push_back(substitute(b.p[static_cast<std::size_t>(j)], {x, x, y}));
    at_x.push_back(substitute(b.p[static_cast<std::size_t>(j)], {x, y, y}));
  }

  for (int i = 0; i <= b.N; ++i) {
    for (int alpha = 1; alpha <= 2; ++alpha) {
      const std::vector<Term>& eta = alpha == 1 ? b.eta1 : b.eta2;
      const std::vector<Term>& eps = alpha == 1 ? b.eps1 : b.eps2;
      std::string detail = "i=" + std::to_string(i + 1) + " alpha=" + std::to_string(alpha);
      detail::check_equation(V, report, wm ? "(12a) " + detail : "(20) " + detail,
                             substitute(eta[static_cast<std::size_t>(i)], at_y),
                             substitute(eps[static_cast<std::size_t>(i)], at_y), 2);
      detail::check_equation(V, report, wm ? "(12b) " + detail : "(21) " + detail,
                             substitute(eta[static_cast<std::size_t>(i)], at_x),
                             substitute(eps[static_cast<std::size_t>(i)], at_x), 2);
    }
  }

  // the wide equations live on (u, v..., w..., u', v'..., w'...)
  int W = b.wide_width();
  std::vector<Term> uvw, upvpwp;
  for (int j = 0; j < b.k + b.m + 1; ++j) uvw.push_back(Term::var(j));
  for (int j = 0; j < b.k + b.m + 1; ++j) upvpwp.push_back(Term::var(b.k + b.m + 1 + j));

  auto wvec = [&](bool primed) {
    std::vector<Term> out;
    for (int j = 0; j < b.m; ++j)
      out.push_back(Term::var((primed ? b.k + b.m + 1 : 0) + b.k + 1 + j));
    return out;
  };
  std::vector<Term> w = wvec(false), wp = wvec(true);

  auto sigma_args = [&](const Term& last1, const Term& last2) {
    std::vector<Term> args = uvw;
    args.insert(args.end(), upvpwp.begin(), upvpwp.end());
    args.push_back(last1);
    args.push_back(last2);
    return args;
  };
  auto s_args = [&](const std::vector<Term>& tilde, const std::vector<Term>& tildep) {
    std::vector<Term> args = uvw;
    args.insert(args.end(), tilde.begin(), tilde.end());
    args.insert(args.end(), upvpwp.begin(), upvpwp.end());
    args.insert(args.end(), tildep.begin(), tildep.end());
    return args;
  };

  auto eta_at = [&](const std::vector<Term>& family, int i, bool primed) {
    return substitute(family[static_cast<std::size_t>(i)], primed ? upvpwp : uvw);
  };

  for (int i = 0; i < b.N; ++i) {
    std::string detail = "i=" + std::to_string(i + 1);
    // sigma_i(..., eps1, eps2) = s_i with both tilde blocks unswapped
    detail::check_equation(
        V, report, lbl(13, 22, detail),
        substitute(b.sigma[static_cast<std::size_t>(i)],
                   sigma_args(eta_at(b.eps1, i, false), eta_at(b.eps2, i, true))),
        substitute(b.s[static_cast<std::size_t>(i)], s_args(w, wp)), W);
    // s_i with the tilde blocks swapped = sigma_{i+1}(..., eta1, eta2)
    detail::check_equation(
        V, report, lbl(14, 23, detail),
        substitute(b.s[static_cast<std::size_t>(i)], s_args(wp, w)),
        substitute(b.sigma[static_cast<std::size_t>(i + 1)],
                   sigma_args(eta_at(b.eta1, i + 1, false), eta_at(b.eta2, i + 1, true))),
        W);
  }

  detail::check_equation(
      V, report, lbl(15, 24, ""), Term::var(0),
      substitute(b.sigma[0], sigma_args(eta_at(b.eta1, 0, false), eta_at(b.eta2, 0, true))),
      W);
  detail::check_equation(
      V, report, lbl(16, 25, ""), Term::var(b.k + b.m + 1),
      substitute(b.sigma[static_cast<std::size_t>(b.N)],
                 sigma_args(eta_at(b.eps1, b.N, false), eta_at(b.eps2, b.N, true))),
      W);

  return report;
}

// The weakly Mal'tsev witness system for distributive lattices (k = 0,
// m = 3, N = 5): projections as the ternary terms, and meets/joins arranged
// so that the chain of equalities walks q1(y,x) to q2(y,x) through the
// absorption and distributivity laws.
inline WitnessBundle builtin_dl_bundle() {
  SignaturePtr sig =
      std::make_shared<const Signature>(std::vector<OpSym>{{"meet", 2}, {"join", 2}});
  auto T = [&](const char* text) { return parse_term(text, *sig); };
  WitnessBundle b;
  b.k = 0;
  b.m = 3;
  b.N = 5;
  b.p = {T("$0"), T("$1"), T("$2")};
  // s_i on (u, w1 w2 w3, w~1 w~2 w~3, u', w1' w2' w3', w~1' w~2' w~3')
  b.s = {T("(meet $0 (join $6 $4))"), T("(meet $0 (join $7 $12))"),
         T("(join (meet $7 $0) (meet $6 $4))"), T("(meet $7 (join $0 $12))"),
         T("(meet $7 (join $6 $4))")};
  // sigma_i on (u, w1 w2 w3, u', w1' w2' w3', a, b)
  b.sigma = {T("(meet $0 $8)"),           T("(meet $0 $9)"), T("(join (meet $0 $4) $8)"),
             T("(join (meet $4 $0) $9)"), T("(meet $4 $8)"), T("(meet $4 $9)")};
  // eta/eps on (u, w1, w2, w3)
  b.eta1 = {T("(join $0 $2)"), T("$0"), T("(meet $0 $2)"),
            T("$0"),           T("(join $0 $2)"), T("$0")};
  b.eps1 = {T("(join $3 $1)"), T("$0"), T("(meet $3 $1)"),
            T("$0"),           T("(join $3 $1)"), T("$0")};
  b.eta2 = {T("$0"), T("(join $3 $1)"), T("$0"),
            T("(meet $3 $1)"), T("$0"), T("(join $3 $1)")};
  b.eps2 = {T("$0"), T("(join $0 $2)"), T("$0"),
            T("(meet $0 $2)"), T("$0"), T("(join $0 $2)")};
  return b;
}

inline std::optional<WitnessBundle> find_builtin_bundle(const std::string& name) {
  if (name == "dl-example-3-6") return builtin_dl_bundle();
  return std::nullopt;
}

}  // namespace ua
