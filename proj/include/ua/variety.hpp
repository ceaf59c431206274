#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ua/algebra.hpp"
#include "ua/congruence.hpp"
#include "ua/error.hpp"
#include "ua/relation.hpp"
#include "ua/term.hpp"

namespace ua {

struct Caps {
  std::size_t max_free_size = 1'000'000;
  int max_power = 4;
};

// A finitely generated variety HSP(A). Several generating algebras are
// folded into one by taking their product, which generates the same variety.
class VarietyPresentation {
public:
  explicit VarietyPresentation(AlgebraPtr generator, Caps caps = {})
      : generator_(std::move(generator)), caps_(caps) {
    if (!generator_) throw InvalidArgument("variety needs a generating algebra");
    if (caps_.max_free_size == 0 || caps_.max_power <= 0)
      throw InvalidArgument("resource caps must be positive");
  }

  static VarietyPresentation from_generators(const std::vector<AlgebraPtr>& gens,
                                             Caps caps = {}) {
    if (gens.empty()) throw InvalidArgument("variety needs at least one generator");
    AlgebraPtr folded = gens.front();
    for (std::size_t i = 1; i < gens.size(); ++i) folded = product(folded, gens[i]);
    return VarietyPresentation(folded, caps);
  }

  const AlgebraPtr& generator() const { return generator_; }
  const Signature& sig() const { return generator_->sig(); }
  const SignaturePtr& sig_ptr() const { return generator_->sig_ptr(); }
  const Caps& caps() const { return caps_; }

private:
  AlgebraPtr generator_;
  Caps caps_;
};

struct VecHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::size_t h = 0x8f1bbcdcbfa53e0bULL;
    for (int x : v) h = hash_combine(h, static_cast<std::size_t>(x));
    return h;
  }
};

// The free algebra F_V(n): elements are the n-variable term functions on the
// generator, each stored as its value vector and a witness term. The element
// order and witnesses follow the deterministic breadth-first closure of the
// n projections.
class FreeAlgebra {
public:
  int n = 0;
  std::vector<std::vector<int>> elements;
  std::vector<Term> witnesses;
  std::vector<GenStep> steps;
  std::vector<int> generator_ids;  // j-th projection's position in `elements`

  int size() const { return static_cast<int>(elements.size()); }

  std::optional<int> find(const std::vector<int>& value) const {
    auto it = index_.find(value);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  int require(const std::vector<int>& value) const {
    auto i = find(value);
    if (!i) throw InvalidArgument("value vector is not a term function of the variety");
    return *i;
  }

  // Applies an operation of the signature to free-algebra elements pointwise.
  int apply(const FiniteAlgebra& gen, int op, std::span<const int> args) const {
    std::vector<int> value(elements.empty() ? 0 : elements[0].size());
    std::vector<int> point(args.size());
    for (std::size_t pos = 0; pos < value.size(); ++pos) {
      for (std::size_t i = 0; i < args.size(); ++i)
        point[i] = elements[static_cast<std::size_t>(args[i])][pos];
      value[pos] = gen.apply(op, point);
    }
    return require(value);
  }

  // Materializes the op tables; refuses when they would be enormous.
  AlgebraPtr algebra(const FiniteAlgebra& gen, std::string name = "") const {
    int sz = size();
    const Signature& sig = gen.sig();
    std::vector<std::vector<int>> tables(static_cast<std::size_t>(sig.op_count()));
    for (int op = 0; op < sig.op_count(); ++op) {
      int r = sig.arity(op);
      std::size_t entries = pow_checked(static_cast<std::size_t>(sz), r, kMaxTableEntries,
                                        "free-algebra operation table");
      std::vector<int>& table = tables[static_cast<std::size_t>(op)];
      table.resize(entries);
      std::vector<int> idx(static_cast<std::size_t>(r), 0);
      for (std::size_t pos = 0; pos < entries; ++pos) {
        table[pos] = apply(gen, op, idx);
        for (int i = 0; i < r; ++i) {
          if (++idx[static_cast<std::size_t>(i)] < sz) break;
          idx[static_cast<std::size_t>(i)] = 0;
        }
      }
    }
    if (name.empty()) name = "F(" + std::to_string(n) + ")";
    return FiniteAlgebra::make(std::move(name), gen.sig_ptr(), sz, std::move(tables));
  }

  void rebuild_index() {
    index_.clear();
    for (std::size_t i = 0; i < elements.size(); ++i)
      index_.emplace(elements[i], static_cast<int>(i));
  }

private:
  std::unordered_map<std::vector<int>, int, VecHash> index_;
};

// Closure of the n projections of A^(A^n) under the pointwise operations.
// Same deterministic round structure as subalgebra_generate.
inline FreeAlgebra free_algebra(const VarietyPresentation& V, int n) {
  const FiniteAlgebra& A = *V.generator();
  int asize = A.size();
  bool has_constant = false;
  for (int op = 0; op < A.sig().op_count(); ++op)
    if (A.sig().arity(op) == 0) has_constant = true;
  if (n < 0 || (n == 0 && !has_constant))
    throw InvalidArgument("free algebra needs n >= 1 or a constant in the signature");

  std::size_t veclen = pow_checked(static_cast<std::size_t>(A.size()), n, kMaxTableEntries,
                                   "free-algebra assignment space");
  std::size_t cap = V.caps().max_free_size;

  FreeAlgebra F;
  F.n = n;
  std::unordered_map<std::vector<int>, int, VecHash> index;

  auto add = [&](const std::vector<int>& value, Term witness, GenStep step) -> int {
    auto it = index.find(value);
    if (it != index.end()) return it->second;
    if (F.elements.size() >= cap)
      throw CapExceeded("free algebra on " + std::to_string(n) + " generators exceeds cap of " +
                            std::to_string(cap) + " elements (found " +
                            std::to_string(F.elements.size()) + " so far)",
                        F.elements.size());
    int id = static_cast<int>(F.elements.size());
    index.emplace(value, id);
    F.elements.push_back(value);
    F.witnesses.push_back(std::move(witness));
    F.steps.push_back(std::move(step));
    return id;
  };

  for (int j = 0; j < n; ++j) {
    std::vector<int> proj(veclen);
    std::size_t block = 1;
    for (int i = 0; i < j; ++i) block *= static_cast<std::size_t>(A.size());
    for (std::size_t idx = 0; idx < veclen; ++idx)
      proj[idx] = static_cast<int>((idx / block) % static_cast<std::size_t>(A.size()));
    F.generator_ids.push_back(add(std::move(proj), Term::var(j), GenStep{}));
  }

  // commutative binary operations only need ordered argument pairs: the
  // mirrored pair gives the same value and comes later in the enumeration,
  // so skipping it changes neither the elements nor the witnesses
  std::vector<char> commutative(static_cast<std::size_t>(A.sig().op_count()), 0);
  for (int op = 0; op < A.sig().op_count(); ++op) {
    if (A.sig().arity(op) != 2) continue;
    bool comm = true;
    for (int a = 0; a < A.size() && comm; ++a)
      for (int b = 0; b < A.size() && comm; ++b)
        if (A.table(op)[static_cast<std::size_t>(a + A.size() * b)] !=
            A.table(op)[static_cast<std::size_t>(b + A.size() * a)])
          comm = false;
    commutative[static_cast<std::size_t>(op)] = comm;
  }

  int prev_start = 0;
  std::vector<int> point;
  std::vector<const int*> rows;
  for (;;) {
    int round_start = F.size();
    for (int op = 0; op < A.sig().op_count(); ++op) {
      int r = A.sig().arity(op);
      if (r == 0) {
        if (prev_start > 0) continue;
        std::vector<int> value(veclen, A.table(op)[0]);
        add(value, Term::app(op, {}), GenStep{op, {}});
        continue;
      }
      int count = round_start;
      if (count == 0) continue;
      const std::vector<int>& table = A.table(op);
      std::vector<int> idx(static_cast<std::size_t>(r), 0);
      point.assign(static_cast<std::size_t>(r), 0);
      rows.assign(static_cast<std::size_t>(r), nullptr);
      std::vector<int> scratch(veclen);
      for (;;) {
        bool touches_new = prev_start == 0;
        for (int i = 0; i < r && !touches_new; ++i)
          touches_new = idx[static_cast<std::size_t>(i)] >= prev_start;
        if (touches_new && commutative[static_cast<std::size_t>(op)] && idx[0] > idx[1])
          touches_new = false;
        if (touches_new) {
          for (int i = 0; i < r; ++i)
            rows[static_cast<std::size_t>(i)] =
                F.elements[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])].data();
          if (r == 2) {
            const int* va = rows[0];
            const int* vb = rows[1];
            for (std::size_t pos = 0; pos < veclen; ++pos)
              scratch[pos] = table[static_cast<std::size_t>(va[pos] + asize * vb[pos])];
          } else {
            for (std::size_t pos = 0; pos < veclen; ++pos) {
              for (int i = 0; i < r; ++i)
                point[static_cast<std::size_t>(i)] = rows[static_cast<std::size_t>(i)][pos];
              scratch[pos] = A.apply(op, point);
            }
          }
          auto it = index.find(scratch);
          if (it == index.end()) {
            std::vector<Term> wargs;
            wargs.reserve(static_cast<std::size_t>(r));
            for (int i = 0; i < r; ++i)
              wargs.push_back(
                  F.witnesses[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])]);
            add(scratch, Term::app(op, std::move(wargs)),
                GenStep{op, std::vector<int>(idx.begin(), idx.end())});
          }
        }
        int i = r - 1;
        for (; i >= 0; --i) {
          if (++idx[static_cast<std::size_t>(i)] < count) break;
          idx[static_cast<std::size_t>(i)] = 0;
        }
        if (i < 0) break;
      }
    }
    if (F.size() == round_start && !(prev_start == 0 && round_start == 0)) break;
    if (F.size() == round_start) break;
    prev_start = round_start;
  }
  F.rebuild_index();
  return F;
}

// An identity holds in HSP(A) iff it holds in A, i.e. iff both sides have
// the same term function on the generator.
inline bool holds_identity(const VarietyPresentation& V, const Identity& id) {
  check_term(id.lhs, V.sig(), id.width);
  check_term(id.rhs, V.sig(), id.width);
  return term_function(id.lhs, *V.generator(), id.width) ==
         term_function(id.rhs, *V.generator(), id.width);
}

// Soundness check that B satisfies every identity of V in at most `width`
// variables: pair every term function on the generator with the one on B and
// watch for a collision (equal on the generator, different on B). Returns
// the first violating identity if any.
inline std::optional<Identity> membership_violation(const VarietyPresentation& V,
                                                    const AlgebraPtr& B, int width) {
  const FiniteAlgebra& A = *V.generator();
  if (!same_signature(A, *B))
    throw InvalidArgument("membership check needs matching signatures");

  std::size_t alen = pow_checked(static_cast<std::size_t>(A.size()), width, kMaxTableEntries,
                                 "membership check");
  std::size_t blen = pow_checked(static_cast<std::size_t>(B->size()), width, kMaxTableEntries,
                                 "membership check");

  struct Entry {
    std::vector<int> avec, bvec;
    Term witness;
  };
  std::vector<Entry> entries;
  std::unordered_map<std::vector<int>, int, VecHash> by_avec;

  auto offer = [&](std::vector<int> avec, std::vector<int> bvec,
                   Term witness) -> std::optional<Identity> {
    auto it = by_avec.find(avec);
    if (it != by_avec.end()) {
      const Entry& prev = entries[static_cast<std::size_t>(it->second)];
      if (prev.bvec != bvec)
        return Identity(prev.witness, witness, width);  // falsifying identity
      return std::nullopt;
    }
    by_avec.emplace(avec, static_cast<int>(entries.size()));
    entries.push_back(Entry{std::move(avec), std::move(bvec), std::move(witness)});
    return std::nullopt;
  };

  for (int j = 0; j < width; ++j) {
    std::vector<int> avec(alen), bvec(blen);
    std::size_t ablock = 1, bblock = 1;
    for (int i = 0; i < j; ++i) {
      ablock *= static_cast<std::size_t>(A.size());
      bblock *= static_cast<std::size_t>(B->size());
    }
    for (std::size_t i = 0; i < alen; ++i)
      avec[i] = static_cast<int>((i / ablock) % static_cast<std::size_t>(A.size()));
    for (std::size_t i = 0; i < blen; ++i)
      bvec[i] = static_cast<int>((i / bblock) % static_cast<std::size_t>(B->size()));
    if (auto bad = offer(std::move(avec), std::move(bvec), Term::var(j))) return bad;
  }

  std::size_t done = 0;
  std::vector<int> point;
  while (done < entries.size()) {
    std::size_t limit = entries.size();
    for (int op = 0; op < A.sig().op_count(); ++op) {
      int r = A.sig().arity(op);
      if (r == 0) {
        if (done > 0) continue;
        std::vector<int> avec(alen, A.table(op)[0]);
        std::vector<int> bvec(blen, B->table(op)[0]);
        if (auto bad = offer(std::move(avec), std::move(bvec), Term::app(op, {}))) return bad;
        continue;
      }
      if (limit == 0) continue;
      std::vector<std::size_t> idx(static_cast<std::size_t>(r), 0);
      for (;;) {
        bool touches_new = done == 0;
        for (int i = 0; i < r && !touches_new; ++i)
          touches_new = idx[static_cast<std::size_t>(i)] >= done;
        if (touches_new) {
          std::vector<int> avec(alen), bvec(blen);
          point.assign(static_cast<std::size_t>(r), 0);
          for (std::size_t pos = 0; pos < alen; ++pos) {
            for (int i = 0; i < r; ++i)
              point[static_cast<std::size_t>(i)] =
                  entries[idx[static_cast<std::size_t>(i)]].avec[pos];
            avec[pos] = A.apply(op, point);
          }
          for (std::size_t pos = 0; pos < blen; ++pos) {
            for (int i = 0; i < r; ++i)
              point[static_cast<std::size_t>(i)] =
                  entries[idx[static_cast<std::size_t>(i)]].bvec[pos];
            bvec[pos] = B->apply(op, point);
          }
          std::vector<Term> wargs;
          for (int i = 0; i < r; ++i)
            wargs.push_back(entries[idx[static_cast<std::size_t>(i)]].witness);
          if (auto bad =
                  offer(std::move(avec), std::move(bvec), Term::app(op, std::move(wargs))))
            return bad;
        }
        int i = r - 1;
        for (; i >= 0; --i) {
          if (++idx[static_cast<std::size_t>(i)] < limit) break;
          idx[static_cast<std::size_t>(i)] = 0;
        }
        if (i < 0) break;
      }
    }
    if (entries.size() == limit && (done > 0 || limit == 0)) break;
    done = limit;
  }
  return std::nullopt;
}

// The coproduct B + C in V, with enough bookkeeping to evaluate couniversal
// maps later: every element of the quotient keeps the witness term of its
// least preimage in the free algebra, over |B| + |C| seed variables.
struct Coproduct {
  AlgebraPtr algebra;
  Homomorphism inj1, inj2;
  AlgebraPtr left, right;
  std::vector<Term> element_witness;
};

// B + C as the quotient of F_V(|B| + |C|) by the congruence generated by all
// operation-table pairs of B (on the first |B| generators) and C (on the
// rest).
inline Coproduct coproduct(const VarietyPresentation& V, const AlgebraPtr& B,
                           const AlgebraPtr& C, int membership_width = 3) {
  if (!same_signature(*V.generator(), *B) || !same_signature(*V.generator(), *C))
    throw InvalidArgument("coproduct arguments must share the variety's signature");
  for (const AlgebraPtr& X : {B, C}) {
    if (auto bad = membership_violation(V, X, std::min(membership_width, 3)))
      throw InvalidArgument("algebra '" + X->name() +
                            "' fails a defining identity of the variety: " +
                            render_term(bad->lhs, V.sig()) + " = " +
                            render_term(bad->rhs, V.sig()));
  }

  int nb = B->size(), nc = C->size();
  FreeAlgebra F = free_algebra(V, nb + nc);
  AlgebraPtr Falg = F.algebra(*V.generator());

  auto gen_of = [&](bool right, int element) {
    return F.generator_ids[static_cast<std::size_t>(right ? nb + element : element)];
  };

  std::vector<std::pair<int, int>> pairs;
  std::vector<int> args, gens;
  for (int side = 0; side < 2; ++side) {
    const AlgebraPtr& X = side == 0 ? B : C;
    bool right = side == 1;
    const Signature& sig = X->sig();
    for (int op = 0; op < sig.op_count(); ++op) {
      int r = sig.arity(op);
      const std::vector<int>& table = X->table(op);
      args.assign(static_cast<std::size_t>(r), 0);
      for (std::size_t idx = 0; idx < table.size(); ++idx) {
        gens.assign(static_cast<std::size_t>(r), 0);
        for (std::size_t i = 0; i < args.size(); ++i) gens[i] = gen_of(right, args[i]);
        int lhs = F.apply(*V.generator(), op, gens);
        int rhs = gen_of(right, table[idx]);
        if (lhs != rhs) pairs.emplace_back(lhs, rhs);
        for (std::size_t i = 0; i < args.size(); ++i) {
          if (++args[i] < X->size()) break;
          args[i] = 0;
        }
      }
    }
  }

  Congruence theta = congruence_generated(Falg, pairs);
  auto q = quotient(Falg, theta, B->name() + "+" + C->name());

  std::vector<int> i1map(static_cast<std::size_t>(nb)), i2map(static_cast<std::size_t>(nc));
  for (int b = 0; b < nb; ++b) i1map[static_cast<std::size_t>(b)] = q.projection(gen_of(false, b));
  for (int c = 0; c < nc; ++c) i2map[static_cast<std::size_t>(c)] = q.projection(gen_of(true, c));

  std::vector<Term> wit;
  wit.reserve(q.block_rep.size());
  for (int rep : q.block_rep) wit.push_back(F.witnesses[static_cast<std::size_t>(rep)]);

  return Coproduct{q.algebra, Homomorphism(B, q.algebra, std::move(i1map)),
                   Homomorphism(C, q.algebra, std::move(i2map)), B, C, std::move(wit)};
}

// The unique morphism out of B + C restricting to f on B and g on C:
// a class [s(b_1, ..., c_l)] maps to s^D(f(b_1), ..., g(c_l)).
inline Homomorphism couniversal_factor(const Coproduct& cop, const Homomorphism& f,
                                       const Homomorphism& g) {
  if (f.cod() != g.cod() && !same_algebra(*f.cod(), *g.cod()))
    throw InvalidArgument("couniversal factor needs a common codomain");
  if ((f.dom() != cop.left && !same_algebra(*f.dom(), *cop.left)) ||
      (g.dom() != cop.right && !same_algebra(*g.dom(), *cop.right)))
    throw InvalidArgument("couniversal factor domains must be the coproduct summands");
  const AlgebraPtr& D = f.cod();

  std::vector<int> images;
  images.reserve(f.map().size() + g.map().size());
  for (int v : f.map()) images.push_back(v);
  for (int v : g.map()) images.push_back(v);

  std::vector<int> phi(cop.element_witness.size());
  for (std::size_t e = 0; e < phi.size(); ++e)
    phi[e] = eval_term(cop.element_witness[e], *D, images);
  Homomorphism result(cop.algebra, D, std::move(phi));

  if (compose(result, cop.inj1).map() != f.map() ||
      compose(result, cop.inj2).map() != g.map())
    throw InvalidArgument("couniversal factor failed to restrict correctly");
  return result;
}

// Coequalizer of a parallel pair: quotient of the codomain by the congruence
// generated by {(f(b), g(b))}.
inline Quotient coequalizer(const Homomorphism& f, const Homomorphism& g) {
  if (f.dom() != g.dom() && !same_algebra(*f.dom(), *g.dom()))
    throw InvalidArgument("coequalizer needs a parallel pair");
  if (f.cod() != g.cod() && !same_algebra(*f.cod(), *g.cod()))
    throw InvalidArgument("coequalizer needs a parallel pair");
  std::vector<std::pair<int, int>> pairs;
  for (int b = 0; b < f.dom()->size(); ++b)
    if (f(b) != g(b)) pairs.emplace_back(f(b), g(b));
  Congruence theta = congruence_generated(f.cod(), pairs);
  return quotient(f.cod(), theta, f.cod()->name() + "/coeq");
}

// Cokernel pair of m: B -> C, computed as the coequalizer of i1.m and i2.m
// inside C + C.
struct CokernelPair {
  AlgebraPtr object;
  Homomorphism q1, q2;
};

inline CokernelPair cokernel_pair(const VarietyPresentation& V, const Homomorphism& m) {
  Coproduct cc = coproduct(V, m.cod(), m.cod());
  Homomorphism left = compose(cc.inj1, m);
  Homomorphism right = compose(cc.inj2, m);
  Quotient q = coequalizer(left, right);
  return CokernelPair{q.algebra, compose(q.projection, cc.inj1),
                      compose(q.projection, cc.inj2)};
}

// The one-step relation behind the coproduct congruence. Unlike a Relation
// it need not be a subuniverse of F x F; only its transitive closure is a
// congruence.
struct ZigzagRelation {
  AlgebraPtr free_alg;
  std::vector<std::pair<int, int>> pairs;

  bool contains(int a, int b) const {
    return std::binary_search(pairs.begin(), pairs.end(), std::pair<int, int>{a, b});
  }
};

// All pairs
//   tau(a_1..a_m, b_1..b_n, mu1(a), mu2(b)) ~ tau(a_1.., b_1.., la1(a), la2(b))
// where mu1, la1 agree on (a_1..a_m) in B, mu2, la2 agree on (b_1..b_n) in C,
// the tuples are repetition-free (duplicates can be absorbed into the terms)
// and all terms range over elements of the relevant free algebras.
inline ZigzagRelation zigzag_step_relation(const VarietyPresentation& V, const AlgebraPtr& B,
                                           const AlgebraPtr& C, std::size_t size_guard = 256) {
  int nb = B->size(), nc = C->size();
  FreeAlgebra F = free_algebra(V, nb + nc);
  if (static_cast<std::size_t>(F.size()) > size_guard)
    throw CapExceeded("zigzag relation needs |F| <= " + std::to_string(size_guard) +
                          ", got " + std::to_string(F.size()),
                      static_cast<std::size_t>(F.size()));
  AlgebraPtr Falg = F.algebra(*V.generator());

  // free algebras for the term slots, cached by arity
  std::map<int, FreeAlgebra> frees;
  auto free_of = [&](int arity) -> FreeAlgebra& {
    auto it = frees.find(arity);
    if (it == frees.end()) it = frees.emplace(arity, free_algebra(V, arity)).first;
    return it->second;
  };

  // all repetition-free tuples over {0..n-1}, all lengths including 0
  auto tuples_of = [](int n) {
    std::vector<std::vector<int>> out{{}};
    std::vector<std::vector<int>> frontier{{}};
    while (!frontier.empty()) {
      std::vector<std::vector<int>> next;
      for (const auto& t : frontier) {
        for (int e = 0; e < n; ++e) {
          if (std::find(t.begin(), t.end(), e) != t.end()) continue;
          std::vector<int> u = t;
          u.push_back(e);
          out.push_back(u);
          next.push_back(std::move(u));
        }
      }
      frontier = std::move(next);
    }
    return out;
  };

  auto agreeing_pairs = [&](const FiniteAlgebra& X, const std::vector<int>& tuple) {
    // pairs of free-algebra elements over |tuple| variables with equal value
    // at `tuple` in X
    FreeAlgebra& Fm = free_of(static_cast<int>(tuple.size()));
    std::vector<std::pair<int, int>> out;
    std::vector<int> value(static_cast<std::size_t>(Fm.size()));
    for (int e = 0; e < Fm.size(); ++e)
      value[static_cast<std::size_t>(e)] =
          eval_term(Fm.witnesses[static_cast<std::size_t>(e)], X, tuple);
    for (int e1 = 0; e1 < Fm.size(); ++e1)
      for (int e2 = 0; e2 < Fm.size(); ++e2)
        if (value[static_cast<std::size_t>(e1)] == value[static_cast<std::size_t>(e2)])
          out.emplace_back(e1, e2);
    return out;
  };

  bool has_constant = false;
  for (int op = 0; op < V.sig().op_count(); ++op)
    if (V.sig().arity(op) == 0) has_constant = true;

  std::set<std::pair<int, int>> pairs;
  for (const std::vector<int>& atup : tuples_of(nb)) {
    if (atup.empty() && !has_constant) continue;  // F(0) needs a constant
    auto apairs = agreeing_pairs(*B, atup);
    for (const std::vector<int>& btup : tuples_of(nc)) {
      if (btup.empty() && !has_constant) continue;
      auto bpairs = agreeing_pairs(*C, btup);
      int m = static_cast<int>(atup.size()), n2 = static_cast<int>(btup.size());
      FreeAlgebra& Ftau = free_of(m + n2 + 2);

      // generator elements of F corresponding to the tuples
      std::vector<int> base_args;
      for (int a : atup)
        base_args.push_back(F.generator_ids[static_cast<std::size_t>(a)]);
      for (int b : btup)
        base_args.push_back(F.generator_ids[static_cast<std::size_t>(nb + b)]);

      FreeAlgebra& Fm = free_of(m);
      FreeAlgebra& Fn = free_of(n2);
      // value of a free-algebra element applied to the generator block in F
      auto eval_in_F = [&](FreeAlgebra& src, int element, std::span<const int> args) {
        return eval_term(src.witnesses[static_cast<std::size_t>(element)], *Falg, args);
      };
      std::span<const int> aspan(base_args.data(), static_cast<std::size_t>(m));
      std::span<const int> bspan(base_args.data() + m, static_cast<std::size_t>(n2));

      for (auto [mu1, la1] : apairs) {
        int mu1F = eval_in_F(Fm, mu1, aspan);
        int la1F = eval_in_F(Fm, la1, aspan);
        for (auto [mu2, la2] : bpairs) {
          int mu2F = eval_in_F(Fn, mu2, bspan);
          int la2F = eval_in_F(Fn, la2, bspan);
          if (mu1F == la1F && mu2F == la2F) continue;  // only diagonal pairs, added below
          std::vector<int> lhs_args(base_args.begin(), base_args.end());
          lhs_args.push_back(mu1F);
          lhs_args.push_back(mu2F);
          std::vector<int> rhs_args(base_args.begin(), base_args.end());
          rhs_args.push_back(la1F);
          rhs_args.push_back(la2F);
          for (int tau = 0; tau < Ftau.size(); ++tau) {
            int lhs = eval_in_F(Ftau, tau, lhs_args);
            int rhs = eval_in_F(Ftau, tau, rhs_args);
            pairs.emplace(lhs, rhs);
          }
        }
      }
    }
  }
  for (int e = 0; e < F.size(); ++e) pairs.emplace(e, e);  // diagonal tau choices

  std::vector<std::pair<int, int>> out(pairs.begin(), pairs.end());
  return ZigzagRelation{Falg, std::move(out)};
}

// The coproduct's table congruence on the free algebra, exposed so the
// transitive closure of the zigzag relation can be checked against it.
inline Congruence coproduct_table_congruence(const VarietyPresentation& V, const AlgebraPtr& B,
                                             const AlgebraPtr& C) {
  int nb = B->size(), nc = C->size();
  FreeAlgebra F = free_algebra(V, nb + nc);
  AlgebraPtr Falg = F.algebra(*V.generator());
  auto gen_of = [&](bool right, int element) {
    return F.generator_ids[static_cast<std::size_t>(right ? nb + element : element)];
  };
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> args, gens;
  for (int side = 0; side < 2; ++side) {
    const AlgebraPtr& X = side == 0 ? B : C;
    bool right = side == 1;
    for (int op = 0; op < X->sig().op_count(); ++op) {
      int r = X->sig().arity(op);
      const std::vector<int>& table = X->table(op);
      args.assign(static_cast<std::size_t>(r), 0);
      for (std::size_t idx = 0; idx < table.size(); ++idx) {
        gens.assign(static_cast<std::size_t>(r), 0);
        for (std::size_t i = 0; i < args.size(); ++i) gens[i] = gen_of(right, args[i]);
        pairs.emplace_back(F.apply(*V.generator(), op, gens), gen_of(right, table[idx]));
        for (std::size_t i = 0; i < args.size(); ++i) {
          if (++args[i] < X->size()) break;
          args[i] = 0;
        }
      }
    }
  }
  return congruence_generated(Falg, pairs);
}

// Transitive closure of the zigzag relation; the result is a congruence on
// the free algebra by construction of the pairs.
inline Congruence transitive_closure_partition(const ZigzagRelation& R) {
  detail::UnionFind uf(R.free_alg->size());
  for (auto [x, y] : R.pairs) uf.unite(x, y);
  return Congruence(R.free_alg, uf.canonical());
}

}  // namespace ua
