#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ua/error.hpp"
#include "ua/term.hpp"

namespace ua {

// Hard guards against runaway constructions; the per-variety caps in
// variety.hpp are checked first and give friendlier errors.
inline constexpr std::size_t kMaxCarrier = 1u << 20;
inline constexpr std::size_t kMaxTableEntries = std::size_t{1} << 24;

inline std::size_t pow_checked(std::size_t base, int exp, std::size_t cap,
                               const char* what) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && r > cap / base)
      throw CapExceeded(std::string(what) + " exceeds cap of " + std::to_string(cap), r);
    r *= base;
  }
  return r;
}

// Assignment-index convention, used globally: a tuple (a_0, ..., a_{w-1})
// over a carrier of size n is encoded as sum a_i * n^i, i.e. position 0 is
// the least significant digit.
inline std::size_t encode_tuple(std::span<const int> tuple, int size) {
  std::size_t idx = 0;
  for (std::size_t i = tuple.size(); i-- > 0;)
    idx = idx * static_cast<std::size_t>(size) + static_cast<std::size_t>(tuple[i]);
  return idx;
}

inline std::vector<int> decode_tuple(std::size_t idx, int size, int width) {
  std::vector<int> tuple(static_cast<std::size_t>(width));
  for (int i = 0; i < width; ++i) {
    tuple[static_cast<std::size_t>(i)] = static_cast<int>(idx % static_cast<std::size_t>(size));
    idx /= static_cast<std::size_t>(size);
  }
  return tuple;
}

class FiniteAlgebra;
using AlgebraPtr = std::shared_ptr<const FiniteAlgebra>;

// A finite algebra: carrier {0, ..., size-1} and one total operation table
// per symbol of the signature, stored in assignment-index order.
class FiniteAlgebra {
public:
  FiniteAlgebra(std::string name, SignaturePtr sig, int size,
                std::vector<std::vector<int>> tables)
      : name_(std::move(name)), sig_(std::move(sig)), size_(size), tables_(std::move(tables)) {
    if (!sig_) throw InvalidArgument("algebra requires a signature");
    if (size_ < 1) throw InvalidArgument("empty algebras are rejected (size must be >= 1)");
    if (static_cast<int>(tables_.size()) != sig_->op_count())
      throw InvalidArgument("algebra '" + name_ + "': expected one table per operation");
    for (int op = 0; op < sig_->op_count(); ++op) {
      std::size_t expect =
          pow_checked(static_cast<std::size_t>(size_), sig_->arity(op), kMaxTableEntries,
                      "operation table size");
      const auto& table = tables_[static_cast<std::size_t>(op)];
      if (table.size() != expect)
        throw InvalidArgument("algebra '" + name_ + "': table for '" + sig_->name(op) +
                              "' has " + std::to_string(table.size()) + " entries, expected " +
                              std::to_string(expect));
      for (int v : table)
        if (v < 0 || v >= size_)
          throw InvalidArgument("algebra '" + name_ + "': table entry out of carrier");
    }
  }

  static AlgebraPtr make(std::string name, SignaturePtr sig, int size,
                         std::vector<std::vector<int>> tables) {
    return std::make_shared<FiniteAlgebra>(std::move(name), std::move(sig), size,
                                           std::move(tables));
  }

  const std::string& name() const { return name_; }
  const Signature& sig() const { return *sig_; }
  const SignaturePtr& sig_ptr() const { return sig_; }
  int size() const { return size_; }
  const std::vector<int>& table(int op) const { return tables_.at(static_cast<std::size_t>(op)); }

  int apply(int op, std::span<const int> args) const {
    return tables_[static_cast<std::size_t>(op)][encode_tuple(args, size_)];
  }

private:
  std::string name_;
  SignaturePtr sig_;
  int size_;
  std::vector<std::vector<int>> tables_;
};

inline bool same_signature(const FiniteAlgebra& a, const FiniteAlgebra& b) {
  return &a.sig() == &b.sig() || a.sig() == b.sig();
}

// Structural identity of algebras (name ignored).
inline bool same_algebra(const FiniteAlgebra& a, const FiniteAlgebra& b) {
  if (&a == &b) return true;
  if (a.size() != b.size() || !same_signature(a, b)) return false;
  for (int op = 0; op < a.sig().op_count(); ++op)
    if (a.table(op) != b.table(op)) return false;
  return true;
}

// --- Term evaluation -------------------------------------------------------

inline int eval_term(const Term& t, const FiniteAlgebra& A, std::span<const int> assignment) {
  if (t.is_var()) {
    if (t.var_index() >= static_cast<int>(assignment.size()))
      throw InvalidArgument("assignment too short: term uses $" +
                            std::to_string(t.var_index()) + " but only " +
                            std::to_string(assignment.size()) + " values given");
    return assignment[static_cast<std::size_t>(t.var_index())];
  }
  std::vector<int> args;
  args.reserve(t.args().size());
  for (const Term& a : t.args()) args.push_back(eval_term(a, A, assignment));
  return A.apply(t.op(), args);
}

// The graph of t as a w-ary function on A: entry at assignment index i is
// the value of t at the i-th assignment. Computed bottom-up on whole value
// vectors rather than once per assignment.
inline std::vector<int> term_function(const Term& t, const FiniteAlgebra& A, int width) {
  if (t.min_width() > width)
    throw InvalidArgument("term uses more variables than the requested width");
  std::size_t len =
      pow_checked(static_cast<std::size_t>(A.size()), width, kMaxTableEntries, "term function");
  if (t.is_var()) {
    std::vector<int> v(len);
    std::size_t block = pow_checked(static_cast<std::size_t>(A.size()), t.var_index(),
                                    kMaxTableEntries, "term function");
    for (std::size_t i = 0; i < len; ++i)
      v[i] = static_cast<int>((i / block) % static_cast<std::size_t>(A.size()));
    return v;
  }
  std::vector<std::vector<int>> argvecs;
  argvecs.reserve(t.args().size());
  for (const Term& a : t.args()) argvecs.push_back(term_function(a, A, width));
  const std::vector<int>& table = A.table(t.op());
  std::vector<int> v(len);
  std::vector<int> point(argvecs.size());
  for (std::size_t i = 0; i < len; ++i) {
    for (std::size_t j = 0; j < argvecs.size(); ++j) point[j] = argvecs[j][i];
    v[i] = table[encode_tuple(point, A.size())];
  }
  return v;
}

// --- Products and powers ---------------------------------------------------

// Direct product: carrier size |A|*|B|, element (i, j) encoded as i + |A|*j,
// operations componentwise.
inline AlgebraPtr product(const AlgebraPtr& A, const AlgebraPtr& B) {
  if (!same_signature(*A, *B))
    throw InvalidArgument("product requires algebras over the same signature");
  std::size_t n = static_cast<std::size_t>(A->size()) * static_cast<std::size_t>(B->size());
  if (n > kMaxCarrier)
    throw CapExceeded("product carrier of size " + std::to_string(n) + " exceeds cap", n);
  const Signature& sig = A->sig();
  std::vector<std::vector<int>> tables(static_cast<std::size_t>(sig.op_count()));
  for (int op = 0; op < sig.op_count(); ++op) {
    int r = sig.arity(op);
    std::size_t entries =
        pow_checked(n, r, kMaxTableEntries, "product operation table size");
    std::vector<int>& table = tables[static_cast<std::size_t>(op)];
    table.resize(entries);
    std::vector<int> code(static_cast<std::size_t>(r), 0);
    std::vector<int> la(static_cast<std::size_t>(r)), rb(static_cast<std::size_t>(r));
    for (std::size_t idx = 0; idx < entries; ++idx) {
      for (int i = 0; i < r; ++i) {
        la[static_cast<std::size_t>(i)] = code[static_cast<std::size_t>(i)] % A->size();
        rb[static_cast<std::size_t>(i)] = code[static_cast<std::size_t>(i)] / A->size();
      }
      table[idx] = A->apply(op, la) + A->size() * B->apply(op, rb);
      for (int i = 0; i < r; ++i) {
        if (++code[static_cast<std::size_t>(i)] < static_cast<int>(n)) break;
        code[static_cast<std::size_t>(i)] = 0;
      }
    }
  }
  return FiniteAlgebra::make("(" + A->name() + "x" + B->name() + ")", A->sig_ptr(),
                             static_cast<int>(n), std::move(tables));
}

// d-th direct power; element encoding follows the assignment-index
// convention (coordinate 0 least significant).
inline AlgebraPtr power(const AlgebraPtr& A, int d) {
  if (d < 1) throw InvalidArgument("power exponent must be >= 1");
  std::size_t n =
      pow_checked(static_cast<std::size_t>(A->size()), d, kMaxCarrier, "power carrier");
  const Signature& sig = A->sig();
  std::vector<std::vector<int>> tables(static_cast<std::size_t>(sig.op_count()));
  for (int op = 0; op < sig.op_count(); ++op) {
    int r = sig.arity(op);
    std::size_t entries = pow_checked(n, r, kMaxTableEntries, "power operation table size");
    std::vector<int>& table = tables[static_cast<std::size_t>(op)];
    table.resize(entries);
    std::vector<int> code(static_cast<std::size_t>(r), 0);
    std::vector<int> comp(static_cast<std::size_t>(r));
    for (std::size_t idx = 0; idx < entries; ++idx) {
      std::size_t out = 0;
      for (int c = d - 1; c >= 0; --c) {
        std::size_t block = 1;
        for (int i = 0; i < c; ++i) block *= static_cast<std::size_t>(A->size());
        for (int i = 0; i < r; ++i)
          comp[static_cast<std::size_t>(i)] = static_cast<int>(
              (static_cast<std::size_t>(code[static_cast<std::size_t>(i)]) / block) %
              static_cast<std::size_t>(A->size()));
        out = out * static_cast<std::size_t>(A->size()) +
              static_cast<std::size_t>(A->apply(op, comp));
      }
      table[idx] = static_cast<int>(out);
      for (int i = 0; i < r; ++i) {
        if (++code[static_cast<std::size_t>(i)] < static_cast<int>(n)) break;
        code[static_cast<std::size_t>(i)] = 0;
      }
    }
  }
  return FiniteAlgebra::make(A->name() + "^" + std::to_string(d), A->sig_ptr(),
                             static_cast<int>(n), std::move(tables));
}

inline int product_code(int left, int right, int left_size) { return left + left_size * right; }
inline int product_left(int code, int left_size) { return code % left_size; }
inline int product_right(int code, int left_size) { return code / left_size; }

// --- Subalgebra generation -------------------------------------------------

// How a generated element was first reached: either it is the `arg`-th seed,
// or it is op applied to previously generated elements.
struct GenStep {
  int op = -1;                // -1 for seeds
  std::vector<int> args;      // indices into the generated element list
};

struct GeneratedSubalgebra {
  std::vector<int> elements;     // carrier elements in discovery order
  std::vector<Term> witnesses;   // term over seed indices producing elements[i]
  std::vector<GenStep> steps;    // parallel to elements
  std::vector<int> index_of;     // carrier element -> position, or -1

  bool contains(int element) const { return index_of[static_cast<std::size_t>(element)] >= 0; }
  int size() const { return static_cast<int>(elements.size()); }
};

// Smallest subuniverse containing `seeds`, with a witness term per element.
// Deterministic: elements are found in breadth-first rounds; within a round
// operations are tried in signature order and argument tuples ascend
// lexicographically (leftmost argument most significant); the first witness
// found is kept.
inline GeneratedSubalgebra subalgebra_generate(const FiniteAlgebra& A,
                                               std::span<const int> seeds) {
  bool has_constant = false;
  for (int op = 0; op < A.sig().op_count(); ++op)
    if (A.sig().arity(op) == 0) has_constant = true;
  if (seeds.empty() && !has_constant)
    throw InvalidArgument("subalgebra generation needs seeds or a constant in the signature");

  GeneratedSubalgebra out;
  out.index_of.assign(static_cast<std::size_t>(A.size()), -1);
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    int e = seeds[i];
    if (e < 0 || e >= A.size()) throw InvalidArgument("seed element out of carrier");
    if (out.index_of[static_cast<std::size_t>(e)] >= 0) continue;  // duplicate seed
    out.index_of[static_cast<std::size_t>(e)] = out.size();
    out.elements.push_back(e);
    out.witnesses.push_back(Term::var(static_cast<int>(i)));
    out.steps.push_back(GenStep{});
  }

  // prev_start marks the first element of the previous round; a tuple can
  // only produce something new if it touches that round.
  int prev_start = 0;
  for (;;) {
    int round_start = out.size();
    for (int op = 0; op < A.sig().op_count(); ++op) {
      int r = A.sig().arity(op);
      if (r == 0) {
        if (prev_start > 0) continue;  // constants belong to the first round
        int v = A.table(op)[0];
        if (out.index_of[static_cast<std::size_t>(v)] < 0) {
          out.index_of[static_cast<std::size_t>(v)] = out.size();
          out.elements.push_back(v);
          out.witnesses.push_back(Term::app(op, {}));
          out.steps.push_back(GenStep{op, {}});
        }
        continue;
      }
      int n = round_start;
      if (n == 0) continue;
      std::vector<int> idx(static_cast<std::size_t>(r), 0);
      std::vector<int> args(static_cast<std::size_t>(r));
      for (;;) {
        bool touches_new = prev_start == 0;
        for (int i = 0; i < r && !touches_new; ++i)
          touches_new = idx[static_cast<std::size_t>(i)] >= prev_start;
        if (touches_new) {
          for (int i = 0; i < r; ++i)
            args[static_cast<std::size_t>(i)] =
                out.elements[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
          int v = A.apply(op, args);
          if (out.index_of[static_cast<std::size_t>(v)] < 0) {
            out.index_of[static_cast<std::size_t>(v)] = out.size();
            out.elements.push_back(v);
            std::vector<Term> wargs;
            wargs.reserve(static_cast<std::size_t>(r));
            for (int i = 0; i < r; ++i)
              wargs.push_back(
                  out.witnesses[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])]);
            out.witnesses.push_back(Term::app(op, std::move(wargs)));
            out.steps.push_back(GenStep{op, std::vector<int>(idx.begin(), idx.end())});
          }
        }
        int i = r - 1;
        for (; i >= 0; --i) {
          if (++idx[static_cast<std::size_t>(i)] < n) break;
          idx[static_cast<std::size_t>(i)] = 0;
        }
        if (i < 0) break;
      }
    }
    if (out.size() == round_start && prev_start > 0) break;
    if (out.size() == round_start && prev_start == 0) {
      if (round_start == 0)
        throw InvalidArgument("subalgebra generation produced no elements");
      break;
    }
    prev_start = round_start;
  }
  return out;
}

inline GeneratedSubalgebra subalgebra_generate(const FiniteAlgebra& A,
                                               std::initializer_list<int> seeds) {
  return subalgebra_generate(A, std::span<const int>(seeds.begin(), seeds.size()));
}

// Presents a closed subset of A's carrier as an algebra in its own right.
// `subset` keeps the given order; the new carrier is {0, ..., subset.size()-1}.
struct Subalgebra {
  AlgebraPtr algebra;
  std::vector<int> carrier;   // new element -> element of the ambient algebra
  std::vector<int> index_of;  // ambient element -> new element, or -1
};

inline Subalgebra subset_algebra(const AlgebraPtr& A, std::vector<int> subset,
                                 std::string name) {
  Subalgebra sub;
  sub.carrier = std::move(subset);
  sub.index_of.assign(static_cast<std::size_t>(A->size()), -1);
  for (std::size_t i = 0; i < sub.carrier.size(); ++i) {
    int e = sub.carrier[i];
    if (e < 0 || e >= A->size()) throw InvalidArgument("subset element out of carrier");
    if (sub.index_of[static_cast<std::size_t>(e)] >= 0)
      throw InvalidArgument("subset contains duplicates");
    sub.index_of[static_cast<std::size_t>(e)] = static_cast<int>(i);
  }
  int n = static_cast<int>(sub.carrier.size());
  const Signature& sig = A->sig();
  std::vector<std::vector<int>> tables(static_cast<std::size_t>(sig.op_count()));
  for (int op = 0; op < sig.op_count(); ++op) {
    int r = sig.arity(op);
    std::size_t entries =
        pow_checked(static_cast<std::size_t>(n), r, kMaxTableEntries, "subalgebra table size");
    std::vector<int>& table = tables[static_cast<std::size_t>(op)];
    table.resize(entries);
    std::vector<int> idx(static_cast<std::size_t>(r), 0);
    std::vector<int> args(static_cast<std::size_t>(r));
    for (std::size_t pos = 0; pos < entries; ++pos) {
      for (int i = 0; i < r; ++i)
        args[static_cast<std::size_t>(i)] =
            sub.carrier[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
      int v = A->apply(op, args);
      int vi = sub.index_of[static_cast<std::size_t>(v)];
      if (vi < 0)
        throw InvalidArgument("subset is not closed under operation '" + sig.name(op) + "'");
      table[pos] = vi;
      for (int i = 0; i < r; ++i) {
        if (++idx[static_cast<std::size_t>(i)] < n) break;
        idx[static_cast<std::size_t>(i)] = 0;
      }
    }
  }
  sub.algebra = FiniteAlgebra::make(std::move(name), A->sig_ptr(), n, std::move(tables));
  return sub;
}

// --- Homomorphisms ---------------------------------------------------------

class Homomorphism {
public:
  Homomorphism(AlgebraPtr dom, AlgebraPtr cod, std::vector<int> map)
      : dom_(std::move(dom)), cod_(std::move(cod)), map_(std::move(map)) {
    if (!same_signature(*dom_, *cod_))
      throw InvalidArgument("homomorphism endpoints have different signatures");
    if (static_cast<int>(map_.size()) != dom_->size())
      throw InvalidArgument("homomorphism map has wrong length");
    for (int v : map_)
      if (v < 0 || v >= cod_->size())
        throw InvalidArgument("homomorphism map value out of codomain");
    const Signature& sig = dom_->sig();
    std::vector<int> args, imgs;
    for (int op = 0; op < sig.op_count(); ++op) {
      int r = sig.arity(op);
      std::size_t entries = dom_->table(op).size();
      args.assign(static_cast<std::size_t>(r), 0);
      imgs.assign(static_cast<std::size_t>(r), 0);
      for (std::size_t idx = 0; idx < entries; ++idx) {
        for (std::size_t i = 0; i < args.size(); ++i)
          imgs[i] = map_[static_cast<std::size_t>(args[i])];
        if (map_[static_cast<std::size_t>(dom_->table(op)[idx])] != cod_->apply(op, imgs))
          throw InvalidArgument("map does not preserve operation '" + sig.name(op) + "'");
        for (std::size_t i = 0; i < args.size(); ++i) {
          if (++args[i] < dom_->size()) break;
          args[i] = 0;
        }
      }
    }
  }

  int operator()(int a) const { return map_.at(static_cast<std::size_t>(a)); }
  const std::vector<int>& map() const { return map_; }
  const AlgebraPtr& dom() const { return dom_; }
  const AlgebraPtr& cod() const { return cod_; }

  bool is_surjective() const {
    std::vector<char> hit(static_cast<std::size_t>(cod_->size()), 0);
    for (int v : map_) hit[static_cast<std::size_t>(v)] = 1;
    for (char c : hit)
      if (!c) return false;
    return true;
  }

  bool operator==(const Homomorphism& other) const {
    return dom_ == other.dom_ && cod_ == other.cod_ && map_ == other.map_;
  }

private:
  AlgebraPtr dom_, cod_;
  std::vector<int> map_;
};

inline Homomorphism identity_hom(const AlgebraPtr& A) {
  std::vector<int> m(static_cast<std::size_t>(A->size()));
  for (int i = 0; i < A->size(); ++i) m[static_cast<std::size_t>(i)] = i;
  return Homomorphism(A, A, std::move(m));
}

// g after f.
inline Homomorphism compose(const Homomorphism& g, const Homomorphism& f) {
  if (f.cod() != g.dom() && !same_algebra(*f.cod(), *g.dom()))
    throw InvalidArgument("composition endpoints do not match");
  std::vector<int> m(f.map().size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = g(f.map()[i]);
  return Homomorphism(f.dom(), g.cod(), std::move(m));
}

// Greedy generating set of a subuniverse: repeatedly add the element whose
// closure gain is largest (ties broken toward the smaller element). The
// heuristic only affects search-tree size, never correctness.
inline std::vector<int> greedy_generators(const FiniteAlgebra& A,
                                          std::span<const int> universe) {
  std::vector<int> gens;
  std::vector<char> closed(static_cast<std::size_t>(A.size()), 0);
  std::size_t closed_count = 0;

  auto closure_count = [&](std::vector<char> state, int extra) {
    if (extra >= 0) state[static_cast<std::size_t>(extra)] = 1;
    std::vector<int> members;
    for (int e : universe)
      if (state[static_cast<std::size_t>(e)]) members.push_back(e);
    // chaotic iteration to fixpoint; fine at these sizes
    bool grew = true;
    while (grew) {
      grew = false;
      for (int op = 0; op < A.sig().op_count(); ++op) {
        int r = A.sig().arity(op);
        std::vector<int> idx(static_cast<std::size_t>(r), 0);
        std::vector<int> args(static_cast<std::size_t>(r));
        std::size_t n = members.size();
        if (r > 0 && n == 0) continue;
        std::size_t total = 1;
        for (int i = 0; i < r; ++i) total *= n;
        for (std::size_t c = 0; c < total; ++c) {
          for (int i = 0; i < r; ++i) args[static_cast<std::size_t>(i)] =
              members[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
          int v = A.apply(op, args);
          if (!state[static_cast<std::size_t>(v)]) {
            state[static_cast<std::size_t>(v)] = 1;
            members.push_back(v);
            grew = true;
          }
          for (int i = 0; i < r; ++i) {
            if (++idx[static_cast<std::size_t>(i)] < static_cast<int>(n)) break;
            idx[static_cast<std::size_t>(i)] = 0;
          }
        }
      }
    }
    return members.size();
  };

  // constants are free: close the empty set first
  bool has_constant = false;
  for (int op = 0; op < A.sig().op_count(); ++op)
    if (A.sig().arity(op) == 0) has_constant = true;
  if (has_constant) {
    for (int op = 0; op < A.sig().op_count(); ++op)
      if (A.sig().arity(op) == 0) {
        int v = A.table(op)[0];
        if (!closed[static_cast<std::size_t>(v)]) {
          closed[static_cast<std::size_t>(v)] = 1;
          ++closed_count;
        }
      }
    std::vector<int> seeds;
    for (int e : universe)
      if (closed[static_cast<std::size_t>(e)]) seeds.push_back(e);
    if (!seeds.empty()) {
      auto base = subalgebra_generate(A, seeds);
      for (int e : base.elements)
        if (!closed[static_cast<std::size_t>(e)]) {
          closed[static_cast<std::size_t>(e)] = 1;
          ++closed_count;
        }
    }
  }

  while (closed_count < universe.size()) {
    int best = -1;
    std::size_t best_gain = 0;
    for (int e : universe) {
      if (closed[static_cast<std::size_t>(e)]) continue;
      std::size_t gain = closure_count(closed, e) - closed_count;
      if (gain > best_gain) {
        best_gain = gain;
        best = e;
      }
    }
    gens.push_back(best);
    // recompute the closure including the new generator
    std::vector<int> seeds = gens;
    auto gen = subalgebra_generate(A, seeds);
    std::fill(closed.begin(), closed.end(), 0);
    closed_count = 0;
    for (int e : gen.elements) {
      closed[static_cast<std::size_t>(e)] = 1;
      ++closed_count;
    }
  }
  return gens;
}

inline std::vector<int> greedy_generators(const FiniteAlgebra& A) {
  std::vector<int> all(static_cast<std::size_t>(A.size()));
  for (int i = 0; i < A.size(); ++i) all[static_cast<std::size_t>(i)] = i;
  return greedy_generators(A, all);
}

struct HomEnumeration {
  std::vector<Homomorphism> homs;
  bool complete = true;  // false when a limit cut the enumeration short
};

// All homomorphisms A -> B, by backtracking over a greedily chosen
// generating set of A with forward propagation along the generation steps.
// Candidate images are tried in ascending order, so the result is ordered
// lexicographically by generator-image tuple.
inline HomEnumeration hom_enumerate(const AlgebraPtr& A, const AlgebraPtr& B,
                                    std::optional<std::size_t> limit = std::nullopt) {
  if (!same_signature(*A, *B))
    throw InvalidArgument("hom_enumerate requires algebras over the same signature");

  std::vector<int> gens = greedy_generators(*A);

  // Closure data per prefix of the generating set. prefix_closures[i] is the
  // subalgebra generated by the first i generators (plus constants).
  std::vector<GeneratedSubalgebra> prefix_closures;
  bool has_constant = false;
  for (int op = 0; op < A->sig().op_count(); ++op)
    if (A->sig().arity(op) == 0) has_constant = true;
  for (std::size_t i = has_constant ? 0 : 1; i <= gens.size(); ++i)
    prefix_closures.push_back(
        subalgebra_generate(*A, std::span<const int>(gens.data(), i)));

  HomEnumeration out;
  std::vector<int> img(static_cast<std::size_t>(A->size()), -1);

  // Checks the homomorphism condition on all tuples inside one prefix
  // closure.
  auto consistent = [&](const GeneratedSubalgebra& cl) {
    std::vector<int> args, imgs;
    for (int op = 0; op < A->sig().op_count(); ++op) {
      int r = A->sig().arity(op);
      int n = cl.size();
      if (r > 0 && n == 0) continue;
      std::vector<int> idx(static_cast<std::size_t>(r), 0);
      args.assign(static_cast<std::size_t>(r), 0);
      imgs.assign(static_cast<std::size_t>(r), 0);
      std::size_t total = 1;
      for (int i = 0; i < r; ++i) total *= static_cast<std::size_t>(n);
      for (std::size_t c = 0; c < total; ++c) {
        for (int i = 0; i < r; ++i) {
          int e = cl.elements[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
          args[static_cast<std::size_t>(i)] = e;
          imgs[static_cast<std::size_t>(i)] = img[static_cast<std::size_t>(e)];
        }
        int v = A->apply(op, args);
        if (cl.contains(v) &&
            img[static_cast<std::size_t>(v)] != B->apply(op, imgs))
          return false;
        for (int i = 0; i < r; ++i) {
          if (++idx[static_cast<std::size_t>(i)] < n) break;
          idx[static_cast<std::size_t>(i)] = 0;
        }
      }
    }
    return true;
  };

  auto propagate = [&](std::size_t level) {
    // fill images of everything in prefix_closures[level] from the steps
    const GeneratedSubalgebra& cl = prefix_closures[level];
    for (int i = 0; i < cl.size(); ++i) {
      const GenStep& st = cl.steps[static_cast<std::size_t>(i)];
      int e = cl.elements[static_cast<std::size_t>(i)];
      if (img[static_cast<std::size_t>(e)] >= 0) continue;
      if (st.op < 0) continue;  // a seed: image set by the search itself
      std::vector<int> imgs(st.args.size());
      for (std::size_t j = 0; j < st.args.size(); ++j)
        imgs[j] = img[static_cast<std::size_t>(
            cl.elements[static_cast<std::size_t>(st.args[j])])];
      img[static_cast<std::size_t>(e)] = B->apply(st.op, imgs);
    }
  };

  bool truncated = false;
  auto emit = [&]() {
    if (limit && out.homs.size() == *limit) {
      truncated = true;
      return false;
    }
    out.homs.emplace_back(A, B, img);
    return true;
  };

  std::size_t levels = prefix_closures.size();
  // depth k assigns generator image k (offset by one level when constants
  // already created a level-0 closure)
  std::size_t gen_offset = levels - gens.size();

  std::vector<int> saved;
  std::function<bool(std::size_t)> rec = [&](std::size_t level) -> bool {
    if (level == levels) return emit();
    std::vector<int> snapshot = img;
    int from = level >= gen_offset ? gens[level - gen_offset] : -1;
    for (int b = 0; b < B->size(); ++b) {
      img = snapshot;
      if (from >= 0) {
        if (img[static_cast<std::size_t>(from)] >= 0 &&
            img[static_cast<std::size_t>(from)] != b)
          continue;
        img[static_cast<std::size_t>(from)] = b;
      }
      propagate(level);
      if (consistent(prefix_closures[level])) {
        if (!rec(level + 1)) return false;
      }
      if (from < 0) break;  // constants level has no choice to make
    }
    img = snapshot;
    return true;
  };

  if (levels == 0) {
    // no generators and no constants: impossible since carriers are nonempty
    // and generation needs seeds; treat as single empty-closure check
    out.homs.emplace_back(A, B, img);
    return out;
  }
  rec(0);
  out.complete = !truncated;
  return out;
}

}  // namespace ua
