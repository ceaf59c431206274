#pragma once

#include <map>
#include <numeric>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "ua/algebra.hpp"
#include "ua/error.hpp"

namespace ua {

// An equivalence relation on A's carrier compatible with all operations.
// Canonical form: block_id[x] is the least element of x's block, so
// congruence equality is plain vector equality.
class Congruence {
public:
  Congruence(AlgebraPtr algebra, std::vector<int> block_id)
      : algebra_(std::move(algebra)), block_id_(std::move(block_id)) {
    if (static_cast<int>(block_id_.size()) != algebra_->size())
      throw InvalidArgument("congruence vector has wrong length");
    for (int x = 0; x < algebra_->size(); ++x) {
      int b = block_id_[static_cast<std::size_t>(x)];
      if (b < 0 || b > x || block_id_[static_cast<std::size_t>(b)] != b)
        throw InvalidArgument("congruence vector is not in canonical form");
    }
    check_compatible();
  }

  const AlgebraPtr& algebra() const { return algebra_; }
  const std::vector<int>& block_id() const { return block_id_; }
  bool related(int x, int y) const {
    return block_id_[static_cast<std::size_t>(x)] == block_id_[static_cast<std::size_t>(y)];
  }
  bool is_identity() const {
    for (int x = 0; x < algebra_->size(); ++x)
      if (block_id_[static_cast<std::size_t>(x)] != x) return false;
    return true;
  }
  bool is_total() const {
    for (int b : block_id_)
      if (b != 0) return false;
    return true;
  }
  int block_count() const {
    int n = 0;
    for (int x = 0; x < algebra_->size(); ++x)
      if (block_id_[static_cast<std::size_t>(x)] == x) ++n;
    return n;
  }
  std::vector<std::vector<int>> blocks() const {
    std::map<int, std::vector<int>> by_id;
    for (int x = 0; x < algebra_->size(); ++x)
      by_id[block_id_[static_cast<std::size_t>(x)]].push_back(x);
    std::vector<std::vector<int>> out;
    out.reserve(by_id.size());
    for (auto& [id, block] : by_id) out.push_back(std::move(block));
    return out;
  }

  bool operator==(const Congruence& other) const { return block_id_ == other.block_id_; }
  bool operator<(const Congruence& other) const { return block_id_ < other.block_id_; }

  // true when every block of this congruence is contained in a block of `other`
  bool refines(const Congruence& other) const {
    for (int x = 0; x < algebra_->size(); ++x)
      if (!other.related(x, block_id_[static_cast<std::size_t>(x)])) return false;
    return true;
  }

private:
  void check_compatible() const {
    const FiniteAlgebra& A = *algebra_;
    std::vector<int> args, reps;
    for (int op = 0; op < A.sig().op_count(); ++op) {
      int r = A.sig().arity(op);
      const std::vector<int>& table = A.table(op);
      args.assign(static_cast<std::size_t>(r), 0);
      reps.assign(static_cast<std::size_t>(r), 0);
      for (std::size_t idx = 0; idx < table.size(); ++idx) {
        for (std::size_t i = 0; i < args.size(); ++i)
          reps[i] = block_id_[static_cast<std::size_t>(args[i])];
        if (!related(table[idx], A.apply(op, reps)))
          throw InvalidArgument("partition is not compatible with operation '" +
                                A.sig().name(op) + "'");
        for (std::size_t i = 0; i < args.size(); ++i) {
          if (++args[i] < A.size()) break;
          args[i] = 0;
        }
      }
    }
  }

  AlgebraPtr algebra_;
  std::vector<int> block_id_;
};

namespace detail {

class UnionFind {
public:
  explicit UnionFind(int n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
      parent_[static_cast<std::size_t>(x)] =
          parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(x)])];
      x = parent_[static_cast<std::size_t>(x)];
    }
    return x;
  }
  // keeps the smaller root as representative
  bool unite(int x, int y) {
    x = find(x);
    y = find(y);
    if (x == y) return false;
    if (x > y) std::swap(x, y);
    parent_[static_cast<std::size_t>(y)] = x;
    return true;
  }
  std::vector<int> canonical() {
    std::vector<int> out(parent_.size());
    for (int x = 0; x < static_cast<int>(parent_.size()); ++x)
      out[static_cast<std::size_t>(x)] = find(x);
    return out;
  }

private:
  std::vector<int> parent_;
};

}  // namespace detail

inline Congruence identity_congruence(const AlgebraPtr& A) {
  std::vector<int> v(static_cast<std::size_t>(A->size()));
  std::iota(v.begin(), v.end(), 0);
  return Congruence(A, std::move(v));
}

inline Congruence total_congruence(const AlgebraPtr& A) {
  return Congruence(A, std::vector<int>(static_cast<std::size_t>(A->size()), 0));
}

// The least congruence containing `pairs`: union-find plus a worklist that,
// for every merged pair (a, b), operation, argument position and environment,
// merges the two one-step consequences.
inline Congruence congruence_generated(const AlgebraPtr& A,
                                       std::span<const std::pair<int, int>> pairs) {
  detail::UnionFind uf(A->size());
  std::vector<std::pair<int, int>> worklist(pairs.begin(), pairs.end());
  for (auto [a, b] : worklist)
    if (a < 0 || a >= A->size() || b < 0 || b >= A->size())
      throw InvalidArgument("congruence seed pair out of carrier");

  const Signature& sig = A->sig();
  std::vector<int> args;
  while (!worklist.empty()) {
    auto [a, b] = worklist.back();
    worklist.pop_back();
    if (!uf.unite(a, b)) continue;
    for (int op = 0; op < sig.op_count(); ++op) {
      int r = sig.arity(op);
      if (r == 0) continue;
      for (int pos = 0; pos < r; ++pos) {
        // iterate over all environments for the other r-1 positions
        std::size_t envs = 1;
        for (int i = 0; i < r - 1; ++i) envs *= static_cast<std::size_t>(A->size());
        args.assign(static_cast<std::size_t>(r), 0);
        for (std::size_t env = 0; env < envs; ++env) {
          std::size_t rest = env;
          for (int i = 0; i < r; ++i) {
            if (i == pos) continue;
            args[static_cast<std::size_t>(i)] =
                static_cast<int>(rest % static_cast<std::size_t>(A->size()));
            rest /= static_cast<std::size_t>(A->size());
          }
          args[static_cast<std::size_t>(pos)] = a;
          int va = A->apply(op, args);
          args[static_cast<std::size_t>(pos)] = b;
          int vb = A->apply(op, args);
          if (uf.find(va) != uf.find(vb)) worklist.emplace_back(va, vb);
        }
      }
    }
  }
  return Congruence(A, uf.canonical());
}

inline Congruence congruence_generated(const AlgebraPtr& A,
                                       std::initializer_list<std::pair<int, int>> pairs) {
  return congruence_generated(
      A, std::span<const std::pair<int, int>>(pairs.begin(), pairs.size()));
}

inline Congruence principal_congruence(const AlgebraPtr& A, int a, int b) {
  std::pair<int, int> p{a, b};
  return congruence_generated(A, std::span<const std::pair<int, int>>(&p, 1));
}

// Join in the congruence lattice: the transitive closure of the union, which
// is automatically compatible.
inline Congruence congruence_join(const Congruence& x, const Congruence& y) {
  const AlgebraPtr& A = x.algebra();
  detail::UnionFind uf(A->size());
  for (int e = 0; e < A->size(); ++e) {
    uf.unite(e, x.block_id()[static_cast<std::size_t>(e)]);
    uf.unite(e, y.block_id()[static_cast<std::size_t>(e)]);
  }
  return Congruence(A, uf.canonical());
}

// Meet in the congruence lattice: intersection of the partitions.
inline Congruence congruence_meet(const Congruence& x, const Congruence& y) {
  const AlgebraPtr& A = x.algebra();
  std::map<std::pair<int, int>, int> first_seen;
  std::vector<int> out(static_cast<std::size_t>(A->size()));
  for (int e = 0; e < A->size(); ++e) {
    std::pair<int, int> key{x.block_id()[static_cast<std::size_t>(e)],
                            y.block_id()[static_cast<std::size_t>(e)]};
    auto [it, fresh] = first_seen.emplace(key, e);
    out[static_cast<std::size_t>(e)] = it->second;
  }
  return Congruence(A, std::move(out));
}

// Every congruence of A, as the closure of the principal congruences under
// join. Exponentially smaller than enumerating partitions in practice.
inline std::vector<Congruence> all_congruences(const AlgebraPtr& A, std::size_t cap = 100000) {
  std::vector<Congruence> principals;
  for (int a = 0; a < A->size(); ++a)
    for (int b = a + 1; b < A->size(); ++b)
      principals.push_back(principal_congruence(A, a, b));

  std::set<std::vector<int>> seen;
  std::vector<Congruence> out;
  auto push = [&](Congruence c) {
    if (seen.insert(c.block_id()).second) {
      if (out.size() == cap)
        throw CapExceeded("congruence enumeration exceeded cap of " + std::to_string(cap),
                          out.size());
      out.push_back(std::move(c));
      return true;
    }
    return false;
  };

  push(identity_congruence(A));
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (const Congruence& p : principals) {
      Congruence joined = congruence_join(out[i], p);
      push(std::move(joined));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Quotient algebra A/theta together with the canonical projection. Blocks
// are numbered by ascending block id.
struct Quotient {
  AlgebraPtr algebra;
  Homomorphism projection;
  std::vector<int> block_rep;  // quotient element -> least ambient element
};

inline Quotient quotient(const AlgebraPtr& A, const Congruence& theta,
                         std::string name = "") {
  if (theta.algebra() != A && !same_algebra(*theta.algebra(), *A))
    throw InvalidArgument("congruence does not live on the given algebra");
  std::vector<int> reps;
  std::vector<int> to_block(static_cast<std::size_t>(A->size()), -1);
  for (int x = 0; x < A->size(); ++x)
    if (theta.block_id()[static_cast<std::size_t>(x)] == x) {
      to_block[static_cast<std::size_t>(x)] = static_cast<int>(reps.size());
      reps.push_back(x);
    }
  std::vector<int> proj(static_cast<std::size_t>(A->size()));
  for (int x = 0; x < A->size(); ++x)
    proj[static_cast<std::size_t>(x)] =
        to_block[static_cast<std::size_t>(theta.block_id()[static_cast<std::size_t>(x)])];

  int n = static_cast<int>(reps.size());
  const Signature& sig = A->sig();
  std::vector<std::vector<int>> tables(static_cast<std::size_t>(sig.op_count()));
  std::vector<int> args;
  for (int op = 0; op < sig.op_count(); ++op) {
    int r = sig.arity(op);
    std::size_t entries =
        pow_checked(static_cast<std::size_t>(n), r, kMaxTableEntries, "quotient table size");
    std::vector<int>& table = tables[static_cast<std::size_t>(op)];
    table.resize(entries);
    std::vector<int> idx(static_cast<std::size_t>(r), 0);
    args.assign(static_cast<std::size_t>(r), 0);
    for (std::size_t pos = 0; pos < entries; ++pos) {
      for (int i = 0; i < r; ++i)
        args[static_cast<std::size_t>(i)] =
            reps[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
      table[pos] = proj[static_cast<std::size_t>(A->apply(op, args))];
      for (int i = 0; i < r; ++i) {
        if (++idx[static_cast<std::size_t>(i)] < n) break;
        idx[static_cast<std::size_t>(i)] = 0;
      }
    }
  }
  if (name.empty()) name = A->name() + "/theta";
  AlgebraPtr Q = FiniteAlgebra::make(std::move(name), A->sig_ptr(), n, std::move(tables));
  return Quotient{Q, Homomorphism(A, Q, std::move(proj)), std::move(reps)};
}

// The kernel of a homomorphism as a congruence on its domain.
inline Congruence kernel(const Homomorphism& h) {
  std::map<int, int> first_seen;
  std::vector<int> out(h.map().size());
  for (int x = 0; x < h.dom()->size(); ++x) {
    auto [it, fresh] = first_seen.emplace(h(x), x);
    out[static_cast<std::size_t>(x)] = it->second;
  }
  return Congruence(h.dom(), std::move(out));
}

// True iff the intersection of all non-identity congruences is non-identity,
// i.e. A has a monolith. The intersection over principal congruences
// Cg(a, b), a != b, suffices.
inline bool is_subdirectly_irreducible(const AlgebraPtr& A) {
  if (A->size() < 2)
    throw InvalidArgument("subdirect irreducibility is undefined for one-element algebras");
  std::optional<Congruence> monolith;
  for (int a = 0; a < A->size(); ++a)
    for (int b = a + 1; b < A->size(); ++b) {
      Congruence p = principal_congruence(A, a, b);
      monolith = monolith ? congruence_meet(*monolith, p) : p;
      if (monolith->is_identity()) return false;
    }
  return !monolith->is_identity();
}

}  // namespace ua
