#pragma once

#include <set>
#include <utility>
#include <vector>

#include "ua/algebra.hpp"
#include "ua/error.hpp"

namespace ua {

// A subuniverse of left x right, stored as a membership bitmap indexed by
// the product encoding l + |left|*r.
class Relation {
public:
  Relation(AlgebraPtr left, AlgebraPtr right, std::vector<std::pair<int, int>> pairs)
      : left_(std::move(left)), right_(std::move(right)) {
    if (!same_signature(*left_, *right_))
      throw InvalidArgument("relation endpoints have different signatures");
    member_.assign(static_cast<std::size_t>(left_->size()) *
                       static_cast<std::size_t>(right_->size()),
                   0);
    for (auto [l, r] : pairs) {
      if (l < 0 || l >= left_->size() || r < 0 || r >= right_->size())
        throw InvalidArgument("relation pair out of carrier");
      member_[code(l, r)] = 1;
    }
    check_subuniverse();
  }

  const AlgebraPtr& left() const { return left_; }
  const AlgebraPtr& right() const { return right_; }

  bool contains(int l, int r) const { return member_[code(l, r)] != 0; }

  std::vector<std::pair<int, int>> pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int r = 0; r < right_->size(); ++r)
      for (int l = 0; l < left_->size(); ++l)
        if (contains(l, r)) out.emplace_back(l, r);
    return out;
  }

  std::size_t pair_count() const {
    std::size_t n = 0;
    for (char c : member_)
      if (c) ++n;
    return n;
  }

  bool operator==(const Relation& other) const { return member_ == other.member_; }
  bool operator<(const Relation& other) const { return member_ < other.member_; }

private:
  std::size_t code(int l, int r) const {
    return static_cast<std::size_t>(l) +
           static_cast<std::size_t>(left_->size()) * static_cast<std::size_t>(r);
  }

  void check_subuniverse() const {
    const Signature& sig = left_->sig();
    std::vector<std::pair<int, int>> members = pairs();
    std::vector<int> la, ra;
    for (int op = 0; op < sig.op_count(); ++op) {
      int arity = sig.arity(op);
      std::size_t n = members.size();
      if (arity > 0 && n == 0) continue;
      std::size_t total = 1;
      for (int i = 0; i < arity; ++i) total *= n;
      std::vector<int> idx(static_cast<std::size_t>(arity), 0);
      la.assign(static_cast<std::size_t>(arity), 0);
      ra.assign(static_cast<std::size_t>(arity), 0);
      for (std::size_t c = 0; c < total; ++c) {
        for (int i = 0; i < arity; ++i) {
          auto [l, r] = members[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
          la[static_cast<std::size_t>(i)] = l;
          ra[static_cast<std::size_t>(i)] = r;
        }
        if (!contains(left_->apply(op, la), right_->apply(op, ra)))
          throw InvalidArgument("pair set is not closed under operation '" + sig.name(op) +
                                "' (not a subuniverse of the product)");
        for (int i = 0; i < arity; ++i) {
          if (++idx[static_cast<std::size_t>(i)] < static_cast<int>(n)) break;
          idx[static_cast<std::size_t>(i)] = 0;
        }
      }
    }
  }

  AlgebraPtr left_, right_;
  std::vector<char> member_;
};

struct RelationProperties {
  bool reflexive = false;
  bool symmetric = false;
  bool transitive = false;
  bool difunctional = false;
  bool equivalence = false;
};

// Exhaustive checks; difunctionality is quantified over all quadruples
// (x R y, x' R y, x' R y' imply x R y').
inline RelationProperties relation_properties(const Relation& R) {
  if (R.left() != R.right() && !same_algebra(*R.left(), *R.right()))
    throw InvalidArgument("relation properties need a relation on a single algebra");
  int n = R.left()->size();
  RelationProperties out;

  out.reflexive = true;
  for (int x = 0; x < n; ++x)
    if (!R.contains(x, x)) out.reflexive = false;

  out.symmetric = true;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (R.contains(x, y) && !R.contains(y, x)) out.symmetric = false;

  out.transitive = true;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        if (R.contains(x, y) && R.contains(y, z) && !R.contains(x, z)) out.transitive = false;

  out.difunctional = true;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int xp = 0; xp < n; ++xp)
        for (int yp = 0; yp < n; ++yp)
          if (R.contains(x, y) && R.contains(xp, y) && R.contains(xp, yp) &&
              !R.contains(x, yp))
            out.difunctional = false;

  out.equivalence = out.reflexive && out.symmetric && out.transitive;
  return out;
}

// All subuniverses of A^2 that contain the diagonal, by closing supersets of
// the diagonal one added pair at a time. Deterministic order: breadth-first
// by discovery, pairs tried in product-code order.
inline std::vector<Relation> enumerate_reflexive_relations(const AlgebraPtr& A,
                                                           std::size_t cap = 100000) {
  AlgebraPtr sq = product(A, A);
  int n = A->size();

  auto close = [&](std::vector<char> member) {
    std::vector<int> seeds;
    for (int c = 0; c < sq->size(); ++c)
      if (member[static_cast<std::size_t>(c)]) seeds.push_back(c);
    auto gen = subalgebra_generate(*sq, seeds);
    std::vector<char> out(static_cast<std::size_t>(sq->size()), 0);
    for (int e : gen.elements) out[static_cast<std::size_t>(e)] = 1;
    return out;
  };

  std::vector<char> diag(static_cast<std::size_t>(sq->size()), 0);
  for (int x = 0; x < n; ++x) diag[static_cast<std::size_t>(product_code(x, x, n))] = 1;

  std::set<std::vector<char>> seen;
  std::vector<std::vector<char>> queue;
  auto push = [&](std::vector<char> member) {
    if (seen.insert(member).second) {
      if (queue.size() == cap)
        throw CapExceeded("reflexive relation enumeration exceeded cap", queue.size());
      queue.push_back(std::move(member));
    }
  };

  push(close(diag));
  for (std::size_t i = 0; i < queue.size(); ++i) {
    std::vector<char> base = queue[i];
    for (int c = 0; c < sq->size(); ++c) {
      if (base[static_cast<std::size_t>(c)]) continue;
      std::vector<char> extended = base;
      extended[static_cast<std::size_t>(c)] = 1;
      push(close(std::move(extended)));
    }
  }

  std::vector<Relation> out;
  out.reserve(queue.size());
  for (const auto& member : queue) {
    std::vector<std::pair<int, int>> pairs;
    for (int c = 0; c < sq->size(); ++c)
      if (member[static_cast<std::size_t>(c)])
        pairs.emplace_back(product_left(c, n), product_right(c, n));
    out.emplace_back(A, A, std::move(pairs));
  }
  return out;
}

// All nonempty subuniverses of A, by the same closure-extension scheme.
inline std::vector<std::vector<int>> enumerate_subuniverses(const AlgebraPtr& A,
                                                            std::size_t cap = 100000) {
  auto close = [&](std::vector<int> seeds) {
    auto gen = subalgebra_generate(*A, seeds);
    std::vector<int> sorted = gen.elements;
    std::sort(sorted.begin(), sorted.end());
    return sorted;
  };

  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> queue;
  auto push = [&](std::vector<int> members) {
    if (seen.insert(members).second) {
      if (queue.size() == cap)
        throw CapExceeded("subuniverse enumeration exceeded cap", queue.size());
      queue.push_back(std::move(members));
    }
  };

  bool has_constant = false;
  for (int op = 0; op < A->sig().op_count(); ++op)
    if (A->sig().arity(op) == 0) has_constant = true;
  if (has_constant) push(close({}));
  for (int e = 0; e < A->size(); ++e) push(close({e}));

  for (std::size_t i = 0; i < queue.size(); ++i) {
    std::vector<int> base = queue[i];
    for (int e = 0; e < A->size(); ++e) {
      if (std::find(base.begin(), base.end(), e) != base.end()) continue;
      std::vector<int> extended = base;
      extended.push_back(e);
      push(close(std::move(extended)));
    }
  }
  std::sort(queue.begin(), queue.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });
  return queue;
}

// The pullback of two split epimorphisms f: X->Z, g: Y->Z with sections
// r, s, presented as the subalgebra {(x, y) : f(x) = g(y)} of X x Y, together
// with the projections and the canonical injections e1(x) = (x, s(f(x))),
// e2(y) = (r(g(y)), y).
struct SplitPullback {
  Subalgebra object;  // object.algebra is P'; carrier holds codes into X x Y
  Homomorphism p1, p2, e1, e2;
};

inline SplitPullback pullback_split_epis(const Homomorphism& f, const Homomorphism& r,
                                         const Homomorphism& g, const Homomorphism& s) {
  const AlgebraPtr& X = f.dom();
  const AlgebraPtr& Y = g.dom();
  const AlgebraPtr& Z = f.cod();
  if (g.cod() != Z && !same_algebra(*g.cod(), *Z))
    throw InvalidArgument("split epimorphisms must share their codomain");
  if (r.dom() != Z || r.cod() != X || s.dom() != Z || s.cod() != Y)
    if (!(same_algebra(*r.dom(), *Z) && same_algebra(*r.cod(), *X) &&
          same_algebra(*s.dom(), *Z) && same_algebra(*s.cod(), *Y)))
      throw InvalidArgument("sections do not match the epimorphisms");
  for (int z = 0; z < Z->size(); ++z) {
    if (f(r(z)) != z) throw InvalidArgument("f . r is not the identity");
    if (g(s(z)) != z) throw InvalidArgument("g . s is not the identity");
  }

  AlgebraPtr XY = product(X, Y);
  std::vector<int> carrier;
  for (int y = 0; y < Y->size(); ++y)
    for (int x = 0; x < X->size(); ++x)
      if (f(x) == g(y)) carrier.push_back(product_code(x, y, X->size()));
  Subalgebra object = subset_algebra(XY, std::move(carrier), "pullback");

  int n = object.algebra->size();
  std::vector<int> p1map(static_cast<std::size_t>(n)), p2map(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    int code = object.carrier[static_cast<std::size_t>(i)];
    p1map[static_cast<std::size_t>(i)] = product_left(code, X->size());
    p2map[static_cast<std::size_t>(i)] = product_right(code, X->size());
  }
  std::vector<int> e1map(static_cast<std::size_t>(X->size()));
  for (int x = 0; x < X->size(); ++x)
    e1map[static_cast<std::size_t>(x)] =
        object.index_of[static_cast<std::size_t>(product_code(x, s(f(x)), X->size()))];
  std::vector<int> e2map(static_cast<std::size_t>(Y->size()));
  for (int y = 0; y < Y->size(); ++y)
    e2map[static_cast<std::size_t>(y)] =
        object.index_of[static_cast<std::size_t>(product_code(r(g(y)), y, X->size()))];

  AlgebraPtr P = object.algebra;
  return SplitPullback{std::move(object),
                       Homomorphism(P, X, std::move(p1map)),
                       Homomorphism(P, Y, std::move(p2map)),
                       Homomorphism(X, P, std::move(e1map)),
                       Homomorphism(Y, P, std::move(e2map))};
}

// True iff the images of e1 and e2 together generate the whole codomain.
inline bool jointly_surjective(const Homomorphism& e1, const Homomorphism& e2) {
  if (e1.cod() != e2.cod() && !same_algebra(*e1.cod(), *e2.cod()))
    throw InvalidArgument("jointly_surjective needs a common codomain");
  std::vector<char> in(static_cast<std::size_t>(e1.cod()->size()), 0);
  std::vector<int> seeds;
  for (int v : e1.map())
    if (!in[static_cast<std::size_t>(v)]) {
      in[static_cast<std::size_t>(v)] = 1;
      seeds.push_back(v);
    }
  for (int v : e2.map())
    if (!in[static_cast<std::size_t>(v)]) {
      in[static_cast<std::size_t>(v)] = 1;
      seeds.push_back(v);
    }
  auto gen = subalgebra_generate(*e1.cod(), seeds);
  return gen.size() == e1.cod()->size();
}

}  // namespace ua
