#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ua/algebra.hpp"

namespace ua {

inline SignaturePtr lattice_signature() {
  static SignaturePtr sig =
      std::make_shared<const Signature>(std::vector<OpSym>{{"meet", 2}, {"join", 2}});
  return sig;
}

namespace detail {

// Builds meet/join tables from a partial order given by its covering pairs.
// Throws unless every pair of elements has a unique glb and lub.
inline AlgebraPtr lattice_from_covers(std::string name, int size,
                                      const std::vector<std::pair<int, int>>& covers) {
  std::vector<std::vector<char>> leq(static_cast<std::size_t>(size),
                                     std::vector<char>(static_cast<std::size_t>(size), 0));
  for (int i = 0; i < size; ++i) leq[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
  for (auto [lo, hi] : covers) leq[static_cast<std::size_t>(lo)][static_cast<std::size_t>(hi)] = 1;
  for (int k = 0; k < size; ++k)
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j)
        if (leq[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] &&
            leq[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)])
          leq[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1;

  auto bound = [&](int a, int b, bool lower) -> int {
    int best = -1;
    for (int c = 0; c < size; ++c) {
      bool ok = lower ? (leq[static_cast<std::size_t>(c)][static_cast<std::size_t>(a)] &&
                         leq[static_cast<std::size_t>(c)][static_cast<std::size_t>(b)])
                      : (leq[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)] &&
                         leq[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)]);
      if (!ok) continue;
      if (best < 0)
        best = c;
      else if (lower ? leq[static_cast<std::size_t>(best)][static_cast<std::size_t>(c)]
                     : leq[static_cast<std::size_t>(c)][static_cast<std::size_t>(best)])
        best = c;
    }
    if (best < 0) throw InvalidArgument("poset '" + name + "' is not a lattice");
    // confirm the candidate really bounds everything it should
    for (int c = 0; c < size; ++c) {
      bool ok = lower ? (leq[static_cast<std::size_t>(c)][static_cast<std::size_t>(a)] &&
                         leq[static_cast<std::size_t>(c)][static_cast<std::size_t>(b)])
                      : (leq[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)] &&
                         leq[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)]);
      if (ok && !(lower ? leq[static_cast<std::size_t>(c)][static_cast<std::size_t>(best)]
                        : leq[static_cast<std::size_t>(best)][static_cast<std::size_t>(c)]))
        throw InvalidArgument("poset '" + name + "' is not a lattice");
    }
    return best;
  };

  std::vector<int> meet(static_cast<std::size_t>(size) * static_cast<std::size_t>(size));
  std::vector<int> join(meet.size());
  for (int b = 0; b < size; ++b)
    for (int a = 0; a < size; ++a) {
      std::size_t idx = static_cast<std::size_t>(a) +
                        static_cast<std::size_t>(size) * static_cast<std::size_t>(b);
      meet[idx] = bound(a, b, true);
      join[idx] = bound(a, b, false);
    }
  return FiniteAlgebra::make(std::move(name), lattice_signature(), size,
                             {std::move(meet), std::move(join)});
}

}  // namespace detail

// The two-element lattice; generates the variety of distributive lattices.
inline AlgebraPtr builtin_lattice2() {
  static AlgebraPtr a = detail::lattice_from_covers("lattice2", 2, {{0, 1}});
  return a;
}

// The pentagon: 0 < 1 < 4 and 0 < 2 < 3 < 4, with 1 incomparable to 2, 3.
inline AlgebraPtr builtin_n5() {
  static AlgebraPtr a =
      detail::lattice_from_covers("n5", 5, {{0, 1}, {1, 4}, {0, 2}, {2, 3}, {3, 4}});
  return a;
}

// The diamond: three atoms 1, 2, 3 between 0 and 4.
inline AlgebraPtr builtin_m3() {
  static AlgebraPtr a = detail::lattice_from_covers(
      "m3", 5, {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {2, 4}, {3, 4}});
  return a;
}

// Z/2 with xor and the constant 0; generates the variety of Boolean groups.
inline AlgebraPtr builtin_z2xor() {
  static AlgebraPtr a = [] {
    SignaturePtr sig =
        std::make_shared<const Signature>(std::vector<OpSym>{{"xor", 2}, {"zero", 0}});
    return FiniteAlgebra::make("z2xor", sig, 2, {{0, 1, 1, 0}, {0}});
  }();
  return a;
}

// A two-element set with no operations.
inline AlgebraPtr builtin_set2() {
  static AlgebraPtr a = [] {
    SignaturePtr sig = std::make_shared<const Signature>(std::vector<OpSym>{});
    return FiniteAlgebra::make("set2", sig, 2, {});
  }();
  return a;
}

inline std::optional<AlgebraPtr> find_builtin_algebra(const std::string& name) {
  if (name == "lattice2") return builtin_lattice2();
  if (name == "n5") return builtin_n5();
  if (name == "m3") return builtin_m3();
  if (name == "z2xor") return builtin_z2xor();
  if (name == "set2") return builtin_set2();
  return std::nullopt;
}

inline const std::vector<std::string>& builtin_algebra_names() {
  static std::vector<std::string> names = {"lattice2", "n5", "m3", "z2xor", "set2"};
  return names;
}

}  // namespace ua
