#pragma once

// Brute-force reference implementations used only by tests. These stay
// independent of the library code paths they are checking: partitions are
// enumerated directly, homomorphisms by trying every function, term
// functions by depth-stratified application.

#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "ua/algebra.hpp"
#include "ua/congruence.hpp"

namespace ua_test {

// All partitions of {0..n-1} as canonical block-id vectors (block id = least
// member), via restricted-growth strings.
inline std::vector<std::vector<int>> all_partitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> rgs(static_cast<std::size_t>(n), 0);
  auto emit = [&] {
    std::vector<int> first(static_cast<std::size_t>(n), -1);
    std::vector<int> canon(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      int g = rgs[static_cast<std::size_t>(i)];
      if (first[static_cast<std::size_t>(g)] < 0) first[static_cast<std::size_t>(g)] = i;
      canon[static_cast<std::size_t>(i)] = first[static_cast<std::size_t>(g)];
    }
    out.push_back(std::move(canon));
  };
  std::function<void(int, int)> rec = [&](int i, int max_group) {
    if (i == n) {
      emit();
      return;
    }
    for (int g = 0; g <= max_group + 1 && g < n; ++g) {
      rgs[static_cast<std::size_t>(i)] = g;
      rec(i + 1, std::max(max_group, g));
    }
  };
  rec(0, -1);
  return out;
}

inline bool partition_compatible(const ua::FiniteAlgebra& A, const std::vector<int>& canon) {
  std::vector<int> args, reps;
  for (int op = 0; op < A.sig().op_count(); ++op) {
    int r = A.sig().arity(op);
    const std::vector<int>& table = A.table(op);
    args.assign(static_cast<std::size_t>(r), 0);
    reps.assign(static_cast<std::size_t>(r), 0);
    for (std::size_t idx = 0; idx < table.size(); ++idx) {
      for (std::size_t i = 0; i < args.size(); ++i)
        reps[i] = canon[static_cast<std::size_t>(args[i])];
      if (canon[static_cast<std::size_t>(table[idx])] !=
          canon[static_cast<std::size_t>(A.apply(op, reps))])
        return false;
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (++args[i] < A.size()) break;
        args[i] = 0;
      }
    }
  }
  return true;
}

// Every congruence of A by filtering all partitions. Only usable for tiny A.
inline std::vector<std::vector<int>> brute_force_congruences(const ua::AlgebraPtr& A) {
  std::vector<std::vector<int>> out;
  for (auto& p : all_partitions(A->size()))
    if (partition_compatible(*A, p)) out.push_back(p);
  std::sort(out.begin(), out.end());
  return out;
}

// All homomorphisms A -> B by testing every one of the |B|^|A| functions
// against the checking constructor.
inline std::vector<std::vector<int>> brute_force_homs(const ua::AlgebraPtr& A,
                                                      const ua::AlgebraPtr& B) {
  std::vector<std::vector<int>> out;
  std::size_t total = ua::pow_checked(static_cast<std::size_t>(B->size()), A->size(),
                                      std::size_t{100000000}, "hom brute force");
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<int> map = ua::decode_tuple(code, B->size(), A->size());
    try {
      ua::Homomorphism h(A, B, map);
      out.push_back(map);
    } catch (const ua::InvalidArgument&) {
    }
  }
  return out;
}

// The set of w-ary term functions on A reachable by terms of depth <= depth
// (variables have depth 0, constants depth 1). Independent closure oracle
// for free-algebra sizes.
inline std::set<std::vector<int>> term_functions_to_depth(const ua::AlgebraPtr& A, int width,
                                                          int depth) {
  std::set<std::vector<int>> funcs;
  for (int i = 0; i < width; ++i) funcs.insert(ua::term_function(ua::Term::var(i), *A, width));
  for (int d = 0; d < depth; ++d) {
    std::set<std::vector<int>> next = funcs;
    std::vector<std::vector<int>> list(funcs.begin(), funcs.end());
    for (int op = 0; op < A->sig().op_count(); ++op) {
      int r = A->sig().arity(op);
      std::size_t n = list.size();
      if (r > 0 && n == 0) continue;
      std::size_t total = 1;
      for (int i = 0; i < r; ++i) total *= n;
      std::vector<int> idx(static_cast<std::size_t>(r), 0);
      std::vector<int> point(static_cast<std::size_t>(r));
      for (std::size_t c = 0; c < total; ++c) {
        std::size_t len = list.empty() ? ua::pow_checked(static_cast<std::size_t>(A->size()),
                                                         width, std::size_t{1} << 30, "oracle")
                                       : list[0].size();
        std::vector<int> val(len);
        for (std::size_t pos = 0; pos < len; ++pos) {
          for (int i = 0; i < r; ++i)
            point[static_cast<std::size_t>(i)] =
                list[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])][pos];
          val[pos] = A->apply(op, point);
        }
        next.insert(std::move(val));
        for (int i = 0; i < r; ++i) {
          if (++idx[static_cast<std::size_t>(i)] < static_cast<int>(n)) break;
          idx[static_cast<std::size_t>(i)] = 0;
        }
      }
    }
    if (next == funcs) break;
    funcs = std::move(next);
  }
  return funcs;
}

}  // namespace ua_test
