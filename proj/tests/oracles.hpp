#pragma once

// Reference computations for the tests. They work on matrices and canonical
// keys directly, without the index tables that the library uses.

#include <set>
#include <string>
#include <utility>
#include <vector>

#include <cgrowth/group.hpp>

namespace oracle {

using cgrowth::Group;
using cgrowth::Matrix;

inline std::set<std::uint64_t> keys_of(Group const& G, std::vector<Matrix> const& ms) {
  std::set<std::uint64_t> out;
  for (auto const& m : ms) out.insert(G.key(G.canonical(m)));
  return out;
}

/// Keys of Π (A^{o_i})^{h_i}, multiplied out matrix by matrix.
inline std::set<std::uint64_t> word_product(Group const& G, std::vector<Matrix> const& A,
                                            std::vector<std::pair<Matrix, int>> const& word) {
  auto const& ops = G.ops();
  std::set<std::uint64_t> acc;
  bool first = true;
  for (auto const& [h, o] : word) {
    Matrix const hi = ops.inv(h);
    std::vector<Matrix> factor;
    for (auto const& a : A) factor.push_back(ops.mul(ops.mul(hi, o > 0 ? a : ops.inv(a)), h));
    if (first) {
      acc = keys_of(G, factor);
      first = false;
      continue;
    }
    std::set<std::uint64_t> next;
    for (auto k : acc) {
      Matrix const x = G.from_key(k);
      for (auto const& f : factor) next.insert(G.key(G.canonical(ops.mul(x, f))));
    }
    acc = std::move(next);
  }
  return acc;
}

inline std::size_t word_product_size(Group const& G, std::vector<Matrix> const& A,
                                     std::vector<std::pair<Matrix, int>> const& word) {
  return word_product(G, A, word).size();
}

/// Group order from the closed formula |SL(n,q)| / |centre|.
inline std::uint64_t expected_order(cgrowth::Family f, int n, std::uint64_t q) {
  std::uint64_t o = 1;
  std::uint64_t qn = 1;
  for (int i = 0; i < n; ++i) qn *= q;
  for (int i = 0; i < n; ++i) {
    std::uint64_t qi = 1;
    for (int j = 0; j < i; ++j) qi *= q;
    o *= qn - qi;
  }
  o /= q - 1;
  if (f == cgrowth::Family::PSL) {
    std::uint64_t a = n, b = q - 1;
    while (b) {
      auto t = a % b;
      a = b;
      b = t;
    }
    o /= a;
  }
  return o;
}

}  // namespace oracle
