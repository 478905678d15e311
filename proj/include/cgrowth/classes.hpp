#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "cgrowth/error.hpp"
#include "cgrowth/group.hpp"

namespace cgrowth {

struct ConjClass {
  Group::Elem rep = 0;  // least member
  ElemSet members;
  std::size_t size() const noexcept { return members.size(); }
};

using ClassRef = std::size_t;

/// Conjugacy classes of an enumerated group, ordered by size then representative.
class ClassTable {
 public:
  ClassTable() = default;

  Group const& group() const { return *g_; }
  std::vector<ConjClass> const& classes() const noexcept { return classes_; }
  std::size_t count() const noexcept { return classes_.size(); }
  ConjClass const& operator[](ClassRef c) const { return classes_.at(c); }

  ClassRef class_of(Group::Elem x) const {
    if (x >= class_of_.size()) fail(Errc::NotFound, "element outside the class table");
    return class_of_[x];
  }

  ClassRef identity_class() const { return class_of(g_->identity()); }

  std::size_t min_nontrivial_size() const {
    std::size_t m = std::numeric_limits<std::size_t>::max();
    for (ClassRef c = 0; c < classes_.size(); ++c)
      if (c != identity_class()) m = std::min(m, classes_[c].size());
    return m;
  }

  friend ClassTable classes_enumerate(Group const& G);

 private:
  Group const* g_ = nullptr;
  std::vector<ConjClass> classes_;
  std::vector<ClassRef> class_of_;
};

/// Orbits under conjugation by the generators. Scanning elements in index
/// order makes the first element of each orbit its least member.
inline ClassTable classes_enumerate(Group const& G) {
  if (!G.enumerated()) fail(Errc::NotEnumerated, G.name() + " has not been enumerated");
  std::size_t const N = G.order();
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> orbit_id(N, kUnset);
  std::vector<std::vector<Group::Elem>> orbits;
  auto const& gens = G.generator_indices();
  for (Group::Elem x = 0; x < N; ++x) {
    if (orbit_id[x] != kUnset) continue;
    std::size_t const id = orbits.size();
    std::vector<Group::Elem> orbit{x};
    orbit_id[x] = id;
    for (std::size_t i = 0; i < orbit.size(); ++i) {
      for (auto g : gens) {
        auto const y = G.conj(orbit[i], g);
        if (orbit_id[y] == kUnset) {
          orbit_id[y] = id;
          orbit.push_back(y);
        }
      }
    }
    orbits.push_back(std::move(orbit));
  }
  std::vector<std::size_t> order(orbits.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (orbits[a].size() != orbits[b].size()) return orbits[a].size() < orbits[b].size();
    return orbits[a].front() < orbits[b].front();
  });
  ClassTable t;
  t.g_ = &G;
  t.class_of_.assign(N, 0);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    auto& orbit = orbits[order[pos]];
    ConjClass c;
    c.rep = orbit.front();
    for (auto y : orbit) t.class_of_[y] = pos;
    c.members = ElemSet(G, std::move(orbit));
    t.classes_.push_back(std::move(c));
  }
  return t;
}

inline ClassRef class_of(Group::Elem x, ClassTable const& T) { return T.class_of(x); }

struct BoundCheck {
  std::string name;
  double measured = 0;
  double bound = 0;
  bool pass = false;
};

struct LieBoundsReport {
  std::string group;
  int r = 0;
  std::uint64_t q = 0;
  std::size_t order = 0;
  std::size_t class_count = 0;
  std::size_t min_nontrivial = 0;
  std::vector<BoundCheck> checks;
  bool pass() const {
    return std::all_of(checks.begin(), checks.end(), [](auto const& c) { return c.pass; });
  }
};

/// Minimum nontrivial class size >= q^r, |G| <= q^{8r^2}, class count <= (6q)^r.
/// Comparisons are done in log space so large exponents do not overflow.
inline LieBoundsReport verify_lie_bounds(Group const& G, ClassTable const& T) {
  LieBoundsReport rep;
  rep.group = G.name();
  rep.r = G.rank();
  rep.q = G.q();
  rep.order = G.order();
  rep.class_count = T.count();
  rep.min_nontrivial = T.min_nontrivial_size();
  double const lq = std::log(static_cast<double>(G.q()));
  double const r = rep.r;
  auto const check = [](std::string name, double measured, double lhs, double bound, double rhs, bool ge) {
    bool pass = ge ? lhs >= rhs - 1e-12 : lhs <= rhs + 1e-12;
    return BoundCheck{std::move(name), measured, bound, pass};
  };
  double const qr = std::pow(static_cast<double>(G.q()), r);
  rep.checks.push_back(check("min nontrivial class >= q^r", static_cast<double>(rep.min_nontrivial),
                             std::log(static_cast<double>(rep.min_nontrivial)), qr, r * lq, true));
  rep.checks.push_back(check("|G| <= q^(8r^2)", static_cast<double>(rep.order), std::log(static_cast<double>(rep.order)),
                             std::pow(static_cast<double>(G.q()), 8 * r * r), 8 * r * r * lq, false));
  double const six_q_r = std::pow(6.0 * static_cast<double>(G.q()), r);
  rep.checks.push_back(check("class count <= (6q)^r", static_cast<double>(rep.class_count),
                             std::log(static_cast<double>(rep.class_count)), six_q_r,
                             r * std::log(6.0 * static_cast<double>(G.q())), false));
  return rep;
}

/// Union of the nontrivial classes of size < threshold.
inline ElemSet small_class_union(ClassTable const& T, double threshold) {
  if (!(threshold >= 0)) fail(Errc::InvalidArgument, "threshold must be >= 0");
  std::vector<Group::Elem> v;
  for (ClassRef c = 0; c < T.count(); ++c) {
    if (c == T.identity_class()) continue;
    if (static_cast<double>(T[c].size()) < threshold) v.insert(v.end(), T[c].members.begin(), T[c].members.end());
  }
  return ElemSet(T.group(), std::move(v));
}

}  // namespace cgrowth
