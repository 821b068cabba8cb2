#include "lrux/zdd.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace lrux {

namespace {

inline std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
}

}  // namespace

std::size_t ZddManager::MemoKeyHash::operator()(const MemoKey& k) const {
  std::size_t h = k.op;
  h = hash_combine(h, k.a);
  return hash_combine(h, k.b);
}

std::size_t ZddManager::NodeKeyHash::operator()(const NodeKey& k) const {
  std::size_t h = k.var;
  h = hash_combine(h, k.hi);
  return hash_combine(h, k.lo);
}

ZddManager::ZddManager(std::size_t memo_limit) : memo_limit_(memo_limit) {
  nodes_.push_back({kLeafVar, kBottomRef, kBottomRef});  // bottom
  nodes_.push_back({kLeafVar, kUnitRef, kUnitRef});      // unit
}

ZddManager::Ref ZddManager::require(Zdd s) const {
  if (s.manager != this) throw std::invalid_argument("zdd handle belongs to a different manager");
  return s.ref;
}

ZddManager::Ref ZddManager::make_node(Var var, Ref hi, Ref lo) {
  if (hi == kBottomRef) return lo;  // zero-suppression
  assert(var < var_of(hi) && var < var_of(lo));
  const NodeKey key{var, hi, lo};
  const auto it = unique_.find(key);
  if (it != unique_.end()) return it->second;
  const Ref r = static_cast<Ref>(nodes_.size());
  nodes_.push_back({var, hi, lo});
  unique_.emplace(key, r);
  return r;
}

bool ZddManager::memo_find(Op op, Ref a, std::uint32_t b, std::uint64_t& out) const {
  if (!memo_enabled_) return false;
  const auto it = memo_.find({static_cast<std::uint8_t>(op), a, b});
  if (it == memo_.end()) return false;
  out = it->second;
  return true;
}

void ZddManager::memo_store(Op op, Ref a, std::uint32_t b, std::uint64_t value) {
  if (!memo_enabled_) return;
  if (memo_.size() >= memo_limit_) memo_.clear();  // full flush under pressure
  memo_.emplace(MemoKey{static_cast<std::uint8_t>(op), a, b}, value);
}

void ZddManager::set_memo_enabled(bool on) {
  memo_enabled_ = on;
  if (!on) memo_.clear();
}

Zdd ZddManager::single_set(std::vector<Var> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  Ref r = kUnitRef;
  for (auto it = members.rbegin(); it != members.rend(); ++it) r = make_node(*it, r, kBottomRef);
  return wrap(r);
}

ZddManager::Ref ZddManager::do_union(Ref a, Ref b) {
  if (a == b || b == kBottomRef) return a;
  if (a == kBottomRef) return b;
  if (a > b) std::swap(a, b);  // commutative; normalize the memo key
  std::uint64_t hit;
  if (memo_find(Op::Union, a, b, hit)) return static_cast<Ref>(hit);

  Ref r;
  if (a == kUnitRef) {
    const Node& nb = nodes_[b];
    r = make_node(nb.var, nb.hi, do_union(kUnitRef, nb.lo));
  } else {
    const Node na = nodes_[a];
    const Node nb = nodes_[b];
    if (na.var == nb.var)
      r = make_node(na.var, do_union(na.hi, nb.hi), do_union(na.lo, nb.lo));
    else if (na.var < nb.var)
      r = make_node(na.var, na.hi, do_union(na.lo, b));
    else
      r = make_node(nb.var, nb.hi, do_union(a, nb.lo));
  }
  memo_store(Op::Union, a, b, r);
  return r;
}

bool ZddManager::contains_empty_set(Ref a) const {
  while (a > kUnitRef) a = nodes_[a].lo;
  return a == kUnitRef;
}

// {x in a | no y in b with x subseteq y}
ZddManager::Ref ZddManager::do_not_subset(Ref a, Ref b) {
  if (a == kBottomRef || b == kBottomRef) return a;
  if (a == kUnitRef) return kBottomRef;  // {} is included in any member of b
  std::uint64_t hit;
  if (memo_find(Op::NotSubset, a, b, hit)) return static_cast<Ref>(hit);

  const Node na = nodes_[a];
  Ref r;
  if (b == kUnitRef || na.var < var_of(b)) {
    // members containing na.var cannot be included in any member of b
    r = make_node(na.var, na.hi, do_not_subset(na.lo, b));
  } else {
    const Node nb = nodes_[b];
    if (na.var == nb.var)
      r = make_node(na.var, do_not_subset(na.hi, nb.hi), do_not_subset(na.lo, do_union(nb.lo, nb.hi)));
    else  // nb.var < na.var: drop b's variable from consideration
      r = do_not_subset(a, do_union(nb.lo, nb.hi));
  }
  memo_store(Op::NotSubset, a, b, r);
  return r;
}

// {x in a | no y in b with y subseteq x}
ZddManager::Ref ZddManager::do_not_superset(Ref a, Ref b) {
  if (a == kBottomRef || b == kBottomRef) return a;
  if (contains_empty_set(b)) return kBottomRef;
  if (a == kUnitRef) return a;
  std::uint64_t hit;
  if (memo_find(Op::NotSuperset, a, b, hit)) return static_cast<Ref>(hit);

  const Node na = nodes_[a];
  const Var vb = var_of(b);
  Ref r;
  if (na.var < vb) {
    r = make_node(na.var, do_not_superset(na.hi, b), do_not_superset(na.lo, b));
  } else {
    const Node nb = nodes_[b];
    if (na.var == nb.var)
      r = make_node(na.var, do_not_superset(na.hi, do_union(nb.lo, nb.hi)), do_not_superset(na.lo, nb.lo));
    else  // vb < na.var: members of b containing vb can be included in nothing from a
      r = do_not_superset(a, nb.lo);
  }
  memo_store(Op::NotSuperset, a, b, r);
  return r;
}

ZddManager::Ref ZddManager::do_minimal(Ref a) {
  if (a <= kUnitRef) return a;
  std::uint64_t hit;
  if (memo_find(Op::Minimal, a, 0, hit)) return static_cast<Ref>(hit);
  const Node na = nodes_[a];
  const Ref lo = do_minimal(na.lo);
  // a member {var} + x survives only if no member of lo is included in x
  const Ref r = make_node(na.var, do_not_superset(do_minimal(na.hi), lo), lo);
  memo_store(Op::Minimal, a, 0, r);
  return r;
}

ZddManager::Ref ZddManager::do_maximal(Ref a) {
  if (a <= kUnitRef) return a;
  std::uint64_t hit;
  if (memo_find(Op::Maximal, a, 0, hit)) return static_cast<Ref>(hit);
  const Node na = nodes_[a];
  const Ref hi = do_maximal(na.hi);
  // a member x without var survives only if included in no member of hi
  const Ref r = make_node(na.var, hi, do_not_subset(do_maximal(na.lo), hi));
  memo_store(Op::Maximal, a, 0, r);
  return r;
}

ZddManager::Ref ZddManager::do_insert_var(Ref a, Var v) {
  if (a == kBottomRef) return a;
  if (a == kUnitRef || var_of(a) > v) return make_node(v, a, kBottomRef);
  std::uint64_t hit;
  if (memo_find(Op::InsertVar, a, v, hit)) return static_cast<Ref>(hit);
  const Node na = nodes_[a];
  const Ref r = na.var == v ? make_node(v, do_union(na.hi, na.lo), kBottomRef)
                            : make_node(na.var, do_insert_var(na.hi, v), do_insert_var(na.lo, v));
  memo_store(Op::InsertVar, a, v, r);
  return r;
}

ZddManager::Ref ZddManager::do_truncate(Ref a, std::uint32_t n) {
  if (a <= kUnitRef) return a;
  std::uint64_t hit;
  if (memo_find(Op::Truncate, a, n, hit)) return static_cast<Ref>(hit);
  const Node na = nodes_[a];
  const Ref r = n == 0 ? do_truncate(na.lo, 0) : make_node(na.var, do_truncate(na.hi, n - 1), do_truncate(na.lo, n));
  memo_store(Op::Truncate, a, n, r);
  return r;
}

bool ZddManager::do_has_at_least(Ref a, std::uint32_t n) {
  if (a == kBottomRef) return false;
  if (n == 0) return true;
  if (a == kUnitRef) return false;
  std::uint64_t hit;
  if (memo_find(Op::HasAtLeast, a, n, hit)) return hit != 0;
  const Node na = nodes_[a];
  const bool r = do_has_at_least(na.hi, n - 1) || do_has_at_least(na.lo, n);
  memo_store(Op::HasAtLeast, a, n, r ? 1 : 0);
  return r;
}

std::uint64_t ZddManager::do_count(Ref a) {
  if (a <= kUnitRef) return a;
  std::uint64_t hit;
  if (memo_find(Op::Count, a, 0, hit)) return hit;
  const Node na = nodes_[a];
  const std::uint64_t r = do_count(na.hi) + do_count(na.lo);
  memo_store(Op::Count, a, 0, r);
  return r;
}

Zdd ZddManager::family_union(Zdd s, Zdd t) { return wrap(do_union(require(s), require(t))); }
Zdd ZddManager::minimal(Zdd s) { return wrap(do_minimal(require(s))); }
Zdd ZddManager::maximal(Zdd s) { return wrap(do_maximal(require(s))); }
Zdd ZddManager::min_union(Zdd s, Zdd t) { return wrap(do_minimal(do_union(require(s), require(t)))); }
Zdd ZddManager::max_union(Zdd s, Zdd t) { return wrap(do_maximal(do_union(require(s), require(t)))); }
Zdd ZddManager::insert_element(Zdd s, Var v) { return wrap(do_insert_var(require(s), v)); }
Zdd ZddManager::add_element_min(Zdd s, Var v) { return wrap(do_minimal(do_insert_var(require(s), v))); }
Zdd ZddManager::add_element_max(Zdd s, Var v) { return wrap(do_maximal(do_insert_var(require(s), v))); }
Zdd ZddManager::truncate(Zdd s, std::uint32_t max_cardinality) { return wrap(do_truncate(require(s), max_cardinality)); }
bool ZddManager::has_set_of_size_at_least(Zdd s, std::uint32_t n) { return do_has_at_least(require(s), n); }
std::uint64_t ZddManager::count(Zdd s) { return do_count(require(s)); }

std::vector<std::vector<ZddManager::Var>> ZddManager::enumerate(Zdd s, std::size_t cap) const {
  std::vector<std::vector<Var>> out;
  std::vector<Var> prefix;
  const auto walk = [&](auto&& self, Ref r) -> void {
    if (r == kBottomRef) return;
    if (r == kUnitRef) {
      if (out.size() >= cap) throw std::length_error("zdd enumeration cap exceeded");
      out.push_back(prefix);
      return;
    }
    const Node& n = nodes_[r];
    prefix.push_back(n.var);
    self(self, n.hi);
    prefix.pop_back();
    self(self, n.lo);
  };
  walk(walk, require(s));
  std::sort(out.begin(), out.end());
  return out;
}

std::string ZddManager::dump(Zdd s) const {
  std::ostringstream out;
  std::unordered_set<Ref> seen;
  const auto walk = [&](auto&& self, Ref r, int depth) -> void {
    for (int i = 0; i < depth; ++i) out << "  ";
    if (r == kBottomRef) {
      out << "bottom\n";
      return;
    }
    if (r == kUnitRef) {
      out << "unit\n";
      return;
    }
    if (!seen.insert(r).second) {
      out << "@" << r << " (shared)\n";
      return;
    }
    const Node& n = nodes_[r];
    out << "@" << r << " var=" << n.var << "\n";
    for (int i = 0; i < depth; ++i) out << "  ";
    out << "then:\n";
    self(self, n.hi, depth + 1);
    for (int i = 0; i < depth; ++i) out << "  ";
    out << "else:\n";
    self(self, n.lo, depth + 1);
  };
  walk(walk, require(s), 0);
  return out.str();
}

}  // namespace lrux
