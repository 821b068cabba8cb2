#pragma once

// Reference implementation of the family-of-sets operations, written for
// obviousness rather than speed. The diagram engine is checked against it.

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "lrux/zdd.hpp"

namespace naive {

template <typename T>
using Family = std::set<std::set<T>>;

template <typename T>
bool is_subset(const std::set<T>& a, const std::set<T>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

template <typename T>
Family<T> family_union(const Family<T>& a, const Family<T>& b) {
  Family<T> out = a;
  out.insert(b.begin(), b.end());
  return out;
}

template <typename T>
Family<T> minimal(const Family<T>& f) {
  Family<T> out;
  for (const auto& s : f) {
    bool dominated = false;
    for (const auto& t : f)
      if (t != s && is_subset(t, s)) {
        dominated = true;
        break;
      }
    if (!dominated) out.insert(s);
  }
  return out;
}

template <typename T>
Family<T> maximal(const Family<T>& f) {
  Family<T> out;
  for (const auto& s : f) {
    bool dominated = false;
    for (const auto& t : f)
      if (t != s && is_subset(s, t)) {
        dominated = true;
        break;
      }
    if (!dominated) out.insert(s);
  }
  return out;
}

template <typename T>
Family<T> insert_element(const Family<T>& f, T v) {
  Family<T> out;
  for (auto s : f) {
    s.insert(v);
    out.insert(std::move(s));
  }
  return out;
}

template <typename T>
Family<T> truncate(const Family<T>& f, std::size_t max_cardinality) {
  Family<T> out;
  for (const auto& s : f)
    if (s.size() <= max_cardinality) out.insert(s);
  return out;
}

template <typename T>
bool has_set_of_size_at_least(const Family<T>& f, std::size_t n) {
  for (const auto& s : f)
    if (s.size() >= n) return true;
  return false;
}

using VarFamily = Family<lrux::ZddManager::Var>;

inline lrux::Zdd to_zdd(lrux::ZddManager& mgr, const VarFamily& f) {
  lrux::Zdd out = mgr.bottom();
  for (const auto& s : f)
    out = mgr.family_union(out, mgr.single_set({s.begin(), s.end()}));
  return out;
}

inline VarFamily from_zdd(const lrux::ZddManager& mgr, lrux::Zdd z) {
  VarFamily out;
  for (const auto& member : mgr.enumerate(z)) out.insert({member.begin(), member.end()});
  return out;
}

}  // namespace naive
