#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace lrux {

class ZddManager;

// Handle to a family of finite sets of variables, canonical within its
// manager: two handles of the same manager are equal iff they denote the
// same family.
struct Zdd {
  const ZddManager* manager = nullptr;
  std::uint32_t ref = 0;

  friend bool operator==(const Zdd&, const Zdd&) = default;
};

// Zero-suppressed decision diagram store with hash-consing and memoized
// operations. Variables are dense indices; a node's variable is strictly
// smaller than its children's, and no node has a bottom 'then' child.
class ZddManager {
 public:
  using Var = std::uint32_t;

  static constexpr std::size_t kDefaultMemoLimit = std::size_t{1} << 20;
  static constexpr std::size_t kDefaultEnumerateCap = std::size_t{1} << 22;

  explicit ZddManager(std::size_t memo_limit = kDefaultMemoLimit);

  Zdd bottom() const { return wrap(kBottomRef); }  // {}
  Zdd unit() const { return wrap(kUnitRef); }      // { {} }

  // Family containing exactly the given set (duplicates tolerated).
  Zdd single_set(std::vector<Var> members);

  Zdd family_union(Zdd s, Zdd t);
  // Subset-minimal (resp. -maximal) members of an arbitrary family.
  Zdd minimal(Zdd s);
  Zdd maximal(Zdd s);
  // Antichain joins: minimal(union), maximal(union).
  Zdd min_union(Zdd s, Zdd t);
  Zdd max_union(Zdd s, Zdd t);
  // Insert v into every member, without antichain reduction.
  Zdd insert_element(Zdd s, Var v);
  // Insert v into every member, then keep the minimal (resp. maximal) sets.
  Zdd add_element_min(Zdd s, Var v);
  Zdd add_element_max(Zdd s, Var v);
  // Members with at most max_cardinality elements.
  Zdd truncate(Zdd s, std::uint32_t max_cardinality);
  bool has_set_of_size_at_least(Zdd s, std::uint32_t n);

  std::uint64_t count(Zdd s);
  // Members as sorted variable lists, lexicographically ordered. Throws
  // std::length_error beyond cap.
  std::vector<std::vector<Var>> enumerate(Zdd s, std::size_t cap = kDefaultEnumerateCap) const;
  // Indented node listing for golden tests; shared nodes print once.
  std::string dump(Zdd s) const;

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t memo_entries() const { return memo_.size(); }
  // Memoization is a pure cache: disabling it (or any flush) must not change
  // results. Exposed for tests.
  void set_memo_enabled(bool on);

 private:
  using Ref = std::uint32_t;
  static constexpr Ref kBottomRef = 0;
  static constexpr Ref kUnitRef = 1;
  static constexpr Var kLeafVar = 0xFFFFFFFFu;

  struct Node {
    Var var;
    Ref hi;  // members containing var, with var removed; never kBottomRef
    Ref lo;  // members not containing var
  };

  enum class Op : std::uint8_t {
    Union,
    Minimal,
    Maximal,
    NotSubset,
    NotSuperset,
    InsertVar,
    Truncate,
    HasAtLeast,
    Count,
  };

  struct MemoKey {
    std::uint8_t op;
    std::uint32_t a;
    std::uint32_t b;
    friend bool operator==(const MemoKey&, const MemoKey&) = default;
  };
  struct MemoKeyHash {
    std::size_t operator()(const MemoKey& k) const;
  };
  struct NodeKey {
    Var var;
    Ref hi;
    Ref lo;
    friend bool operator==(const NodeKey&, const NodeKey&) = default;
  };
  struct NodeKeyHash {
    std::size_t operator()(const NodeKey& k) const;
  };

  Zdd wrap(Ref r) const { return Zdd{this, r}; }
  Ref require(Zdd s) const;  // throws std::invalid_argument on manager mismatch

  Var var_of(Ref r) const { return nodes_[r].var; }
  Ref make_node(Var var, Ref hi, Ref lo);

  bool memo_find(Op op, Ref a, std::uint32_t b, std::uint64_t& out) const;
  void memo_store(Op op, Ref a, std::uint32_t b, std::uint64_t value);

  Ref do_union(Ref a, Ref b);
  Ref do_minimal(Ref a);
  Ref do_maximal(Ref a);
  Ref do_not_subset(Ref a, Ref b);    // members of a included in no member of b
  Ref do_not_superset(Ref a, Ref b);  // members of a including no member of b
  Ref do_insert_var(Ref a, Var v);
  Ref do_truncate(Ref a, std::uint32_t n);
  bool do_has_at_least(Ref a, std::uint32_t n);
  std::uint64_t do_count(Ref a);
  bool contains_empty_set(Ref a) const;

  std::vector<Node> nodes_;
  std::unordered_map<NodeKey, Ref, NodeKeyHash> unique_;
  std::unordered_map<MemoKey, std::uint64_t, MemoKeyHash> memo_;
  std::size_t memo_limit_;
  bool memo_enabled_ = true;
};

}  // namespace lrux
