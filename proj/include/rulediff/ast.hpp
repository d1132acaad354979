#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rulediff/value.hpp"

namespace rulediff {

enum class ExprKind {
  And,         // children: [lhs, rhs]
  Or,          // children: [lhs, rhs]
  Not,         // children: [operand]
  Implies,     // children: [left, right]
  Comparison,  // children: [lhs, rhs], op in cmp
  Inclusion,   // children: [lhs, ListLiteral], op in inc
  StringPred,  // children: [Variable, Literal(text)], op in str
  Substring,   // leaf: var/from/to, 1-based inclusive indices
  Variable,    // leaf: var
  Literal,     // leaf: literal
  ListLiteral, // children: Literal nodes, non-empty
};

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };
enum class IncOp { In, NotIn };
enum class StrOp { StartsWith, EndsWith };

std::string to_string(CmpOp op);
std::string to_string(IncOp op);
std::string to_string(StrOp op);

// One AST node; subtrees are held by value so expressions copy and compare
// structurally.
struct Expr {
  ExprKind kind = ExprKind::Literal;
  CmpOp cmp = CmpOp::Eq;
  IncOp inc = IncOp::In;
  StrOp str = StrOp::StartsWith;
  std::string var;
  Value lit = Null{};
  std::int64_t from = 0;
  std::int64_t to = 0;
  std::vector<Expr> children;

  bool operator==(const Expr&) const = default;

  static Expr and_of(Expr l, Expr r);
  static Expr or_of(Expr l, Expr r);
  static Expr not_of(Expr e);
  static Expr implies(Expr l, Expr r);
  static Expr comparison(CmpOp op, Expr l, Expr r);
  static Expr inclusion(IncOp op, Expr lhs, std::vector<Value> items);
  static Expr string_pred(StrOp op, std::string var, std::string prefix);
  static Expr substring(std::string var, std::int64_t from, std::int64_t to);
  static Expr variable(std::string name);
  static Expr literal(Value v);
};

// Child-index path from the root; {} addresses the root itself.
using Path = std::vector<int>;

std::string to_string(const Path& p);

// Returns nullptr when the path walks off the tree.
const Expr* node_at(const Expr& root, const Path& path);

// Copy of `root` with the node at `path` replaced; throws std::out_of_range
// for an invalid path.
Expr with_node_replaced(const Expr& root, const Path& path, Expr replacement);

// Pre-order visit; the callback receives each node with its path.
void visit_preorder(const Expr& root,
                    const std::function<void(const Expr&, const Path&)>& fn);

// Number of nodes at which the two trees differ (children compared
// positionally; differing kinds or payloads count the whole subtree's root).
int tree_diff_size(const Expr& a, const Expr& b);

}  // namespace rulediff
