#include "rulediff/ast.hpp"

#include <stdexcept>
#include <utility>

namespace rulediff {

std::string to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

std::string to_string(IncOp op) { return op == IncOp::In ? "in" : "notIn"; }

std::string to_string(StrOp op) {
  return op == StrOp::StartsWith ? "startswith" : "endswith";
}

Expr Expr::and_of(Expr l, Expr r) {
  Expr e;
  e.kind = ExprKind::And;
  e.children = {std::move(l), std::move(r)};
  return e;
}

Expr Expr::or_of(Expr l, Expr r) {
  Expr e;
  e.kind = ExprKind::Or;
  e.children = {std::move(l), std::move(r)};
  return e;
}

Expr Expr::not_of(Expr inner) {
  Expr e;
  e.kind = ExprKind::Not;
  e.children = {std::move(inner)};
  return e;
}

Expr Expr::implies(Expr l, Expr r) {
  Expr e;
  e.kind = ExprKind::Implies;
  e.children = {std::move(l), std::move(r)};
  return e;
}

Expr Expr::comparison(CmpOp op, Expr l, Expr r) {
  Expr e;
  e.kind = ExprKind::Comparison;
  e.cmp = op;
  e.children = {std::move(l), std::move(r)};
  return e;
}

Expr Expr::inclusion(IncOp op, Expr lhs, std::vector<Value> items) {
  Expr list;
  list.kind = ExprKind::ListLiteral;
  for (auto& v : items) list.children.push_back(Expr::literal(std::move(v)));
  Expr e;
  e.kind = ExprKind::Inclusion;
  e.inc = op;
  e.children = {std::move(lhs), std::move(list)};
  return e;
}

Expr Expr::string_pred(StrOp op, std::string var, std::string prefix) {
  Expr e;
  e.kind = ExprKind::StringPred;
  e.str = op;
  e.children = {Expr::variable(std::move(var)), Expr::literal(std::move(prefix))};
  return e;
}

Expr Expr::substring(std::string var, std::int64_t from, std::int64_t to) {
  Expr e;
  e.kind = ExprKind::Substring;
  e.var = std::move(var);
  e.from = from;
  e.to = to;
  return e;
}

Expr Expr::variable(std::string name) {
  Expr e;
  e.kind = ExprKind::Variable;
  e.var = std::move(name);
  return e;
}

Expr Expr::literal(Value v) {
  Expr e;
  e.kind = ExprKind::Literal;
  e.lit = std::move(v);
  return e;
}

std::string to_string(const Path& p) {
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out.push_back('.');
    out += std::to_string(p[i]);
  }
  return out;
}

const Expr* node_at(const Expr& root, const Path& path) {
  const Expr* cur = &root;
  for (int idx : path) {
    if (idx < 0 || static_cast<std::size_t>(idx) >= cur->children.size())
      return nullptr;
    cur = &cur->children[static_cast<std::size_t>(idx)];
  }
  return cur;
}

Expr with_node_replaced(const Expr& root, const Path& path, Expr replacement) {
  if (path.empty()) return replacement;
  int idx = path.front();
  if (idx < 0 || static_cast<std::size_t>(idx) >= root.children.size())
    throw std::out_of_range("invalid AST path");
  Expr copy = root;
  copy.children[static_cast<std::size_t>(idx)] = with_node_replaced(
      root.children[static_cast<std::size_t>(idx)],
      Path(path.begin() + 1, path.end()), std::move(replacement));
  return copy;
}

static void visit_impl(const Expr& node, Path& path,
                       const std::function<void(const Expr&, const Path&)>& fn) {
  fn(node, path);
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    path.push_back(static_cast<int>(i));
    visit_impl(node.children[i], path, fn);
    path.pop_back();
  }
}

void visit_preorder(const Expr& root,
                    const std::function<void(const Expr&, const Path&)>& fn) {
  Path path;
  visit_impl(root, path, fn);
}

static int node_count(const Expr& e) {
  int n = 1;
  for (const auto& c : e.children) n += node_count(c);
  return n;
}

static bool payload_equal(const Expr& a, const Expr& b) {
  return a.kind == b.kind && a.cmp == b.cmp && a.inc == b.inc &&
         a.str == b.str && a.var == b.var && a.lit == b.lit &&
         a.from == b.from && a.to == b.to;
}

int tree_diff_size(const Expr& a, const Expr& b) {
  int diff = payload_equal(a, b) ? 0 : 1;
  std::size_t common = std::min(a.children.size(), b.children.size());
  for (std::size_t i = 0; i < common; ++i)
    diff += tree_diff_size(a.children[i], b.children[i]);
  for (std::size_t i = common; i < a.children.size(); ++i)
    diff += node_count(a.children[i]);
  for (std::size_t i = common; i < b.children.size(); ++i)
    diff += node_count(b.children[i]);
  return diff;
}

}  // namespace rulediff
