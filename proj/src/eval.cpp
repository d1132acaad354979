#include "rulediff/eval.hpp"

namespace rulediff {

namespace {

Value lookup(const Record& record, const std::string& name) {
  auto it = record.find(name);
  if (it == record.end()) return Null{};
  return it->second;
}

// Evaluates a value-producing operand (variable, literal, substring).
Value eval_operand(const Expr& e, const Record& record) {
  switch (e.kind) {
    case ExprKind::Variable:
      return lookup(record, e.var);
    case ExprKind::Literal:
      return e.lit;
    case ExprKind::Substring: {
      Value v = lookup(record, e.var);
      if (is_null(v)) return Null{};
      const auto* s = std::get_if<std::string>(&v);
      if (!s)
        throw EvalError("substring applied to non-text value of '" + e.var + "'");
      auto len = static_cast<std::int64_t>(s->size());
      if (e.from < 1 || e.to < e.from || e.to > len)
        throw EvalError("substring(" + e.var + ", " + std::to_string(e.from) +
                        ", " + std::to_string(e.to) +
                        ") out of range for text of length " +
                        std::to_string(len));
      return s->substr(static_cast<std::size_t>(e.from - 1),
                       static_cast<std::size_t>(e.to - e.from + 1));
    }
    default:
      throw EvalError("expression is not a value operand");
  }
}

bool compare(CmpOp op, const Value& lhs, const Value& rhs) {
  if (is_null(lhs) || is_null(rhs)) return false;
  auto cmp = compare_values(lhs, rhs);
  if (!cmp) throw EvalError("comparison between incompatible value types");
  switch (op) {
    case CmpOp::Eq: return *cmp == 0;
    case CmpOp::Ne: return *cmp != 0;
    case CmpOp::Lt: return *cmp < 0;
    case CmpOp::Le: return *cmp <= 0;
    case CmpOp::Gt: return *cmp > 0;
    case CmpOp::Ge: return *cmp >= 0;
  }
  return false;
}

}  // namespace

std::string to_string(TriState t) {
  switch (t) {
    case TriState::Pass: return "Pass";
    case TriState::Fail: return "Fail";
    case TriState::NotApplied: return "NotApplied";
  }
  return "?";
}

bool evaluate(const Expr& expr, const Record& record) {
  switch (expr.kind) {
    case ExprKind::And:
      return evaluate(expr.children[0], record) &&
             evaluate(expr.children[1], record);
    case ExprKind::Or:
      return evaluate(expr.children[0], record) ||
             evaluate(expr.children[1], record);
    case ExprKind::Not:
      return !evaluate(expr.children[0], record);
    case ExprKind::Implies:
      return !evaluate(expr.children[0], record) ||
             evaluate(expr.children[1], record);
    case ExprKind::Comparison:
      return compare(expr.cmp, eval_operand(expr.children[0], record),
                     eval_operand(expr.children[1], record));
    case ExprKind::Inclusion: {
      Value lhs = eval_operand(expr.children[0], record);
      if (is_null(lhs)) return false;
      bool found = false;
      for (const auto& item : expr.children[1].children) {
        auto cmp = compare_values(lhs, item.lit);
        if (!cmp)
          throw EvalError("inclusion list element incompatible with operand");
        if (*cmp == 0) {
          found = true;
          break;
        }
      }
      return expr.inc == IncOp::In ? found : !found;
    }
    case ExprKind::StringPred: {
      Value v = lookup(record, expr.children[0].var);
      if (is_null(v)) return false;
      const auto* s = std::get_if<std::string>(&v);
      if (!s)
        throw EvalError("string predicate applied to non-text value of '" +
                        expr.children[0].var + "'");
      const auto& probe = std::get<std::string>(expr.children[1].lit);
      if (probe.size() > s->size()) return false;
      if (expr.str == StrOp::StartsWith)
        return s->compare(0, probe.size(), probe) == 0;
      return s->compare(s->size() - probe.size(), probe.size(), probe) == 0;
    }
    case ExprKind::Substring:
    case ExprKind::Variable:
    case ExprKind::Literal:
    case ExprKind::ListLiteral:
      throw EvalError("expression is not boolean-valued");
  }
  throw EvalError("unreachable expression kind");
}

TriState categorize(const Expr& expr, const Record& record) {
  if (expr.kind == ExprKind::Implies) {
    if (!evaluate(expr.children[0], record)) return TriState::NotApplied;
    return evaluate(expr.children[1], record) ? TriState::Pass : TriState::Fail;
  }
  return evaluate(expr, record) ? TriState::Pass : TriState::Fail;
}

}  // namespace rulediff
