#include "rulediff/typecheck.hpp"

#include <optional>

namespace rulediff {

namespace {

class Checker {
 public:
  Checker(const Schema& schema, std::vector<Diagnostic>& out)
      : schema_(schema), out_(out) {}

  void check_bool(const Expr& e, Path& path) {
    switch (e.kind) {
      case ExprKind::And:
      case ExprKind::Or:
      case ExprKind::Implies:
        descend(e, 0, path, [&](const Expr& c, Path& p) { check_bool(c, p); });
        descend(e, 1, path, [&](const Expr& c, Path& p) { check_bool(c, p); });
        return;
      case ExprKind::Not:
        descend(e, 0, path, [&](const Expr& c, Path& p) { check_bool(c, p); });
        return;
      case ExprKind::Comparison: {
        std::optional<ValueType> lhs, rhs;
        descend(e, 0, path, [&](const Expr& c, Path& p) { lhs = operand_type(c, p); });
        descend(e, 1, path, [&](const Expr& c, Path& p) { rhs = operand_type(c, p); });
        if (lhs && rhs && !types_comparable(*lhs, *rhs))
          report(path, "cannot compare " + to_string(*lhs) + " with " +
                           to_string(*rhs));
        return;
      }
      case ExprKind::Inclusion: {
        std::optional<ValueType> lhs;
        descend(e, 0, path, [&](const Expr& c, Path& p) { lhs = operand_type(c, p); });
        const Expr& list = e.children[1];
        for (std::size_t i = 0; i < list.children.size(); ++i) {
          auto t = type_of(list.children[i].lit);
          if (lhs && t && !types_comparable(*lhs, *t)) {
            Path p = path;
            p.push_back(1);
            p.push_back(static_cast<int>(i));
            report(p, "list element type " + to_string(*t) +
                          " incompatible with operand type " + to_string(*lhs));
          }
        }
        return;
      }
      case ExprKind::StringPred: {
        Path p = path;
        p.push_back(0);
        auto t = variable_type(e.children[0].var, p);
        if (t && *t != ValueType::Text)
          report(p, "'" + e.children[0].var + "' must be text for " +
                        to_string(e.str));
        return;
      }
      default:
        report(path, "expression is not boolean-valued");
        return;
    }
  }

 private:
  template <typename Fn>
  void descend(const Expr& e, int idx, Path& path, Fn&& fn) {
    path.push_back(idx);
    fn(e.children[static_cast<std::size_t>(idx)], path);
    path.pop_back();
  }

  std::optional<ValueType> operand_type(const Expr& e, Path& path) {
    switch (e.kind) {
      case ExprKind::Variable:
        return variable_type(e.var, path);
      case ExprKind::Literal:
        return type_of(e.lit);
      case ExprKind::Substring: {
        auto t = variable_type(e.var, path);
        if (t && *t != ValueType::Text)
          report(path, "substring requires a text variable, '" + e.var +
                           "' is " + to_string(*t));
        return ValueType::Text;
      }
      default:
        report(path, "expected a value operand");
        return std::nullopt;
    }
  }

  std::optional<ValueType> variable_type(const std::string& name, const Path& path) {
    auto it = schema_.find(name);
    if (it == schema_.end()) {
      report(path, "unknown variable '" + name + "'");
      return std::nullopt;
    }
    return it->second;
  }

  void report(const Path& path, std::string message) {
    out_.push_back({std::move(message), path});
  }

  const Schema& schema_;
  std::vector<Diagnostic>& out_;
};

}  // namespace

std::vector<Diagnostic> typecheck(const Expr& expr, const Schema& schema) {
  std::vector<Diagnostic> out;
  Checker checker(schema, out);
  Path path;
  checker.check_bool(expr, path);
  return out;
}

}  // namespace rulediff
