#include "rulediff/mutation.hpp"

#include <algorithm>
#include <stdexcept>

namespace rulediff {

std::string to_string(MutationOperator op) {
  switch (op) {
    case MutationOperator::ACO: return "ACO";
    case MutationOperator::AD: return "AD";
    case MutationOperator::CO: return "CO";
    case MutationOperator::NI: return "NI";
    case MutationOperator::RI: return "RI";
    case MutationOperator::RSE: return "RSE";
    case MutationOperator::SR: return "SR";
    case MutationOperator::SSI: return "SSI";
  }
  return "?";
}

std::optional<MutationOperator> parse_mutation_operator(const std::string& s) {
  for (auto op : kAllMutationOperators)
    if (to_string(op) == s) return op;
  return std::nullopt;
}

std::vector<std::string> variants_for(MutationOperator op) {
  if (op == MutationOperator::AD) return ad_variants();
  return {""};
}

std::string Mutant::id() const {
  std::string s = source_id + "#" + to_string(op) + "-" + std::to_string(site_index);
  if (!variant.empty()) s += "-" + variant;
  return s;
}

std::string mutant_source_id(const std::string& mutant_id) {
  auto pos = mutant_id.find('#');
  return pos == std::string::npos ? mutant_id : mutant_id.substr(0, pos);
}

namespace {

bool applicable(const Expr& node, MutationOperator op) {
  switch (op) {
    case MutationOperator::ACO:
      return node.kind == ExprKind::Comparison &&
             (node.cmp == CmpOp::Lt || node.cmp == CmpOp::Le ||
              node.cmp == CmpOp::Gt || node.cmp == CmpOp::Ge);
    case MutationOperator::AD:
      return node.kind == ExprKind::Literal &&
             std::holds_alternative<Date>(node.lit);
    case MutationOperator::CO:
      return node.kind == ExprKind::And || node.kind == ExprKind::Or;
    case MutationOperator::NI:
      return node.kind == ExprKind::Comparison &&
             (node.cmp == CmpOp::Eq || node.cmp == CmpOp::Ne);
    case MutationOperator::RI:
      return node.kind == ExprKind::Inclusion;
    case MutationOperator::RSE:
      return node.kind == ExprKind::StringPred;
    case MutationOperator::SR:
      // swapping identical operands would not change the expression
      return node.kind == ExprKind::Implies &&
             !(node.children[0] == node.children[1]);
    case MutationOperator::SSI:
      return node.kind == ExprKind::Substring && node.from != node.to;
  }
  return false;
}

Expr rewrite(const Expr& node, MutationOperator op, const std::string& variant) {
  Expr out = node;
  switch (op) {
    case MutationOperator::ACO:
      switch (node.cmp) {
        case CmpOp::Gt: out.cmp = CmpOp::Lt; break;
        case CmpOp::Lt: out.cmp = CmpOp::Gt; break;
        case CmpOp::Le: out.cmp = CmpOp::Ge; break;
        case CmpOp::Ge: out.cmp = CmpOp::Le; break;
        default: break;
      }
      return out;
    case MutationOperator::AD: {
      const Date& d = std::get<Date>(node.lit);
      if (variant == "+1y") out.lit = add_years(d, 1);
      else if (variant == "-1y") out.lit = add_years(d, -1);
      else if (variant == "+1m") out.lit = add_months(d, 1);
      else if (variant == "-1m") out.lit = add_months(d, -1);
      else if (variant == "+1d") out.lit = add_days(d, 1);
      else if (variant == "-1d") out.lit = add_days(d, -1);
      else throw std::invalid_argument("invalid AD variant '" + variant + "'");
      return out;
    }
    case MutationOperator::CO:
      out.kind = node.kind == ExprKind::And ? ExprKind::Or : ExprKind::And;
      return out;
    case MutationOperator::NI:
      out.cmp = node.cmp == CmpOp::Eq ? CmpOp::Ne : CmpOp::Eq;
      return out;
    case MutationOperator::RI:
      out.inc = node.inc == IncOp::In ? IncOp::NotIn : IncOp::In;
      return out;
    case MutationOperator::RSE:
      out.str = node.str == StrOp::StartsWith ? StrOp::EndsWith : StrOp::StartsWith;
      return out;
    case MutationOperator::SR:
      std::swap(out.children[0], out.children[1]);
      return out;
    case MutationOperator::SSI:
      std::swap(out.from, out.to);
      return out;
  }
  throw std::invalid_argument("unknown mutation operator");
}

}  // namespace

std::vector<Path> sites(const Expr& expr, MutationOperator op) {
  std::vector<Path> out;
  visit_preorder(expr, [&](const Expr& node, const Path& path) {
    if (applicable(node, op)) out.push_back(path);
  });
  return out;
}

Mutant apply_mutation(const Rule& rule, MutationOperator op, const Path& site,
                      const std::string& variant) {
  const Expr* node = node_at(rule.expression, site);
  if (!node || !applicable(*node, op))
    throw std::invalid_argument("operator " + to_string(op) +
                                " is not applicable at site [" +
                                to_string(site) + "]");
  auto valid = variants_for(op);
  auto vit = std::find(valid.begin(), valid.end(), variant);
  if (vit == valid.end())
    throw std::invalid_argument("invalid variant '" + variant + "' for " +
                                to_string(op));
  auto all = sites(rule.expression, op);
  auto sit = std::find(all.begin(), all.end(), site);

  Mutant m;
  m.source_id = rule.id;
  m.source_version = rule.version;
  m.op = op;
  m.site = site;
  m.site_index = static_cast<int>(sit - all.begin());
  m.variant = variant;
  m.expression = with_node_replaced(rule.expression, site, rewrite(*node, op, variant));
  return m;
}

std::vector<Mutant> mutate_all(const std::vector<Rule>& rules) {
  std::vector<Mutant> out;
  for (const auto& rule : rules) {
    for (auto op : kAllMutationOperators) {
      auto locations = sites(rule.expression, op);
      for (std::size_t i = 0; i < locations.size(); ++i) {
        for (const auto& variant : variants_for(op)) {
          out.push_back(apply_mutation(rule, op, locations[i], variant));
        }
      }
    }
  }
  return out;
}

std::vector<Rule> mutants_to_rules(const std::vector<Mutant>& mutants) {
  std::vector<Rule> rules;
  rules.reserve(mutants.size());
  for (const auto& m : mutants) {
    Rule r;
    r.id = m.id();
    r.version = m.source_version;
    r.active = true;
    r.expression = m.expression;
    rules.push_back(std::move(r));
  }
  return rules;
}

}  // namespace rulediff
