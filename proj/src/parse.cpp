#include "rulediff/parse.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

namespace rulediff {

namespace {

enum class Tok {
  End,
  Ident,
  Int,
  Dec,
  Str,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  Minus,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int column = 1;
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::End: return "end of input";
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::Dec: return "decimal";
    case Tok::Str: return "string literal";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Eq: return "'='";
    case Tok::Ne: return "'!='";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::Minus: return "'-'";
  }
  return "?";
}

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      Token t;
      t.line = line_;
      t.column = column_;
      if (pos_ >= text_.size()) {
        t.kind = Tok::End;
        out.push_back(t);
        return out;
      }
      char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Tok::Ident;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                text_[pos_] == '_'))
          t.text.push_back(take());
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        t.kind = Tok::Int;
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_])))
          t.text.push_back(take());
        if (pos_ + 1 < text_.size() && text_[pos_] == '.' &&
            std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
          t.kind = Tok::Dec;
          t.text.push_back(take());
          while (pos_ < text_.size() &&
                 std::isdigit(static_cast<unsigned char>(text_[pos_])))
            t.text.push_back(take());
        }
      } else if (c == '\'') {
        t.kind = Tok::Str;
        take();
        while (true) {
          if (pos_ >= text_.size())
            throw ParseError("unterminated string literal", t.line, t.column,
                             {"'"});
          char d = take();
          if (d == '\'') break;
          if (d == '\\') {
            if (pos_ >= text_.size())
              throw ParseError("unterminated escape", line_, column_, {"'"});
            char e = take();
            if (e != '\\' && e != '\'')
              throw ParseError(std::string("invalid escape '\\") + e + "'",
                               line_, column_ - 2, {"\\\\", "\\'"});
            t.text.push_back(e);
          } else {
            t.text.push_back(d);
          }
        }
      } else {
        switch (c) {
          case '(': t.kind = Tok::LParen; take(); break;
          case ')': t.kind = Tok::RParen; take(); break;
          case '[': t.kind = Tok::LBracket; take(); break;
          case ']': t.kind = Tok::RBracket; take(); break;
          case ',': t.kind = Tok::Comma; take(); break;
          case '-': t.kind = Tok::Minus; take(); break;
          case '=': t.kind = Tok::Eq; take(); break;
          case '!':
            take();
            if (pos_ < text_.size() && text_[pos_] == '=') {
              t.kind = Tok::Ne;
              take();
            } else {
              throw ParseError("unexpected '!'", t.line, t.column, {"'!='"});
            }
            break;
          case '<':
            take();
            if (pos_ < text_.size() && text_[pos_] == '=') {
              t.kind = Tok::Le;
              take();
            } else {
              t.kind = Tok::Lt;
            }
            break;
          case '>':
            take();
            if (pos_ < text_.size() && text_[pos_] == '=') {
              t.kind = Tok::Ge;
              take();
            } else {
              t.kind = Tok::Gt;
            }
            break;
          default:
            throw ParseError(std::string("unexpected character '") + c + "'",
                             t.line, t.column, {});
        }
      }
      out.push_back(std::move(t));
    }
  }

 private:
  char take() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      take();
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

bool is_keyword(const std::string& s) {
  return s == "and" || s == "or" || s == "not" || s == "implies" ||
         s == "in" || s == "notIn" || s == "startswith" || s == "endswith" ||
         s == "substring" || s == "date";
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Expr run() {
    Expr e = parse_expr();
    expect(Tok::End);
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }

  bool at_keyword(const char* kw) const {
    return peek().kind == Tok::Ident && peek().text == kw;
  }

  Token advance() { return toks_[pos_++]; }

  [[noreturn]] void fail(const std::string& msg,
                         std::vector<std::string> expected) const {
    const Token& t = peek();
    throw ParseError(msg, t.line, t.column, std::move(expected));
  }

  Token expect(Tok kind) {
    if (peek().kind != kind)
      fail(std::string("expected ") + tok_name(kind) + ", found " +
               describe(peek()),
           {tok_name(kind)});
    return advance();
  }

  void expect_keyword(const char* kw) {
    if (!at_keyword(kw))
      fail(std::string("expected '") + kw + "', found " + describe(peek()),
           {kw});
    advance();
  }

  static std::string describe(const Token& t) {
    if (t.kind == Tok::Ident) return "'" + t.text + "'";
    return tok_name(t.kind);
  }

  Expr parse_expr() {
    Expr left = parse_or();
    if (at_keyword("implies")) {
      advance();
      Expr right = parse_expr();  // right-associative
      return Expr::implies(std::move(left), std::move(right));
    }
    return left;
  }

  Expr parse_or() {
    Expr e = parse_and();
    while (at_keyword("or")) {
      advance();
      e = Expr::or_of(std::move(e), parse_and());
    }
    return e;
  }

  Expr parse_and() {
    Expr e = parse_unary();
    while (at_keyword("and")) {
      advance();
      e = Expr::and_of(std::move(e), parse_unary());
    }
    return e;
  }

  Expr parse_unary() {
    if (at_keyword("not")) {
      advance();
      return Expr::not_of(parse_unary());
    }
    return parse_predicate();
  }

  Expr parse_predicate() {
    if (peek().kind == Tok::LParen) {
      advance();
      Expr e = parse_expr();
      expect(Tok::RParen);
      switch (peek().kind) {
        case Tok::Eq: case Tok::Ne: case Tok::Lt:
        case Tok::Le: case Tok::Gt: case Tok::Ge:
          fail("a parenthesized expression cannot be a comparison operand",
               {"and", "or", "implies", "end of input"});
        default: break;
      }
      return e;
    }
    if (at_keyword("startswith") || at_keyword("endswith")) {
      StrOp op = peek().text == "startswith" ? StrOp::StartsWith : StrOp::EndsWith;
      advance();
      expect(Tok::LParen);
      std::string var = parse_variable_name();
      expect(Tok::Comma);
      Token lit = expect(Tok::Str);
      expect(Tok::RParen);
      return Expr::string_pred(op, std::move(var), lit.text);
    }
    Expr lhs = parse_operand();
    switch (peek().kind) {
      case Tok::Eq: advance(); return Expr::comparison(CmpOp::Eq, std::move(lhs), parse_operand());
      case Tok::Ne: advance(); return Expr::comparison(CmpOp::Ne, std::move(lhs), parse_operand());
      case Tok::Lt: advance(); return Expr::comparison(CmpOp::Lt, std::move(lhs), parse_operand());
      case Tok::Le: advance(); return Expr::comparison(CmpOp::Le, std::move(lhs), parse_operand());
      case Tok::Gt: advance(); return Expr::comparison(CmpOp::Gt, std::move(lhs), parse_operand());
      case Tok::Ge: advance(); return Expr::comparison(CmpOp::Ge, std::move(lhs), parse_operand());
      default: break;
    }
    if (at_keyword("in") || at_keyword("notIn")) {
      IncOp op = peek().text == "in" ? IncOp::In : IncOp::NotIn;
      advance();
      Expr e;
      e.kind = ExprKind::Inclusion;
      e.inc = op;
      e.children = {std::move(lhs), parse_list()};
      return e;
    }
    fail("expected a comparison or inclusion operator",
         {"'='", "'!='", "'<'", "'<='", "'>'", "'>='", "in", "notIn"});
  }

  std::string parse_variable_name() {
    if (peek().kind != Tok::Ident || is_keyword(peek().text))
      fail("expected a variable name", {"identifier"});
    return advance().text;
  }

  Expr parse_operand() {
    const Token& t = peek();
    if (t.kind == Tok::Ident && t.text == "substring") {
      advance();
      expect(Tok::LParen);
      std::string var = parse_variable_name();
      expect(Tok::Comma);
      std::int64_t from = parse_index();
      expect(Tok::Comma);
      std::int64_t to = parse_index();
      expect(Tok::RParen);
      return Expr::substring(std::move(var), from, to);
    }
    if (t.kind == Tok::Ident && !is_keyword(t.text))
      return Expr::variable(advance().text);
    return Expr::literal(parse_literal());
  }

  std::int64_t parse_index() {
    Token t = expect(Tok::Int);
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc{})
      throw ParseError("index out of range", t.line, t.column, {"integer"});
    return v;
  }

  Value parse_literal() {
    const Token& t = peek();
    if (t.kind == Tok::Ident && t.text == "date") {
      advance();
      expect(Tok::LParen);
      Token s = expect(Tok::Str);
      expect(Tok::RParen);
      auto d = parse_date(s.text);
      if (!d)
        throw ParseError("invalid date literal '" + s.text + "'", s.line,
                         s.column, {"'YYYY-MM-DD'"});
      return *d;
    }
    bool negative = false;
    if (t.kind == Tok::Minus) {
      advance();
      negative = true;
    }
    const Token& n = peek();
    if (n.kind == Tok::Int) {
      Token tok = advance();
      std::int64_t v = 0;
      auto [p, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), v);
      if (ec != std::errc{})
        throw ParseError("integer literal out of range", tok.line, tok.column,
                         {"integer"});
      return negative ? -v : v;
    }
    if (n.kind == Tok::Dec) {
      Token tok = advance();
      double v = std::stod(tok.text);
      return negative ? -v : v;
    }
    if (negative)
      fail("expected a number after '-'", {"integer", "decimal"});
    if (n.kind == Tok::Str) return advance().text;
    fail("expected a literal",
         {"integer", "decimal", "string literal", "date"});
  }

  Expr parse_list() {
    Token open = expect(Tok::LBracket);
    Expr list;
    list.kind = ExprKind::ListLiteral;
    if (peek().kind == Tok::RBracket)
      throw ParseError("inclusion list must not be empty", open.line,
                       open.column, {"literal"});
    list.children.push_back(Expr::literal(parse_literal()));
    while (peek().kind == Tok::Comma) {
      advance();
      list.children.push_back(Expr::literal(parse_literal()));
    }
    expect(Tok::RBracket);
    return list;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

int precedence(ExprKind k) {
  switch (k) {
    case ExprKind::Implies: return 0;
    case ExprKind::Or: return 1;
    case ExprKind::And: return 2;
    case ExprKind::Not: return 3;
    default: return 4;
  }
}

void unparse_into(const Expr& e, std::string& out);

// Parenthesize when the child binds no tighter than its parent requires.
void unparse_child(const Expr& child, int min_prec, std::string& out) {
  if (precedence(child.kind) < min_prec) {
    out.push_back('(');
    unparse_into(child, out);
    out.push_back(')');
  } else {
    unparse_into(child, out);
  }
}

void unparse_into(const Expr& e, std::string& out) {
  switch (e.kind) {
    case ExprKind::Implies:
      unparse_child(e.children[0], 1, out);  // nested implies needs parens
      out += " implies ";
      unparse_child(e.children[1], 0, out);  // right-associative
      return;
    case ExprKind::Or:
      unparse_child(e.children[0], 1, out);
      out += " or ";
      unparse_child(e.children[1], 2, out);
      return;
    case ExprKind::And:
      unparse_child(e.children[0], 2, out);
      out += " and ";
      unparse_child(e.children[1], 3, out);
      return;
    case ExprKind::Not:
      out += "not ";
      unparse_child(e.children[0], 3, out);
      return;
    case ExprKind::Comparison:
      unparse_into(e.children[0], out);
      out += " " + to_string(e.cmp) + " ";
      unparse_into(e.children[1], out);
      return;
    case ExprKind::Inclusion:
      unparse_into(e.children[0], out);
      out += " " + to_string(e.inc) + " ";
      unparse_into(e.children[1], out);
      return;
    case ExprKind::StringPred:
      out += to_string(e.str) + "(" + e.children[0].var + ", " +
             to_literal(e.children[1].lit) + ")";
      return;
    case ExprKind::Substring:
      out += "substring(" + e.var + ", " + std::to_string(e.from) + ", " +
             std::to_string(e.to) + ")";
      return;
    case ExprKind::Variable:
      out += e.var;
      return;
    case ExprKind::Literal:
      out += to_literal(e.lit);
      return;
    case ExprKind::ListLiteral: {
      out.push_back('[');
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        if (i) out += ", ";
        out += to_literal(e.children[i].lit);
      }
      out.push_back(']');
      return;
    }
  }
}

}  // namespace

ParseError::ParseError(std::string msg, int line_, int column_,
                       std::vector<std::string> expected_)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << msg << " at line " << line_ << ", column " << column_;
        if (!expected_.empty()) {
          os << " (expected ";
          for (std::size_t i = 0; i < expected_.size(); ++i) {
            if (i) os << ", ";
            os << expected_[i];
          }
          os << ")";
        }
        return os.str();
      }()),
      line(line_),
      column(column_),
      expected(std::move(expected_)) {}

Expr parse(const std::string& text) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos)
    throw ParseError("empty rule expression", 1, 1, {"expression"});
  Lexer lexer(text);
  Parser parser(lexer.run());
  return parser.run();
}

std::string unparse(const Expr& e) {
  std::string out;
  unparse_into(e, out);
  return out;
}

}  // namespace rulediff
