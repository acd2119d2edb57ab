#include "declc/parser.hpp"

#include <set>
#include <string>

namespace declc {

namespace {

class Parser {
 public:
  explicit Parser(const std::vector<Token>& toks) : toks_(toks) {}

  Program run() {
    while (!at_end()) top_item();
    return std::move(prog_);
  }

 private:
  // ---- token helpers -------------------------------------------------------

  bool at_end() const { return i_ >= toks_.size(); }

  const Token* peek(std::size_t k = 0) const {
    return i_ + k < toks_.size() ? &toks_[i_ + k] : nullptr;
  }

  SourcePos pos() const {
    if (!at_end()) return toks_[i_].pos;
    if (toks_.empty()) return {};
    SourcePos p = toks_.back().pos;
    p.column += static_cast<std::uint32_t>(toks_.back().text.size());
    return p;
  }

  [[noreturn]] void fail(const std::string& expected) const {
    std::string found = at_end() ? "end of input" : "'" + toks_[i_].text + "'";
    throw CompileError(pos(), "expected " + expected + " but found " + found);
  }

  bool check_op(std::string_view t) const { return peek() && peek()->is_op(t); }
  bool check_punct(std::string_view t) const { return peek() && peek()->is_punct(t); }
  bool check_kw(std::string_view t) const { return peek() && peek()->is_keyword(t); }

  bool accept_op(std::string_view t) {
    if (!check_op(t)) return false;
    ++i_;
    return true;
  }
  bool accept_punct(std::string_view t) {
    if (!check_punct(t)) return false;
    ++i_;
    return true;
  }
  bool accept_kw(std::string_view t) {
    if (!check_kw(t)) return false;
    ++i_;
    return true;
  }

  void expect_punct(std::string_view t) {
    if (!accept_punct(t)) fail("'" + std::string(t) + "'");
  }
  void expect_op(std::string_view t) {
    if (!accept_op(t)) fail("'" + std::string(t) + "'");
  }

  std::string expect_ident() {
    if (!peek() || peek()->kind != TokenKind::Identifier) fail("identifier");
    return toks_[i_++].text;
  }

  // ---- declarations --------------------------------------------------------

  bool is_class_name(const std::string& s) const { return classes_.count(s) > 0; }

  /// A declaration starts with a scalar type keyword, or with a known class
  /// name followed by an identifier or `*`.
  bool at_declaration() const {
    if (check_kw("int") || check_kw("bool") || check_kw("void")) return true;
    const Token* t = peek();
    const Token* n = peek(1);
    return t && t->kind == TokenKind::Identifier && is_class_name(t->text) && n &&
           (n->kind == TokenKind::Identifier || n->is_op("*"));
  }

  Type base_type() {
    if (accept_kw("int")) return Type::int_type();
    if (accept_kw("bool")) return Type::bool_type();
    if (accept_kw("void")) return Type::void_type();
    if (peek() && peek()->kind == TokenKind::Identifier && is_class_name(peek()->text)) {
      return Type::class_type(toks_[i_++].text);
    }
    fail("type name");
  }

  Type pointer_suffix(Type t) {
    while (accept_op("*")) ++t.depth;
    return t;
  }

  void array_suffix(Type& t) {
    if (!accept_punct("[")) return;
    if (!peek() || peek()->kind != TokenKind::IntLiteral) fail("array size");
    int n = std::stoi(toks_[i_++].text);
    if (n <= 0) throw CompileError(toks_[i_ - 1].pos, "array size must be positive");
    t.array_size = n;
    expect_punct("]");
  }

  VarDecl var_rest(Type t, std::string name, SourcePos p) {
    VarDecl d;
    d.name = std::move(name);
    d.pos = p;
    array_suffix(t);
    d.type = t;
    if (accept_op("=")) d.init = expression();
    expect_punct(";");
    return d;
  }

  Function function_rest(Type result, std::string name, SourcePos p, std::string owner) {
    Function f;
    f.name = std::move(name);
    f.result = result;
    f.pos = p;
    f.owner_class = std::move(owner);
    expect_punct("(");
    if (!check_punct(")")) {
      do {
        VarDecl d;
        d.pos = pos();
        d.type = pointer_suffix(base_type());
        d.name = expect_ident();
        f.params.push_back(std::move(d));
      } while (accept_punct(","));
    }
    expect_punct(")");
    if (!check_punct("{")) fail("'{'");
    f.body = block();
    return f;
  }

  void top_item() {
    if (check_kw("class")) {
      class_decl();
      return;
    }
    if (at_declaration()) {
      SourcePos p = pos();
      Type t = pointer_suffix(base_type());
      std::string name = expect_ident();
      if (check_punct("(")) {
        prog_.items.push_back({TopItem::Kind::Function, static_cast<int>(prog_.functions.size())});
        prog_.functions.push_back(function_rest(t, std::move(name), p, ""));
      } else {
        prog_.items.push_back({TopItem::Kind::Global, static_cast<int>(prog_.globals.size())});
        prog_.globals.push_back(var_rest(t, std::move(name), p));
      }
      return;
    }
    int idx = construct("");
    prog_.items.push_back({TopItem::Kind::Construct, idx});
  }

  void class_decl() {
    SourcePos p = pos();
    expect_kwd("class");
    ClassDecl c;
    c.name = expect_ident();
    c.pos = p;
    if (is_class_name(c.name)) throw CompileError(p, "redefinition of class '" + c.name + "'");
    classes_.insert(c.name);  // members may point to the class itself
    expect_punct("{");
    bool is_private = true;
    while (!accept_punct("}")) {
      if (at_end()) fail("'}'");
      if (accept_kw("private")) {
        expect_punct(":");
        is_private = true;
        continue;
      }
      if (accept_kw("public")) {
        expect_punct(":");
        is_private = false;
        continue;
      }
      if (at_declaration()) {
        SourcePos mp = pos();
        Type t = pointer_suffix(base_type());
        std::string name = expect_ident();
        if (check_punct("(")) {
          c.methods.push_back(function_rest(t, std::move(name), mp, c.name));
        } else {
          if (!is_private) {
            throw CompileError(mp, "class data member '" + name + "' must be private");
          }
          c.fields.push_back(var_rest(t, std::move(name), mp));
        }
        continue;
      }
      c.constructs.push_back(construct(c.name));
    }
    expect_punct(";");
    prog_.items.push_back({TopItem::Kind::Class, static_cast<int>(prog_.classes.size())});
    prog_.classes.push_back(std::move(c));
  }

  void expect_kwd(std::string_view k) {
    if (!accept_kw(k)) fail("'" + std::string(k) + "'");
  }

  int construct(const std::string& scope) {
    Construct c;
    c.pos = pos();
    c.scope = scope;
    ExprPtr head = expression();
    if (accept_op(":=")) {
      c.kind = ConstructKind::Constraint;
      c.lhs = std::move(head);
      c.rhs = expression();
      if (accept_kw("given")) c.guard = expression();
      expect_punct(";");
    } else if (accept_op("::=")) {
      c.kind = ConstructKind::Monitor;
      c.lhs = std::move(head);
      if (!check_punct("{")) fail("'{'");
      c.body = block();
    } else if (accept_op("??")) {
      c.kind = ConstructKind::Precond;
      c.cond = std::move(head);
      if (!check_punct("{")) fail("'{'");
      c.body = block();
    } else {
      fail("':=', '::=' or '?\?'");
    }
    c.ordinal = static_cast<int>(prog_.constructs.size());
    prog_.constructs.push_back(std::move(c));
    return static_cast<int>(prog_.constructs.size()) - 1;
  }

  // ---- statements ----------------------------------------------------------

  StmtPtr block() {
    auto s = std::make_unique<Stmt>();
    s->kind = StmtKind::Block;
    s->pos = pos();
    expect_punct("{");
    while (!accept_punct("}")) {
      if (at_end()) fail("'}'");
      s->body.push_back(statement());
    }
    return s;
  }

  StmtPtr statement() {
    if (check_punct("{")) return block();
    auto s = std::make_unique<Stmt>();
    s->pos = pos();
    if (at_declaration()) {
      s->kind = StmtKind::Decl;
      Type t = pointer_suffix(base_type());
      std::string name = expect_ident();
      s->decl = var_rest(t, std::move(name), s->pos);
      return s;
    }
    if (accept_kw("if")) {
      s->kind = StmtKind::If;
      expect_punct("(");
      s->expr = expression();
      expect_punct(")");
      s->body.push_back(statement());
      if (accept_kw("else")) s->body.push_back(statement());
      return s;
    }
    if (accept_kw("while")) {
      s->kind = StmtKind::While;
      expect_punct("(");
      s->expr = expression();
      expect_punct(")");
      s->body.push_back(statement());
      return s;
    }
    if (accept_kw("return")) {
      s->kind = StmtKind::Return;
      if (!check_punct(";")) s->expr = expression();
      expect_punct(";");
      return s;
    }
    ExprPtr e = expression();
    if (accept_op("=")) {
      s->kind = StmtKind::Assign;
      s->lhs = std::move(e);
      s->expr = expression();
    } else {
      s->kind = StmtKind::ExprStmt;
      s->expr = std::move(e);
    }
    expect_punct(";");
    return s;
  }

  // ---- expressions (C precedence) -------------------------------------------

  ExprPtr expression() { return logical_or(); }

  ExprPtr binary_level(ExprPtr (Parser::*next)(), std::initializer_list<std::string_view> ops) {
    ExprPtr lhs = (this->*next)();
    while (true) {
      const Token* t = peek();
      std::string_view hit;
      if (t && t->kind == TokenKind::Operator) {
        for (auto op : ops) {
          if (t->text == op) hit = op;
        }
      }
      if (hit.empty()) return lhs;
      SourcePos p = t->pos;
      ++i_;
      ExprPtr rhs = (this->*next)();
      std::vector<ExprPtr> kids;
      kids.push_back(std::move(lhs));
      kids.push_back(std::move(rhs));
      lhs = make_expr(ExprKind::Binary, std::string(hit), p, std::move(kids));
    }
  }

  ExprPtr logical_or() { return binary_level(&Parser::logical_and, {"||"}); }
  ExprPtr logical_and() { return binary_level(&Parser::equality, {"&&"}); }
  ExprPtr equality() { return binary_level(&Parser::relational, {"==", "!="}); }
  ExprPtr relational() { return binary_level(&Parser::additive, {"<", "<=", ">", ">="}); }
  ExprPtr additive() { return binary_level(&Parser::multiplicative, {"+", "-"}); }
  ExprPtr multiplicative() { return binary_level(&Parser::pointer_member, {"*", "/", "%"}); }

  ExprPtr pointer_member() {
    ExprPtr lhs = unary();
    while (check_op(".*") || check_op("->*")) {
      SourcePos p = pos();
      ExprKind k = peek()->text == ".*" ? ExprKind::DotStar : ExprKind::ArrowStar;
      ++i_;
      std::vector<ExprPtr> kids;
      kids.push_back(std::move(lhs));
      kids.push_back(unary());
      lhs = make_expr(k, "", p, std::move(kids));
    }
    return lhs;
  }

  ExprPtr unary() {
    SourcePos p = pos();
    ExprKind k;
    if (check_op("*")) {
      k = ExprKind::Deref;
    } else if (check_op("&")) {
      k = ExprKind::AddrOf;
    } else if (check_op("-")) {
      k = ExprKind::Neg;
    } else if (check_op("!")) {
      k = ExprKind::Not;
    } else {
      return postfix();
    }
    ++i_;
    std::vector<ExprPtr> kids;
    kids.push_back(unary());
    return make_expr(k, "", p, std::move(kids));
  }

  ExprPtr postfix() {
    ExprPtr e = primary();
    while (true) {
      SourcePos p = pos();
      if (accept_punct("[")) {
        std::vector<ExprPtr> kids;
        kids.push_back(std::move(e));
        kids.push_back(expression());
        expect_punct("]");
        e = make_expr(ExprKind::Index, "", p, std::move(kids));
      } else if (accept_punct("(")) {
        std::vector<ExprPtr> kids;
        kids.push_back(std::move(e));
        if (!check_punct(")")) {
          do kids.push_back(expression());
          while (accept_punct(","));
        }
        expect_punct(")");
        e = make_expr(ExprKind::Call, "", p, std::move(kids));
      } else if (accept_op(".")) {
        std::vector<ExprPtr> kids;
        kids.push_back(std::move(e));
        e = make_expr(ExprKind::Dot, expect_ident(), p, std::move(kids));
      } else if (accept_op("->")) {
        std::vector<ExprPtr> kids;
        kids.push_back(std::move(e));
        e = make_expr(ExprKind::Arrow, expect_ident(), p, std::move(kids));
      } else {
        return e;
      }
    }
  }

  ExprPtr primary() {
    const Token* t = peek();
    if (!t) fail("expression");
    SourcePos p = t->pos;
    if (t->kind == TokenKind::Identifier) {
      ++i_;
      return make_expr(ExprKind::Id, t->text, p);
    }
    if (t->kind == TokenKind::IntLiteral) {
      ++i_;
      return make_expr(ExprKind::IntLit, t->text, p);
    }
    if (t->is_keyword("true") || t->is_keyword("false")) {
      ++i_;
      return make_expr(ExprKind::BoolLit, t->text, p);
    }
    if (t->is_keyword("null")) {
      ++i_;
      return make_expr(ExprKind::NullLit, "null", p);
    }
    if (accept_punct("(")) {
      std::vector<ExprPtr> kids;
      kids.push_back(expression());
      expect_punct(")");
      return make_expr(ExprKind::Paren, "", p, std::move(kids));
    }
    fail("expression");
  }

  const std::vector<Token>& toks_;
  std::size_t i_ = 0;
  Program prog_;
  std::set<std::string> classes_;
};

}  // namespace

Program parse_unit(const std::vector<Token>& tokens) { return Parser(tokens).run(); }

Program parse_source(std::string_view source) { return parse_unit(tokenize(source)); }

}  // namespace declc
