#include "declc/lexer.hpp"

#include <array>
#include <cctype>

namespace declc {

namespace {

constexpr std::array<std::string_view, 14> kKeywords = {
    "int", "bool", "void", "class", "private", "public", "if",
    "else", "while", "return", "true", "false", "null", "given"};

// Longest first so maximal munch falls out of a linear scan.
constexpr std::array<std::string_view, 23> kOperators = {
    "::=", "->*", ":=", "??", "->", ".*", "==", "!=", "<=", ">=", "&&", "||", "+",
    "-",   "*",   "/",  "%",  "<",  ">",  "!",  "&",  "=",  "."};

constexpr std::string_view kPunctuation = "()[]{};,:";

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_trivia();
      if (at_end()) break;
      out.push_back(next());
    }
    return out;
  }

 private:
  bool at_end() const { return i_ >= src_.size(); }
  char peek(std::size_t k = 0) const { return i_ + k < src_.size() ? src_[i_ + k] : '\0'; }

  void advance(std::size_t n = 1) {
    for (std::size_t k = 0; k < n && !at_end(); ++k) {
      if (src_[i_] == '\n') {
        ++pos_.line;
        pos_.column = 1;
      } else {
        ++pos_.column;
      }
      ++i_;
    }
  }

  void skip_trivia() {
    while (!at_end()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (!at_end() && peek() != '\n') advance();
      } else if (c == '/' && peek(1) == '*') {
        SourcePos start = pos_;
        advance(2);
        while (!at_end() && !(peek() == '*' && peek(1) == '/')) advance();
        if (at_end()) throw CompileError(start, "unterminated comment");
        advance(2);
      } else {
        break;
      }
    }
  }

  Token make(TokenKind kind, std::size_t len) {
    Token t{kind, std::string(src_.substr(i_, len)), pos_, i_};
    advance(len);
    return t;
  }

  Token next() {
    char c = peek();
    if (ident_start(c)) {
      std::size_t len = 1;
      while (ident_char(peek(len))) ++len;
      auto word = src_.substr(i_, len);
      return make(is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier, len);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t len = 1;
      while (std::isdigit(static_cast<unsigned char>(peek(len)))) ++len;
      if (ident_char(peek(len))) {
        throw CompileError(pos_, "malformed number");
      }
      return make(TokenKind::IntLiteral, len);
    }
    for (auto op : kOperators) {
      if (src_.substr(i_, op.size()) == op) return make(TokenKind::Operator, op.size());
    }
    if (kPunctuation.find(c) != std::string_view::npos) return make(TokenKind::Punctuation, 1);
    std::string shown = std::isprint(static_cast<unsigned char>(c))
                            ? std::string("'") + c + "'"
                            : "byte " + std::to_string(static_cast<unsigned char>(c));
    throw CompileError(pos_, "unrecognized character " + shown);
  }

  std::string_view src_;
  std::size_t i_ = 0;
  SourcePos pos_;
};

}  // namespace

bool is_keyword(std::string_view word) {
  for (auto k : kKeywords) {
    if (k == word) return true;
  }
  return false;
}

const char* token_kind_name(TokenKind kind) {
  switch (kind) {
    case TokenKind::Identifier: return "identifier";
    case TokenKind::IntLiteral: return "integer";
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Operator: return "operator";
    case TokenKind::Punctuation: return "punctuation";
  }
  return "?";
}

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

}  // namespace declc
