#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "declc/source.hpp"

namespace declc {

enum class TokenKind { Identifier, IntLiteral, Keyword, Operator, Punctuation };

struct Token {
  TokenKind kind = TokenKind::Identifier;
  std::string text;
  SourcePos pos;
  std::size_t offset = 0;  // byte offset of text in the source

  bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
  bool is_op(std::string_view t) const { return kind == TokenKind::Operator && text == t; }
  bool is_punct(std::string_view t) const { return kind == TokenKind::Punctuation && text == t; }
  bool is_keyword(std::string_view t) const { return kind == TokenKind::Keyword && text == t; }
};

/// Splits HybridC source into tokens. Whitespace and comments are skipped;
/// the construct symbols `:=`, `::=`, `??` are single operator tokens.
/// Throws CompileError on an unrecognizable character.
std::vector<Token> tokenize(std::string_view source);

bool is_keyword(std::string_view word);

const char* token_kind_name(TokenKind kind);

}  // namespace declc
