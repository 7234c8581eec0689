#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "streetlab/rdf/errors.hpp"

namespace streetlab::rdf::detail {

enum class Tok {
  End,
  IriRef,      // text = IRI without brackets, escapes resolved
  PName,       // text = "prefix:local"; prefix_len marks the colon
  BlankLabel,  // text = label without "_:"
  String,      // text = unescaped lexical form
  LangTag,     // text = tag without '@'
  Integer,
  Decimal,
  Double,
  Var,      // text = name without '?'/'$'
  Keyword,  // bare word (a, true, PREFIX, SELECT, ...)
  AtPrefix,
  AtBase,
  Dot,
  Semicolon,
  Comma,
  LBracket,
  RBracket,
  LParen,
  RParen,
  LBrace,
  RBrace,
  DoubleCaret,
  Star,
  Op,  // < <= > >= = != &&
};

struct Token {
  Tok type = Tok::End;
  std::string text;
  std::size_t prefix_len = 0;
  std::size_t line = 1;
  std::size_t col = 1;
};

/// Tokenizer for the Turtle family. Shared by the TriG reader and the query
/// parser. In operator mode a '<' is a comparison operator rather than the
/// start of an IRI reference.
class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  const Token& peek();
  Token next();
  void set_operator_mode(bool on);
  bool operator_mode() const { return operator_mode_; }

  [[noreturn]] void fail(const Token& at, const std::string& message) const;
  [[noreturn]] void fail_here(const std::string& message) const;

 private:
  Token lex();
  void skip_ws_and_comments();
  char cur() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }
  char at(std::size_t off) const { return pos_ + off < src_.size() ? src_[pos_ + off] : '\0'; }
  void advance(std::size_t n = 1);

  Token lex_iri(Token tok);
  Token lex_string(Token tok);
  Token lex_number(Token tok);
  Token lex_name(Token tok);
  void read_unicode_escape(std::string& out, int digits, const Token& tok);

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  bool operator_mode_ = false;
  Tok last_ = Tok::End;
  std::optional<Token> lookahead_;
  // source position before the buffered lookahead was lexed
  std::size_t la_pos_ = 0, la_line_ = 1, la_col_ = 1;
  Tok la_last_ = Tok::End;
};

}  // namespace streetlab::rdf::detail
