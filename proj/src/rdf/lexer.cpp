#include "lexer.hpp"

#include <cctype>

namespace streetlab::rdf::detail {

namespace {

bool is_name_char(char c) {
  auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || c == '-' || u >= 0x80;
}

void append_utf8(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

}  // namespace

const Token& Lexer::peek() {
  if (!lookahead_) {
    la_pos_ = pos_;
    la_line_ = line_;
    la_col_ = col_;
    la_last_ = last_;
    lookahead_ = lex();
  }
  return *lookahead_;
}

Token Lexer::next() {
  if (lookahead_) {
    Token t = std::move(*lookahead_);
    lookahead_.reset();
    last_ = t.type;
    return t;
  }
  Token t = lex();
  last_ = t.type;
  return t;
}

void Lexer::set_operator_mode(bool on) {
  if (on == operator_mode_) return;
  operator_mode_ = on;
  if (lookahead_) {
    // re-lex the buffered token under the new mode
    pos_ = la_pos_;
    line_ = la_line_;
    col_ = la_col_;
    last_ = la_last_;
    lookahead_.reset();
  }
}

void Lexer::fail(const Token& at, const std::string& message) const {
  throw SyntaxError(at.line, at.col, message);
}

void Lexer::fail_here(const std::string& message) const { throw SyntaxError(line_, col_, message); }

void Lexer::advance(std::size_t n) {
  for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
}

void Lexer::skip_ws_and_comments() {
  while (pos_ < src_.size()) {
    char c = cur();
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance();
    } else if (c == '#') {
      while (pos_ < src_.size() && cur() != '\n') advance();
    } else {
      break;
    }
  }
}

Token Lexer::lex() {
  skip_ws_and_comments();
  Token tok;
  tok.line = line_;
  tok.col = col_;
  if (pos_ >= src_.size()) return tok;

  const char c = cur();
  auto punct = [&](Tok type, std::size_t len) {
    tok.type = type;
    tok.text = std::string(src_.substr(pos_, len));
    advance(len);
    return tok;
  };

  if (operator_mode_) {
    if (c == '<' && at(1) == '=') return punct(Tok::Op, 2);
    if (c == '>' && at(1) == '=') return punct(Tok::Op, 2);
    if (c == '!' && at(1) == '=') return punct(Tok::Op, 2);
    if (c == '&' && at(1) == '&') return punct(Tok::Op, 2);
    if (c == '<' || c == '>' || c == '=') return punct(Tok::Op, 1);
  }

  switch (c) {
    case '<': return lex_iri(tok);
    case '"':
    case '\'': return lex_string(tok);
    case '.':
      if (std::isdigit(static_cast<unsigned char>(at(1)))) return lex_number(tok);
      return punct(Tok::Dot, 1);
    case ';': return punct(Tok::Semicolon, 1);
    case ',': return punct(Tok::Comma, 1);
    case '[': return punct(Tok::LBracket, 1);
    case ']': return punct(Tok::RBracket, 1);
    case '(': return punct(Tok::LParen, 1);
    case ')': return punct(Tok::RParen, 1);
    case '{': return punct(Tok::LBrace, 1);
    case '}': return punct(Tok::RBrace, 1);
    case '*': return punct(Tok::Star, 1);
    case '^':
      if (at(1) == '^') return punct(Tok::DoubleCaret, 2);
      fail(tok, "expected '^^'");
    case '@': {
      advance();
      std::string word;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(cur())) || cur() == '-')) {
        word += cur();
        advance();
      }
      if (word.empty()) fail(tok, "expected a word after '@'");
      if (last_ == Tok::String) {
        tok.type = Tok::LangTag;
      } else if (word == "prefix") {
        tok.type = Tok::AtPrefix;
      } else if (word == "base") {
        tok.type = Tok::AtBase;
      } else {
        fail(tok, "unknown directive '@" + word + "'");
      }
      tok.text = std::move(word);
      return tok;
    }
    case '?':
    case '$': {
      advance();
      while (pos_ < src_.size() && is_name_char(cur())) {
        tok.text += cur();
        advance();
      }
      if (tok.text.empty()) fail(tok, "empty variable name");
      tok.type = Tok::Var;
      return tok;
    }
    case '_':
      if (at(1) == ':') {
        advance(2);
        while (pos_ < src_.size() && (is_name_char(cur()) || cur() == '.')) {
          tok.text += cur();
          advance();
        }
        while (!tok.text.empty() && tok.text.back() == '.') {
          // a trailing dot terminates the statement, it is not part of the label
          tok.text.pop_back();
          --pos_;
          --col_;
        }
        if (tok.text.empty()) fail(tok, "empty blank node label");
        tok.type = Tok::BlankLabel;
        return tok;
      }
      break;
    default: break;
  }

  if (std::isdigit(static_cast<unsigned char>(c)) ||
      ((c == '+' || c == '-') &&
       (std::isdigit(static_cast<unsigned char>(at(1))) || at(1) == '.'))) {
    return lex_number(tok);
  }
  if (is_name_char(c) || c == ':') return lex_name(tok);

  fail(tok, std::string("unexpected character '") + c + "'");
}

void Lexer::read_unicode_escape(std::string& out, int digits, const Token& tok) {
  unsigned long cp = 0;
  for (int i = 0; i < digits; ++i) {
    char h = cur();
    int v;
    if (h >= '0' && h <= '9') {
      v = h - '0';
    } else if (h >= 'a' && h <= 'f') {
      v = h - 'a' + 10;
    } else if (h >= 'A' && h <= 'F') {
      v = h - 'A' + 10;
    } else {
      fail(tok, "bad unicode escape");
    }
    cp = cp * 16 + static_cast<unsigned long>(v);
    advance();
  }
  if (cp > 0x10FFFF) fail(tok, "unicode escape out of range");
  append_utf8(out, cp);
}

Token Lexer::lex_iri(Token tok) {
  advance();  // '<'
  while (true) {
    if (pos_ >= src_.size()) fail(tok, "unterminated IRI");
    char c = cur();
    if (c == '>') {
      advance();
      break;
    }
    if (c == '\\') {
      advance();
      char e = cur();
      advance();
      if (e == 'u') {
        read_unicode_escape(tok.text, 4, tok);
      } else if (e == 'U') {
        read_unicode_escape(tok.text, 8, tok);
      } else {
        fail(tok, "bad escape in IRI");
      }
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '<' || c == '"' || c == '{' ||
        c == '}' || c == '|' || c == '^' || c == '`') {
      fail(tok, "invalid character in IRI");
    }
    tok.text += c;
    advance();
  }
  tok.type = Tok::IriRef;
  return tok;
}

Token Lexer::lex_string(Token tok) {
  const char q = cur();
  const bool long_form = at(1) == q && at(2) == q;
  advance(long_form ? 3 : 1);
  while (true) {
    if (pos_ >= src_.size()) fail(tok, "unterminated string literal");
    char c = cur();
    if (long_form) {
      if (c == q && at(1) == q && at(2) == q) {
        advance(3);
        // a long string may end with up to two extra quote characters
        while (cur() == q) {
          tok.text += q;
          advance();
        }
        break;
      }
    } else {
      if (c == q) {
        advance();
        break;
      }
      if (c == '\n' || c == '\r') fail(tok, "newline in short string literal");
    }
    if (c == '\\') {
      advance();
      char e = cur();
      advance();
      switch (e) {
        case 't': tok.text += '\t'; break;
        case 'b': tok.text += '\b'; break;
        case 'n': tok.text += '\n'; break;
        case 'r': tok.text += '\r'; break;
        case 'f': tok.text += '\f'; break;
        case '"': tok.text += '"'; break;
        case '\'': tok.text += '\''; break;
        case '\\': tok.text += '\\'; break;
        case 'u': read_unicode_escape(tok.text, 4, tok); break;
        case 'U': read_unicode_escape(tok.text, 8, tok); break;
        default: fail(tok, "bad escape in string literal");
      }
      continue;
    }
    tok.text += c;
    advance();
  }
  tok.type = Tok::String;
  return tok;
}

Token Lexer::lex_number(Token tok) {
  auto digit = [&](std::size_t off) { return std::isdigit(static_cast<unsigned char>(at(off))) != 0; };
  if (cur() == '+' || cur() == '-') {
    tok.text += cur();
    advance();
  }
  while (digit(0)) {
    tok.text += cur();
    advance();
  }
  tok.type = Tok::Integer;
  if (cur() == '.' && digit(1)) {
    tok.text += '.';
    advance();
    while (digit(0)) {
      tok.text += cur();
      advance();
    }
    tok.type = Tok::Decimal;
  }
  if (cur() == 'e' || cur() == 'E') {
    std::size_t off = 1;
    if (at(1) == '+' || at(1) == '-') off = 2;
    if (digit(off)) {
      for (std::size_t i = 0; i < off; ++i) {
        tok.text += cur();
        advance();
      }
      while (digit(0)) {
        tok.text += cur();
        advance();
      }
      tok.type = Tok::Double;
    }
  }
  if (tok.text == "+" || tok.text == "-") fail(tok, "malformed number");
  return tok;
}

Token Lexer::lex_name(Token tok) {
  std::string prefix;
  while (pos_ < src_.size() && (is_name_char(cur()) || cur() == '.')) {
    prefix += cur();
    advance();
  }
  if (cur() != ':') {
    while (!prefix.empty() && prefix.back() == '.') {
      prefix.pop_back();
      --pos_;
      --col_;
    }
    tok.type = Tok::Keyword;
    tok.text = std::move(prefix);
    return tok;
  }
  if (!prefix.empty() && prefix.back() == '.') fail(tok, "prefix may not end with '.'");
  advance();  // ':'
  std::string local;
  while (pos_ < src_.size()) {
    char c = cur();
    if (is_name_char(c) || c == '.' || c == ':' || c == '%') {
      local += c;
      advance();
    } else if (c == '\\' && pos_ + 1 < src_.size()) {
      advance();
      local += cur();
      advance();
    } else {
      break;
    }
  }
  while (!local.empty() && local.back() == '.') {
    local.pop_back();
    --pos_;
    --col_;
  }
  tok.type = Tok::PName;
  tok.prefix_len = prefix.size();
  tok.text = prefix + ":" + local;
  return tok;
}

}  // namespace streetlab::rdf::detail
