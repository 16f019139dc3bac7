#pragma once

// Tokenizer shared by the model, catalog and overlay languages.

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fisa/diagnostic.hpp"

namespace fisa::dsl {

enum class TokenKind {
  identifier,
  string,
  integer,
  lbrace,
  rbrace,
  lbracket,
  rbracket,
  equals,
  colon,
  arrow,
  comma,
  dot,
  end,
};

inline const char* describe(TokenKind k) {
  switch (k) {
    case TokenKind::identifier: return "identifier";
    case TokenKind::string: return "string";
    case TokenKind::integer: return "integer";
    case TokenKind::lbrace: return "'{'";
    case TokenKind::rbrace: return "'}'";
    case TokenKind::lbracket: return "'['";
    case TokenKind::rbracket: return "']'";
    case TokenKind::equals: return "'='";
    case TokenKind::colon: return "':'";
    case TokenKind::arrow: return "'->'";
    case TokenKind::comma: return "','";
    case TokenKind::dot: return "'.'";
    case TokenKind::end: return "end of input";
  }
  return "token";
}

struct Token {
  TokenKind kind = TokenKind::end;
  std::string text;  // identifier name, decoded string contents, or digits
  int line = 1;
  int column = 1;
  std::int64_t number = 0;
};

struct LexResult {
  std::vector<Token> tokens;  // always terminated by an `end` token
  Diagnostics diagnostics;
};

namespace detail {

inline bool is_alpha(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); }
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  Lexer(std::string_view text, std::string file) : text_(text), file_(std::move(file)) {}

  LexResult run() {
    LexResult out;
    while (true) {
      skip_trivia();
      if (at_end()) break;
      int line = line_, col = col_;
      char c = peek();
      if (is_alpha(c)) {
        std::string id;
        while (!at_end()) {
          char d = peek();
          if (d == '-' && peek(1) == '>') break;
          if (!(is_alpha(d) || is_digit(d) || d == '_' || d == '-')) break;
          id += d;
          advance();
        }
        out.tokens.push_back({TokenKind::identifier, std::move(id), line, col});
      } else if (is_digit(c)) {
        std::string digits;
        while (!at_end() && is_digit(peek())) {
          digits += peek();
          advance();
        }
        std::int64_t value = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
        if (ec != std::errc() || value > 1'000'000'000) {
          error(out, line, col, "integer literal out of range");
          continue;
        }
        Token t{TokenKind::integer, std::move(digits), line, col};
        t.number = value;
        out.tokens.push_back(std::move(t));
      } else if (c == '"') {
        lex_string(out, line, col);
      } else if (c == '-' && peek(1) == '>') {
        advance();
        advance();
        out.tokens.push_back({TokenKind::arrow, "->", line, col});
      } else {
        TokenKind kind;
        switch (c) {
          case '{': kind = TokenKind::lbrace; break;
          case '}': kind = TokenKind::rbrace; break;
          case '[': kind = TokenKind::lbracket; break;
          case ']': kind = TokenKind::rbracket; break;
          case '=': kind = TokenKind::equals; break;
          case ':': kind = TokenKind::colon; break;
          case ',': kind = TokenKind::comma; break;
          case '.': kind = TokenKind::dot; break;
          default: {
            std::string shown = (static_cast<unsigned char>(c) >= 0x20 && static_cast<unsigned char>(c) < 0x7f)
                                    ? std::string(1, c)
                                    : "\\x" + hex(static_cast<unsigned char>(c));
            error(out, line, col, "unexpected character '" + shown + "'");
            advance();
            // Swallow the rest of a multi-byte sequence so it yields one diagnostic.
            while (!at_end() && is_continuation(peek())) advance();
            continue;
          }
        }
        advance();
        out.tokens.push_back({kind, std::string(1, c), line, col});
      }
    }
    out.tokens.push_back({TokenKind::end, "", line_, col_});
    return out;
  }

 private:
  static bool is_continuation(char c) { return (static_cast<unsigned char>(c) & 0xC0) == 0x80; }

  static std::string hex(unsigned char c) {
    const char* digits = "0123456789ABCDEF";
    return {digits[c >> 4], digits[c & 0xF]};
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const { return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0'; }

  // Columns count decoded characters, so UTF-8 continuation bytes do not advance them.
  void advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else if (!is_continuation(c) && c != '\r') {
      ++col_;
    }
  }

  void skip_trivia() {
    while (!at_end()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        advance();
      } else if (c == '#') {
        while (!at_end() && peek() != '\n') advance();
      } else {
        break;
      }
    }
  }

  void lex_string(LexResult& out, int line, int col) {
    advance();  // opening quote
    std::string value;
    while (true) {
      if (at_end() || peek() == '\n') {
        error(out, line, col, "unterminated string literal");
        return;
      }
      char c = peek();
      if (c == '"') {
        advance();
        break;
      }
      if (c == '\\') {
        int eline = line_, ecol = col_;
        advance();
        if (at_end()) continue;
        char e = peek();
        advance();
        switch (e) {
          case '"': value += '"'; break;
          case '\\': value += '\\'; break;
          case 'n': value += '\n'; break;
          case 't': value += '\t'; break;
          default: error(out, eline, ecol, std::string("unknown escape sequence '\\") + e + "'"); break;
        }
        continue;
      }
      value += c;
      advance();
    }
    out.tokens.push_back({TokenKind::string, std::move(value), line, col});
  }

  void error(LexResult& out, int line, int col, std::string message) {
    Diagnostic d = make_error("LEX_ERROR", std::move(message));
    d.position = SourcePosition{file_, line, col};
    out.diagnostics.push_back(std::move(d));
  }

  std::string_view text_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace detail

inline LexResult tokenize(std::string_view text, std::string file = {}) {
  return detail::Lexer(text, std::move(file)).run();
}

/// Escapes a value for emission as a double-quoted DSL string.
inline std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

}  // namespace fisa::dsl
