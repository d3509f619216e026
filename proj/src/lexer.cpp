#include "lexer.hpp"

#include <cctype>

#include "vcsim/amount.hpp"

namespace vcsim::lex {

namespace {

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

}  // namespace

std::vector<Token> tokenize(std::string_view src, std::vector<Diagnostic>& diags) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1;
  int col = 1;

  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  auto push = [&](TokKind kind, std::string text, int l, int c) {
    Token t;
    t.kind = kind;
    t.text = std::move(text);
    t.line = l;
    t.column = c;
    out.push_back(std::move(t));
  };

  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }

    int tl = line, tc = col;

    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      push(TokKind::ident, std::string(src.substr(i, j - i)), tl, tc);
      advance(j - i);
      continue;
    }

    if (digit(c) || ((c == '-' || c == '+') && i + 1 < src.size() &&
                     (digit(src[i + 1]) || src[i + 1] == '.'))) {
      std::size_t j = i + ((c == '-' || c == '+') ? 1 : 0);
      while (j < src.size() && digit(src[j])) ++j;
      bool integral = true;
      if (j < src.size() && src[j] == '.') {
        integral = false;
        ++j;
        while (j < src.size() && digit(src[j])) ++j;
      }
      std::string text(src.substr(i, j - i));
      auto micro = parse_micro(text, /*strict=*/true);
      Token t;
      t.line = tl;
      t.column = tc;
      t.text = text;
      if (!micro) {
        // Distinguish the two strict-parse failure modes for the message.
        bool too_precise = parse_micro(text, /*strict=*/false).has_value();
        diags.push_back({Severity::error, tl, tc,
                         too_precise
                             ? "number '" + text + "' has more than six fraction digits"
                             : "number '" + text + "' is malformed or out of range"});
        t.kind = TokKind::invalid;
      } else {
        t.kind = TokKind::number;
        t.micro = *micro;
        t.integral = integral;
      }
      out.push_back(std::move(t));
      advance(j - i);
      continue;
    }

    if (c == '"') {
      std::size_t j = i + 1;
      while (j < src.size() && src[j] != '"' && src[j] != '\n') ++j;
      if (j == src.size() || src[j] != '"') {
        diags.push_back({Severity::error, tl, tc, "unterminated string"});
        push(TokKind::invalid, "", tl, tc);
        advance(j - i);
        continue;
      }
      push(TokKind::string, std::string(src.substr(i + 1, j - i - 1)), tl, tc);
      advance(j - i + 1);
      continue;
    }

    TokKind kind;
    switch (c) {
      case '{': kind = TokKind::lbrace; break;
      case '}': kind = TokKind::rbrace; break;
      case '(': kind = TokKind::lparen; break;
      case ')': kind = TokKind::rparen; break;
      case ',': kind = TokKind::comma; break;
      case '=': kind = TokKind::equals; break;
      case '.': kind = TokKind::dot; break;
      default:
        diags.push_back({Severity::error, tl, tc,
                         std::string("unexpected character '") + c + "'"});
        push(TokKind::invalid, std::string(1, c), tl, tc);
        advance(1);
        continue;
    }
    push(kind, std::string(1, c), tl, tc);
    advance(1);
  }

  Token eof;
  eof.kind = TokKind::end;
  eof.line = line;
  eof.column = col;
  out.push_back(eof);
  return out;
}

}  // namespace vcsim::lex
