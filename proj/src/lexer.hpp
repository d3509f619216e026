#pragma once

// Tokenizer for the scenario language. Internal to the parser.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "vcsim/diagnostic.hpp"

namespace vcsim::lex {

enum class TokKind {
  ident,
  number,   // fixed-point literal, value in micro-units
  string,   // double-quoted scenario name
  lbrace,
  rbrace,
  lparen,
  rparen,
  comma,
  equals,
  dot,
  end,      // end of input
  invalid,  // lexing failed; a diagnostic was emitted
};

struct Token {
  TokKind kind = TokKind::end;
  std::string text;              // raw spelling (idents, strings: unquoted)
  std::int64_t micro = 0;        // numbers only
  bool integral = false;         // number had no fraction part
  int line = 1;
  int column = 1;
};

// Tokenizes the whole input. Whitespace and "--" line comments are skipped.
// Malformed numbers and unterminated strings produce error diagnostics and
// an `invalid` token so the parser can resynchronize.
std::vector<Token> tokenize(std::string_view source, std::vector<Diagnostic>& diags);

}  // namespace vcsim::lex
