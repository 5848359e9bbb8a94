#ifndef ALBA_PARSER_HPP
#define ALBA_PARSER_HPP

#include <stdexcept>
#include <string>

#include "alba/signature.hpp"
#include "alba/term.hpp"

namespace alba {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, size_t pos)
      : std::runtime_error(what + " at position " + std::to_string(pos)),
        position(pos) {}
  size_t position;
};

// Grammar:
//   ineq    := term "<=" term
//   term    := conj { "\/" conj }
//   conj    := infix { "/\" infix }
//   infix   := primary [ <binary connective name> primary ]   (non-assoc)
//   primary := "top" | "bot" | "#"id | "@"id | id
//            | <connective name> "(" term {"," term} ")" | "(" term ")"
// Connective names are lexed by longest match against the signature, so
// names like "->", "->b1" or "." work; `/\` binds tighter than `\/` and
// connective application binds tightest.
TermPtr parse_term(const std::string& text, const Signature& sig);
Inequality parse_ineq(const std::string& text, const Signature& sig);

}  // namespace alba

#endif
