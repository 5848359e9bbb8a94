#include "alba/parser.hpp"

#include <algorithm>
#include <cctype>

namespace alba {

namespace {

enum class Tok { End, LParen, RParen, Comma, Leq, MeetOp, JoinOp,
                 TopKw, BotKw, Hash, At, Ident, Conn };

struct Token {
  Tok kind;
  std::string text;
  size_t pos;
};

struct Lexer {
  const std::string& src;
  size_t i = 0;
  std::vector<std::string> conn_names;  // longest first

  Lexer(const std::string& s, const Signature& sig) : src(s) {
    for (const Connective& c : sig.connectives) conn_names.push_back(c.name);
    std::sort(conn_names.begin(), conn_names.end(),
              [](const std::string& a, const std::string& b) {
                return a.size() != b.size() ? a.size() > b.size() : a < b;
              });
  }

  static bool ident_char(char c) {
    return std::isalnum((unsigned char)c) || c == '_';
  }

  Token next() {
    while (i < src.size() && std::isspace((unsigned char)src[i])) ++i;
    size_t at = i;
    if (i >= src.size()) return {Tok::End, "", at};
    // Declared connective names take precedence, longest match first; a
    // purely alphanumeric name must not swallow a longer identifier prefix.
    for (const std::string& n : conn_names) {
      if (src.compare(i, n.size(), n) != 0) continue;
      if (ident_char(n.back()) && i + n.size() < src.size() &&
          ident_char(src[i + n.size()]))
        continue;
      i += n.size();
      return {Tok::Conn, n, at};
    }
    char c = src[i];
    if (c == '(') { ++i; return {Tok::LParen, "(", at}; }
    if (c == ')') { ++i; return {Tok::RParen, ")", at}; }
    if (c == ',') { ++i; return {Tok::Comma, ",", at}; }
    if (src.compare(i, 2, "<=") == 0) { i += 2; return {Tok::Leq, "<=", at}; }
    if (src.compare(i, 2, "/\\") == 0) { i += 2; return {Tok::MeetOp, "", at}; }
    if (src.compare(i, 2, "\\/") == 0) { i += 2; return {Tok::JoinOp, "", at}; }
    if (c == '#') { ++i; return {Tok::Hash, "#", at}; }
    if (c == '@') { ++i; return {Tok::At, "@", at}; }
    if (ident_char(c)) {
      size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      std::string word = src.substr(i, j - i);
      i = j;
      if (word == "top") return {Tok::TopKw, word, at};
      if (word == "bot") return {Tok::BotKw, word, at};
      return {Tok::Ident, word, at};
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "'", at);
  }
};

struct Parser {
  Lexer lex;
  const Signature& sig;
  Token cur;

  Parser(const std::string& s, const Signature& g) : lex(s, g), sig(g) {
    cur = lex.next();
  }

  void advance() { cur = lex.next(); }

  void expect(Tok k, const char* what) {
    if (cur.kind != k) throw ParseError(std::string("expected ") + what, cur.pos);
    advance();
  }

  std::string ident(const char* what) {
    if (cur.kind != Tok::Ident)
      throw ParseError(std::string("expected ") + what, cur.pos);
    std::string s = cur.text;
    advance();
    return s;
  }

  TermPtr primary() {
    switch (cur.kind) {
      case Tok::TopKw: advance(); return top();
      case Tok::BotKw: advance(); return bot();
      case Tok::Hash: advance(); return nom(ident("nominal name"));
      case Tok::At: advance(); return conom(ident("conominal name"));
      case Tok::Ident: {
        std::string s = cur.text;
        advance();
        return var(s);
      }
      case Tok::LParen: {
        advance();
        TermPtr t = term();
        expect(Tok::RParen, "')'");
        return t;
      }
      case Tok::Conn: {
        const Connective& c = sig.at(cur.text);
        size_t at = cur.pos;
        advance();
        if (c.arity == 0) {
          if (cur.kind == Tok::LParen) {
            advance();
            expect(Tok::RParen, "')'");
          }
          return app(c.name, {});
        }
        expect(Tok::LParen, "'(' after connective");
        std::vector<TermPtr> args;
        args.push_back(term());
        while (cur.kind == Tok::Comma) {
          advance();
          args.push_back(term());
        }
        expect(Tok::RParen, "')'");
        if ((int)args.size() != c.arity)
          throw ParseError("arity mismatch for " + c.name + ": expected " +
                               std::to_string(c.arity) + ", got " +
                               std::to_string(args.size()),
                           at);
        return app(c.name, std::move(args));
      }
      default:
        throw ParseError("expected a term", cur.pos);
    }
  }

  TermPtr infix() {
    TermPtr left = primary();
    if (cur.kind == Tok::Conn) {
      const Connective& c = sig.at(cur.text);
      if (c.arity != 2)
        throw ParseError("connective " + c.name + " is not binary infix",
                         cur.pos);
      advance();
      TermPtr right = primary();
      return app(c.name, {std::move(left), std::move(right)});
    }
    return left;
  }

  TermPtr conj() {
    TermPtr t = infix();
    while (cur.kind == Tok::MeetOp) {
      advance();
      t = meet(std::move(t), infix());
    }
    return t;
  }

  TermPtr term() {
    TermPtr t = conj();
    while (cur.kind == Tok::JoinOp) {
      advance();
      t = join(std::move(t), conj());
    }
    return t;
  }
};

}  // namespace

TermPtr parse_term(const std::string& text, const Signature& sig) {
  Parser p(text, sig);
  TermPtr t = p.term();
  if (p.cur.kind != Tok::End) throw ParseError("trailing input", p.cur.pos);
  return t;
}

Inequality parse_ineq(const std::string& text, const Signature& sig) {
  Parser p(text, sig);
  TermPtr lhs = p.term();
  p.expect(Tok::Leq, "'<='");
  TermPtr rhs = p.term();
  if (p.cur.kind != Tok::End) throw ParseError("trailing input", p.cur.pos);
  return {std::move(lhs), std::move(rhs)};
}

}  // namespace alba
