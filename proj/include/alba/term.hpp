#ifndef ALBA_TERM_HPP
#define ALBA_TERM_HPP

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "alba/signature.hpp"

namespace alba {

enum class Kind { Var, Nom, Conom, Top, Bot, Meet, Join, App };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

// Immutable tree; sharing is allowed, equality is structural.
struct Term {
  Kind kind;
  std::string name;           // Var/Nom/Conom atom name, App connective name
  std::vector<TermPtr> args;  // Meet/Join: 2, App: connective arity
};

TermPtr var(std::string name);
TermPtr nom(std::string name);
TermPtr conom(std::string name);
TermPtr top();
TermPtr bot();
TermPtr meet(TermPtr a, TermPtr b);
TermPtr join(TermPtr a, TermPtr b);
TermPtr app(std::string conn, std::vector<TermPtr> args);

bool equal(const TermPtr& a, const TermPtr& b);

// Fold of a nonempty list with the lattice conventions for the empty case.
TermPtr join_all(const std::vector<TermPtr>& ts);  // empty -> bot
TermPtr meet_all(const std::vector<TermPtr>& ts);  // empty -> top

struct Inequality {
  TermPtr lhs, rhs;
};

bool equal(const Inequality& a, const Inequality& b);

// Every occurrence of Var(v) replaced by u; there are no binders.
TermPtr substitute(const TermPtr& t, const std::string& v, const TermPtr& u);
Inequality substitute(const Inequality& iq, const std::string& v,
                      const TermPtr& u);

bool contains_var(const TermPtr& t, const std::string& v);
bool is_pure(const TermPtr& t);  // no propositional variables
bool is_pure(const Inequality& iq);

std::set<std::string> variables(const TermPtr& t);
std::set<std::string> variables(const Inequality& iq);
std::set<std::string> nominals(const TermPtr& t);
std::set<std::string> conominals(const TermPtr& t);

enum class Polarity { Positive, Negative, Both, Absent };

// Sign of v's occurrences inside t read off the +t generation tree.
Polarity polarity(const TermPtr& t, const Signature& sig, const std::string& v);

// Closed formulas have nominals and F*-placed generated connectives
// positive, conominals and G*-placed generated connectives negative; open is
// the dual reading of the second clause.
bool syntactic_closed(const TermPtr& t, const Signature& sig);
bool syntactic_open(const TermPtr& t, const Signature& sig);

// Printing uses `/\`, `\/`, infix binary connectives and prefix otherwise;
// output reparses to a structurally equal term.
std::string print_term(const TermPtr& t, const Signature& sig);
std::string print_ineq(const Inequality& iq, const Signature& sig);

}  // namespace alba

#endif
