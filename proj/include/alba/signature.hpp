#ifndef ALBA_SIGNATURE_HPP
#define ALBA_SIGNATURE_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace alba {

// Per-coordinate polarity mark: One is monotone-like, Partial (d) antitone-like.
enum class Pol { One, Partial };

using OrderType = std::vector<Pol>;

OrderType opposite(const OrderType& eps);
Pol flip(Pol p);

// F-connectives join-compose coordinatewise, G-connectives meet-compose;
// regular families only preserve the nonempty versions and are always unary.
enum class Family { Fn, Fr, Gn, Gr };

bool is_f_family(Family f);
bool is_g_family(Family f);
bool is_regular(Family f);

enum class OriginKind {
  Base,           // declared by the user
  Residual,       // f#i / gbj of a normal parent (or of a normalization)
  Normalization,  // dia_f, box_g, tri_f, trr_g of a regular parent
  Adjoint,        // bbox_f, bdia_g, btl_f, btr_g: residual of a normalization
};

struct Connective {
  std::string name;
  Family family = Family::Fn;
  int arity = 0;
  OrderType eps;
  OriginKind origin = OriginKind::Base;
  std::string parent;  // empty for Base
  int coord = 0;       // defining coordinate for Residual/Adjoint, 1-based
};

class SignatureError : public std::runtime_error {
 public:
  explicit SignatureError(const std::string& what) : std::runtime_error(what) {}
};

struct Signature {
  std::vector<Connective> connectives;  // declaration order
  bool expanded = false;

  const Connective* find(const std::string& name) const;
  const Connective& at(const std::string& name) const;
  bool has(const std::string& name) const;

 private:
  friend Signature validate_signature(const std::vector<Connective>& raw);
  friend Signature expand_signature(const Signature& sig);
  mutable std::map<std::string, int> index_;
  void reindex() const;
};

// Structural checks only; the algebraic laws live in the finite-model layer.
// Throws SignatureError for duplicate names, non-unary regular connectives,
// or an order-type whose length differs from the arity.
Signature validate_signature(const std::vector<Connective>& raw);

// Adds, for each f in F_n, the residuals f#i (placed in G* when eps_f(i)=1,
// in F* when eps_f(i)=d), dually gbj for g in G_n; for each regular
// connective its normalization (dia_/box_/tri_/trr_) and the black adjoint
// of the normalization (bbox_/bdia_/btl_/btr_). Idempotent.
Signature expand_signature(const Signature& sig);

// Name of the residual of `c` in coordinate i (1-based), if c is residuable
// there: base normal connectives and normalizations at every coordinate,
// residuals/adjoints only at their defining coordinate (giving the parent).
std::optional<std::string> residual_name(const Signature& sig,
                                         const Connective& c, int i);

// One declaration per line: `conn <name> <fn|fr|gn|gr> <arity> <ordertype>`
// with the order-type written over {1,d}. Blank lines and '#' comments ok.
Signature parse_signature_text(const std::string& text);
Signature parse_signature_file(const std::string& path);

std::string to_string(const OrderType& eps);
std::string to_string(Family f);

}  // namespace alba

#endif
