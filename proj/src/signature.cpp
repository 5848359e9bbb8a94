#include "alba/signature.hpp"

#include <fstream>
#include <sstream>

namespace alba {

Pol flip(Pol p) { return p == Pol::One ? Pol::Partial : Pol::One; }

OrderType opposite(const OrderType& eps) {
  OrderType out(eps);
  for (auto& p : out) p = flip(p);
  return out;
}

bool is_f_family(Family f) { return f == Family::Fn || f == Family::Fr; }
bool is_g_family(Family f) { return f == Family::Gn || f == Family::Gr; }
bool is_regular(Family f) { return f == Family::Fr || f == Family::Gr; }

std::string to_string(const OrderType& eps) {
  std::string s;
  for (Pol p : eps) s += (p == Pol::One ? '1' : 'd');
  return s;
}

std::string to_string(Family f) {
  switch (f) {
    case Family::Fn: return "fn";
    case Family::Fr: return "fr";
    case Family::Gn: return "gn";
    case Family::Gr: return "gr";
  }
  return "?";
}

void Signature::reindex() const {
  index_.clear();
  for (int i = 0; i < (int)connectives.size(); ++i)
    index_[connectives[i].name] = i;
}

const Connective* Signature::find(const std::string& name) const {
  if (index_.size() != connectives.size()) reindex();
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &connectives[it->second];
}

const Connective& Signature::at(const std::string& name) const {
  const Connective* c = find(name);
  if (!c) throw SignatureError("unknown connective: " + name);
  return *c;
}

bool Signature::has(const std::string& name) const { return find(name); }

Signature validate_signature(const std::vector<Connective>& raw) {
  Signature sig;
  for (const Connective& c : raw) {
    if (c.name.empty()) throw SignatureError("empty connective name");
    if (sig.has(c.name)) throw SignatureError("duplicate name: " + c.name);
    if (is_regular(c.family) && c.arity != 1)
      throw SignatureError("regular connective must be unary: " + c.name);
    if ((int)c.eps.size() != c.arity)
      throw SignatureError("order-type length mismatch for " + c.name);
    if (c.arity < 0) throw SignatureError("negative arity for " + c.name);
    Connective copy = c;
    copy.origin = OriginKind::Base;
    copy.parent.clear();
    copy.coord = 0;
    sig.connectives.push_back(std::move(copy));
    sig.reindex();
  }
  sig.expanded = false;
  return sig;
}

namespace {

// Order-type of the residual of `c` in coordinate i (1-based), per the
// adjunction calculus; also decides which family the residual lands in.
Connective make_residual(const Connective& c, int i, std::string name,
                         OriginKind origin) {
  Connective r;
  r.name = std::move(name);
  r.arity = c.arity;
  r.origin = origin;
  r.parent = c.name;
  r.coord = i;
  r.eps = c.eps;
  Pol pi = c.eps[i - 1];
  for (int j = 0; j < c.arity; ++j) {
    if (j == i - 1)
      r.eps[j] = pi;
    else
      r.eps[j] = pi == Pol::One ? flip(c.eps[j]) : c.eps[j];
  }
  if (is_f_family(c.family))
    r.family = pi == Pol::One ? Family::Gn : Family::Fn;
  else
    r.family = pi == Pol::One ? Family::Fn : Family::Gn;
  return r;
}

Connective make_normalization(const Connective& c) {
  Connective n;
  n.arity = 1;
  n.eps = c.eps;
  n.origin = OriginKind::Normalization;
  n.parent = c.name;
  bool one = c.eps[0] == Pol::One;
  if (c.family == Family::Fr) {
    n.family = Family::Fn;
    n.name = (one ? "dia_" : "tri_") + c.name;
  } else {
    n.family = Family::Gn;
    n.name = (one ? "box_" : "trr_") + c.name;
  }
  return n;
}

std::string black_name(const Connective& regular) {
  bool one = regular.eps[0] == Pol::One;
  if (regular.family == Family::Fr)
    return (one ? "bbox_" : "btl_") + regular.name;
  return (one ? "bdia_" : "btr_") + regular.name;
}

}  // namespace

Signature expand_signature(const Signature& sig) {
  if (sig.expanded) return sig;
  Signature out = sig;
  auto add = [&out](Connective c) {
    if (out.has(c.name))
      throw SignatureError("expansion name collision: " + c.name);
    out.connectives.push_back(std::move(c));
  };
  for (const Connective& c : sig.connectives) {
    if (!is_regular(c.family)) continue;
    Connective n = make_normalization(c);
    Connective black = make_residual(n, 1, black_name(c), OriginKind::Adjoint);
    black.parent = n.name;
    add(std::move(n));
    add(std::move(black));
  }
  for (const Connective& c : sig.connectives) {
    if (is_regular(c.family)) continue;
    for (int i = 1; i <= c.arity; ++i) {
      std::string nm =
          c.name + (is_f_family(c.family) ? "#" : "b") + std::to_string(i);
      add(make_residual(c, i, nm, OriginKind::Residual));
    }
  }
  out.expanded = true;
  out.reindex();
  return out;
}

std::optional<std::string> residual_name(const Signature& sig,
                                         const Connective& c, int i) {
  if (i < 1 || i > c.arity) return std::nullopt;
  switch (c.origin) {
    case OriginKind::Base:
      if (is_regular(c.family)) return std::nullopt;  // two-output rule instead
      return c.name + (is_f_family(c.family) ? "#" : "b") + std::to_string(i);
    case OriginKind::Normalization: {
      // The residual of a normalization is the black adjoint.
      const Connective& parent = sig.at(c.parent);
      return black_name(parent);
    }
    case OriginKind::Residual:
    case OriginKind::Adjoint:
      if (i != c.coord) return std::nullopt;
      return c.parent;
  }
  return std::nullopt;
}

Signature parse_signature_text(const std::string& text) {
  std::vector<Connective> raw;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word) || word[0] == '#') continue;
    if (word != "conn")
      throw SignatureError("signature line " + std::to_string(lineno) +
                           ": expected 'conn'");
    Connective c;
    std::string fam, ot;
    int arity;
    if (!(ls >> c.name >> fam >> arity >> ot))
      throw SignatureError("signature line " + std::to_string(lineno) +
                           ": expected 'conn <name> <family> <arity> <eps>'");
    if (fam == "fn") c.family = Family::Fn;
    else if (fam == "fr") c.family = Family::Fr;
    else if (fam == "gn") c.family = Family::Gn;
    else if (fam == "gr") c.family = Family::Gr;
    else
      throw SignatureError("signature line " + std::to_string(lineno) +
                           ": bad family " + fam);
    c.arity = arity;
    for (char ch : ot) {
      if (ch == '1') c.eps.push_back(Pol::One);
      else if (ch == 'd') c.eps.push_back(Pol::Partial);
      else if (ch == '-') continue;  // allows '-' as the nullary marker
      else
        throw SignatureError("signature line " + std::to_string(lineno) +
                             ": bad order-type char");
    }
    raw.push_back(std::move(c));
  }
  return validate_signature(raw);
}

Signature parse_signature_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SignatureError("cannot open signature file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_signature_text(buf.str());
}

}  // namespace alba
