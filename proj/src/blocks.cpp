#include "mw/blocks.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace mw::blk {

std::string kind_str(AtomKind k) {
  switch (k) {
    case AtomKind::T: return "T";
    case AtomKind::H: return "H";
    case AtomKind::Cpartial: return "Cpartial";
    case AtomKind::CId: return "CId";
  }
  throw std::logic_error("kind_str: bad kind");
}

bool BlockAtom::operator<(const BlockAtom& o) const {
  return std::tuple(static_cast<int>(kind), q, p) <
         std::tuple(static_cast<int>(o.kind), o.q, o.p);
}

std::string BlockAtom::str() const {
  std::ostringstream os;
  os << kind_str(kind);
  if (q != 0 || p != 0) os << "(" << q << ")[" << p << "]";
  return os.str();
}

BlockAtom atom_t(long q, long p) { return {AtomKind::T, q, p}; }
BlockAtom atom_h(long q, long p) { return {AtomKind::H, q, p}; }
BlockAtom atom_cpartial(long q, long p) { return {AtomKind::Cpartial, q, p}; }
BlockAtom atom_cid(long q, long p) { return {AtomKind::CId, q, p}; }

BlockAtom twist_shift(const BlockAtom& a, long dq, long dp) {
  return {a.kind, a.q + dq, a.p + dp};
}

namespace {

// Parses "<name>" or "<name>(q)[p]" with optional surrounding spaces.
std::optional<BlockAtom> parse_atom_trimmed(std::string s) {
  auto strip = [](std::string& t) {
    size_t b = t.find_first_not_of(" \t");
    size_t e = t.find_last_not_of(" \t");
    t = (b == std::string::npos) ? "" : t.substr(b, e - b + 1);
  };
  strip(s);
  if (s.empty()) return std::nullopt;
  size_t name_end = 0;
  while (name_end < s.size() && (std::isalpha(static_cast<unsigned char>(s[name_end])))) name_end++;
  std::string name = s.substr(0, name_end);
  AtomKind kind;
  if (name == "T") kind = AtomKind::T;
  else if (name == "H") kind = AtomKind::H;
  else if (name == "Cpartial") kind = AtomKind::Cpartial;
  else if (name == "CId") kind = AtomKind::CId;
  else return std::nullopt;
  std::string rest = s.substr(name_end);
  strip(rest);
  if (rest.empty()) return BlockAtom{kind, 0, 0};
  long q = 0, p = 0;
  // expect "(q)[p]"
  if (rest.front() != '(') return std::nullopt;
  size_t close = rest.find(')');
  if (close == std::string::npos) return std::nullopt;
  try {
    q = std::stol(rest.substr(1, close - 1));
  } catch (...) {
    return std::nullopt;
  }
  std::string tail = rest.substr(close + 1);
  strip(tail);
  if (tail.empty()) {
    p = 0;
  } else {
    if (tail.front() != '[' || tail.back() != ']') return std::nullopt;
    try {
      p = std::stol(tail.substr(1, tail.size() - 2));
    } catch (...) {
      return std::nullopt;
    }
  }
  return BlockAtom{kind, q, p};
}

}  // namespace

std::optional<BlockAtom> parse_atom(const std::string& text) {
  return parse_atom_trimmed(text);
}

BlockExpr expr_of(std::vector<BlockAtom> atoms, long truncation) {
  std::sort(atoms.begin(), atoms.end());
  return BlockExpr{std::move(atoms), truncation};
}

BlockExpr expr_sum(const BlockExpr& a, const BlockExpr& b) {
  std::vector<BlockAtom> all = a.atoms;
  all.insert(all.end(), b.atoms.begin(), b.atoms.end());
  return expr_of(std::move(all), std::max(a.truncation, b.truncation));
}

BlockExpr twist_shift(const BlockExpr& e, long dq, long dp) {
  std::vector<BlockAtom> all;
  all.reserve(e.atoms.size());
  for (const auto& a : e.atoms) all.push_back(twist_shift(a, dq, dp));
  return expr_of(std::move(all), e.truncation + dq);
}

std::string BlockExpr::str() const {
  if (atoms.empty()) return "0";
  std::ostringstream os;
  for (size_t i = 0; i < atoms.size(); i++) {
    if (i) os << " + ";
    os << atoms[i].str();
  }
  return os.str();
}

std::optional<BlockExpr> parse_expr(const std::string& text) {
  // split on '+' at top level (atoms contain no '+')
  std::vector<BlockAtom> atoms;
  std::string cur;
  auto flush = [&]() -> bool {
    size_t b = cur.find_first_not_of(" \t");
    if (b == std::string::npos) { cur.clear(); return true; }  // empty piece
    std::string piece = cur;
    cur.clear();
    size_t e = piece.find_last_not_of(" \t");
    piece = piece.substr(piece.find_first_not_of(" \t"), e + 1);
    if (piece == "0") return true;
    auto a = parse_atom(piece);
    if (!a) return false;
    atoms.push_back(*a);
    return true;
  };
  for (char c : text) {
    if (c == '+') {
      if (!flush()) return std::nullopt;
    } else {
      cur += c;
    }
  }
  if (!flush()) return std::nullopt;
  return expr_of(std::move(atoms));
}

std::optional<ConeShape> cone_shape(const BlockAtom& atom) {
  switch (atom.kind) {
    case AtomKind::T:
    case AtomKind::H:
      return std::nullopt;
    case AtomKind::Cpartial:
      // cone of 24*boundary : H(q)[p] -> T(q+1)[p+2]
      return ConeShape{atom_h(atom.q, atom.p), atom_t(atom.q + 1, atom.p + 2),
                       ArrowWord::Boundary, 24};
    case AtomKind::CId:
      // cone of 24*Id : H(q)[p] -> H(q)[p]
      return ConeShape{atom_h(atom.q, atom.p), atom_h(atom.q, atom.p),
                       ArrowWord::Identity, 24};
  }
  throw std::logic_error("cone_shape: bad kind");
}

}  // namespace mw::blk
