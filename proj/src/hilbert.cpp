#include "mw/qform.hpp"

namespace mw::qf {

using ab::AlgebraError;

int legendre(const Int& a, const Int& p) {
  return mpz_legendre(a.get_mpz_t(), p.get_mpz_t());
}

Int least_nonresidue(const Int& p) {
  for (Int r = 2; r < p; ++r)
    if (legendre(r, p) == -1) return r;
  throw AlgebraError("least_nonresidue: no nonresidue below p");
}

namespace detail {

// squarefree part of a nonzero integer, sign preserved; trial division is
// fine at the scale this engine works at, but refuse huge leftovers that
// are not themselves prime rather than silently mis-classify
Int squarefree_part(Int n) {
  if (n == 0) throw AlgebraError("squarefree_part of zero");
  Int sign = n < 0 ? -1 : 1;
  n = abs(n);
  Int out = 1;
  for (Int d = 2; d * d <= n && d <= 100000; ++d) {
    if (n % d != 0) continue;
    int e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    if (e % 2 == 1) out *= d;
  }
  if (n > 1) {
    if (n > 10000000000 && mpz_probab_prime_p(n.get_mpz_t(), 30) == 0)
      throw AlgebraError("squarefree_part: input too composite to factor");
    out *= n;
  }
  return sign * out;
}

std::vector<Int> prime_factors(Int n) {
  n = abs(n);
  std::vector<Int> out;
  for (Int d = 2; d * d <= n && d <= 100000; ++d) {
    if (n % d != 0) continue;
    out.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) {
    if (n > 10000000000 && mpz_probab_prime_p(n.get_mpz_t(), 30) == 0)
      throw AlgebraError("prime_factors: input too composite to factor");
    out.push_back(n);
  }
  return out;
}

// p-adic valuation and unit part of a nonzero rational
std::pair<long, Rat> val_unit(const Rat& a, const Int& p) {
  Int num = a.get_num(), den = a.get_den();
  long v = 0;
  while (num % p == 0) {
    num /= p;
    ++v;
  }
  while (den % p == 0) {
    den /= p;
    --v;
  }
  Rat u(num);
  u /= Rat(den);
  return {v, u};
}

// residue of a p-unit rational mod m (m = p or 8), in [0, m)
Int unit_mod(const Rat& u, const Int& m) {
  Int num = u.get_num() % m, den = u.get_den() % m, inv;
  if (num < 0) num += m;
  if (den < 0) den += m;
  if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t()) == 0)
    throw AlgebraError("unit_mod: denominator divisible by the modulus");
  return (num * inv) % m;
}

bool is_local_square(const Rat& a, const Int& p) {
  if (p == 0) return a > 0;
  auto [v, u] = val_unit(a, p);
  if (v % 2 != 0) return false;
  if (p == 2) return unit_mod(u, 8) == 1;
  return legendre(unit_mod(u, p), p) == 1;
}

}  // namespace detail

int hilbert_symbol(const Rat& a, const Rat& b, const Int& p) {
  if (a == 0 || b == 0) throw AlgebraError("hilbert symbol of zero");
  if (p == 0) return (a < 0 && b < 0) ? -1 : 1;
  auto [va, u] = detail::val_unit(a, p);
  auto [vb, v] = detail::val_unit(b, p);
  long alpha = ((va % 2) + 2) % 2, beta = ((vb % 2) + 2) % 2;
  if (p == 2) {
    auto eps = [](const Int& r) { return Int((r - 1) / 2).get_si() % 2; };
    auto omega = [](const Int& r) { return Int((r * r - 1) / 8).get_si() % 2; };
    Int ru = detail::unit_mod(u, 8), rv = detail::unit_mod(v, 8);
    long e = eps(ru) * eps(rv) + alpha * omega(rv) + beta * omega(ru);
    return e % 2 == 0 ? 1 : -1;
  }
  Int ru = detail::unit_mod(u, p), rv = detail::unit_mod(v, p);
  int s = 1;
  if (beta) s *= legendre(ru, p);
  if (alpha) s *= legendre(rv, p);
  if (alpha && beta && (((p - 1) / 2) % 2 == 1)) s = -s;
  return s;
}

SquareClass square_class(const Field& f, const Rat& a) {
  if (a == 0) throw AlgebraError("square class of zero");
  switch (f.kind) {
    case FieldKind::Complex:
      return {f, 1};
    case FieldKind::Real:
      return {f, a > 0 ? 1 : -1};
    case FieldKind::FinitePrime: {
      Int r = detail::unit_mod(a, f.p);
      return {f, legendre(r, f.p) == 1 ? Rat(1) : Rat(least_nonresidue(f.p))};
    }
    case FieldKind::Rational:
      return {f, Rat(detail::squarefree_part(a.get_num() * a.get_den()))};
  }
  throw AlgebraError("square_class: bad field");
}

SquareClass negate_class(const SquareClass& c) {
  return square_class(c.field, -c.rep);
}

SquareClass mul_class(const SquareClass& a, const SquareClass& b) {
  if (!(a.field == b.field)) throw AlgebraError("mul_class: field mismatch");
  return square_class(a.field, a.rep * b.rep);
}

bool is_trivial_class(const SquareClass& c) { return c.rep == 1; }

std::string SquareClass::str() const { return rep.get_str(); }

}  // namespace mw::qf
