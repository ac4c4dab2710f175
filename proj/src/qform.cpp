#include <algorithm>
#include <map>
#include <sstream>

#include "mw/qform.hpp"

namespace mw::qf {

using ab::AlgebraError;

Field Field::finite(const Int& p) {
  if (p < 3 || p % 2 == 0 || mpz_probab_prime_p(p.get_mpz_t(), 30) == 0)
    throw AlgebraError("finite field parameter must be an odd prime");
  return {FieldKind::FinitePrime, p};
}

std::string Field::str() const {
  switch (kind) {
    case FieldKind::Complex: return "C";
    case FieldKind::Real: return "R";
    case FieldKind::FinitePrime: return "F" + p.get_str();
    case FieldKind::Rational: return "Q";
  }
  return "?";
}

std::optional<Field> parse_field(const std::string& name) {
  if (name == "C") return Field::complex();
  if (name == "R") return Field::real();
  if (name == "Q") return Field::rational();
  if (name.size() > 1 && name[0] == 'F') {
    std::string digits = name.substr(1);
    if (digits.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
    try {
      return Field::finite(Int(digits));
    } catch (const AlgebraError&) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

std::string QForm::str() const {
  std::ostringstream os;
  os << "<";
  for (std::size_t i = 0; i < diag.size(); ++i) {
    if (i) os << ",";
    os << diag[i].get_str();
  }
  os << ">";
  return os.str();
}

QForm make_form(const Field& f, const std::vector<Rat>& entries) {
  QForm q{f, entries};
  for (auto& a : q.diag) {
    a.canonicalize();
    if (a == 0) throw AlgebraError("quadratic form entries must be nonzero");
    if (f.kind == FieldKind::FinitePrime) {
      Int r = detail::unit_mod(a, f.p);
      a = Rat(r);
    }
  }
  return q;
}

QForm orthogonal_sum(const QForm& a, const QForm& b) {
  if (!(a.field == b.field)) throw AlgebraError("orthogonal_sum: field mismatch");
  QForm q = a;
  q.diag.insert(q.diag.end(), b.diag.begin(), b.diag.end());
  return q;
}

QForm negate(const QForm& a) {
  std::vector<Rat> d;
  d.reserve(a.diag.size());
  for (const auto& x : a.diag) d.push_back(-x);
  return make_form(a.field, d);
}

QForm hyperbolic_form(const Field& f, std::size_t copies) {
  std::vector<Rat> d;
  for (std::size_t i = 0; i < copies; ++i) {
    d.push_back(1);
    d.push_back(-1);
  }
  return make_form(f, d);
}

QForm scale_form(const Rat& c, const QForm& a) {
  if (c == 0) throw AlgebraError("scale_form by zero");
  std::vector<Rat> d;
  for (const auto& x : a.diag) d.push_back(c * x);
  return make_form(a.field, d);
}

QForm tensor(const QForm& a, const QForm& b) {
  if (!(a.field == b.field)) throw AlgebraError("tensor: field mismatch");
  std::vector<Rat> d;
  for (const auto& x : a.diag)
    for (const auto& y : b.diag) d.push_back(x * y);
  return make_form(a.field, d);
}

SquareClass det_class(const QForm& q) {
  Rat prod = 1;
  for (const auto& a : q.diag) prod *= a;
  return square_class(q.field, prod);
}

SquareClass signed_disc(const QForm& q) {
  std::size_t n = q.rank();
  Rat prod = (n * (n - 1) / 2) % 2 == 0 ? 1 : -1;
  for (const auto& a : q.diag) prod *= a;
  return square_class(q.field, prod);
}

long signature(const QForm& q) {
  if (q.field.kind != FieldKind::Real && q.field.kind != FieldKind::Rational)
    throw AlgebraError("signature needs an ordered field");
  long s = 0;
  for (const auto& a : q.diag) s += a > 0 ? 1 : -1;
  return s;
}

int hasse_symbol(const QForm& q, const Int& p) {
  if (q.field.kind != FieldKind::Rational) throw AlgebraError("hasse symbol is rational-only");
  int s = 1;
  for (std::size_t i = 0; i < q.rank(); ++i)
    for (std::size_t j = i + 1; j < q.rank(); ++j)
      s *= hilbert_symbol(q.diag[i], q.diag[j], p);
  return s;
}

std::vector<Int> bad_primes(const QForm& q) {
  std::vector<Int> out{2};
  for (const auto& a : q.diag) {
    for (const auto& p : detail::prime_factors(a.get_num() * a.get_den()))
      out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool isometric(const QForm& a, const QForm& b) {
  if (!(a.field == b.field)) return false;
  if (a.rank() != b.rank()) return false;
  switch (a.field.kind) {
    case FieldKind::Complex:
      return true;
    case FieldKind::Real:
      return signature(a) == signature(b);
    case FieldKind::FinitePrime:
      return det_class(a) == det_class(b);
    case FieldKind::Rational: {
      if (det_class(a) != det_class(b)) return false;
      if (signature(a) != signature(b)) return false;
      std::vector<Int> places = bad_primes(a);
      for (const auto& p : bad_primes(b)) places.push_back(p);
      std::sort(places.begin(), places.end());
      places.erase(std::unique(places.begin(), places.end()), places.end());
      for (const auto& p : places)
        if (hasse_symbol(a, p) != hasse_symbol(b, p)) return false;
      return true;
    }
  }
  return false;
}

namespace {

// invariant record of a rational form, the locus the Witt machine works on
struct RatRecord {
  long rank;
  SquareClass det;  // plain determinant class
  long sig;
  std::vector<std::pair<Int, int>> eps;  // (p, hasse) at every tracked place
};

RatRecord rat_record(const QForm& q) {
  RatRecord r;
  r.rank = static_cast<long>(q.rank());
  r.det = q.rank() ? det_class(q) : SquareClass{q.field, 1};
  r.sig = signature(q);
  for (const auto& p : bad_primes(q)) r.eps.emplace_back(p, hasse_symbol(q, p));
  return r;
}

bool record_isotropic(const RatRecord& r) {
  if (r.rank < 2) return false;
  if (r.rank == 2) return r.det.rep == -1;  // -det a global square
  if (std::labs(r.sig) == r.rank) return false;  // definite
  if (r.rank == 3) {
    for (const auto& [p, e] : r.eps)
      if (e != hilbert_symbol(-1, -r.det.rep, p)) return false;
    return true;  // indefinite, and locally fine everywhere
  }
  if (r.rank == 4) {
    for (const auto& [p, e] : r.eps) {
      bool d_square = detail::is_local_square(r.det.rep, p);
      if (d_square && e != hilbert_symbol(-1, -1, p)) return false;
    }
    return true;
  }
  return true;  // rank >= 5 indefinite
}

// strip one hyperbolic plane: rank -2, det flips sign, eps twists
void strip_hyperbolic(RatRecord& r) {
  r.rank -= 2;
  SquareClass newdet = negate_class(r.det);
  for (auto& [p, e] : r.eps) e *= hilbert_symbol(-1, newdet.rep, p);
  r.det = newdet;
}

WittClass explicit_witt(const Field& f, std::vector<Rat> kernel) {
  WittClass w;
  w.field = f;
  w.kernel_diag = std::move(kernel);
  w.rank = static_cast<long>(w.kernel_diag.size());
  QForm k = make_form(f, w.kernel_diag);
  w.disc = w.rank ? signed_disc(k) : SquareClass{f, 1};
  w.sig = f.kind == FieldKind::Real && w.rank ? signature(k) : 0;
  return w;
}

}  // namespace

bool is_isotropic(const QForm& q) {
  if (q.rank() < 2) return false;
  switch (q.field.kind) {
    case FieldKind::Complex:
      return true;
    case FieldKind::Real: {
      bool pos = false, neg = false;
      for (const auto& a : q.diag) (a > 0 ? pos : neg) = true;
      return pos && neg;
    }
    case FieldKind::FinitePrime: {
      if (q.rank() >= 3) return true;
      return is_trivial_class(negate_class(det_class(q)));
    }
    case FieldKind::Rational:
      return record_isotropic(rat_record(q));
  }
  return false;
}

bool represents(const QForm& q, const Rat& c) {
  if (c == 0) return is_isotropic(q);
  if (q.rank() == 0) return false;
  QForm ext = orthogonal_sum(q, make_form(q.field, {-c}));
  return is_isotropic(ext);
}

WittDecomposition witt_decompose(const QForm& q) {
  const Field& f = q.field;
  std::size_t n = q.rank();
  switch (f.kind) {
    case FieldKind::Complex: {
      std::vector<Rat> k;
      if (n % 2) k.push_back(1);
      return {explicit_witt(f, k), n / 2};
    }
    case FieldKind::Real: {
      long s = n ? signature(q) : 0;
      std::vector<Rat> k(static_cast<std::size_t>(std::labs(s)), s >= 0 ? 1 : -1);
      return {explicit_witt(f, k), (n - k.size()) / 2};
    }
    case FieldKind::FinitePrime: {
      SquareClass d = n ? det_class(q) : SquareClass{f, 1};
      if (n % 2 == 1) {
        // <a> with a ~ det * (-1)^((n-1)/2)
        Rat sign = ((n - 1) / 2) % 2 == 0 ? 1 : -1;
        SquareClass a = square_class(f, d.rep * sign);
        return {explicit_witt(f, {a.rep}), (n - 1) / 2};
      }
      SquareClass hyp_det = square_class(f, (n / 2) % 2 == 0 ? Rat(1) : Rat(-1));
      if (n == 0 || d == hyp_det) return {explicit_witt(f, {}), n / 2};
      Rat sign = ((n - 2) / 2) % 2 == 0 ? 1 : -1;
      SquareClass delta = square_class(f, d.rep * sign);
      return {explicit_witt(f, {Rat(1), delta.rep}), (n - 2) / 2};
    }
    case FieldKind::Rational: {
      RatRecord r = rat_record(q);
      std::size_t m = 0;
      while (record_isotropic(r)) {
        strip_hyperbolic(r);
        ++m;
      }
      WittClass w;
      w.field = f;
      w.rank = r.rank;
      Rat sign = (r.rank * (r.rank - 1) / 2) % 2 == 0 ? 1 : -1;
      w.disc = r.rank ? square_class(f, sign * r.det.rep) : SquareClass{f, 1};
      w.sig = r.sig;
      for (const auto& [p, e] : r.eps)
        if (e == -1) w.hasse.emplace_back(p, e);
      return {w, m};
    }
  }
  throw AlgebraError("witt_decompose: bad field");
}

WittClass witt_class(const QForm& q) { return witt_decompose(q).kernel; }

WittClass witt_add(const WittClass& a, const WittClass& b) {
  if (!(a.field == b.field)) throw AlgebraError("witt_add: field mismatch");
  if (a.field.kind == FieldKind::Rational)
    throw AlgebraError("witt_add over Q: combine forms, not class records");
  std::vector<Rat> d = a.kernel_diag;
  d.insert(d.end(), b.kernel_diag.begin(), b.kernel_diag.end());
  return witt_class(make_form(a.field, d));
}

std::string WittClass::str() const {
  if (is_trivial()) return "0";
  if (field.kind != FieldKind::Rational) {
    QForm k{field, kernel_diag};
    return k.str();
  }
  std::ostringstream os;
  os << "rank " << rank << ", disc " << disc.str() << ", sig " << sig;
  for (const auto& [p, e] : hasse) os << ", eps(" << p << ")=" << e;
  return os.str();
}

GWElement gw_of_form(const QForm& q) { return {q.field, q, make_form(q.field, {})}; }
GWElement gw_zero(const Field& f) { return {f, make_form(f, {}), make_form(f, {})}; }

GWElement gw_add(const GWElement& a, const GWElement& b) {
  return {a.field, orthogonal_sum(a.plus, b.plus), orthogonal_sum(a.minus, b.minus)};
}

GWElement gw_neg(const GWElement& a) { return {a.field, a.minus, a.plus}; }

GWElement gw_sub(const GWElement& a, const GWElement& b) { return gw_add(a, gw_neg(b)); }

GWElement gw_mul(const GWElement& a, const GWElement& b) {
  GWElement out{a.field,
                orthogonal_sum(tensor(a.plus, b.plus), tensor(a.minus, b.minus)),
                orthogonal_sum(tensor(a.plus, b.minus), tensor(a.minus, b.plus))};
  return out;
}

GWElement hyperbolic_element(const Field& f, long copies) {
  QForm h = hyperbolic_form(f, static_cast<std::size_t>(copies >= 0 ? copies : -copies));
  if (copies >= 0) return gw_of_form(h);
  return gw_neg(gw_of_form(h));
}

long gw_rank(const GWElement& x) {
  return static_cast<long>(x.plus.rank()) - static_cast<long>(x.minus.rank());
}

WittClass gw_to_witt(const GWElement& x) {
  return witt_class(orthogonal_sum(x.plus, negate(x.minus)));
}

bool gw_eq(const GWElement& a, const GWElement& b) {
  if (!(a.field == b.field)) return false;
  if (gw_rank(a) != gw_rank(b)) return false;
  return gw_to_witt(gw_sub(a, b)).is_trivial();
}

Int representation_count(const QForm& q, const Rat& c) {
  if (q.field.kind != FieldKind::FinitePrime)
    throw AlgebraError("representation_count is finite-field-only");
  const Int& p = q.field.p;
  Int total = 1;
  for (std::size_t i = 0; i < q.rank(); ++i) {
    total *= p;
    if (total > 10000000) throw AlgebraError("representation_count: search space too large");
  }
  Int target = detail::unit_mod(c, p);  // c = 0 maps to residue 0
  Int count = 0;
  std::vector<Int> x(q.rank(), 0);
  for (Int idx = 0; idx < total; ++idx) {
    Int t = idx, val = 0;
    for (std::size_t i = 0; i < q.rank(); ++i) {
      x[i] = t % p;
      t /= p;
      val += Int(q.diag[i].get_num()) * x[i] * x[i];
    }
    if (((val % p) + p) % p == target) ++count;
  }
  return count;
}

WittGroupModel witt_group_model(const Int& p) {
  Field f = Field::finite(p);
  Rat rho(least_nonresidue(p));
  auto combo_class = [&](long a, long b) {
    std::vector<Rat> d;
    for (long i = 0; i < std::labs(a); ++i) d.push_back(a > 0 ? Rat(1) : Rat(-1));
    for (long i = 0; i < std::labs(b); ++i) d.push_back(b > 0 ? rho : -rho);
    return witt_class(make_form(f, d));
  };
  // relation lattice of the generators <1>, <rho> inside a window that
  // comfortably contains a basis (orders divide 4)
  ab::Mat rel(2);
  for (long a = -4; a <= 4; ++a)
    for (long b = -4; b <= 4; ++b)
      if ((a || b) && combo_class(a, b).is_trivial()) {
        rel[0].push_back(a);
        rel[1].push_back(b);
      }
  ab::Presented pres = ab::group_from_presentation(2, rel);
  // self-check: the number of distinct classes must match the group order
  std::map<std::string, bool> classes;
  for (long a = 0; a < 4; ++a)
    for (long b = 0; b < 4; ++b) classes[combo_class(a, b).str()] = true;
  if (pres.group.order() != Int(classes.size()))
    throw AlgebraError("witt_group_model: class count disagrees with presentation");
  return {pres.group, pres.project};
}

bool gw_finitely_generated(const Field& f) { return f.kind != FieldKind::Rational; }

GWRealization gw_realization(const Field& f) {
  using namespace ab;
  switch (f.kind) {
    case FieldKind::Complex: {
      FGAbGroup z = make_free(1), z2 = make_cyclic(2);
      return {f, z, z2, FGAbHom{z, z, {{1}}}, FGAbHom{z, z, {{2}}},
              FGAbHom{z, z2, {{1}}}};
    }
    case FieldKind::Real: {
      FGAbGroup z = make_free(1), z2 = make_free(2);
      // basis: [<1>], [<-1>]
      return {f, z2, z, FGAbHom{z2, z, {{1, 1}}}, FGAbHom{z, z2, {{1}, {1}}},
              FGAbHom{z2, z, {{1, -1}}}};
    }
    case FieldKind::FinitePrime: {
      WittGroupModel wm = witt_group_model(f.p);
      // generators: torsion tau = [<1>] - [<rho>], free g = [<1>]
      FGAbGroup gw{{2}, 1};
      FGAbGroup z = make_free(1);
      FGAbHom rank_hom{gw, z, {{0, 1}}};
      long idx_minus1 = legendre(Int(f.p - 1), f.p) == 1 ? 0 : 1;
      Mat h = zero_mat(gw.gen_count(), 1);
      h[0][0] = idx_minus1;  // det class of <1,-1> is the class of -1
      h[1][0] = 2;
      // proj columns: image of tau and g in the canonical Witt group
      std::size_t wgens = wm.group.gen_count();
      Mat proj = zero_mat(wgens, 2);
      for (std::size_t i = 0; i < wgens; ++i) {
        proj[i][0] = wm.project[i][0] - wm.project[i][1];  // tau = <1> - <rho>
        proj[i][1] = wm.project[i][0];                     // g = <1>
      }
      GWRealization out{f, gw, wm.group, rank_hom, FGAbHom{z, gw, h},
                        FGAbHom{gw, wm.group, proj}};
      if (!is_well_defined(out.proj_hom) || !is_well_defined(out.h_hom))
        throw AlgebraError("gw_realization: arrows fail well-definedness");
      return out;
    }
    case FieldKind::Rational:
      throw AlgebraError("GW(Q) is not finitely generated");
  }
  throw AlgebraError("gw_realization: bad field");
}

std::vector<Int> GWRealization::coords(const GWElement& x) const {
  if (!(x.field == field)) throw AlgebraError("coords: field mismatch");
  switch (field.kind) {
    case FieldKind::Complex:
      return {gw_rank(x)};
    case FieldKind::Real: {
      long pp = 0, pm = 0;
      for (const auto& a : x.plus.diag) (a > 0 ? pp : pm) += 1;
      for (const auto& a : x.minus.diag) (a > 0 ? pp : pm) -= 1;
      return {pp, pm};
    }
    case FieldKind::FinitePrime: {
      auto det_idx = [&](const QForm& q) {
        if (q.rank() == 0) return Int(0);
        return Int(is_trivial_class(det_class(q)) ? 0 : 1);
      };
      Int tau = det_idx(x.plus) - det_idx(x.minus);
      tau = ((tau % 2) + 2) % 2;
      return {tau, gw_rank(x)};
    }
    case FieldKind::Rational:
      throw AlgebraError("GW(Q) has no finite coordinate system");
  }
  throw AlgebraError("coords: bad field");
}

}  // namespace mw::qf
