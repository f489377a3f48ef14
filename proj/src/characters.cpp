#include "deltachi/characters.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace deltachi {

namespace {

// One cyclic factor of (Z/q)*: residues mod pe_modulus with a discrete-log
// table against a fixed generator.  For 2^e (e >= 3) the unit group splits
// into two factors sharing the same pe_modulus.
struct CyclicFactor {
  uint32_t pe_modulus = 1;
  uint32_t order = 1;
  uint32_t generator = 1;           // generator inside Z/pe_modulus (informational)
  std::vector<int32_t> dlog;        // size pe_modulus, -1 for non-coprime
};

uint64_t pow_mod(uint64_t b, uint64_t e, uint64_t m) {
  uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = (__uint128_t)r * b % m;
    b = (__uint128_t)b * b % m;
    e >>= 1;
  }
  return r;
}

uint32_t smallest_primitive_root(uint32_t p) {
  // p an odd prime; order of candidates checked against phi(p)=p-1.
  uint32_t phi = p - 1;
  std::vector<uint32_t> pf;
  uint32_t m = phi;
  for (uint32_t d = 2; (uint64_t)d * d <= m; ++d)
    if (m % d == 0) {
      pf.push_back(d);
      while (m % d == 0) m /= d;
    }
  if (m > 1) pf.push_back(m);
  for (uint32_t g = 2; g < p; ++g) {
    bool ok = true;
    for (uint32_t f : pf)
      if (pow_mod(g, phi / f, p) == 1) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
  throw std::logic_error("no primitive root found");
}

struct GroupStructure {
  uint32_t q = 1;
  std::vector<CyclicFactor> factors;
  uint32_t phi = 1;                  // product of factor orders
  uint32_t lambda = 1;               // lcm of factor orders
  std::vector<uint32_t> crt_generators;  // generator of each factor lifted mod q
};

GroupStructure build_group(uint32_t q) {
  if (q == 0) throw std::invalid_argument("characters_mod: modulus must be >= 1");
  if (q > (1u << 24))
    throw std::invalid_argument("characters_mod: modulus too large for value tables");
  GroupStructure gs;
  gs.q = q;
  // factor q
  std::vector<std::pair<uint32_t, uint32_t>> pps;  // (p, p^e)
  uint32_t m = q;
  for (uint32_t d = 2; (uint64_t)d * d <= m; ++d)
    if (m % d == 0) {
      uint32_t pe = 1;
      while (m % d == 0) {
        m /= d;
        pe *= d;
      }
      pps.emplace_back(d, pe);
    }
  if (m > 1) pps.emplace_back(m, m);
  std::sort(pps.begin(), pps.end());

  for (auto [p, pe] : pps) {
    if (p == 2) {
      if (pe == 2) continue;  // (Z/2)* trivial
      if (pe == 4) {
        CyclicFactor f;
        f.pe_modulus = 4;
        f.order = 2;
        f.generator = 3;
        f.dlog.assign(4, -1);
        f.dlog[1] = 0;
        f.dlog[3] = 1;
        gs.factors.push_back(std::move(f));
        continue;
      }
      // 2^e, e >= 3: <-1> x <3>
      uint32_t half = pe / 4;  // order of 3 is 2^{e-2}
      CyclicFactor fneg, fthree;
      fneg.pe_modulus = fthree.pe_modulus = pe;
      fneg.order = 2;
      fneg.generator = pe - 1;
      fthree.order = half;
      fthree.generator = 3;
      fneg.dlog.assign(pe, -1);
      fthree.dlog.assign(pe, -1);
      for (uint32_t s = 0; s < 2; ++s) {
        uint64_t v = (s == 0) ? 1 : pe - 1;
        for (uint32_t t = 0; t < half; ++t) {
          fneg.dlog[v] = (int32_t)s;
          fthree.dlog[v] = (int32_t)t;
          v = v * 3 % pe;
        }
      }
      gs.factors.push_back(std::move(fneg));
      gs.factors.push_back(std::move(fthree));
      continue;
    }
    // odd prime power: cyclic with generator lifted from mod p
    CyclicFactor f;
    f.pe_modulus = pe;
    f.order = pe / p * (p - 1);
    uint32_t g = smallest_primitive_root(p);
    if (pe > p && pow_mod(g, p - 1, (uint64_t)p * p) == 1) g += p;
    f.generator = g;
    f.dlog.assign(pe, -1);
    uint64_t v = 1;
    for (uint32_t t = 0; t < f.order; ++t) {
      f.dlog[v] = (int32_t)t;
      v = v * g % pe;
    }
    gs.factors.push_back(std::move(f));
  }

  for (const auto& f : gs.factors) {
    gs.phi *= f.order;
    gs.lambda = (uint32_t)std::lcm<uint64_t>(gs.lambda, f.order);
  }

  // CRT lift of each factor generator: == generator on its own prime-power
  // component, == 1 on the others.
  auto inverse_mod = [](uint64_t a, uint64_t m) -> uint64_t {
    int64_t aa = (int64_t)(a % m), bb = (int64_t)m, x0 = 0, x1 = 1;
    while (aa > 1) {
      int64_t t = bb / aa;
      bb -= t * aa;
      std::swap(aa, bb);
      x0 -= t * x1;
      std::swap(x0, x1);
    }
    if (x1 < 0) x1 += (int64_t)m;
    return (uint64_t)x1;
  };
  for (size_t i = 0; i < gs.factors.size(); ++i) {
    uint64_t x = 0, mod = 1;
    for (auto [p, pe] : pps) {
      (void)p;
      uint64_t target =
          (gs.factors[i].pe_modulus == pe) ? gs.factors[i].generator % pe : 1;
      uint64_t inv = inverse_mod(mod, pe);
      uint64_t diff = (target + pe - x % pe) % pe;
      x += mod * (diff * inv % pe);
      mod *= pe;
    }
    gs.crt_generators.push_back((uint32_t)(x % std::max<uint64_t>(q, 1)));
  }
  return gs;
}

std::vector<uint32_t> label_to_tuple(const GroupStructure& gs, uint32_t label) {
  std::vector<uint32_t> js(gs.factors.size(), 0);
  for (size_t i = gs.factors.size(); i-- > 0;) {
    js[i] = label % gs.factors[i].order;
    label /= gs.factors[i].order;
  }
  if (label != 0) throw std::invalid_argument("character label out of range");
  return js;
}

uint32_t tuple_to_label(const GroupStructure& gs, const std::vector<uint32_t>& js) {
  uint32_t label = 0;
  for (size_t i = 0; i < gs.factors.size(); ++i)
    label = label * gs.factors[i].order + js[i];
  return label;
}

DirichletCharacter make_character(const GroupStructure& gs,
                                  const std::vector<uint32_t>& js,
                                  uint32_t label) {
  const uint32_t q = gs.q;
  // order = lcm over factors of order/gcd(order, j)
  uint64_t r = 1;
  for (size_t i = 0; i < gs.factors.size(); ++i) {
    uint32_t o = gs.factors[i].order;
    uint32_t oj = o / std::gcd(o, js[i]);
    r = std::lcm(r, (uint64_t)oj);
  }
  std::vector<int32_t> exps(q == 0 ? 1 : q, kChiZero);
  const uint64_t lam = gs.lambda;
  if (q == 1) {
    exps.assign(1, 0);
  } else {
    for (uint32_t a = 0; a < q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      uint64_t k = 0;  // exponent over zeta_lambda
      bool zero = false;
      for (size_t i = 0; i < gs.factors.size(); ++i) {
        const auto& f = gs.factors[i];
        int32_t d = f.dlog[a % f.pe_modulus];
        if (d < 0) {
          zero = true;
          break;
        }
        uint64_t term = (uint64_t)js[i] * (uint64_t)d % f.order;
        k = (k + term * (lam / f.order)) % lam;
      }
      exps[a] = zero ? kChiZero : (int32_t)(k * r / lam % r);
    }
  }

  // conductor: smallest divisor d of q from which the character is induced,
  // i.e. chi(a) = 1 whenever a == 1 (mod d) and gcd(a,q) = 1.
  uint32_t conductor = q;
  std::vector<uint32_t> divs;
  for (uint32_t d = 1; (uint64_t)d * d <= q; ++d)
    if (q % d == 0) {
      divs.push_back(d);
      divs.push_back(q / d);
    }
  std::sort(divs.begin(), divs.end());
  divs.erase(std::unique(divs.begin(), divs.end()), divs.end());
  for (uint32_t d : divs) {
    bool induced = true;
    if (q > 1) {
      for (uint32_t a = 1; a < q; a += d) {
        if (exps[a] == kChiZero) continue;
        if (exps[a] != 0) {
          induced = false;
          break;
        }
      }
    }
    if (induced) {
      conductor = d;
      break;
    }
  }
  return DirichletCharacter(q, (int32_t)r, conductor, label, std::move(exps));
}

// Recover the label of a character given by its exponent table.
uint32_t identify_label(const GroupStructure& gs, const DirichletCharacter& chi) {
  std::vector<uint32_t> js(gs.factors.size(), 0);
  for (size_t i = 0; i < gs.factors.size(); ++i) {
    uint32_t g = gs.crt_generators[i];
    int32_t e = chi.exponent_at((int64_t)g);
    if (e == kChiZero) throw std::logic_error("generator not coprime to modulus");
    // chi(g) = zeta_r^e; the factor exponent j satisfies zeta_m^j = zeta_r^e,
    // i.e. j = e*m/r, which must be integral.
    uint64_t m = gs.factors[i].order;
    uint64_t num = (uint64_t)e * m;
    if (num % (uint64_t)chi.order() != 0)
      throw std::logic_error("character value is not an m-th root of unity");
    js[i] = (uint32_t)(num / chi.order() % m);
  }
  return tuple_to_label(gs, js);
}

}  // namespace

DirichletCharacter::DirichletCharacter(uint32_t modulus, int32_t order,
                                       uint32_t conductor, uint32_t label,
                                       std::vector<int32_t> exponents)
    : modulus_(modulus),
      order_(order),
      conductor_(conductor),
      label_(label),
      exponents_(std::move(exponents)) {}

int32_t DirichletCharacter::exponent_at(int64_t n) const {
  int64_t a = n % (int64_t)modulus_;
  if (a < 0) a += modulus_;
  return exponents_[(size_t)a];
}

std::complex<double> DirichletCharacter::eval(int64_t n) const {
  int32_t k = exponent_at(n);
  if (k == kChiZero) return {0.0, 0.0};
  if (k == 0) return {1.0, 0.0};
  if (2 * k == order_) return {-1.0, 0.0};
  double ang = 2.0 * std::numbers::pi * (double)k / (double)order_;
  return {std::cos(ang), std::sin(ang)};
}

std::string DirichletCharacter::spec() const {
  return std::to_string(modulus_) + ":" + std::to_string(label_);
}

uint32_t euler_phi(uint32_t q) {
  uint32_t r = q;
  uint32_t m = q;
  for (uint32_t d = 2; (uint64_t)d * d <= m; ++d)
    if (m % d == 0) {
      r -= r / d;
      while (m % d == 0) m /= d;
    }
  if (m > 1) r -= r / m;
  return q == 0 ? 0 : r;
}

std::vector<DirichletCharacter> characters_mod(uint32_t q) {
  GroupStructure gs = build_group(q);
  std::vector<DirichletCharacter> out;
  out.reserve(gs.phi);
  for (uint32_t label = 0; label < gs.phi; ++label)
    out.push_back(make_character(gs, label_to_tuple(gs, label), label));
  return out;
}

DirichletCharacter character_mod(uint32_t q, uint32_t label) {
  GroupStructure gs = build_group(q);
  if (label >= gs.phi)
    throw std::invalid_argument("character label " + std::to_string(label) +
                                " out of range for modulus " + std::to_string(q));
  return make_character(gs, label_to_tuple(gs, label), label);
}

DirichletCharacter product(const DirichletCharacter& a,
                           const DirichletCharacter& b) {
  uint64_t L64 = std::lcm<uint64_t>(a.modulus(), b.modulus());
  if (L64 > (1u << 24)) throw std::invalid_argument("product modulus too large");
  uint32_t L = (uint32_t)L64;
  GroupStructure gs = build_group(L);
  int64_t r = std::lcm<int64_t>(a.order(), b.order());
  std::vector<int32_t> exps(L == 0 ? 1 : L, kChiZero);
  int64_t content = 0;  // gcd of all exponents and r, to reduce the order
  for (uint32_t x = 0; x < std::max(L, 1u); ++x) {
    if (L > 1 && std::gcd(x, L) != 1) continue;
    int32_t ea = a.exponent_at(x), eb = b.exponent_at(x);
    if (ea == kChiZero || eb == kChiZero) continue;  // cannot happen: x coprime to L
    int64_t k = ((int64_t)ea * (r / a.order()) + (int64_t)eb * (r / b.order())) % r;
    exps[x] = (int32_t)k;
    content = std::gcd(content, k);
  }
  int64_t g = std::gcd(content, r);
  if (g == 0) g = r;
  int64_t rr = r / g;
  for (auto& e : exps)
    if (e != kChiZero) e = (int32_t)(e / g);
  DirichletCharacter tmp(L, (int32_t)rr, L, 0, exps);
  uint32_t label = identify_label(gs, tmp);
  return make_character(gs, label_to_tuple(gs, label), label);
}

DirichletCharacter conjugate(const DirichletCharacter& chi) {
  GroupStructure gs = build_group(chi.modulus());
  std::vector<int32_t> exps = chi.exponents();
  for (auto& e : exps)
    if (e != kChiZero && e != 0) e = chi.order() - e;
  DirichletCharacter tmp(chi.modulus(), chi.order(), chi.conductor(), 0, exps);
  uint32_t label = identify_label(gs, tmp);
  return make_character(gs, label_to_tuple(gs, label), label);
}

DirichletCharacter parse_char_spec(std::string_view spec) {
  auto pos = spec.find(':');
  if (pos == std::string_view::npos)
    throw std::invalid_argument("character spec must be \"q:index\", got \"" +
                                std::string(spec) + "\"");
  uint32_t q = 0, idx = 0;
  try {
    q = (uint32_t)std::stoul(std::string(spec.substr(0, pos)));
    idx = (uint32_t)std::stoul(std::string(spec.substr(pos + 1)));
  } catch (const std::exception&) {
    throw std::invalid_argument("bad character spec \"" + std::string(spec) + "\"");
  }
  return character_mod(q, idx);
}

}  // namespace deltachi
