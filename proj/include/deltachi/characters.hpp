#pragma once

// Dirichlet characters with exact root-of-unity value tables.
//
// A character mod q is stored as a table of exponents: chi(a) = zeta_r^k with
// zeta_r = exp(2*pi*i/r) and r the order of the character, or the ZERO
// sentinel when gcd(a,q) > 1.  Values only become floating point at eval().

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace deltachi {

inline constexpr int32_t kChiZero = -1;

class DirichletCharacter {
 public:
  DirichletCharacter() = default;
  DirichletCharacter(uint32_t modulus, int32_t order, uint32_t conductor,
                     uint32_t label, std::vector<int32_t> exponents);

  uint32_t modulus() const { return modulus_; }
  int32_t order() const { return order_; }
  uint32_t conductor() const { return conductor_; }
  uint32_t label() const { return label_; }
  bool is_principal() const { return order_ == 1; }

  // Exponent k of zeta_order at n (n reduced mod q), or kChiZero.
  int32_t exponent_at(int64_t n) const;
  std::complex<double> eval(int64_t n) const;
  bool is_zero_at(int64_t n) const { return exponent_at(n) == kChiZero; }

  // "q:index" spec string for this character.
  std::string spec() const;

  const std::vector<int32_t>& exponents() const { return exponents_; }

 private:
  uint32_t modulus_ = 1;
  int32_t order_ = 1;
  uint32_t conductor_ = 1;
  uint32_t label_ = 0;
  std::vector<int32_t> exponents_{0};  // size modulus_
};

// All phi(q) characters mod q, labelled 0..phi(q)-1.  Label 0 is principal.
// Labels are the mixed-radix index of the component exponent tuple; the
// component order is fixed (2-power part first, then odd primes ascending),
// so labelling is reproducible across platforms.
std::vector<DirichletCharacter> characters_mod(uint32_t q);

// Single character by label without materialising the whole group.
DirichletCharacter character_mod(uint32_t q, uint32_t label);

uint32_t euler_phi(uint32_t q);

DirichletCharacter product(const DirichletCharacter& a,
                           const DirichletCharacter& b);
DirichletCharacter conjugate(const DirichletCharacter& chi);

inline bool is_principal(const DirichletCharacter& chi) {
  return chi.is_principal();
}

// Parse "q:index" (e.g. "3:1"); "1:0" is the all-ones weight.
DirichletCharacter parse_char_spec(std::string_view spec);

}  // namespace deltachi
