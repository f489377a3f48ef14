#pragma once

// Numerical audits: inequality checks between the sup functionals and their
// moment bounds, Fourier/Parseval identity checks, and the one-prime
// extension identity.  Each audit produces an AuditReport row.

#include <iosfwd>
#include <span>
#include <string>

#include "deltachi/delta.hpp"
#include "deltachi/moments.hpp"

namespace deltachi {

struct AuditReport {
  uint64_t n = 0;
  std::string lemma;
  int q = 0;
  int k = 0;
  double theta = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
  bool pass = false;
  double aux = 0.0;  // context-dependent: tail bound or secondary defect
};

inline constexpr double kAuditSlackTol = 1e-9;

// delta3 sup squared vs 4 E*^{-4/q} M_{2q}^{1/q} + 32 (sup1d*^2 + sup1d*^2).
AuditReport audit_lemma21(const FactoredInteger& fi,
                          const DirichletCharacter& chi1,
                          const DirichletCharacter& chi2, int q,
                          const QuadratureSpec& quad = {});

// delta* squared vs 4 E*^{-2/q} Mdagger_{2q}^{1/q} + 4 tau(n)^{1/q}.
AuditReport audit_lemma22(const FactoredInteger& fi,
                          const DirichletCharacter& chi, int q);

// delta_k sup squared vs 16 Ek^{-3/q} sum_{j<=k} M^{(j)}_{2q}^{1/q}
//   + 64 e^2 max over d|n of |tau(d, chi2, theta)|^2,
// with Ek = min(log(3/2)/(k+1), E(n)).
AuditReport audit_lemma23(const FactoredInteger& fi,
                          const DirichletCharacter& chi1,
                          const DirichletCharacter& chi2, double theta, int k,
                          int q);

// int |delta_k(u)|^2 du  ==  (1/2pi) int |tau(n,chi,-t,theta)|^2 |Ik(t)|^2 dt,
// Ik(t) = int_{-v1}^0 (u+v1-v2)^k e^{-iut} du.  aux carries the residual tail
// bound of the corrected truncation.
AuditReport audit_parseval_1d(const FactoredInteger& fi,
                              const DirichletCharacter& chi1,
                              const DirichletCharacter& chi2, double theta,
                              int k, double v1, double v2,
                              const QuadratureSpec& quad = {},
                              double rel_tol = 1e-3);

// int |delta3|^2 du dv == (1/4pi^2) int |tau(n,chi,t)|^2 G(t1) G(t2) dt with
// G(t) = (2/t^2)(1 - sin t / t); LHS is moment_2q(q=1).
AuditReport audit_parseval_delta3(const FactoredInteger& fi,
                                  const DirichletCharacter& chi1,
                                  const DirichletCharacter& chi2,
                                  const QuadratureSpec& quad = {},
                                  double rel_tol = 1e-3);

// Eq-style one-prime extension identity; lhs = max defect of the shifted
// form, aux = max defect of the unshifted (literal) form.
AuditReport audit_recurrence(const FactoredInteger& fi, uint64_t p,
                             const DirichletCharacter& chi1,
                             const DirichletCharacter& chi2, int samples,
                             uint64_t seed);

// CSV with columns n,lemma,q,k,theta,lhs,rhs,slack,pass.
void write_reports_csv(std::span<const AuditReport> reports, std::ostream& os);

}  // namespace deltachi
