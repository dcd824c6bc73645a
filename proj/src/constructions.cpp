#include "mubforge/constructions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mubforge::constructions {

namespace {

bool odd_prime_supported(int p) { return p == 3 || p == 5 || p == 7 || p == 11 || p == 13; }

MuBasesSet factor_set(int p) {
  if (p == 2) return qubit_complete_set();
  return prime_complete_set(p);
}

}  // namespace

MuBasesSet prime_complete_set(int p) {
  if (!odd_prime_supported(p))
    throw std::invalid_argument("prime_complete_set: need an odd prime <= 13");
  MuBasesSet out;
  out.d = p;
  out.provenance = "prime(" + std::to_string(p) + ")";
  out.bases.reserve(p + 1);

  std::vector<CVec> standard;
  for (int k = 0; k < p; ++k) standard.push_back(CVec::basis(p, k));
  out.bases.push_back(std::move(standard));

  const double amp = 1.0 / std::sqrt(static_cast<double>(p));
  for (int a = 0; a < p; ++a) {
    std::vector<CVec> basis;
    basis.reserve(p);
    for (int j = 0; j < p; ++j) {
      CVec v(p);
      for (int k = 0; k < p; ++k) {
        const int e = (a * k * k + j * k) % p;  // exponent of omega, kept small
        const double phase = 2.0 * std::numbers::pi * e / p;
        v.re[k] = std::cos(phase) * amp;
        v.im[k] = std::sin(phase) * amp;
      }
      basis.push_back(v);
    }
    out.bases.push_back(std::move(basis));
  }
  return out;
}

MuBasesSet qubit_complete_set() {
  MuBasesSet out;
  out.d = 2;
  out.provenance = "qubit";
  const double s = 1.0 / std::sqrt(2.0);
  std::vector<CVec> z{CVec::basis(2, 0), CVec::basis(2, 1)};
  CVec xp(2), xm(2), yp(2), ym(2);
  xp.re = {s, s};
  xm.re = {s, -s};
  yp.re[0] = s;
  yp.im[1] = s;
  ym.re[0] = s;
  ym.im[1] = -s;
  out.bases.push_back(std::move(z));
  out.bases.push_back({xp, xm});
  out.bases.push_back({yp, ym});
  return out;
}

MuBasesSet tensor_triple(int d1, int d2) {
  const auto supported = [](int p) { return p == 2 || odd_prime_supported(p); };
  if (!supported(d1) || !supported(d2))
    throw std::invalid_argument("tensor_triple: factors must be 2 or an odd prime <= 13");
  if (d1 * d2 > kMaxDim) throw std::invalid_argument("tensor_triple: product dimension too large");

  const MuBasesSet f1 = factor_set(d1);
  const MuBasesSet f2 = factor_set(d2);
  MuBasesSet out;
  out.d = d1 * d2;
  out.provenance = "tensor(" + std::to_string(d1) + "," + std::to_string(d2) + ")";
  for (int b = 0; b < 3; ++b) {
    std::vector<CVec> basis;
    basis.reserve(out.d);
    for (const CVec& u : f1.bases[b])
      for (const CVec& v : f2.bases[b]) {
        CVec w(out.d);
        for (int k1 = 0; k1 < d1; ++k1)
          for (int k2 = 0; k2 < d2; ++k2) {
            const std::complex<double> t = u.at(k1) * v.at(k2);
            w.set(k1 * d2 + k2, t);
          }
        basis.push_back(w);
      }
    out.bases.push_back(std::move(basis));
  }
  return out;
}

StateSet subconstellation(const MuBasesSet& set, const ConstellationSpec& spec) {
  if (spec.d != set.d) throw std::invalid_argument("subconstellation: dimension mismatch");
  if (!spec.restricted()) throw std::invalid_argument("subconstellation: spec must be restricted");
  if (spec.counts.size() > set.bases.size())
    throw std::invalid_argument("subconstellation: spec too large for this bases set");

  StateSet out;
  out.d = set.d;
  out.provenance = set.provenance + ":" + constellation::display_spec(spec);
  out.groups.emplace_back(set.bases[0].begin(), set.bases[0].begin() + set.d - 1);
  for (size_t g = 1; g < spec.counts.size(); ++g)
    out.groups.emplace_back(set.bases[g].begin(), set.bases[g].begin() + spec.counts[g]);
  return out;
}

StateSet to_state_set(const MuBasesSet& set) {
  StateSet out;
  out.d = set.d;
  out.groups = set.bases;
  out.provenance = set.provenance;
  return out;
}

}  // namespace mubforge::constructions
