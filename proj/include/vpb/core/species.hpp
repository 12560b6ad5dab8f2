#pragma once

#include <stdexcept>
#include <string>

namespace vpb {

// Two-species parameter block. Masses and diameters are strictly positive;
// charges may take any sign. Convention: species A is the heavier one.
struct SpeciesPair {
  double m_A = 1.0;
  double m_B = 1.0;
  double e_A = 0.0;
  double e_B = 0.0;
  double sigma_A = 1.0;
  double sigma_B = 1.0;

  void validate() const {
    if (!(m_A > 0.0) || !(m_B > 0.0))
      throw std::domain_error("SpeciesPair: masses must be positive");
    if (!(sigma_A > 0.0) || !(sigma_B > 0.0))
      throw std::domain_error("SpeciesPair: diameters must be positive");
    if (m_A < m_B)
      throw std::domain_error("SpeciesPair: convention requires m_A >= m_B");
  }

  double mass(int s) const { return s == 0 ? m_A : m_B; }
  double charge(int s) const { return s == 0 ? e_A : e_B; }
  double diameter(int s) const { return s == 0 ? sigma_A : sigma_B; }

  // (sigma_alpha + sigma_beta)^2 / 4 cross-section prefactor for a pair.
  double section(int a, int b) const {
    const double s = diameter(a) + diameter(b);
    return 0.25 * s * s;
  }
};

inline const char* species_label(int s) { return s == 0 ? "A" : "B"; }

}  // namespace vpb
