#pragma once

#include <array>
#include <string>

#include "ionphoton/errors.hpp"

namespace ionphoton {

/// Fine-structure terms of the 40Ca+ low-level scheme.
enum class Term { S12, P12, D32 };

/// Polarization index of a transition or cavity mode. The numeric value is
/// the change m_lower - m_upper of the magnetic quantum number across the
/// transition the field couples to.
enum class Polarization : int { SigmaMinus = -1, Pi = 0, SigmaPlus = +1 };

constexpr int delta_m(Polarization q) { return static_cast<int>(q); }

/// One Zeeman sublevel. m is stored doubled (m2 = 2m) so half-integers stay
/// exact.
struct Level {
    Term term;
    int m2;

    friend bool operator==(const Level&, const Level&) = default;
};

/// The eight levels in fixed basis order:
/// S(-1/2), S(+1/2), P(-1/2), P(+1/2), D(-3/2), D(-1/2), D(+1/2), D(+3/2).
const std::array<Level, 8>& all_levels();

/// Position of a level in the fixed basis order above.
int level_index(const Level& level);

bool is_valid_level(const Level& level);

std::string level_name(const Level& level);

/// Parses names of the form "S12:-1/2", "D32:+3/2".
Level parse_level(const std::string& name);

/// Lande g-factor of a term: g = 1 + [j(j+1)+s(s+1)-l(l+1)] / [2 j(j+1)].
double lande_g(Term term);

/// Zeeman shift of a sublevel in rad/us for a field of B gauss.
double zeeman_shift(const Level& level, double b_gauss);

/// Clebsch-Gordan dipole amplitude <j_l m_l; 1 q | j_u m_u> for an allowed
/// P12 -> S12 or P12 -> D32 transition, with q = m_lower - m_upper. Squared
/// weights sum to one over all (lower, q) of a decay channel. Throws
/// ConfigError("forbidden transition ...") for disallowed pairs.
double dipole_weight(const Level& upper, const Level& lower, Polarization q);

namespace detail {
/// Clebsch-Gordan coefficient <j1 m1; j2 m2 | J M> via the Racah sum formula.
/// All angular momenta doubled (two_j = 2j).
double clebsch_gordan(int two_j1, int two_m1, int two_j2, int two_m2,
                      int two_J, int two_M);
}  // namespace detail

}  // namespace ionphoton
