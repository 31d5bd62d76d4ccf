#include "ionphoton/atom.hpp"

#include <cmath>
#include <cstdlib>

#include "ionphoton/units.hpp"

namespace ionphoton {

const std::array<Level, 8>& all_levels() {
    static const std::array<Level, 8> levels = {{
        {Term::S12, -1}, {Term::S12, +1},
        {Term::P12, -1}, {Term::P12, +1},
        {Term::D32, -3}, {Term::D32, -1}, {Term::D32, +1}, {Term::D32, +3},
    }};
    return levels;
}

bool is_valid_level(const Level& level) {
    const int m = level.m2;
    switch (level.term) {
        case Term::S12:
        case Term::P12:
            return m == -1 || m == +1;
        case Term::D32:
            return m == -3 || m == -1 || m == +1 || m == +3;
    }
    return false;
}

int level_index(const Level& level) {
    if (!is_valid_level(level)) throw ConfigError("invalid level");
    switch (level.term) {
        case Term::S12:
            return (level.m2 + 1) / 2;
        case Term::P12:
            return 2 + (level.m2 + 1) / 2;
        case Term::D32:
            return 4 + (level.m2 + 3) / 2;
    }
    throw ConfigError("invalid level");
}

std::string level_name(const Level& level) {
    std::string term;
    switch (level.term) {
        case Term::S12: term = "S12"; break;
        case Term::P12: term = "P12"; break;
        case Term::D32: term = "D32"; break;
    }
    std::string m = level.m2 < 0 ? "-" : "+";
    m += std::to_string(std::abs(level.m2)) + "/2";
    return term + ":" + m;
}

Level parse_level(const std::string& name) {
    auto colon = name.find(':');
    if (colon == std::string::npos)
        throw ConfigError("cannot parse level '" + name + "': expected TERM:m, e.g. S12:-1/2");
    const std::string term_str = name.substr(0, colon);
    std::string m_str = name.substr(colon + 1);

    Term term;
    if (term_str == "S12") term = Term::S12;
    else if (term_str == "P12") term = Term::P12;
    else if (term_str == "D32") term = Term::D32;
    else throw ConfigError("cannot parse level '" + name + "': unknown term '" + term_str + "'");

    auto slash = m_str.find('/');
    if (slash == std::string::npos || m_str.substr(slash) != "/2")
        throw ConfigError("cannot parse level '" + name + "': m must be a half-integer like -1/2");
    int m2 = 0;
    try {
        m2 = std::stoi(m_str.substr(0, slash));
    } catch (const std::exception&) {
        throw ConfigError("cannot parse level '" + name + "'");
    }
    Level level{term, m2};
    if (!is_valid_level(level)) throw ConfigError("level '" + name + "' does not exist");
    return level;
}

double lande_g(Term term) {
    // (l, s, j) per term; g = 1 + [j(j+1)+s(s+1)-l(l+1)] / [2 j(j+1)]
    double l = 0, j = 0;
    const double s = 0.5;
    switch (term) {
        case Term::S12: l = 0; j = 0.5; break;
        case Term::P12: l = 1; j = 0.5; break;
        case Term::D32: l = 2; j = 1.5; break;
    }
    return 1.0 + (j * (j + 1) + s * (s + 1) - l * (l + 1)) / (2.0 * j * (j + 1));
}

double zeeman_shift(const Level& level, double b_gauss) {
    const double m = 0.5 * level.m2;
    return angular_from_mhz(lande_g(level.term) * m * bohr_mhz_per_gauss * b_gauss);
}

namespace detail {

namespace {
double factorial(int n) {
    static const auto table = [] {
        std::array<double, 40> t{};
        t[0] = 1.0;
        for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] * static_cast<double>(i);
        return t;
    }();
    return table.at(static_cast<std::size_t>(n));
}

// Factorial of a doubled-integer argument; two_n must be even and >= 0.
double fact2(int two_n) {
    if (two_n < 0 || two_n % 2 != 0) throw ConfigError("non-integer factorial argument");
    return factorial(two_n / 2);
}
}  // namespace

double clebsch_gordan(int two_j1, int two_m1, int two_j2, int two_m2,
                      int two_J, int two_M) {
    if (two_m1 + two_m2 != two_M) return 0.0;
    if (two_J < std::abs(two_j1 - two_j2) || two_J > two_j1 + two_j2) return 0.0;
    if (std::abs(two_m1) > two_j1 || std::abs(two_m2) > two_j2 || std::abs(two_M) > two_J)
        return 0.0;
    if ((two_j1 + two_m1) % 2 != 0 || (two_j2 + two_m2) % 2 != 0 || (two_J + two_M) % 2 != 0)
        return 0.0;

    // Racah's formula (Brink & Satchler).
    const double prefactor =
        std::sqrt((two_J + 1) *
                  (fact2(two_J + two_j1 - two_j2) * fact2(two_J - two_j1 + two_j2) *
                   fact2(two_j1 + two_j2 - two_J)) /
                  fact2(two_j1 + two_j2 + two_J + 2)) *
        std::sqrt(fact2(two_J + two_M) * fact2(two_J - two_M) * fact2(two_j1 - two_m1) *
                  fact2(two_j1 + two_m1) * fact2(two_j2 - two_m2) * fact2(two_j2 + two_m2));

    double sum = 0.0;
    // k runs over all integers keeping every factorial argument nonnegative.
    const int two_k_min = std::max({0, two_j2 - two_J - two_m1, two_j1 + two_m2 - two_J});
    const int two_k_max = std::min({two_j1 + two_j2 - two_J, two_j1 - two_m1, two_j2 + two_m2});
    for (int two_k = two_k_min; two_k <= two_k_max; two_k += 2) {
        const double denom = fact2(two_k) * fact2(two_j1 + two_j2 - two_J - two_k) *
                             fact2(two_j1 - two_m1 - two_k) * fact2(two_j2 + two_m2 - two_k) *
                             fact2(two_J - two_j2 + two_m1 + two_k) *
                             fact2(two_J - two_j1 - two_m2 + two_k);
        const double sign = (two_k / 2) % 2 == 0 ? 1.0 : -1.0;
        sum += sign / denom;
    }
    return prefactor * sum;
}

}  // namespace detail

double dipole_weight(const Level& upper, const Level& lower, Polarization q) {
    if (!is_valid_level(upper) || !is_valid_level(lower))
        throw ConfigError("forbidden transition: invalid level");
    if (upper.term != Term::P12 || lower.term == Term::P12)
        throw ConfigError("forbidden transition: " + level_name(upper) + " -> " +
                          level_name(lower) + " is not a dipole decay channel");
    const int dm2 = lower.m2 - upper.m2;
    if (dm2 != 2 * delta_m(q))
        throw ConfigError("forbidden transition: " + level_name(upper) + " -> " +
                          level_name(lower) + " does not match polarization");

    // The photon carries angular momentum projection m_upper - m_lower; the
    // argument q is the transition label m_lower - m_upper.
    const int two_j_upper = 1;
    const int two_j_lower = lower.term == Term::S12 ? 1 : 3;
    return detail::clebsch_gordan(two_j_lower, lower.m2, 2, upper.m2 - lower.m2,
                                  two_j_upper, upper.m2);
}

}  // namespace ionphoton
