#ifndef POLFOCK_CONSTANTS_HPP
#define POLFOCK_CONSTANTS_HPP

// Hartree atomic units everywhere inside the library (hbar = e = m_e = 1,
// lengths in bohr, energies in hartree). Electron-volts appear only at the
// configuration boundary.

namespace polfock::units {

inline constexpr double hartree_in_ev = 27.211386245988;

inline constexpr double ev_to_hartree(double ev) { return ev / hartree_in_ev; }
inline constexpr double hartree_to_ev(double ha) { return ha * hartree_in_ev; }

// unified atomic mass unit in electron masses
inline constexpr double amu_in_me = 1822.888486209;

// isotope masses (u)
inline constexpr double mass_li7_u = 7.0160034366;
inline constexpr double mass_f19_u = 18.9984031627;

// reduced mass of 7Li-19F in electron masses, ~9.34e3
inline constexpr double lif_reduced_mass_me =
    amu_in_me * (mass_li7_u * mass_f19_u) / (mass_li7_u + mass_f19_u);

}  // namespace polfock::units

#endif
