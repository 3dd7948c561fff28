"""Reference values computed once with mpmath at 40 digits and frozen here.

Each value comes from a route independent of the package code: direct
summation over |k| <= 40 (1D), a 61 x 61 direct double sum, closed forms in
Dirichlet L-functions, or Benson's sech^2 series for the rock-salt constant.
"""

THETA2_AT_2 = 0.415760602596027032314507136285  # direct sum |k| <= 40
THETA3_AT_1 = 1.08643481121330801457531612151
THETA4_AT_1 = 0.913579138156116821407242593401

# centered theta of the hexagonal lattice at alpha = 1, direct double sum
HEX_CENTERED_AT_1 = 0.94680557073602121061193359771

# square lattice Epstein zetas: plain 4 zeta(s/2) beta(s/2), alternating -4 beta(s/2) eta(s/2)
ZETA_PM_SQUARE_1 = -1.61554262671282472386792333276
ZETA_PM_SQUARE_3 = -2.64588653230643547564817352405
ZETA_PM_SQUARE_4 = -3.01340601984597006177313009636
ZETA_SQUARE_4 = 6.02681203969194012354626019273
ZETA_SQUARE_6 = 4.65891361560384344016112390768

# rock-salt constant: -12 pi sum_{m, n odd} sech^2(pi sqrt(m^2 + n^2) / 2)
MADELUNG_NACL = -1.74756459463318219063621203554
