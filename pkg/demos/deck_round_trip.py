"""Parse a hand-written deck, evaluate it, and print the canonical serialization."""
import numpy as np

from umat import cauchy_stress, parse_deck, serialize_deck

DECK = """\
*MATERIAL, NAME=fiber_reinforced, UNITS=MPa
*ANISOTROPIC HYPERELASTIC, USER, FORMULATION=INVARIANT, TYPE=COMPRESSIBLE, LOCAL DIRECTIONS=1
*FIBER DIRECTIONS
0.0, 1.0, 0.0
*PARAMETER TABLE, TYPE="UNIVERSAL_TAB"
** neo-Hookean matrix
1, 1, 1, 1, 1.0, 1.0, 0.5
** stiffening fiber family, active in tension only
4, 2, 2, 3, 1.0, 20.0, 0.05
** volumetric penalty
3, 1, 2, 1, 1.0, 1.0, 10.0
"""

spec = parse_deck(DECK)
F = np.array([[0.95, 0.0, 0.0], [0.0, 1.08, 0.02], [0.0, 0.0, 0.98]])
st = cauchy_stress(spec.table, F, spec.fiber_set())
print("energy:", st.energy.UA)
print("cauchy stress:\n", st.sigma)
print(serialize_deck(spec))
