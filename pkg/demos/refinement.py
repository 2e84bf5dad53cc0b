"""Grid refinement: the finite-model defect vanishes quadratically.

The doubling symbol spreads preimages thinly, so the grid artifact in the
norm identity shrinks like (1 - cos(2 pi / n)) / 2, about 2 pi^2 / n^2.
A symbol that is constant on a fat arc is the control: its defect is a
genuine counterexample and refinement never repairs it.
"""

import math
from fractions import Fraction

from daugavetlab import (
    Arc,
    ScalarField,
    SymbolMap,
    rank_one,
    refinement_convergence,
)

u = ScalarField.constant(1.0)
T = rank_one(ScalarField.cosine(amplitude=0.5, offset=0.5, frequency=1),
             at=Fraction(0), scale=-1.0)
sizes = [2 ** k for k in range(3, 11)]

print("doubling symbol: gap(n) against the closed form")
print(f"{'n':>6} {'gap':>22} {'(1-cos(2pi/n))/2':>22} {'thin preimages':>15}")
for gp in refinement_convergence(u, SymbolMap.doubling(), T, sizes):
    law = (1 - math.cos(2 * math.pi / gp.n)) / 2
    print(f"{gp.n:>6} {gp.gap:>22.16f} {law:>22.16f} {str(gp.nowhere_dense_ok):>15}")
print()

print("control: symbol constant on a quarter arc, tent perturbation")
arc = Arc(Fraction(0), Fraction(1, 4))
phi = SymbolMap.constant_on_arc(Fraction(0), arc)
T2 = rank_one(ScalarField.tent(Fraction(0), Fraction(1, 4), peak=-1.0, base=-0.5),
              at=Fraction(0))
print(f"{'n':>6} {'gap':>22} {'thin preimages':>15}")
for gp in refinement_convergence(u, phi, T2, sizes):
    print(f"{gp.n:>6} {gp.gap:>22.16f} {str(gp.nowhere_dense_ok):>15}")
print()
print("the gap pins at 1/2 at every resolution: the defect is structural,")
print("not an artifact of the grid")
