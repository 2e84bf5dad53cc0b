"""Two ways the additivity identity breaks, each with a certified gap.

The first constructor exploits a dip in |u|: a tent bump supported where
the weight is small produces a perturbation whose norm the combined
operator cannot use.  The second flattens the symbol on a fat arc, so one
point soaks up mass that the identity would need spread out.  Both return
the exact perturbed norm next to the triangle upper bound.
"""

from fractions import Fraction

from daugavetlab import (
    Arc,
    GridCircle,
    ScalarField,
    SymbolMap,
    counterexample_fat_preimage,
    counterexample_nonconstant_modulus,
)

grid = GridCircle(64)

print("1. weight with a modulus dip (depth 1/2 at s = 0)")
u = ScalarField.tent_dip(Fraction(0), Fraction(1, 4), depth=0.5)
res = counterexample_nonconstant_modulus(u, SymbolMap.identity(), grid)
print(f"   ||uC_phi + T|| = {res.perturbed}")
print(f"   sup|u| + ||T|| = {res.upper}")
print(f"   certified gap  = {res.certified_gap}")
print(f"   witness: {res.detail}")
print()

print("2. symbol constant on a quarter arc")
one = ScalarField.constant(1.0)
arc = Arc(Fraction(0), Fraction(1, 4))
phi = SymbolMap.constant_on_arc(Fraction(0), arc)
res = counterexample_fat_preimage(one, phi, Fraction(0), arc, grid)
print(f"   ||uC_phi + T|| = {res.perturbed}")
print(f"   sup|u| + ||T|| = {res.upper}")
print(f"   certified gap  = {res.certified_gap}")
print()

print("3. the extreme case: a globally constant symbol")
arc_all = Arc(Fraction(0), Fraction(1, 2))
phi_all = SymbolMap.constant_on_arc(Fraction(0), arc_all)
res = counterexample_fat_preimage(one, phi_all, Fraction(0), arc_all, grid)
print(f"   ||uC_phi + T|| = {res.perturbed}")
print(f"   certified gap  = {res.certified_gap}")
print("   with nothing outside the arc, the perturbation cancels the")
print("   composition almost entirely")
