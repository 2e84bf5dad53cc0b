"""Norm-equation checks for perturbed weighted compositions on the circle.

The central question: for which weights u, symbols phi and finite-rank
perturbations T does the exact additivity

    ||uC_phi + T|| = sup|u| + ||T||

hold on the grid model?  equation_holds settles it by direct norm
computation.  criterion_sup evaluates the equivalent pointwise test: over
the active set of points whose measure nearly attains ||T||, the phase
deficiency |u(s) + m_s| - (sup|u| + |m_s|) must reach zero (m_s is the mass
the perturbation places exactly on phi(s)).  Sweeping epsilon downward
through a dyadic ladder makes the two routes comparable on finite grids.

The two counterexample constructors certify strict failure: one exploits a
non-constant |u| by hanging a rank-one tent on the modulus minimum, the
other a symbol that collapses an arc onto one target.  Both return an
operator together with a certified positive gap, each norm evaluated
exactly on the grid.

refinement_convergence tracks the gap under grid refinement, and
convex_center_check covers perturbations of convex combinations of two
composition operators, reporting the per-point deficiencies that keep the
combination from breaking additivity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .circle import (
    Arc,
    Coordinate,
    GridCircle,
    ScalarField,
    SymbolMap,
    modulus_constancy,
    points_equal,
    preimage_nowhere_dense_at_resolution,
)
from .errors import InvariantViolation
from .measures import dirac, point_mass
from .operators import (
    ConvexCombination,
    FiniteRankOperator,
    PerturbationProfile,
    SupportsMeasureAt,
    WeightedComposition,
    convex_combo_perturbed_norm,
    operator_norm,
    perturbation_profile,
    perturbed_norm,
)

__all__ = [
    "CriterionResult",
    "criterion_sup",
    "OpenSetCriterionResult",
    "open_set_criterion",
    "EquationResult",
    "equation_holds",
    "SweepResult",
    "criterion_sweep",
    "s_epsilon_fraction",
    "CounterexampleResult",
    "counterexample_nonconstant_modulus",
    "counterexample_fat_preimage",
    "GapPoint",
    "refinement_convergence",
    "ConvexCheckResult",
    "convex_center_check",
]

#: Floating slack for inequalities that hold exactly in real arithmetic.
FLOAT_SLACK = 1e-12


# ---------------------------------------------------------------------------
# pointwise criterion and the norm equation
# ---------------------------------------------------------------------------

def _deficiency(prof: PerturbationProfile, weight_sup: float) -> np.ndarray:
    """|u(s) + m_s| - (sup|u| + |m_s|), always <= 0 up to rounding."""
    return (np.abs(prof.weight + prof.aligned_mass)
            - (weight_sup + np.abs(prof.aligned_mass)))


@dataclass(frozen=True)
class CriterionResult:
    epsilon: float
    active_set_size: int
    sup_value: float
    holds: bool


def _criterion_from_profile(prof: PerturbationProfile, weight_sup: float,
                            t_norm: float, epsilon: float,
                            tol: float) -> CriterionResult:
    tv = np.abs(prof.aligned_mass) + prof.off_mass
    active = tv > t_norm - epsilon
    if not active.any():
        raise InvariantViolation(
            "empty active set; the norm supremum must belong to it")
    deficiency = _deficiency(prof, weight_sup)
    sup_value = float(deficiency[active].max())
    if sup_value > FLOAT_SLACK:
        raise InvariantViolation(
            f"criterion supremum {sup_value!r} is positive; "
            "the deficiency is bounded by zero")
    return CriterionResult(epsilon=float(epsilon), active_set_size=int(active.sum()),
                           sup_value=sup_value, holds=sup_value >= -tol)


def criterion_sup(wc: WeightedComposition, T: SupportsMeasureAt, epsilon: float,
                  grid: GridCircle, tol: float = 1e-9) -> CriterionResult:
    """Pointwise additivity test at one active-set level epsilon > 0.

    Active set: grid points s whose measure mu_s has total variation above
    ||T|| - epsilon.  The reported supremum of the phase deficiency over it
    is always <= 0; additivity at this level means it reaches 0 within tol.
    """
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    prof = perturbation_profile(wc, T, grid)
    weight_sup = float(np.abs(prof.weight).max())
    t_norm = float((np.abs(prof.aligned_mass) + prof.off_mass).max())
    return _criterion_from_profile(prof, weight_sup, t_norm, epsilon, tol)


@dataclass(frozen=True)
class OpenSetCriterionResult:
    sup_value: float
    points: int
    holds: bool


def open_set_criterion(wc: WeightedComposition, T: SupportsMeasureAt, U: Arc,
                       grid: GridCircle, tol: float = 1e-9) -> OpenSetCriterionResult:
    """Same deficiency supremum, restricted to the grid points of an arc."""
    prof = perturbation_profile(wc, T, grid)
    weight_sup = float(np.abs(prof.weight).max())
    deficiency = _deficiency(prof, weight_sup)
    mask = np.array([U.contains(p) for p in prof.points], dtype=bool)
    if not mask.any():
        raise ValueError("arc contains no grid point")
    sup_value = float(deficiency[mask].max())
    return OpenSetCriterionResult(sup_value=sup_value, points=int(mask.sum()),
                                  holds=sup_value >= -tol)


@dataclass(frozen=True)
class EquationResult:
    holds: bool
    lhs: float   # ||uC_phi + T||
    rhs: float   # sup|u| + ||T||
    gap: float   # rhs - lhs, >= 0 up to rounding


def equation_holds(wc: WeightedComposition, T: SupportsMeasureAt,
                   grid: GridCircle, tol: float = 1e-9) -> EquationResult:
    """Does ||uC_phi + T|| equal sup|u| + ||T|| on the grid, within tol?"""
    lhs = perturbed_norm(wc, T, grid)
    rhs = wc.weight_sup(grid) + operator_norm(T, grid)
    gap = rhs - lhs
    if gap < -1e-9:
        raise InvariantViolation(
            f"norm {lhs!r} exceeds the additivity bound {rhs!r}")
    return EquationResult(holds=gap <= tol, lhs=lhs, rhs=rhs, gap=gap)


@dataclass(frozen=True)
class SweepResult:
    holds: bool
    results: tuple[CriterionResult, ...]


def criterion_sweep(wc: WeightedComposition, T: SupportsMeasureAt,
                    grid: GridCircle, tol: float = 1e-9) -> SweepResult:
    """Run criterion_sup over the dyadic ladder ||T|| * 2^-k, k = 0..20,
    plus the always-active level ||T|| + 1.

    All levels holding is equivalent, on a finite grid resolved by the
    ladder, to equation_holds: as epsilon shrinks the active set narrows to
    the points attaining ||T||, where additivity lives or dies.
    """
    prof = perturbation_profile(wc, T, grid)
    weight_sup = float(np.abs(prof.weight).max())
    t_norm = float((np.abs(prof.aligned_mass) + prof.off_mass).max())
    epsilons = [t_norm * 2.0 ** -k for k in range(21) if t_norm > 0.0]
    epsilons.append(t_norm + 1.0)
    results = tuple(
        _criterion_from_profile(prof, weight_sup, t_norm, eps, tol)
        for eps in epsilons
    )
    return SweepResult(holds=all(r.holds for r in results), results=results)


def s_epsilon_fraction(wc: WeightedComposition, T: SupportsMeasureAt,
                       epsilon: float, grid: GridCircle) -> Fraction:
    """Fraction of grid points whose aligned mass |mu_s({phi(s)})| is below epsilon.

    When additivity holds for every unimodular rescaling of T, this set is
    dense in the limit; the exact count-over-n ratio quantifies it at finite n.
    """
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    prof = perturbation_profile(wc, T, grid)
    small = np.abs(prof.aligned_mass) < epsilon
    return Fraction(int(small.sum()), grid.n)


# ---------------------------------------------------------------------------
# certified counterexample constructors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CounterexampleResult:
    operator: FiniteRankOperator
    certified_gap: float   # (sup|u| + ||T||) - ||uC_phi + T||, positive
    perturbed: float       # ||uC_phi + T||
    upper: float           # sup|u| + ||T||
    weight_sup: float
    t_norm: float
    detail: dict


def counterexample_nonconstant_modulus(u: ScalarField, phi: SymbolMap,
                                       grid: GridCircle,
                                       tol: float = 1e-9) -> CounterexampleResult:
    """Rank-one operator breaking additivity whenever |u| is not constant.

    Hangs T f = f(s0) * v on the modulus minimum s0, with v a tent peaking
    at 1 there and supported where |u| stays below sup|u| - spread/2.  Any
    point can then contribute at most |u(s)| + v(s) < sup|u| + 1 to the
    perturbed norm, pinning the gap at spread/2 or better.
    """
    pts = grid.points()
    mods = [abs(u(p)) for p in pts]
    weight_sup = max(mods)
    spread = weight_sup - min(mods)
    if spread <= tol:
        raise ValueError(
            f"|u| is constant within {tol} (spread {spread:.3e}); "
            "this constructor needs a modulus dip")
    s0_idx = mods.index(min(mods))
    s0 = pts[s0_idx]
    threshold = weight_sup - spread / 2.0

    # widest symmetric radius around s0 on which |u| stays strictly below
    # the threshold; s0 itself always qualifies
    steps = 0
    while steps + 1 <= (grid.n - 1) // 2:
        left = mods[(s0_idx - (steps + 1)) % grid.n]
        right = mods[(s0_idx + (steps + 1)) % grid.n]
        if left < threshold and right < threshold:
            steps += 1
        else:
            break
    half_width = max(Fraction(steps, 2 * grid.n), Fraction(1, 2 * grid.n))

    v = ScalarField.tent(center=s0, half_width=half_width, peak=1.0, base=0.0)
    T = FiniteRankOperator.rank_one(v, dirac(s0))
    return _certify(WeightedComposition(u, phi), T, grid,
                    detail={"kind": "modulus-dip", "s0": s0,
                            "tent_half_width": half_width,
                            "modulus_spread": spread})


def counterexample_fat_preimage(u: ScalarField, phi: SymbolMap, t: Coordinate,
                                U: Arc, grid: GridCircle,
                                tol: float = 1e-9) -> CounterexampleResult:
    """Rank-one operator breaking additivity when phi collapses the arc U to t.

    Requires |u| constant and nonzero.  T f = f(t) * g * u with g a tent
    running from -1 at the arc center to -1/2 at its boundary and beyond.
    Inside U the aligned mass cancels against u down to sup|u|/2; outside,
    values top out at (3/2) sup|u|, leaving a gap of sup|u|/2.
    """
    report = modulus_constancy(u, grid, tol=tol)
    if not report.constant:
        raise ValueError(
            f"|u| must be constant within {tol} here (spread {report.spread:.3e})")
    if report.value <= tol:
        raise ValueError("the weight must be nonzero")
    arc_points = U.grid_points(grid)
    if not arc_points:
        raise ValueError("arc contains no grid point")
    for p in arc_points:
        if not points_equal(phi(p), t):
            raise ValueError(
                f"arc is not inside the preimage of {t!r}: phi({p}) = {phi(p)!r}")

    g = ScalarField.tent(center=U.center, half_width=U.half_width,
                         peak=-1.0, base=-0.5)
    T = FiniteRankOperator.rank_one(ScalarField.product(g, u), dirac(t))
    return _certify(WeightedComposition(u, phi), T, grid,
                    detail={"kind": "fat-preimage", "target": t,
                            "arc_center": U.center, "arc_half_width": U.half_width})


def _certify(wc: WeightedComposition, T: FiniteRankOperator, grid: GridCircle,
             detail: dict) -> CounterexampleResult:
    perturbed = perturbed_norm(wc, T, grid)
    weight_sup = wc.weight_sup(grid)
    t_norm = operator_norm(T, grid)
    upper = weight_sup + t_norm
    gap = upper - perturbed
    if gap <= 0:
        raise InvariantViolation(
            f"constructed counterexample has no gap ({gap!r}); "
            "the construction guarantees one")
    return CounterexampleResult(operator=T, certified_gap=gap, perturbed=perturbed,
                                upper=upper, weight_sup=weight_sup, t_norm=t_norm,
                                detail=detail)


# ---------------------------------------------------------------------------
# refinement and convex-combination harnesses
# ---------------------------------------------------------------------------

def _field_closed_form(u: ScalarField) -> bool:
    if u.kind == "samples":
        return False
    if u.kind == "product":
        return all(_field_closed_form(f) for f in u.factors)
    return True


def _symbol_closed_form(phi: SymbolMap) -> bool:
    if phi.kind == "table":
        return False
    if phi.kind == "constant_on_arc":
        return _symbol_closed_form(phi.base)
    return True


@dataclass(frozen=True)
class GapPoint:
    n: int
    gap: float
    perturbed: float
    upper: float
    nowhere_dense_ok: bool   # preimage diagnostic at resolution 4/n


def refinement_convergence(u: ScalarField, phi: SymbolMap, T: SupportsMeasureAt,
                           sizes, tol: float = 1e-9,
                           target_samples: int = 8) -> list[GapPoint]:
    """Additivity gap of uC_phi + T across grid sizes.

    Requires closed-form u and phi (shared across grids) with |u| constant.
    For symbols whose preimages are thin at resolution 4/n the gap decays
    like the weight field's modulus of continuity; the per-size diagnostic
    flag records whether that thinness held, and a failing flag (e.g. a
    symbol constant on an arc) is exactly the case where the gap persists.
    """
    if not _field_closed_form(u):
        raise ValueError("refinement needs a closed-form weight, not samples")
    if not _symbol_closed_form(phi):
        raise ValueError("refinement needs a closed-form symbol, not a table")
    sizes = [int(n) for n in sizes]
    if not sizes:
        raise ValueError("no grid sizes given")
    out: list[GapPoint] = []
    for n in sizes:
        grid = GridCircle(n)
        report = modulus_constancy(u, grid, tol=tol)
        if not report.constant:
            raise ValueError(
                f"|u| must be constant for the refinement harness "
                f"(spread {report.spread:.3e} at n={n})")
        wc = WeightedComposition(u, phi)
        lhs = perturbed_norm(wc, T, grid)
        rhs = wc.weight_sup(grid) + operator_norm(T, grid)
        gap = rhs - lhs
        if gap < -1e-9:
            raise InvariantViolation(f"negative gap {gap!r} at n={n}")
        delta = Fraction(4, n)
        targets = []
        for k in range(target_samples):
            tval = phi(grid.coord(k * n // target_samples))
            if not any(points_equal(tval, seen) for seen in targets):
                targets.append(tval)
        ok = all(
            preimage_nowhere_dense_at_resolution(phi, tval, delta, grid)
            for tval in targets
        )
        out.append(GapPoint(n=n, gap=gap, perturbed=lhs, upper=rhs,
                            nowhere_dense_ok=ok))
    return out


@dataclass(frozen=True)
class ConvexCheckResult:
    holds: bool
    gap: float
    norm: float            # ||t C_phi + (1-t) C_psi + T||
    upper: float           # 1 + ||T||
    delta: tuple[tuple[Coordinate, float], ...]        # on {phi(s) != psi(s)}
    delta_tilde: tuple[tuple[Coordinate, float], ...]  # on {phi(s) == psi(s)}


def convex_center_check(cc: ConvexCombination, T: SupportsMeasureAt,
                        grid: GridCircle, tol: float = 1e-9) -> ConvexCheckResult:
    """Additivity of T against a convex combination of two compositions.

    Besides the norm comparison, reports the pointwise deficiencies that
    control it: on the set where the symbols disagree,

        delta(s) = |t + m_phi| + |1-t + m_psi| - (1 + |m_phi| + |m_psi|),

    and |1 + m_phi| - (1 + |m_phi|) where they agree; both are <= 0, and
    additivity means they climb to 0 along the relevant points.
    """
    combo_norm = operator_norm(cc, grid)
    if abs(combo_norm - 1.0) > FLOAT_SLACK:
        raise InvariantViolation(
            f"a convex combination of compositions has norm 1, got {combo_norm!r}")
    t_norm = operator_norm(T, grid)
    norm = convex_combo_perturbed_norm(cc, T, grid)
    upper = combo_norm + t_norm
    gap = upper - norm
    if gap < -1e-9:
        raise InvariantViolation(f"norm {norm!r} exceeds the bound {upper!r}")

    delta: list[tuple[Coordinate, float]] = []
    delta_tilde: list[tuple[Coordinate, float]] = []
    for p in grid.points():
        mu = T.measure_at(p)
        fp, gp = cc.phi(p), cc.psi(p)
        m_phi = point_mass(mu, fp)
        if points_equal(fp, gp):
            value = abs(1.0 + m_phi) - (1.0 + abs(m_phi))
            delta_tilde.append((p, value))
        else:
            m_psi = point_mass(mu, gp)
            value = (abs(cc.t + m_phi) + abs(1.0 - cc.t + m_psi)
                     - (1.0 + abs(m_phi) + abs(m_psi)))
            delta.append((p, value))
        if value > FLOAT_SLACK:
            raise InvariantViolation(
                f"positive deficiency {value!r} at s={p}; bounded by zero")
    return ConvexCheckResult(holds=gap <= tol, gap=gap, norm=norm, upper=upper,
                             delta=tuple(delta), delta_tilde=tuple(delta_tilde))
