"""Operators on the discretized circle, represented by their measure families.

Every operator here acts on continuous functions through a family of atomic
measures: T is stored as s -> mu_s with (Tf)(s) = <f, mu_s>, so operator
norms are exact suprema of total variations over the grid.  A weighted
composition u * (f o phi) has the one-atom family u(s) * delta_{phi(s)};
finite-rank perturbations contribute finitely many moving atoms.

The perturbed norm of uC_phi + T splits at each point into the aligned part
|u(s) + mu_s({phi(s)})| plus the off-target variation.  perturbed_norm
computes the split and cross-checks it against the direct total variation
of the combined family at every point; disagreement raises
InvariantViolation rather than returning a number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Protocol

import numpy as np

from .circle import (
    Coordinate,
    GridCircle,
    ScalarField,
    SymbolMap,
    modulus_constancy,
    sup_norm,
)
from .errors import InvariantViolation
from .measures import (
    AtomicMeasure,
    dirac,
    linear_combine,
    point_mass,
    total_variation,
    tv_excluding,
)

__all__ = [
    "SupportsMeasureAt",
    "WeightedComposition",
    "FiniteRankOperator",
    "ConvexCombination",
    "OperatorExpr",
    "rank_one",
    "as_expr",
    "scaled",
    "zero_operator",
    "measure_at",
    "operator_norm",
    "perturbation_profile",
    "perturbed_norm",
    "RotationMaxResult",
    "rotation_max_norm",
    "convex_combo_perturbed_norm",
]

SPLIT_VS_DIRECT_TOL = 1e-12


class SupportsMeasureAt(Protocol):
    def measure_at(self, s: Coordinate) -> AtomicMeasure: ...


@dataclass(frozen=True)
class WeightedComposition:
    """f -> u * (f o phi); measure family u(s) * delta_{phi(s)}."""

    u: ScalarField
    phi: SymbolMap

    def measure_at(self, s: Coordinate) -> AtomicMeasure:
        return AtomicMeasure.from_atoms([(self.phi(s), self.u(s))])

    def weight_sup(self, grid: GridCircle) -> float:
        """Operator norm: sup |u| over the grid."""
        return sup_norm(self.u, grid)


@dataclass(frozen=True)
class FiniteRankOperator:
    """f -> sum_i <f, mu_i> g_i; measure family sum_i g_i(s) * mu_i."""

    terms: tuple[tuple[ScalarField, AtomicMeasure], ...]

    @classmethod
    def rank_one(cls, g: ScalarField, mu: AtomicMeasure) -> "FiniteRankOperator":
        return cls(((g, mu),))

    def measure_at(self, s: Coordinate) -> AtomicMeasure:
        return linear_combine([g(s) for g, _ in self.terms],
                              [mu for _, mu in self.terms])


@dataclass(frozen=True)
class ConvexCombination:
    """t*C_phi + (1-t)*C_psi; family t*delta_{phi(s)} + (1-t)*delta_{psi(s)}."""

    t: float
    phi: SymbolMap
    psi: SymbolMap

    def __post_init__(self) -> None:
        if not (0.0 <= self.t <= 1.0):
            raise ValueError(f"convex weight t must lie in [0, 1], got {self.t}")

    def measure_at(self, s: Coordinate) -> AtomicMeasure:
        return linear_combine([self.t, 1.0 - self.t],
                              [dirac(self.phi(s)), dirac(self.psi(s))])


@dataclass(frozen=True)
class OperatorExpr:
    """Formal sum of scaled operators, combined at the measure level."""

    terms: tuple[tuple[complex, SupportsMeasureAt], ...] = ()

    def measure_at(self, s: Coordinate) -> AtomicMeasure:
        return linear_combine([c for c, _ in self.terms],
                              [op.measure_at(s) for _, op in self.terms])

    def __add__(self, other: "OperatorExpr | SupportsMeasureAt") -> "OperatorExpr":
        return OperatorExpr(self.terms + as_expr(other).terms)


def rank_one(g: ScalarField, at: Coordinate,
             scale: complex = 1.0) -> FiniteRankOperator:
    """The ubiquitous f -> scale * f(at) * g."""
    return FiniteRankOperator.rank_one(g, AtomicMeasure.from_atoms([(at, scale)]))


def as_expr(op: SupportsMeasureAt) -> OperatorExpr:
    if isinstance(op, OperatorExpr):
        return op
    return OperatorExpr(((1 + 0j, op),))


def scaled(op: SupportsMeasureAt, coeff: complex) -> OperatorExpr:
    return OperatorExpr(tuple((complex(coeff) * c, inner) for c, inner in as_expr(op).terms))


def zero_operator() -> OperatorExpr:
    return OperatorExpr(())


def measure_at(T: SupportsMeasureAt, s: Coordinate) -> AtomicMeasure:
    """The adjoint image of the point evaluation at s."""
    return T.measure_at(s)


def operator_norm(T: SupportsMeasureAt, grid: GridCircle) -> float:
    """sup over grid points of the total variation of the measure family."""
    return max(total_variation(T.measure_at(p)) for p in grid.points())


@dataclass(frozen=True)
class PerturbationProfile:
    """Per-point data of uC_phi + T: weight u(s), aligned mass mu_s({phi(s)}),
    off-target variation |mu_s|(S - {phi(s)})."""

    points: tuple[Coordinate, ...]
    weight: np.ndarray        # complex
    aligned_mass: np.ndarray  # complex
    off_mass: np.ndarray      # real


def perturbation_profile(wc: WeightedComposition, T: SupportsMeasureAt,
                         grid: GridCircle) -> PerturbationProfile:
    pts = grid.points()
    weight = np.empty(len(pts), dtype=complex)
    aligned = np.empty(len(pts), dtype=complex)
    off = np.empty(len(pts), dtype=float)
    for i, p in enumerate(pts):
        mu = T.measure_at(p)
        target = wc.phi(p)
        weight[i] = wc.u(p)
        aligned[i] = point_mass(mu, target)
        off[i] = tv_excluding(mu, [target])
    return PerturbationProfile(tuple(pts), weight, aligned, off)


def perturbed_norm(wc: WeightedComposition, T: SupportsMeasureAt,
                   grid: GridCircle) -> float:
    """Exact norm of uC_phi + T on the grid model.

    sup_s ( |u(s) + mu_s({phi(s)})| + |mu_s|(S - {phi(s)}) ), each point
    cross-checked against the direct total variation of the merged family.
    """
    best = 0.0
    for p in grid.points():
        mu = T.measure_at(p)
        target = wc.phi(p)
        split = (abs(wc.u(p) + point_mass(mu, target))
                 + tv_excluding(mu, [target]))
        direct = total_variation(
            linear_combine([1.0, 1.0], [wc.measure_at(p), mu]))
        if abs(split - direct) > SPLIT_VS_DIRECT_TOL:
            raise InvariantViolation(
                f"aligned/off-target split {split!r} disagrees with direct "
                f"total variation {direct!r} at s={p}")
        best = max(best, split)
    return best


@dataclass(frozen=True)
class RotationMaxResult:
    max: float               # analytic maximum over unimodular scalings
    searched: float          # best value found on the lambda grid
    argmax_lambda: complex   # first grid maximizer, smallest argument in [0, 2pi)
    lambda_grid: int


def rotation_max_norm(wc: WeightedComposition, T: SupportsMeasureAt,
                      grid: GridCircle, lambda_grid: int = 4096,
                      tol: float = 1e-9) -> RotationMaxResult:
    """max over |lambda| = 1 of ||uC_phi + lambda T|| for constant-modulus u.

    The analytic value sup_s(|u(s)| + |mu_s({phi(s)})| + off-target mass)
    collapses to sup|u| + ||T||; the lambda-grid search must come within
    (2*pi/lambda_grid) * ||T|| of it (Lipschitz bound), else
    InvariantViolation.  lambda_grid=2 restricts to real scalars {1, -1}.
    """
    if lambda_grid < 1:
        raise ValueError(f"lambda_grid must be positive, got {lambda_grid}")
    report = modulus_constancy(wc.u, grid, tol=tol)
    if not report.constant:
        raise ValueError(
            f"|u| must be constant within {tol} for the rotation maximum "
            f"(spread {report.spread:.3e})")
    prof = perturbation_profile(wc, T, grid)
    analytic = float(np.max(np.abs(prof.weight) + np.abs(prof.aligned_mass)
                            + prof.off_mass))
    t_norm = float(np.max(np.abs(prof.aligned_mass) + prof.off_mass))

    lam = np.exp(2j * np.pi * np.arange(lambda_grid) / lambda_grid)
    searched = -np.inf
    arg_idx = 0
    block = max(1, (1 << 22) // max(1, grid.n))
    for start in range(0, lambda_grid, block):
        chunk = lam[start:start + block]
        vals = np.abs(prof.weight[None, :] + chunk[:, None] * prof.aligned_mass[None, :])
        vals += prof.off_mass[None, :]
        per_lambda = vals.max(axis=1)
        k = int(np.argmax(per_lambda))  # first maximizer within the chunk
        if float(per_lambda[k]) > searched:
            searched = float(per_lambda[k])
            arg_idx = start + k
    if searched > analytic + 1e-9:
        raise InvariantViolation(
            f"lambda search {searched!r} exceeded the analytic maximum {analytic!r}")
    slack = (2.0 * math.pi / lambda_grid) * t_norm + 1e-9
    if analytic - searched > slack:
        raise InvariantViolation(
            f"lambda search {searched!r} missed the analytic maximum {analytic!r} "
            f"by more than {slack!r}")
    return RotationMaxResult(max=analytic, searched=searched,
                             argmax_lambda=complex(lam[arg_idx]),
                             lambda_grid=lambda_grid)


def convex_combo_perturbed_norm(cc: ConvexCombination, T: SupportsMeasureAt,
                                grid: GridCircle) -> float:
    """Exact norm of t*C_phi + (1-t)*C_psi + T via merged atom families."""
    return max(
        total_variation(linear_combine([1.0, 1.0],
                                       [cc.measure_at(p), T.measure_at(p)]))
        for p in grid.points()
    )
