"""Finitely-atomic complex measures on the circle and their exact norms.

For a finite atom list the dual norm on continuous functions is the total
variation, a plain sum of weight moduli.  Atoms are kept sorted by position
with coinciding positions merged and zero weights dropped, so measure
identity is canonical and all sums run in a fixed order (math.fsum, exactly
rounded, makes the reductions order-independent anyway).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .circle import Coordinate, GridCircle, points_equal

__all__ = [
    "AtomicMeasure",
    "dirac",
    "linear_combine",
    "total_variation",
    "point_mass",
    "tv_excluding",
    "integrate",
    "norm_oracle",
]


@dataclass(frozen=True)
class AtomicMeasure:
    """Canonical finite atom list: positions ascending, distinct, weights nonzero."""

    atoms: tuple[tuple[Coordinate, complex], ...] = ()

    @classmethod
    def from_atoms(cls, pairs: Iterable[tuple[Coordinate, complex]]) -> "AtomicMeasure":
        items = sorted(((pos, complex(w)) for pos, w in pairs), key=lambda it: it[0])
        merged: list[tuple[Coordinate, complex]] = []
        for pos, w in items:
            if merged and points_equal(merged[-1][0], pos):
                merged[-1] = (merged[-1][0], merged[-1][1] + w)
            else:
                merged.append((pos, w))
        # positions near 0 and near 1 can wrap onto each other in float mode
        if len(merged) > 1 and points_equal(merged[0][0], merged[-1][0]):
            merged[0] = (merged[0][0], merged[0][1] + merged[-1][1])
            merged.pop()
        return cls(tuple((pos, w) for pos, w in merged if w != 0))

    def __len__(self) -> int:
        return len(self.atoms)


def dirac(t: Coordinate) -> AtomicMeasure:
    """Unit point mass at t."""
    return AtomicMeasure.from_atoms([(t, 1 + 0j)])


def linear_combine(coeffs: Sequence[complex],
                   measures: Sequence[AtomicMeasure]) -> AtomicMeasure:
    """sum_i coeffs[i] * measures[i], re-canonicalized."""
    if len(coeffs) != len(measures):
        raise ValueError(f"{len(coeffs)} coefficients for {len(measures)} measures")
    pairs: list[tuple[Coordinate, complex]] = []
    for c, mu in zip(coeffs, measures):
        c = complex(c)
        if c == 0:
            continue
        pairs.extend((pos, c * w) for pos, w in mu.atoms)
    return AtomicMeasure.from_atoms(pairs)


def total_variation(mu: AtomicMeasure) -> float:
    """Exact dual norm: sum of weight moduli."""
    return math.fsum(abs(w) for _, w in mu.atoms)


def point_mass(mu: AtomicMeasure, t: Coordinate) -> complex:
    """Weight carried at t (0 if no atom there)."""
    hits = [w for pos, w in mu.atoms if points_equal(pos, t)]
    if len(hits) > 1:
        raise ValueError(f"malformed measure: {len(hits)} atoms match position {t!r}")
    return hits[0] if hits else 0j


def tv_excluding(mu: AtomicMeasure, points: Iterable[Coordinate]) -> float:
    """Total variation of the restriction away from the given points."""
    excluded = list(points)
    return math.fsum(
        abs(w) for pos, w in mu.atoms
        if not any(points_equal(pos, t) for t in excluded)
    )


def integrate(f: Callable[[Coordinate], complex], mu: AtomicMeasure) -> complex:
    """Pairing <f, mu> = sum_i w_i f(x_i)."""
    terms = [complex(f(pos)) * w for pos, w in mu.atoms]
    return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))


def norm_oracle(mu: AtomicMeasure, grid: GridCircle) -> float:
    """Independent dual-norm witness for on-grid measures.

    Builds the phase-aligned field f(x_i) = conj(w_i)/|w_i| (extendable to a
    continuous function of sup norm 1 on the circle, atoms being finitely
    many) and returns |<f, mu>|.  Must reproduce total_variation; computed
    through the pairing so the code path shares nothing with it.
    """
    for pos, _ in mu.atoms:
        if not grid.contains(pos):
            raise ValueError(f"atom at {pos!r} is off the {grid.n}-point grid")
    values = {pos: w.conjugate() / abs(w) for pos, w in mu.atoms}

    def f(pos: Coordinate) -> complex:
        return values[pos]

    return abs(integrate(f, mu))
