"""Boundary-value model for weighted compositions of analytic disk functions.

Functions analytic on the unit disk and continuous up to the boundary peak
their modulus on the circle, so norms here are suprema over dense circle
samples; Blaschke products supply the inner symbols and the test-function
ladder.  Exact analytic values are used wherever a closed form exists
(inner parts have modulus 1, an affine a + b z has sup |a| + |b|), sampled
suprema elsewhere, and every result records which one it got.

Two one-sided tools replace the circle model's exact norms:

* disk_norm_lower_bound certifies ||uC_phi + T|| from below by evaluating
  the operator on a deterministic ladder of sup-norm-1 test functions.
* certified_counterexample_bound certifies ||uC_phi - T|| from above, for
  the canonical rank-one T built at a boundary point omega, by a two-arc
  argument: a difference chain with a Cauchy-type increment bound near
  omega, plain triangle inequality off the arc.  A positive margin below
  sup|u| + ||T|| certifies that additivity fails for -T.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvariantViolation

__all__ = [
    "BlaschkeProduct",
    "blaschke_eval",
    "DiskFunction",
    "RankOneDiskOperator",
    "ArcNeighborhood",
    "SearchLadder",
    "CConditions",
    "check_c_conditions",
    "LowerBoundResult",
    "disk_norm_lower_bound",
    "disk_counterexample_operator",
    "CertifiedBound",
    "certified_counterexample_bound",
    "AutomorphismResult",
    "automorphism_identity_check",
]

UNIMODULAR_TOL = 1e-12
BOUNDARY_SLACK = 1e-12


@dataclass(frozen=True)
class BlaschkeProduct:
    """lambda * prod_k (z - a_k) / (1 - conj(a_k) z), |lambda| = 1, |a_k| < 1."""

    unimodular_constant: complex = 1 + 0j
    zeros: tuple[complex, ...] = ()

    def __post_init__(self) -> None:
        if abs(abs(self.unimodular_constant) - 1.0) > UNIMODULAR_TOL:
            raise ValueError(
                f"leading constant must be unimodular, |{self.unimodular_constant}| "
                f"= {abs(self.unimodular_constant)!r}")
        for a in self.zeros:
            if abs(a) >= 1.0:
                raise ValueError(f"zero {a!r} is not inside the open disk")

    @property
    def degree(self) -> int:
        return len(self.zeros)

    def __call__(self, z):
        return blaschke_eval(self, z)


def blaschke_eval(B: BlaschkeProduct, z):
    """Evaluate on the closed disk (scalar or ndarray); rejects |z| > 1."""
    arr = np.asarray(z, dtype=complex)
    if arr.size and float(np.max(np.abs(arr))) > 1.0 + BOUNDARY_SLACK:
        raise ValueError("evaluation point outside the closed unit disk")
    out = np.full(arr.shape, B.unimodular_constant, dtype=complex)
    for a in B.zeros:
        den = 1.0 - np.conj(a) * arr
        if arr.size and float(np.min(np.abs(den))) < 1e-300:
            raise ValueError(f"evaluation too close to the pole of the {a!r} factor")
        out = out * (arr - a) / den
    if arr.shape == ():
        return complex(out)
    return out


@dataclass(frozen=True)
class DiskFunction:
    """Analytic function given as a constant, a polynomial (ascending
    coefficients), or a scalar multiple of a Blaschke product."""

    kind: str
    value: complex = 0j
    coeffs: tuple[complex, ...] = ()
    scale: complex = 1 + 0j
    blaschke: BlaschkeProduct | None = None

    @classmethod
    def constant(cls, value: complex) -> "DiskFunction":
        return cls(kind="constant", value=complex(value))

    @classmethod
    def polynomial(cls, coeffs) -> "DiskFunction":
        coeffs = tuple(complex(c) for c in coeffs)
        if not coeffs:
            raise ValueError("polynomial needs at least one coefficient")
        return cls(kind="polynomial", coeffs=coeffs)

    @classmethod
    def scaled_identity(cls, scale: complex) -> "DiskFunction":
        return cls.polynomial([0j, complex(scale)])

    @classmethod
    def half_plus(cls, omega: complex) -> "DiskFunction":
        """g(z) = (1 + conj(omega) z) / 2: peaks at 1 in z = omega, sup 1."""
        if abs(abs(omega) - 1.0) > UNIMODULAR_TOL:
            raise ValueError(f"omega must be on the circle, |omega| = {abs(omega)!r}")
        return cls.polynomial([0.5, 0.5 * complex(omega).conjugate()])

    @classmethod
    def blaschke_multiple(cls, blaschke: BlaschkeProduct,
                          scale: complex = 1 + 0j) -> "DiskFunction":
        return cls(kind="blaschke", blaschke=blaschke, scale=complex(scale))

    def __call__(self, z):
        if self.kind == "constant":
            arr = np.asarray(z)
            if arr.shape == ():
                return self.value
            return np.full(arr.shape, self.value, dtype=complex)
        if self.kind == "polynomial":
            res = np.polynomial.polynomial.polyval(np.asarray(z, dtype=complex),
                                                   np.asarray(self.coeffs))
            if np.asarray(z).shape == ():
                return complex(res)
            return res
        if self.kind == "blaschke":
            return self.scale * blaschke_eval(self.blaschke, z)
        raise ValueError(f"unknown disk function kind {self.kind!r}")

    def sup_norm(self, samples: int = 4096) -> tuple[float, bool]:
        """(sup over the closed disk, exact?).  Exact for constants, Blaschke
        multiples and affine polynomials; otherwise a dense boundary sample
        (a lower estimate, by the maximum principle tight as samples grow)."""
        if self.kind == "constant":
            return abs(self.value), True
        if self.kind == "blaschke":
            return abs(self.scale), True
        if self.kind == "polynomial" and len(self.coeffs) <= 2:
            return math.fsum(abs(c) for c in self.coeffs), True
        z = np.exp(2j * np.pi * np.arange(samples) / samples)
        return float(np.max(np.abs(self(z)))), False


@dataclass(frozen=True)
class RankOneDiskOperator:
    """T f = c * f(tau) * g with tau in the closed disk; ||T|| = |c| * sup|g|."""

    tau: complex
    g: DiskFunction
    c: complex

    def __post_init__(self) -> None:
        if abs(self.tau) > 1.0 + BOUNDARY_SLACK:
            raise ValueError(f"evaluation point tau={self.tau!r} outside the closed disk")

    def norm(self, samples: int = 4096) -> tuple[float, bool]:
        g_sup, exact = self.g.sup_norm(samples)
        return abs(self.c) * g_sup, exact

    def apply(self, f, z):
        return self.c * f(self.tau) * self.g(z)


@dataclass(frozen=True)
class ArcNeighborhood:
    """Closed boundary arc {omega e^{i theta} : |theta| <= half_angle}."""

    omega: complex
    half_angle: float

    def __post_init__(self) -> None:
        if abs(abs(self.omega) - 1.0) > UNIMODULAR_TOL:
            raise ValueError(f"omega must be on the circle, |omega| = {abs(self.omega)!r}")
        if not (0.0 < self.half_angle < math.pi):
            raise ValueError(f"half_angle must lie in (0, pi), got {self.half_angle}")

    def samples(self, m: int) -> np.ndarray:
        thetas = np.linspace(-self.half_angle, self.half_angle, m)
        return self.omega * np.exp(1j * thetas)

    def complement_samples(self, m: int) -> np.ndarray:
        thetas = np.linspace(self.half_angle, 2.0 * math.pi - self.half_angle,
                             m + 2)[1:-1]
        return self.omega * np.exp(1j * thetas)


# ---------------------------------------------------------------------------
# condition checks and the lower-bound search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CConditions:
    weight_modulus_constant: bool   # |u| constant and nonzero on the boundary
    symbol_inner: bool              # |phi| = 1 on the boundary
    symbol_nonconstant: bool
    detail: dict = field(default_factory=dict)

    @property
    def all_hold(self) -> bool:
        return (self.weight_modulus_constant and self.symbol_inner
                and self.symbol_nonconstant)


def check_c_conditions(u: DiskFunction, phi: DiskFunction, samples: int = 4096,
                       tol: float = 1e-9) -> CConditions:
    """Sampled check of the three hypotheses behind boundary additivity:
    constant nonzero |u|, inner phi, non-constant phi."""
    z = np.exp(2j * np.pi * np.arange(samples) / samples)
    u_mod = np.abs(u(z))
    phi_vals = np.asarray(phi(z))
    u_spread = float(u_mod.max() - u_mod.min())
    u_min = float(u_mod.min())
    inner_defect = float(np.max(np.abs(np.abs(phi_vals) - 1.0)))
    symbol_spread = float(np.max(np.abs(phi_vals - phi_vals[0])))
    return CConditions(
        weight_modulus_constant=(u_spread <= tol and u_min > tol),
        symbol_inner=inner_defect <= tol,
        symbol_nonconstant=symbol_spread > tol,
        detail={"weight_spread": u_spread, "weight_min_modulus": u_min,
                "inner_defect": inner_defect, "symbol_spread": symbol_spread,
                "samples": samples, "tol": tol},
    )


@dataclass(frozen=True)
class SearchLadder:
    """Deterministic test-function family: Blaschke products with zeros drawn
    (with repetition, up to max_depth factors) from {0} and +/- radii, plus
    pure monomials up to degree max_monomial.

    phase_grid is recorded for completeness: the searched operators are
    linear, so a unimodular prefactor e^{i gamma} never changes the sampled
    modulus and the search evaluates the gamma = 0 representative of each
    orbit.
    """

    radii: tuple[float, ...] = (0.9, 0.99, 0.999)
    phase_grid: int = 256
    max_depth: int = 3
    max_monomial: int = 16
    samples: int = 4096

    def zero_pool(self) -> list[float]:
        pool = {0.0}
        for r in self.radii:
            if not (0.0 < r < 1.0):
                raise ValueError(f"ladder radius {r!r} must lie in (0, 1)")
            pool.add(r)
            pool.add(-r)
        return sorted(pool)

    def test_functions(self):
        """Yield (description, BlaschkeProduct) in a fixed lexicographic order."""
        pool = self.zero_pool()
        for depth in range(self.max_depth + 1):
            for zeros in itertools.combinations_with_replacement(pool, depth):
                yield ({"kind": "blaschke", "zeros": list(zeros), "phase": 0.0},
                       BlaschkeProduct(zeros=tuple(complex(a) for a in zeros)))
        for degree in range(self.max_depth + 1, self.max_monomial + 1):
            yield ({"kind": "monomial", "degree": degree, "phase": 0.0},
                   BlaschkeProduct(zeros=(0j,) * degree))


@dataclass(frozen=True)
class LowerBoundResult:
    bound: float
    witness: dict       # test function description + attaining sample
    family_size: int
    samples: int


def disk_norm_lower_bound(u: DiskFunction, phi: DiskFunction,
                          T: RankOneDiskOperator | None = None,
                          ladder: SearchLadder = SearchLadder()) -> LowerBoundResult:
    """Certified lower bound for ||uC_phi + T|| on the disk algebra.

    Every ladder function has sup norm at most 1 and every sample point sits
    on the boundary, so each evaluated |u(z) f(phi(z)) + (Tf)(z)| is a true
    lower bound; the result is their maximum, with the first witness in
    ladder order.  Requires phi to map into the closed disk.
    """
    m = ladder.samples
    z = np.exp(2j * np.pi * np.arange(m) / m)
    uz = np.asarray(u(z))
    phiz = np.asarray(phi(z))
    overflow = float(np.max(np.abs(phiz))) - 1.0
    if overflow > 1e-9:
        raise ValueError(
            f"symbol leaves the closed disk by {overflow:.3e}; "
            "test functions cannot be composed with it")
    phiz = np.where(np.abs(phiz) > 1.0, phiz / np.abs(phiz), phiz)
    if T is not None:
        gz = np.asarray(T.g(z))

    best = -1.0
    witness: dict = {}
    count = 0
    for desc, f in ladder.test_functions():
        count += 1
        values = uz * blaschke_eval(f, phiz)
        if T is not None:
            values = values + T.c * blaschke_eval(f, complex(T.tau)) * gz
        values = np.abs(values)
        k = int(np.argmax(values))
        if float(values[k]) > best:
            best = float(values[k])
            witness = dict(desc)
            witness.update({"sample_index": k, "z": complex(z[k])})

    u_sup, u_exact = u.sup_norm(m)
    t_norm, t_exact = T.norm(m) if T is not None else (0.0, True)
    slack = 1e-9 if (u_exact and t_exact) else 1e-6
    if best > u_sup + t_norm + slack:
        raise InvariantViolation(
            f"lower bound {best!r} exceeds the triangle bound "
            f"{u_sup + t_norm!r}")
    return LowerBoundResult(bound=best, witness=witness, family_size=count,
                            samples=m)


# ---------------------------------------------------------------------------
# the boundary counterexample and its certified bound
# ---------------------------------------------------------------------------

def disk_counterexample_operator(u: DiskFunction, phi: DiskFunction,
                                 omega: complex) -> RankOneDiskOperator:
    """The canonical rank-one perturbation at a boundary point omega:
    T f = u(omega) f(phi(omega)) g with g = (1 + conj(omega) z)/2.

    Needs phi(omega) strictly inside the disk and u(omega) nonzero; then
    ||T|| = |u(omega)| exactly.
    """
    omega = complex(omega)
    if abs(abs(omega) - 1.0) > UNIMODULAR_TOL:
        raise ValueError(f"omega must be on the circle, |omega| = {abs(omega)!r}")
    tau = complex(phi(omega))
    if abs(tau) >= 1.0:
        raise ValueError(
            f"phi(omega) = {tau!r} is not strictly inside the disk")
    c = complex(u(omega))
    if c == 0:
        raise ValueError("u vanishes at omega; the construction needs u(omega) != 0")
    return RankOneDiskOperator(tau=tau, g=DiskFunction.half_plus(omega), c=c)


@dataclass(frozen=True)
class CertifiedBound:
    bound: float        # certified upper bound for ||uC_phi - T||
    margin: float       # (sup|u| + ||T||) - bound; positive = additivity broken
    valid: bool         # all sampled arc conditions + the chain sanity bound
    on_arc: float       # difference-chain bound A near omega
    off_arc: float      # triangle bound B away from omega
    delta: float        # sup of |g| off the arc (closed form cos(half_angle/2))
    operator: RankOneDiskOperator
    detail: dict


def certified_counterexample_bound(u: DiskFunction, phi: DiskFunction,
                                   omega: complex, epsilon: float,
                                   arc: ArcNeighborhood,
                                   samples: int = 4096) -> CertifiedBound:
    """Two-arc certified upper bound for ||uC_phi - T||, T the canonical
    rank-one perturbation at omega.

    Near omega (on the arc, verified on samples): for any f with sup|f| <= 1,
    |u(z) f(phi(z)) - u(omega) f(phi(omega)) g(z)| chains through three
    increments -- a Cauchy-type bound sup|u| epsilon / (1 - (r+epsilon))^2
    for moving phi(z) to phi(omega) inside radius r + epsilon, epsilon for
    moving u(z) to u(omega), and |u(omega)| |1 - g(z)| <= |u(omega)|/2 for
    discounting g.  Off the arc, |g| <= delta = cos(half_angle/2) caps the
    subtracted term, giving sup|u| + |u(omega)| delta.

    The reported bound max(on_arc, off_arc) is certified whenever `valid`;
    a positive margin then witnesses ||uC_phi + (-T)|| < sup|u| + ||-T||.
    """
    omega = complex(omega)
    if abs(complex(arc.omega) - omega) > 1e-12:
        raise ValueError("arc must be centered at omega")
    T = disk_counterexample_operator(u, phi, omega)
    r = abs(T.tau)
    u_omega = abs(T.c)
    if not (0.0 < epsilon < min(1.0 - r, u_omega / 3.0)):
        raise ValueError(
            f"epsilon must lie in (0, min(1 - {r!r}, {u_omega!r}/3)), got {epsilon}")

    u_sup, u_sup_exact = u.sup_norm(samples)

    z_arc = arc.samples(samples)
    g_arc = np.asarray(T.g(z_arc))
    phi_arc = np.asarray(phi(z_arc))
    u_arc = np.asarray(u(z_arc))
    phi_increment = float(np.max(np.abs(phi_arc - T.tau)))
    g_defect = float(np.max(np.abs(1.0 - g_arc)))
    u_increment = float(np.max(np.abs(u_arc - T.c)))
    arc_ok = (phi_increment <= epsilon and g_defect < 0.5
              and u_increment < epsilon)

    on_arc = (u_sup * epsilon / (1.0 - (r + epsilon)) ** 2
              + epsilon + u_omega / 2.0)
    chain_cap = u_sup + (5.0 / 6.0) * u_omega
    chain_ok = on_arc <= chain_cap + 1e-12

    delta = math.cos(arc.half_angle / 2.0)
    z_off = arc.complement_samples(samples)
    sampled_delta = float(np.max(np.abs(np.asarray(T.g(z_off)))))
    if sampled_delta > delta + 1e-12:
        raise InvariantViolation(
            f"sampled off-arc sup {sampled_delta!r} exceeds the closed form {delta!r}")
    off_arc = u_sup + u_omega * delta

    bound = max(on_arc, off_arc)
    margin = (u_sup + u_omega) - bound
    return CertifiedBound(
        bound=bound, margin=margin, valid=arc_ok and chain_ok,
        on_arc=on_arc, off_arc=off_arc, delta=delta, operator=T,
        detail={"phi_increment": phi_increment, "g_defect": g_defect,
                "u_increment": u_increment, "chain_ok": chain_ok,
                "chain_cap": chain_cap, "r": r, "epsilon": epsilon,
                "u_omega": u_omega, "u_sup": u_sup,
                "u_sup_exact": u_sup_exact, "sampled_delta": sampled_delta,
                "half_angle": arc.half_angle, "samples": samples,
                "exhibited": "uC_phi - T"},
    )


@dataclass(frozen=True)
class AutomorphismResult:
    lower: float     # certified lower bound for ||C_phi + T||
    target: float    # 1 + ||T||
    deficit: float   # target - lower, >= 0
    witness: dict


def automorphism_identity_check(phi: BlaschkeProduct,
                                T: RankOneDiskOperator,
                                ladder: SearchLadder = SearchLadder()) -> AutomorphismResult:
    """For a disk automorphism phi, ||C_phi + T|| = 1 + ||T|| exactly; the
    ladder search certifies the identity from below.  phi must be a single
    Blaschke factor (times a unimodular constant)."""
    if phi.degree != 1:
        raise ValueError(
            f"automorphisms are degree-1 Blaschke products, got degree {phi.degree}")
    res = disk_norm_lower_bound(DiskFunction.constant(1 + 0j),
                                DiskFunction.blaschke_multiple(phi), T, ladder)
    t_norm, _ = T.norm(ladder.samples)
    target = 1.0 + t_norm
    deficit = target - res.bound
    if deficit < -1e-9:
        raise InvariantViolation(
            f"lower bound {res.bound!r} exceeds the exact norm {target!r}")
    return AutomorphismResult(lower=res.bound, target=target, deficit=deficit,
                              witness=res.witness)
