"""Weierstrass functions, lattice invariants, and fiber root counting.

Two independent evaluation backends share one interface:

  "theta"        q-expansions in u = exp(2 pi i z), q = exp(2 pi i tau).
                 Terms decay like |q|^n, so a tail bound picks the
                 truncation order from the target accuracy.
  "lattice-sum"  row-resummed series: the double sum over the lattice is
                 collapsed along the real direction into cosecant rows,
                 sum_n pi^2 / sin^2(pi (z - n tau)) minus matching
                 constants, which again decays geometrically in n.

Both reduce the argument to the fundamental domain first, so truncation
orders stay uniform. A point within eps of the lattice raises AtInfinity, a
typed signal the callers turn into projective bookkeeping, never a NaN.

Root counting on a fiber uses the argument principle on a jittered period
parallelogram: the boundary winding counts zeros minus poles, and a small
circle around the unique interior lattice point measures the pole
multiplicity numerically. Non-integer windings trigger a re-jitter.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .segre import SegrePoint, SegrePolynomial, segre_products
from .variety import ProductVariety

TWO_PI = 2.0 * math.pi


class AtInfinity(Exception):
    """Signal: the requested point is a lattice point, the value is a pole."""

    def __init__(self, factor: int | None = None):
        self.factor = factor
        super().__init__(f"point at infinity (factor {factor})")


class ContourError(RuntimeError):
    """A winding integral failed its integrality check and needs a re-jitter."""


class DegenerateFiber(ValueError):
    """The restricted function vanishes identically on the sampled fiber."""


def reduce_to_fundamental(z: complex, tau: complex) -> complex:
    """Translate z by the lattice Z + tau Z into the centered domain."""
    b = z.imag / tau.imag
    a = z.real - b * tau.real
    return z - round(a) - round(b) * tau


def _qseries_terms(tau: complex, eps: float) -> int:
    absq = math.exp(-TWO_PI * tau.imag)
    if absq >= 1.0:
        raise ValueError("tau must have positive imaginary part")
    n = int(math.log(eps * (1.0 - absq) * 0.1) / math.log(absq)) + 2
    return max(n, 6)


class WpEvaluator:
    """Weierstrass wp and wp' for one lattice Z + tau Z.

    backend selects the series family; both honor eps as a target absolute
    tail bound (values near poles are large, accuracy there is relative).
    """

    def __init__(self, tau: complex, eps: float = 1e-12, backend: str = "theta"):
        tau = complex(tau)
        if tau.imag <= 0:
            raise ValueError("tau must lie in the upper half plane")
        if backend not in ("theta", "lattice-sum"):
            raise ValueError(f"unknown backend {backend!r}")
        self.tau = tau
        self.eps = float(eps)
        self.backend = backend
        self.nterms = _qseries_terms(tau, self.eps)
        self.q = cmath.exp(2j * math.pi * tau)
        self._invariants: tuple[complex, complex] | None = None

    # lattice geometry

    def reduce(self, z: complex) -> complex:
        return reduce_to_fundamental(z, self.tau)

    def dist_to_lattice(self, z: complex) -> float:
        return abs(self.reduce(z))

    def _check_finite(self, z: complex):
        if self.dist_to_lattice(z) < 1e-12:
            raise AtInfinity()

    # invariants

    def invariants(self) -> tuple[complex, complex]:
        """(g2, g3) for this lattice."""
        if self._invariants is None:
            if self.backend == "theta":
                self._invariants = self._invariants_eisenstein_q()
            else:
                self._invariants = self._invariants_rows()
        return self._invariants

    def _invariants_eisenstein_q(self) -> tuple[complex, complex]:
        q = self.q
        n = np.arange(1, max(self.nterms, 16) + 1)
        qn = q ** n
        e4 = 1.0 + 240.0 * np.sum(n ** 3 * qn / (1.0 - qn))
        e6 = 1.0 - 504.0 * np.sum(n ** 5 * qn / (1.0 - qn))
        g2 = (4.0 * math.pi ** 4 / 3.0) * e4
        g3 = (8.0 * math.pi ** 6 / 27.0) * e6
        return complex(g2), complex(g3)

    def _invariants_rows(self) -> tuple[complex, complex]:
        """Eisenstein sums collapsed along the real direction into cosecant rows.

        Summing 1/(m + n tau)^k over m for fixed n is a derivative of the
        cotangent expansion: with s = 1/sin(pi n tau), c = cos(pi n tau),
          sum_m (z + m)^-4 |_{z=n tau} = pi^4 (s^2/3 + c^2 s^4),
          sum_m (z + m)^-6 |_{z=n tau} = pi^6 (2 s^2/15 + c^2 s^4 + c^4 s^6),
        and the n = 0 rows are 2 zeta(4) and 2 zeta(6).
        """
        tau = self.tau
        pi = math.pi
        G4 = 2.0 * pi ** 4 / 90.0
        G6 = 2.0 * pi ** 6 / 945.0
        nrows = self.nterms + 4
        for n in range(1, nrows + 1):
            s = 1.0 / cmath.sin(pi * n * tau)
            c = cmath.cos(pi * n * tau)
            s2 = s * s
            c2 = c * c
            G4 += 2.0 * pi ** 4 * (s2 / 3.0 + c2 * s2 * s2)
            G6 += 2.0 * pi ** 6 * (2.0 * s2 / 15.0 + c2 * s2 * s2 + c2 * c2 * s2 * s2 * s2)
        return complex(60.0 * G4), complex(140.0 * G6)

    # scalar evaluation

    def wp(self, z: complex) -> complex:
        z = self.reduce(complex(z))
        if abs(z) < 1e-12:
            raise AtInfinity()
        if self.backend == "theta":
            return self._wp_q(z)
        return self._wp_rows(z)

    def wp_prime(self, z: complex) -> complex:
        z = self.reduce(complex(z))
        if abs(z) < 1e-12:
            raise AtInfinity()
        if self.backend == "theta":
            return self._wp_prime_q(z)
        return self._wp_prime_rows(z)

    def _wp_q(self, z: complex) -> complex:
        q = self.q
        u = cmath.exp(2j * math.pi * z)
        s = 1.0 / 12.0 + u / (1.0 - u) ** 2
        qn = 1.0 + 0.0j
        for _ in range(self.nterms):
            qn *= q
            w = qn * u
            x = qn / u
            s += w / (1.0 - w) ** 2 + x / (1.0 - x) ** 2 - 2.0 * qn / (1.0 - qn) ** 2
        return (2j * math.pi) ** 2 * s

    def _wp_prime_q(self, z: complex) -> complex:
        q = self.q
        u = cmath.exp(2j * math.pi * z)
        s = u * (1.0 + u) / (1.0 - u) ** 3
        qn = 1.0 + 0.0j
        for _ in range(self.nterms):
            qn *= q
            w = qn * u
            x = qn / u
            s += w * (1.0 + w) / (1.0 - w) ** 3 - x * (1.0 + x) / (1.0 - x) ** 3
        return (2j * math.pi) ** 3 * s

    def _wp_rows(self, z: complex) -> complex:
        tau = self.tau
        nrows = self.nterms + 1
        total = 0.0 + 0.0j
        for n in range(-nrows, nrows + 1):
            total += 1.0 / cmath.sin(math.pi * (z - n * tau)) ** 2
        const = 0.0 + 0.0j
        for n in range(1, nrows + 1):
            const += 2.0 / cmath.sin(math.pi * n * tau) ** 2
        return math.pi ** 2 * (total - const) - math.pi ** 2 / 3.0

    def _wp_prime_rows(self, z: complex) -> complex:
        tau = self.tau
        nrows = self.nterms + 1
        total = 0.0 + 0.0j
        for n in range(-nrows, nrows + 1):
            c = math.pi * (z - n * tau)
            total += cmath.cos(c) / cmath.sin(c) ** 3
        return -2.0 * math.pi ** 3 * total

    # vectorized evaluation over numpy arrays, pole entries become inf

    def wp_grid(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        b = np.round(z.imag / self.tau.imag)
        a = np.round(z.real - (z.imag / self.tau.imag) * self.tau.real)
        zr = z - a - b * self.tau
        pole = np.abs(zr) < 1e-12
        zr = np.where(pole, 0.25, zr)
        q = self.q
        u = np.exp(2j * math.pi * zr)
        s = 1.0 / 12.0 + u / (1.0 - u) ** 2
        qn = 1.0 + 0.0j
        for _ in range(self.nterms):
            qn *= q
            w = qn * u
            x = qn / u
            s = s + w / (1.0 - w) ** 2 + x / (1.0 - x) ** 2 - 2.0 * qn / (1.0 - qn) ** 2
        out = (2j * math.pi) ** 2 * s
        out[pole] = np.inf
        return out

    def wp_prime_grid(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        b = np.round(z.imag / self.tau.imag)
        a = np.round(z.real - (z.imag / self.tau.imag) * self.tau.real)
        zr = z - a - b * self.tau
        pole = np.abs(zr) < 1e-12
        zr = np.where(pole, 0.25, zr)
        q = self.q
        u = np.exp(2j * math.pi * zr)
        s = u * (1.0 + u) / (1.0 - u) ** 3
        qn = 1.0 + 0.0j
        for _ in range(self.nterms):
            qn *= q
            w = qn * u
            x = qn / u
            s = s + w * (1.0 + w) / (1.0 - w) ** 3 - x * (1.0 + x) / (1.0 - x) ** 3
        out = (2j * math.pi) ** 3 * s
        out[pole] = np.inf
        return out


class ProductEvaluator:
    """Per-factor evaluators for a curve product, sharing one backend."""

    def __init__(self, A: ProductVariety, eps: float = 1e-12, backend: str = "theta"):
        self.A = A
        self.evals = tuple(WpEvaluator(f.tau, eps, backend) for f in A.factors)

    def exp_segre(self, z: tuple[complex, ...]) -> SegrePoint:
        """Affine Segre coordinates of exp(z) with per-factor pole flags."""
        if len(z) != self.A.g:
            raise ValueError("point length does not match the factor count")
        wps, wpps, flags = [], [], []
        for zj, ev in zip(z, self.evals):
            try:
                wps.append(ev.wp(zj))
                wpps.append(ev.wp_prime(zj))
                flags.append(False)
            except AtInfinity:
                wps.append(complex("inf"))
                wpps.append(complex("inf"))
                flags.append(True)
        return SegrePoint(tuple(wps), tuple(wpps), tuple(flags))

    def eval_polynomial(self, F: SegrePolynomial, z: tuple[complex, ...]) -> complex:
        """F(exp(z)); raises AtInfinity if some factor sits at a pole."""
        pt = self.exp_segre(z)
        for j, flag in enumerate(pt.at_infinity):
            if flag:
                raise AtInfinity(j)
        return complex(F.eval_affine(pt.coords()))


def _winding(values: np.ndarray, tol: float) -> int:
    """Winding number of a closed discrete loop of nonzero complex values."""
    if np.any(~np.isfinite(values)) or np.any(np.abs(values) == 0.0):
        raise ContourError("contour passes through a zero or pole")
    phases = np.angle(values)
    d = np.diff(np.concatenate([phases, phases[:1]]))
    d = (d + math.pi) % (2.0 * math.pi) - math.pi
    if np.max(np.abs(d)) > 2.5:
        raise ContourError("phase steps too large, refine the contour")
    total = float(np.sum(d)) / (2.0 * math.pi)
    w = round(total)
    if abs(total - w) > tol:
        raise ContourError(f"winding {total:.6f} failed the integrality check")
    return int(w)


def _count_roots_core(f_vec, tau: complex, jitter: tuple[float, float],
                      nboundary: int, tol: float, max_retries: int, rng) -> int:
    """Argument-principle count for a lattice-periodic meromorphic function.

    f_vec maps a complex array to values; poles may only sit on the lattice
    Z + tau Z. The contour is the period parallelogram shifted by jitter so
    that exactly one lattice point is interior; the count of zeros is the
    boundary winding plus the numerically measured pole multiplicity there.
    """
    a0, b0 = jitter
    for _ in range(max_retries):
        try:
            corner = (a0 - 1.0) + (b0 - 1.0) * tau
            t = np.linspace(0.0, 1.0, nboundary, endpoint=False)
            e1, e2 = 1.0, tau
            loop = np.concatenate([
                corner + t * e1,
                corner + e1 + t * e2,
                corner + e1 + e2 - t * e1,
                corner + e2 - t * e2,
            ])
            wb = _winding(f_vec(loop), tol)
            # the unique lattice point inside the shifted parallelogram is 0
            r = 0.06 * min(1.0, tau.imag)
            circ = r * np.exp(2j * math.pi * np.linspace(0, 1, 1200, endpoint=False))
            pole_mult = -_winding(f_vec(circ), tol)
            if pole_mult < 0:
                raise ContourError("negative pole multiplicity, contour off target")
            count = wb + pole_mult
            if count < 0:
                raise ContourError("negative zero count, contour unreliable")
            return count
        except ContourError:
            a0 = 0.05 + 0.9 * rng.random()
            b0 = 0.05 + 0.9 * rng.random()
    raise ContourError("root count failed after re-jittering")


def count_roots_on_fiber(F: SegrePolynomial, which: int, fixed: complex,
                         A: ProductVariety, pe: ProductEvaluator | None = None,
                         jitter: tuple[float, float] = (0.23, 0.31),
                         nboundary: int = 4000, tol: float = 1e-3,
                         max_retries: int = 8, _rng=None) -> int:
    """Zeros of z -> F(exp(...)) on one curve fiber, counted with multiplicity.

    which selects the moving factor (0-based); the other factor is pinned at
    fixed. Identically vanishing restrictions raise DegenerateFiber so the
    caller can move the fiber; shaky contours re-jitter themselves.
    """
    if A.g != 2:
        raise ValueError("fiber counting is implemented for two factors")
    import random

    rng = _rng or random.Random(10007 * (which + 1))
    if pe is None:
        pe = ProductEvaluator(A)
    tau = pe.evals[which].tau

    def f_vec(zs: np.ndarray) -> np.ndarray:
        if which == 0:
            p1 = pe.evals[0].wp_grid(zs)
            q1 = pe.evals[0].wp_prime_grid(zs)
            p2 = np.full_like(zs, pe.evals[1].wp(fixed))
            q2 = np.full_like(zs, pe.evals[1].wp_prime(fixed))
        else:
            p2 = pe.evals[1].wp_grid(zs)
            q2 = pe.evals[1].wp_prime_grid(zs)
            p1 = np.full_like(zs, pe.evals[0].wp(fixed))
            q1 = np.full_like(zs, pe.evals[0].wp_prime(fixed))
        stack = segre_products(p1, q1, p2, q2)
        return np.asarray(F.eval_affine(stack), dtype=complex)

    _reject_degenerate(f_vec, tau)
    return _count_roots_core(f_vec, tau, jitter, nboundary, tol, max_retries, rng)


def point_count_on_curve(F: SegrePolynomial, A: ProductVariety,
                         pe: ProductEvaluator | None = None,
                         jitter: tuple[float, float] = (0.23, 0.31),
                         nboundary: int = 4000, tol: float = 1e-3,
                         max_retries: int = 8, _rng=None) -> int:
    """Zeros of z -> F(exp(z)) on a single curve, counted with multiplicity."""
    if A.g != 1:
        raise ValueError("point_count_on_curve expects a single factor")
    import random

    rng = _rng or random.Random(10007)
    if pe is None:
        pe = ProductEvaluator(A)
    tau = pe.evals[0].tau

    def f_vec(zs: np.ndarray) -> np.ndarray:
        p = pe.evals[0].wp_grid(zs)
        q = pe.evals[0].wp_prime_grid(zs)
        stack = [np.ones_like(p), p, q]
        return np.asarray(F.eval_affine(stack), dtype=complex)

    _reject_degenerate(f_vec, tau)
    return _count_roots_core(f_vec, tau, jitter, nboundary, tol, max_retries, rng)


def _reject_degenerate(f_vec, tau: complex):
    probes = np.array([0.31 + 0.17j * tau, 0.11 + 0.43j, 0.57 + 0.29 * tau,
                       0.41 * tau + 0.13, 0.71 + 0.61 * tau], dtype=complex)
    pv = f_vec(probes)
    finite = np.isfinite(pv)
    if np.all(~finite) or np.max(np.abs(pv[finite]), initial=0.0) < 1e-13:
        raise DegenerateFiber("restriction vanishes identically on this fiber")


def bidegree_of(F: SegrePolynomial, A: ProductVariety,
                pe: ProductEvaluator | None = None, seed: int = 2) -> tuple[int, int]:
    """Measure (m, n): roots along factor 1 and factor 2 fibers.

    m moves factor 1 with factor 2 pinned, n the reverse. Each count is
    taken at two generic base points and must agree; degenerate fibers are
    re-sampled.
    """
    import random

    rng = random.Random(seed)
    if pe is None:
        pe = ProductEvaluator(A)
    out = []
    for which in (0, 1):
        other = 1 - which
        tau_other = pe.evals[other].tau
        counts = []
        tries = 0
        while len(counts) < 2:
            if tries > 12:
                raise ContourError("could not stabilize a fiber count")
            tries += 1
            base = (0.1 + 0.8 * rng.random()) + (0.1 + 0.8 * rng.random()) * tau_other
            try:
                counts.append(count_roots_on_fiber(F, which, base, A, pe, _rng=rng))
            except DegenerateFiber:
                continue
        if counts[0] != counts[1]:
            third = count_roots_on_fiber(
                F, which, 0.37 + 0.53 * tau_other, A, pe, _rng=rng)
            counts = [c for c in counts if c == third] + [third]
            if len(counts) < 2:
                raise ContourError("fiber counts disagree across base points")
        out.append(counts[0])
    return out[0], out[1]


def delta_map(z_of_l: tuple[complex, ...], w: tuple[complex, ...],
              A: ProductVariety) -> tuple[complex, ...]:
    """Group difference w - exp(z) in A, reduced to the centered domain."""
    diff = tuple(wj - zj for wj, zj in zip(w, z_of_l))
    return A.reduce_point(diff)


def jacobian_probe(l: complex, L_direction: tuple[complex, ...],
                   F: SegrePolynomial, A: ProductVariety,
                   pe: ProductEvaluator | None = None,
                   step: float = 1e-6, rel_tol: float = 1e-8) -> int:
    """Numerical rank of the intersection differential at a solution point.

    Columns are the L direction and the tangent of the hypersurface at
    exp(z(l)), the latter from central differences of the pulled-back
    polynomial. Rank 2 means the meeting is transverse-like; rank < 2 flags
    a degenerate touch.
    """
    if A.g != 2:
        raise ValueError("the probe is implemented for two factors")
    if pe is None:
        pe = ProductEvaluator(A)
    v = np.array(L_direction, dtype=complex)
    z = tuple(l * c for c in L_direction)

    def G(z1: complex, z2: complex) -> complex:
        return pe.eval_polynomial(F, (z1, z2))

    h = step
    d1 = (G(z[0] + h, z[1]) - G(z[0] - h, z[1])) / (2.0 * h)
    d2 = (G(z[0], z[1] + h) - G(z[0], z[1] - h)) / (2.0 * h)
    tangent = np.array([-d2, d1], dtype=complex)
    M = np.column_stack([v, tangent])
    s = np.linalg.svd(M, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.sum(s > rel_tol * s[0]))
