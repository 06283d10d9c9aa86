"""Numerical harvest of intersection points between exp(L) and a hypersurface.

The parameter space is L itself: for a one-dimensional L with direction v the
pulled-back function is G(l) = F(exp(l v)). The plane of l is tiled by
preimages of period cells of an anchor factor (the first with a nonzero
direction entry), walked in a deterministic spiral outward from the origin.
Each cell gets a coarse grid scan for local minima of |G|, Newton refinement
with central differences, an independent verification pass, and group-level
deduplication of the resulting points of the product variety.

Verification never reuses the solver arithmetic: residuals are recomputed
with mpmath at doubled precision, and each solution must carry winding
number >= 1 on a small circle, so spurious minima and pseudo-roots are
rejected rather than reported.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .segre import SegrePolynomial, segre_products
from .variety import ProductVariety
from .weierstrass import ContourError, ProductEvaluator, _winding


class UncertifiedError(RuntimeError):
    """The solver was asked to run without a nonzero certificate."""


@dataclass(frozen=True)
class SolverConfig:
    seed: int = 0
    grid: int = 200
    budget_cells: int = 64
    target_count: int = 30
    coarse_threshold: float = 0.5
    solve_tol: float = 1e-10
    dedup_tol: float = 1e-6
    newton_steps: int = 50
    seeds_per_cell: int = 64

    def replace(self, **kw) -> SolverConfig:
        from dataclasses import replace as _r

        return _r(self, **kw)


@dataclass
class SolutionPoint:
    l: complex
    z: tuple[complex, ...]
    residual: float
    verified_residual: float
    winding: int
    jacobian_rank: int
    cell: int


@dataclass
class FailureRecord:
    l: complex
    cell: int
    reason: str


@dataclass
class SolveReport:
    solutions: list[SolutionPoint] = field(default_factory=list)
    failures: list[FailureRecord] = field(default_factory=list)
    cells_scanned: int = 0
    cells_with_solutions: set = field(default_factory=set)
    seeds_refined: int = 0
    budget_exhausted: bool = False
    target_reached: bool = False
    defect: bool = False
    timings: dict = field(default_factory=dict)


def spiral_cells():
    """Deterministic walk of Z^2 outward from the origin."""
    yield (0, 0)
    r = 1
    while True:
        for q in range(-r + 1, r + 1):
            yield (r, q)
        for p in range(r - 1, -r - 1, -1):
            yield (p, r)
        for q in range(r - 1, -r - 1, -1):
            yield (-r, q)
        for p in range(-r + 1, r + 1):
            yield (p, -r)
        r += 1


def thread_count() -> int:
    env = os.environ.get("EAC_THREADS", "").strip()
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return min(4, os.cpu_count() or 1)


class PulledBackSystem:
    """G(l) = F(exp(l v)) for a one-dimensional parameter subspace."""

    def __init__(self, F: SegrePolynomial, direction: tuple[complex, ...],
                 A: ProductVariety, pe: ProductEvaluator | None = None):
        if A.g not in (1, 2):
            raise ValueError("the solver handles one or two curve factors")
        self.F = F
        self.A = A
        self.v = tuple(complex(c) for c in direction)
        if all(c == 0 for c in self.v):
            raise ValueError("zero direction vector")
        self.pe = pe or ProductEvaluator(A)
        self.anchor = next(j for j, c in enumerate(self.v) if c != 0)

    def eval_grid(self, l: np.ndarray) -> np.ndarray:
        """|G| on an array of parameter values, inf at pole hits."""
        vals = self.eval_grid_complex(l)
        out = np.abs(vals)
        out[~np.isfinite(out)] = np.inf
        return out

    def eval_grid_complex(self, l: np.ndarray) -> np.ndarray:
        l = np.asarray(l, dtype=complex)
        if self.A.g == 1:
            z1 = l * self.v[0]
            p1 = self.pe.evals[0].wp_grid(z1)
            q1 = self.pe.evals[0].wp_prime_grid(z1)
            stack = [np.ones_like(p1), p1, q1]
        else:
            z1 = l * self.v[0]
            z2 = l * self.v[1]
            p1 = self.pe.evals[0].wp_grid(z1)
            q1 = self.pe.evals[0].wp_prime_grid(z1)
            p2 = self.pe.evals[1].wp_grid(z2)
            q2 = self.pe.evals[1].wp_prime_grid(z2)
            stack = segre_products(p1, q1, p2, q2)
        with np.errstate(invalid="ignore", over="ignore"):
            return np.asarray(self.F.eval_affine(stack), dtype=complex)

    def eval_one(self, l: complex) -> complex:
        return complex(self.eval_grid_complex(np.array([l], dtype=complex))[0])

    def z_of(self, l: complex) -> tuple[complex, ...]:
        return tuple(l * c for c in self.v)

    def pole_distance(self, l: complex) -> float:
        """Distance from exp(l v) to the nearest pole across the factors."""
        dists = []
        for zj, ev in zip(self.z_of(l), self.pe.evals):
            dists.append(ev.dist_to_lattice(zj))
        return min(dists)

    def cell_box(self, p: int, q: int, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Map unit-box grid coordinates into cell (p, q) of the l-plane."""
        tau = self.pe.evals[self.anchor].tau
        va = self.v[self.anchor]
        return ((p + a) + (q + b) * tau) / va


def coarse_scan(system: PulledBackSystem, p: int, q: int,
                cfg: SolverConfig) -> list[tuple[complex, float]]:
    """Local minima of |G| below the coarse threshold on one cell grid."""
    n = cfg.grid
    a = (np.arange(n) + 0.5) / n
    b = (np.arange(n) + 0.5) / n
    aa, bb = np.meshgrid(a, b, indexing="ij")
    grid = system.cell_box(p, q, aa, bb)
    vals = system.eval_grid(grid.ravel()).reshape(n, n)
    padded = np.pad(vals, 1, constant_values=np.inf)
    neigh = np.minimum.reduce([
        padded[i:i + n, j:j + n]
        for i in range(3) for j in range(3) if not (i == 1 and j == 1)
    ])
    mask = (vals < cfg.coarse_threshold) & (vals <= neigh) & np.isfinite(vals)
    idx = np.argwhere(mask)
    seeds = [(complex(grid[i, j]), float(vals[i, j])) for i, j in idx]
    seeds.sort(key=lambda s: s[1])
    return seeds[:cfg.seeds_per_cell]


def newton_refine(system: PulledBackSystem, seed: complex, cfg: SolverConfig,
                  fd_step: float = 1e-7):
    """Complex Newton iteration from a seed. Returns (l, residual) or a reason."""
    l = complex(seed)
    tau = system.pe.evals[system.anchor].tau
    diam = (1.0 + abs(tau)) / abs(system.v[system.anchor])
    max_move = 3.0 * max(diam, 1.0)
    for _ in range(cfg.newton_steps):
        if system.pole_distance(l) < 1e-9:
            return None, "landed on a pole"
        g = system.eval_one(l)
        if not np.isfinite(g.real) or not np.isfinite(g.imag):
            return None, "non-finite value"
        if abs(g) < cfg.solve_tol:
            return l, abs(g)
        batch = np.array([l + fd_step, l - fd_step], dtype=complex)
        gp, gm = system.eval_grid_complex(batch)
        deriv = (gp - gm) / (2.0 * fd_step)
        if not np.isfinite(deriv.real) or abs(deriv) < 1e-14:
            return None, "singular derivative"
        step = g / deriv
        if abs(step) > 1.0:
            step = step / abs(step)
        l = l - step
        if abs(l - seed) > max_move:
            return None, "diverged from its cell"
    g = abs(system.eval_one(l))
    if g < cfg.solve_tol:
        return l, g
    return None, f"no convergence, residual {g:.2e}"


def _wp_mp(z, tau, nterms: int, mp):
    q = mp.exp(2j * mp.pi * tau)
    u = mp.exp(2j * mp.pi * z)
    s = mp.mpf(1) / 12 + u / (1 - u) ** 2
    qn = mp.mpc(1)
    for _ in range(nterms):
        qn *= q
        w = qn * u
        x = qn / u
        s += w / (1 - w) ** 2 + x / (1 - x) ** 2 - 2 * qn / (1 - qn) ** 2
    return (2j * mp.pi) ** 2 * s


def _wp_prime_mp(z, tau, nterms: int, mp):
    q = mp.exp(2j * mp.pi * tau)
    u = mp.exp(2j * mp.pi * z)
    s = u * (1 + u) / (1 - u) ** 3
    qn = mp.mpc(1)
    for _ in range(nterms):
        qn *= q
        w = qn * u
        x = qn / u
        s += w * (1 + w) / (1 - w) ** 3 - x * (1 + x) / (1 - x) ** 3
    return (2j * mp.pi) ** 3 * s


def verify_solution(system: PulledBackSystem, l: complex, cfg: SolverConfig,
                    winding_radius: float = 1e-3) -> tuple[bool, float, int, str]:
    """Independent acceptance test for a refined point.

    Re-evaluates the residual with mpmath at doubled working precision and
    requires a positive winding of G on a small circle around l. Returns
    (accepted, verified residual, winding, reason).
    """
    from mpmath import mp

    old_dps = mp.dps
    try:
        mp.dps = 30
        zs = []
        for zj, ev in zip(system.z_of(l), system.pe.evals):
            zr = ev.reduce(zj)
            zs.append(mp.mpc(zr.real, zr.imag))
        vals = []
        for zj, ev in zip(zs, system.pe.evals):
            tau = mp.mpc(ev.tau.real, ev.tau.imag)
            nt = ev.nterms + 8
            vals.append((_wp_mp(zj, tau, nt, mp), _wp_prime_mp(zj, tau, nt, mp)))
        if system.A.g == 1:
            stack = [mp.mpc(1), vals[0][0], vals[0][1]]
        else:
            (p1, q1), (p2, q2) = vals
            stack = [mp.mpc(1), p2, q2, p1, p1 * p2, p1 * q2, q1, q1 * p2, q1 * q2]
        total = mp.mpc(0)
        for expo, coeff in system.F.monomials:
            term = mp.mpc(coeff.real, coeff.imag)
            for e, zi in zip(expo, stack):
                for _ in range(e):
                    term *= zi
            total += term
        vres = float(abs(total))
    finally:
        mp.dps = old_dps
    if vres > 10.0 * cfg.solve_tol:
        return False, vres, 0, "doubled-precision residual too large"
    radius = winding_radius
    for _ in range(4):
        circle = l + radius * np.exp(
            2j * math.pi * np.linspace(0.0, 1.0, 400, endpoint=False))
        if min(system.pole_distance(c) for c in circle[::40]) < 1e-6:
            radius *= 0.5
            continue
        try:
            w = _winding(system.eval_grid_complex(circle), tol=1e-2)
        except ContourError:
            radius *= 0.5
            continue
        if w >= 1:
            return True, vres, w, ""
        return False, vres, w, "winding number zero"
    return False, vres, 0, "no clean winding circle"


def harvest_density(system: PulledBackSystem, cfg: SolverConfig,
                    certified: bool = False,
                    jacobian_cb=None) -> SolveReport:
    """Scan cells in spiral order until the target count or the cell budget.

    Requires certified=True: running without a nonzero certificate is a
    precondition violation, not a soft warning. Deduplication is by group
    distance on the product variety at dedup_tol. jacobian_cb, when given,
    maps an accepted parameter to a recorded rank.
    """
    if not certified:
        raise UncertifiedError(
            "harvest requires a certified instance (nonzero certificate)")
    report = SolveReport()
    t0 = time.perf_counter()
    cells = []
    walker = spiral_cells()
    for _ in range(cfg.budget_cells):
        cells.append(next(walker))
    workers = thread_count()
    t_scan = 0.0

    def scan(cell):
        p, q = cell
        return coarse_scan(system, p, q, cfg)

    batch = max(1, workers)
    i = 0
    while i < len(cells):
        chunk = cells[i:i + batch]
        ts = time.perf_counter()
        if workers > 1 and len(chunk) > 1:
            with ThreadPoolExecutor(max_workers=workers) as ex:
                seed_lists = list(ex.map(scan, chunk))
        else:
            seed_lists = [scan(c) for c in chunk]
        t_scan += time.perf_counter() - ts
        for offset, (cell, seeds) in enumerate(zip(chunk, seed_lists)):
            cell_index = i + offset
            report.cells_scanned += 1
            for seed, _ in seeds:
                if report.target_reached:
                    break
                report.seeds_refined += 1
                l, res = newton_refine(system, seed, cfg)
                if l is None:
                    report.failures.append(FailureRecord(complex(seed), cell_index, res))
                    continue
                z = system.z_of(l)
                zred = system.A.reduce_point(z)
                if any(system.A.torus_distance(zred, s.z) < cfg.dedup_tol
                       for s in report.solutions):
                    continue
                ok, vres, wind, reason = verify_solution(system, l, cfg)
                if not ok:
                    report.failures.append(FailureRecord(l, cell_index, reason))
                    continue
                rank = jacobian_cb(l) if jacobian_cb is not None else -1
                report.solutions.append(SolutionPoint(
                    l=complex(l), z=tuple(complex(x) for x in zred),
                    residual=float(res), verified_residual=float(vres),
                    winding=int(wind), jacobian_rank=int(rank), cell=cell_index))
                report.cells_with_solutions.add(cell_index)
                if len(report.solutions) >= cfg.target_count:
                    report.target_reached = True
            if report.target_reached:
                break
        if report.target_reached:
            break
        i += batch
    report.budget_exhausted = not report.target_reached
    report.defect = certified and not report.solutions and report.budget_exhausted
    report.timings = {"total_s": time.perf_counter() - t0, "scan_s": t_scan}
    return report
