"""Products of elliptic curves and exact subspaces of their tangent space.

Every curve factor is C / (Z + tau_j Z) with tau_j = p_j + i q_j, p_j
rational and q_j a positive multiquadratic number. The lattice chart writes
z_j = a_j + b_j tau_j and lays the coordinates out as

    (a_1, b_1, a_2, b_2, ..., a_g, b_g)

which identifies the period lattice of the product with Z^(2g) and gives the
real torus covolume 1 in these coordinates. All subspace computations happen
either in the complex chart (vectors in C^g with ComplexMQ entries) or in
this real chart (vectors in R^(2g) with MultiQuadElem entries).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exactlinalg import rank_exact, rref
from .multiquad import ComplexMQ, MultiQuadElem


class LatticeCoordinateError(ValueError):
    pass


@dataclass(frozen=True)
class EllipticFactor:
    """One curve factor C / (Z + tau Z), tau = tau_re + i * tau_im."""

    tau_re: Fraction
    tau_im: MultiQuadElem

    def __post_init__(self):
        object.__setattr__(self, "tau_re", Fraction(self.tau_re))
        if not isinstance(self.tau_im, MultiQuadElem):
            object.__setattr__(self, "tau_im", MultiQuadElem.from_rational(self.tau_im))
        if float(self.tau_im) <= 0:
            raise ValueError("tau must lie in the upper half plane")

    @property
    def tau(self) -> complex:
        return complex(float(self.tau_re), float(self.tau_im))

    def tau_exact(self) -> ComplexMQ:
        return ComplexMQ(MultiQuadElem.from_rational(self.tau_re), self.tau_im)


@dataclass(frozen=True)
class ProductVariety:
    """A product of elliptic curves with its standing genericity assertions.

    pairwise_nonisogenous and no_cm are recorded assertions about the chosen
    periods, not theorems this code proves; every verdict and certificate
    downstream carries them as consumed assumptions.
    """

    factors: tuple[EllipticFactor, ...]
    pairwise_nonisogenous: bool = True
    no_cm: bool = True

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise ValueError("need at least one curve factor")

    @property
    def g(self) -> int:
        return len(self.factors)

    @property
    def taus(self) -> tuple[complex, ...]:
        return tuple(f.tau for f in self.factors)

    def assumptions(self) -> list[str]:
        out = []
        if self.pairwise_nonisogenous and self.g > 1:
            out.append("pairwise-nonisogenous factors (asserted)")
        if self.no_cm:
            out.append("no complex multiplication (asserted)")
        return out

    # numeric chart

    def to_lattice_coords(self, z: tuple[complex, ...]) -> list[float]:
        """C^g point -> (a_1, b_1, ..., a_g, b_g) with z_j = a_j + b_j tau_j."""
        if len(z) != self.g:
            raise LatticeCoordinateError(f"expected {self.g} complex coordinates")
        out = []
        for zj, f in zip(z, self.factors):
            zj = complex(zj)
            b = zj.imag / float(f.tau_im)
            a = zj.real - b * float(f.tau_re)
            out.extend((a, b))
        return out

    def from_lattice_coords(self, v) -> tuple[complex, ...]:
        if len(v) != 2 * self.g:
            raise LatticeCoordinateError(f"expected {2 * self.g} real coordinates")
        return tuple(v[2 * j] + v[2 * j + 1] * f.tau
                     for j, f in enumerate(self.factors))

    # exact chart

    def to_lattice_exact(self, z: list[ComplexMQ]) -> list[MultiQuadElem]:
        """Exact version: b_j = Im z_j / q_j, a_j = Re z_j - b_j p_j."""
        if len(z) != self.g:
            raise LatticeCoordinateError(f"expected {self.g} complex coordinates")
        out: list[MultiQuadElem] = []
        for zj, f in zip(z, self.factors):
            b = zj.im / f.tau_im
            a = zj.re - b * f.tau_re
            out.extend((a, b))
        return out

    def from_lattice_exact(self, v: list[MultiQuadElem]) -> list[ComplexMQ]:
        if len(v) != 2 * self.g:
            raise LatticeCoordinateError(f"expected {2 * self.g} real coordinates")
        return [ComplexMQ(v[2 * j] + v[2 * j + 1] * f.tau_re, v[2 * j + 1] * f.tau_im)
                for j, f in enumerate(self.factors)]

    # torus geometry

    def reduce_point(self, z: tuple[complex, ...]) -> tuple[complex, ...]:
        """Per-factor representative with lattice coordinates in [-1/2, 1/2)."""
        v = self.to_lattice_coords(z)
        w = [x - round(x) for x in v]
        return self.from_lattice_coords(w)

    def torus_distance(self, z: tuple[complex, ...], w: tuple[complex, ...]) -> float:
        """Euclidean distance on C^g between nearest lattice translates."""
        diff = tuple(a - b for a, b in zip(z, w))
        red = self.reduce_point(diff)
        return sum(abs(d) ** 2 for d in red) ** 0.5


@dataclass(frozen=True)
class ExactSubspace:
    """A linear subspace with an exact basis, either complex or real.

    kind "complex": basis vectors live in C^g with ComplexMQ entries.
    kind "real": basis vectors live in R^(2g), the lattice chart, with
    MultiQuadElem entries. The stored basis is the reduced echelon basis of
    the row space, so equal subspaces compare equal.
    """

    kind: str
    basis: tuple[tuple, ...]
    ambient: int

    def __post_init__(self):
        if self.kind not in ("complex", "real"):
            raise ValueError(f"unknown subspace kind {self.kind!r}")
        rows = [list(r) for r in self.basis]
        for r in rows:
            if len(r) != self.ambient:
                raise ValueError("basis vector length does not match ambient dimension")
        coerce = self._coerce_complex if self.kind == "complex" else self._coerce_real
        rows = [[coerce(x) for x in r] for r in rows]
        red, _ = rref(rows)
        if len(red) != len(rows):
            raise ValueError("basis vectors are linearly dependent")
        object.__setattr__(self, "basis", tuple(tuple(r) for r in red))

    @staticmethod
    def _coerce_complex(x) -> ComplexMQ:
        if isinstance(x, ComplexMQ):
            return x
        if isinstance(x, MultiQuadElem):
            return ComplexMQ(x)
        return ComplexMQ(Fraction(x))

    @staticmethod
    def _coerce_real(x) -> MultiQuadElem:
        if isinstance(x, MultiQuadElem):
            return x
        if isinstance(x, ComplexMQ):
            if not x.im.is_zero():
                raise ValueError("real subspace entry has an imaginary part")
            return x.re
        return MultiQuadElem.from_rational(Fraction(x))

    @classmethod
    def complex_span(cls, vectors, g: int) -> ExactSubspace:
        return cls("complex", tuple(tuple(v) for v in vectors), g)

    @classmethod
    def real_span(cls, vectors, two_g: int) -> ExactSubspace:
        return cls("real", tuple(tuple(v) for v in vectors), two_g)

    @classmethod
    def full_complex(cls, g: int) -> ExactSubspace:
        rows = [[ComplexMQ(1 if i == j else 0) for j in range(g)] for i in range(g)]
        return cls("complex", tuple(tuple(r) for r in rows), g)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains_vector(self, v) -> bool:
        rows = [list(r) for r in self.basis]
        return rank_exact(rows + [list(v)]) == len(rows)

    def contains(self, other: ExactSubspace) -> bool:
        if self.kind != other.kind or self.ambient != other.ambient:
            raise ValueError("subspace kinds or ambients differ")
        rows = [list(r) for r in self.basis]
        return rank_exact(rows + [list(r) for r in other.basis]) == len(rows)

    def same_as(self, other: ExactSubspace) -> bool:
        return self.dim == other.dim and self.contains(other)

    def realified(self, A: ProductVariety) -> ExactSubspace:
        """Complex subspace as a real one in the lattice chart (v and iv)."""
        if self.kind != "complex":
            raise ValueError("realified needs a complex subspace")
        if self.ambient != A.g:
            raise ValueError("subspace ambient does not match the variety")
        i = ComplexMQ(0, 1)
        rows = []
        for v in self.basis:
            rows.append(A.to_lattice_exact(list(v)))
            rows.append(A.to_lattice_exact([i * x for x in v]))
        if not rows:
            return ExactSubspace("real", (), 2 * A.g)
        red, _ = rref(rows)
        return ExactSubspace("real", tuple(tuple(r) for r in red), 2 * A.g)

    def complex_equations(self) -> list[list[ComplexMQ]]:
        """Echelon basis of the annihilator {lam : lam . v = 0 for v in basis}.

        Covectors are rows with leading coefficient 1, listed by pivot column.
        """
        if self.kind != "complex":
            raise ValueError("complex_equations needs a complex subspace")
        rows = [list(r) for r in self.basis]
        from .exactlinalg import right_nullspace

        null = right_nullspace(rows, ncols=self.ambient)
        if not null:
            return []
        red, _ = rref(null)
        return [list(r) for r in red]

    def project_deleting(self, coords: set[int]) -> int:
        """Rank of the basis after deleting the given 0-based coordinates."""
        keep = [j for j in range(self.ambient) if j not in coords]
        rows = [[r[j] for j in keep] for r in self.basis]
        rows = [r for r in rows if r]
        return rank_exact(rows)
