"""Segre coordinates for a product of two curves and polynomials in them.

The product embeds through the per-factor projective Weierstrass maps
[1 : wp : wp'] combined by the Segre product. Affine coordinates are ordered

    Z0 = 1,        Z1 = wp_2,        Z2 = wp_2',
    Z3 = wp_1,     Z4 = wp_1 wp_2,   Z5 = wp_1 wp_2',
    Z6 = wp_1',    Z7 = wp_1' wp_2,  Z8 = wp_1' wp_2'.

A hypersurface is the zero set of a linear-in-Z polynomial with complex
coefficients (monomials of total degree 1 in the projective chart cover the
cases of interest; higher products of Z's are accepted and evaluated
affinely). For a single curve the chart degenerates to [1 : wp : wp'].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SEGRE_DIM = {1: 3, 2: 9}


@dataclass(frozen=True)
class SegrePoint:
    """Affine Segre coordinates of a point, with per-factor pole flags."""

    wp: tuple[complex, ...]
    wp_prime: tuple[complex, ...]
    at_infinity: tuple[bool, ...]

    @property
    def g(self) -> int:
        return len(self.wp)

    @property
    def finite(self) -> bool:
        return not any(self.at_infinity)

    def coords(self) -> np.ndarray:
        """The affine coordinate vector; poles raise, callers check finite."""
        if not self.finite:
            raise ValueError("point sits at infinity in some factor")
        if self.g == 1:
            return np.array([1.0, self.wp[0], self.wp_prime[0]], dtype=complex)
        if self.g == 2:
            p1, p2 = self.wp
            q1, q2 = self.wp_prime
            return np.array([1.0, p2, q2, p1, p1 * p2, p1 * q2,
                             q1, q1 * p2, q1 * q2], dtype=complex)
        raise ValueError("Segre coordinates are implemented for one or two factors")


def segre_products(p1, q1, p2, q2):
    """Vectorized affine coordinate stack for two factors (arrays allowed)."""
    one = np.ones_like(p1)
    return [one, p2, q2, p1, p1 * p2, p1 * q2, q1, q1 * p2, q1 * q2]


@dataclass(frozen=True)
class SegrePolynomial:
    """Polynomial in the affine Segre coordinates with complex coefficients.

    monomials maps an exponent tuple (length 3 for one factor, 9 for two) to
    a complex coefficient. Linear monomials are the typical case; products
    are evaluated affinely.
    """

    g: int
    monomials: tuple[tuple[tuple[int, ...], complex], ...]

    @classmethod
    def from_dict(cls, g: int, table: dict) -> SegrePolynomial:
        dim = SEGRE_DIM.get(g)
        if dim is None:
            raise ValueError("Segre polynomials are implemented for one or two factors")
        items = []
        for expo, coeff in sorted(table.items()):
            expo = tuple(int(e) for e in expo)
            if len(expo) != dim:
                raise ValueError(f"exponent tuple {expo} must have length {dim}")
            if any(e < 0 for e in expo):
                raise ValueError("exponents must be nonnegative")
            coeff = complex(coeff)
            if coeff != 0:
                items.append((expo, coeff))
        if not items:
            raise ValueError("polynomial has no nonzero monomials")
        return cls(g, tuple(items))

    @classmethod
    def linear(cls, g: int, coeffs: dict[int, complex]) -> SegrePolynomial:
        """Build sum c_i Z_i from {index: coefficient}."""
        dim = SEGRE_DIM[g]
        table = {}
        for i, c in coeffs.items():
            if not 0 <= i < dim:
                raise ValueError(f"coordinate index {i} outside 0..{dim - 1}")
            e = [0] * dim
            e[i] = 1
            table[tuple(e)] = c
        return cls.from_dict(g, table)

    def eval_affine(self, z):
        """Evaluate on an affine coordinate vector or a stacked list of arrays."""
        total = None
        for expo, coeff in self.monomials:
            term = coeff
            for e, zi in zip(expo, z):
                if e == 1:
                    term = term * zi
                elif e > 1:
                    term = term * zi ** e
            total = term if total is None else total + term
        return total

    def eval_point(self, pt: SegrePoint) -> complex:
        return complex(self.eval_affine(pt.coords()))

    def max_wp_degree(self) -> tuple[int, int] | int:
        """Per-factor bound d with |F| growing like |wp|^(d/2)-ish near poles.

        Returns the weighted degree 2*j + 3*k per factor where j is the wp
        exponent and k the wp' exponent, maximized over monomials. Used only
        as an upper bound for fiber root counts.
        """
        if self.g == 1:
            best = 0
            for expo, _ in self.monomials:
                best = max(best, 2 * expo[1] + 3 * expo[2])
            return best
        best1 = best2 = 0
        # exponents of wp_1: Z3, Z4, Z5; wp_1': Z6, Z7, Z8
        # exponents of wp_2: Z1, Z4, Z7; wp_2': Z2, Z5, Z8
        for expo, _ in self.monomials:
            j1 = expo[3] + expo[4] + expo[5]
            k1 = expo[6] + expo[7] + expo[8]
            j2 = expo[1] + expo[4] + expo[7]
            k2 = expo[2] + expo[5] + expo[8]
            best1 = max(best1, 2 * j1 + 3 * k1)
            best2 = max(best2, 2 * j2 + 3 * k2)
        return best1, best2

    def to_table(self) -> dict[tuple[int, ...], complex]:
        return dict(self.monomials)
