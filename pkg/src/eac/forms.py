"""Exterior algebra on the lattice chart and the intersection certificate.

Forms live on R^(2g) with the coordinate covectors ordered
(da_1, db_1, ..., da_g, db_g), indexed 1..2g. Coefficients are exact
(Fraction or MultiQuadElem) whenever the inputs are exact and float
otherwise; mixing an exact coefficient with a float demotes to float. The
lattice chart gives the real torus covolume 1, so integrating a top form
over the torus just reads off the coefficient of e_(1..2g).

The certificate for a pair (L, W) wedges the cycle class of W with the
rational volume form of the hull T of L and a complementary form built from
the realified complex equations of L. A nonzero value is the homological
non-vanishing that licenses the intersection solver.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .exactlinalg import rank_exact
from .hull import HullResult, rational_hull
from .multiquad import ComplexMQ, MultiQuadElem, render_mq
from .variety import ExactSubspace, ProductVariety


class DegreeMismatch(ValueError):
    pass


class CertificateError(ValueError):
    pass


def _scal_is_zero(x) -> bool:
    if isinstance(x, MultiQuadElem):
        return x.is_zero()
    return x == 0


def _scal_add(x, y):
    if isinstance(x, float) or isinstance(y, float):
        return _as_float(x) + _as_float(y)
    return x + y


def _scal_mul(x, y):
    if isinstance(x, float) or isinstance(y, float):
        return _as_float(x) * _as_float(y)
    return x * y


def _as_float(x) -> float:
    if isinstance(x, MultiQuadElem):
        return float(x)
    return float(x)


def _coerce_scalar(x):
    if isinstance(x, (MultiQuadElem, float)):
        return x
    if isinstance(x, Rational):
        return Fraction(x)
    raise TypeError(f"unsupported form coefficient {type(x).__name__}")


def _perm_sign_merge(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, tuple[int, ...]] | None:
    """Sign and sorted key for concatenating two sorted index tuples.

    Returns None when the tuples share an index (the wedge dies). The sign is
    the parity of the number of transpositions sorting a + b.
    """
    if set(a) & set(b):
        return None
    merged = []
    sign = 1
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] < b[j]:
            merged.append(a[i])
            i += 1
        else:
            merged.append(b[j])
            # b[j] hops over the remaining entries of a
            if (len(a) - i) % 2 == 1:
                sign = -sign
            j += 1
    merged.extend(a[i:])
    merged.extend(b[j:])
    return sign, tuple(merged)


class ExteriorForm:
    """Alternating form of fixed degree with a sparse coefficient table."""

    __slots__ = ("degree", "ambient", "coeffs")

    def __init__(self, degree: int, ambient: int, coeffs: dict | None = None):
        if not 0 <= degree <= ambient:
            raise DegreeMismatch(f"degree {degree} outside [0, {ambient}]")
        self.degree = degree
        self.ambient = ambient
        table: dict[tuple[int, ...], object] = {}
        for key, val in (coeffs or {}).items():
            key = tuple(key)
            if len(key) != degree:
                raise DegreeMismatch(f"key {key} has wrong length for degree {degree}")
            if list(key) != sorted(set(key)):
                raise ValueError(f"key {key} must be strictly increasing")
            if key and (key[0] < 1 or key[-1] > ambient):
                raise ValueError(f"key {key} outside 1..{ambient}")
            val = _coerce_scalar(val)
            if not _scal_is_zero(val):
                table[key] = val
        self.coeffs = table

    @classmethod
    def zero(cls, degree: int, ambient: int) -> ExteriorForm:
        return cls(degree, ambient, {})

    @classmethod
    def constant(cls, value, ambient: int) -> ExteriorForm:
        return cls(0, ambient, {(): value})

    @classmethod
    def covector(cls, coeffs_vector, ambient: int | None = None) -> ExteriorForm:
        vec = list(coeffs_vector)
        n = ambient if ambient is not None else len(vec)
        return cls(1, n, {(i + 1,): c for i, c in enumerate(vec)})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: ExteriorForm) -> ExteriorForm:
        if self.degree != other.degree or self.ambient != other.ambient:
            raise DegreeMismatch("cannot add forms of different degree or ambient")
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            if k in out:
                s = _scal_add(out[k], v)
                if _scal_is_zero(s):
                    del out[k]
                else:
                    out[k] = s
            else:
                out[k] = v
        f = ExteriorForm(self.degree, self.ambient)
        f.coeffs = out
        return f

    def __neg__(self) -> ExteriorForm:
        return self.scale(-1)

    def __sub__(self, other: ExteriorForm) -> ExteriorForm:
        return self + other.scale(-1)

    def scale(self, s) -> ExteriorForm:
        s = _coerce_scalar(s)
        out = {}
        for k, v in self.coeffs.items():
            p = _scal_mul(s, v)
            if not _scal_is_zero(p):
                out[k] = p
        f = ExteriorForm(self.degree, self.ambient)
        f.coeffs = out
        return f

    def wedge(self, other: ExteriorForm) -> ExteriorForm:
        if self.ambient != other.ambient:
            raise DegreeMismatch("ambient dimensions differ")
        deg = self.degree + other.degree
        if deg > self.ambient:
            raise DegreeMismatch(
                f"wedge degree {deg} exceeds ambient {self.ambient}")
        out: dict[tuple[int, ...], object] = {}
        for ka, va in self.coeffs.items():
            for kb, vb in other.coeffs.items():
                sm = _perm_sign_merge(ka, kb)
                if sm is None:
                    continue
                sign, key = sm
                term = _scal_mul(va, vb)
                if sign < 0:
                    term = _scal_mul(-1, term)
                if key in out:
                    s = _scal_add(out[key], term)
                    if _scal_is_zero(s):
                        del out[key]
                    else:
                        out[key] = s
                elif not _scal_is_zero(term):
                    out[key] = term
        f = ExteriorForm(deg, self.ambient)
        f.coeffs = out
        return f

    def leading(self):
        """Lexicographically first key and its coefficient, or None."""
        if not self.coeffs:
            return None
        k = min(self.coeffs)
        return k, self.coeffs[k]

    def normalized(self) -> ExteriorForm:
        """Scale so the lexicographically leading coefficient is 1."""
        lead = self.leading()
        if lead is None:
            return self
        _, c = lead
        if isinstance(c, float):
            return self.scale(1.0 / c)
        if isinstance(c, MultiQuadElem):
            return self.scale(c.inv())
        return self.scale(Fraction(1) / Fraction(c))

    def proportional_to(self, other: ExteriorForm, tol: float = 0.0):
        """Ratio self = r * other if proportional, else None. tol for floats."""
        if other.is_zero():
            return None if not self.is_zero() else 0
        lead = other.leading()
        k, c = lead
        if k not in self.coeffs:
            return None
        if isinstance(c, float) or any(isinstance(v, float) for v in self.coeffs.values()):
            r = _as_float(self.coeffs[k]) / _as_float(c)
            diff = self - other.scale(r)
            scale = max(abs(_as_float(v)) for v in other.coeffs.values())
            bound = tol * max(1.0, abs(r) * scale)
            ok = all(abs(_as_float(v)) <= bound for v in diff.coeffs.values())
            return r if ok else None
        c_inv = c.inv() if isinstance(c, MultiQuadElem) else Fraction(1) / Fraction(c)
        r = _scal_mul(self.coeffs[k], c_inv)
        return r if (self - other.scale(r)).is_zero() else None

    def as_float(self) -> ExteriorForm:
        f = ExteriorForm(self.degree, self.ambient)
        f.coeffs = {k: _as_float(v) for k, v in self.coeffs.items()}
        return f

    def __eq__(self, other):
        if not isinstance(other, ExteriorForm):
            return NotImplemented
        return (self.degree == other.degree and self.ambient == other.ambient
                and self.coeffs == other.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return f"ExteriorForm(deg={self.degree}, 0)"
        parts = []
        for k in sorted(self.coeffs):
            v = self.coeffs[k]
            vs = render_mq(v) if isinstance(v, MultiQuadElem) else str(v)
            parts.append(f"({vs})e{''.join(map(str, k))}" if k else f"({vs})")
        return f"ExteriorForm(deg={self.degree}, " + " + ".join(parts) + ")"


def integrate_top(form: ExteriorForm, g: int):
    """Integral over the unit-covolume torus: the coefficient of e_(1..2g)."""
    if form.degree != 2 * g or form.ambient != 2 * g:
        raise DegreeMismatch(
            f"integrand must be a top form of degree {2 * g}, got degree {form.degree}")
    top = tuple(range(1, 2 * g + 1))
    return form.coeffs.get(top, Fraction(0))


def annihilator_covectors(T: ExactSubspace) -> list[list[MultiQuadElem]]:
    """Echelon basis of the covectors vanishing on a real subspace."""
    if T.kind != "real":
        raise ValueError("annihilator_covectors needs a real subspace")
    from .exactlinalg import right_nullspace, rref

    rows = [list(v) for v in T.basis]
    null = right_nullspace(rows, ncols=T.ambient)
    if not null:
        return []
    red, _ = rref(null)
    return [list(r) for r in red]


def form_of_subspace(T: ExactSubspace) -> ExteriorForm:
    """Normalized decomposable form cutting out a real subspace.

    Wedge of an echelon basis of T's annihilator, scaled so the
    lexicographically leading coefficient is 1. The full space yields the
    constant 0-form 1.
    """
    eqs = annihilator_covectors(T)
    form = ExteriorForm.constant(Fraction(1), T.ambient)
    for e in eqs:
        form = form.wedge(ExteriorForm.covector(e, T.ambient))
    if form.is_zero():
        raise AssertionError("annihilator wedge collapsed; basis was dependent")
    return form.normalized()


def realify_covector(lam: list[ComplexMQ], A: ProductVariety
                     ) -> tuple[list[MultiQuadElem], list[MultiQuadElem]]:
    """Real and imaginary parts of z -> sum lam_j z_j in the lattice chart.

    With z_j = a_j + b_j tau_j, the linear functional splits as
      Re: sum Re(lam_j) a_j + Re(lam_j tau_j) b_j,
      Im: sum Im(lam_j) a_j + Im(lam_j tau_j) b_j.
    """
    if len(lam) != A.g:
        raise ValueError("covector length does not match the variety")
    re_row: list[MultiQuadElem] = []
    im_row: list[MultiQuadElem] = []
    for lj, f in zip(lam, A.factors):
        lt = lj * f.tau_exact()
        re_row.extend((lj.re, lt.re))
        im_row.extend((lj.im, lt.im))
    return re_row, im_row


def holomorphic_form_realized(L: ExactSubspace, A: ProductVariety) -> ExteriorForm:
    """Realified volume form of the complex equations of L, lex-normalized.

    For L of complex codimension d this is the normalized wedge
    R_1 ^ ... ^ R_d ^ I_1 ^ ... ^ I_d of the realified equation covectors. It
    is proportional to the realification of the holomorphic conormal volume
    of L, so its vanishing pattern against cycle classes is basis-free.
    """
    if L.kind != "complex":
        raise ValueError("holomorphic_form_realized needs a complex subspace")
    lams = L.complex_equations()
    n = 2 * A.g
    form = ExteriorForm.constant(Fraction(1), n)
    res, ims = [], []
    for lam in lams:
        r, i = realify_covector(lam, A)
        res.append(r)
        ims.append(i)
    for row in res + ims:
        form = form.wedge(ExteriorForm.covector(row, n))
    if form.is_zero() and lams:
        raise AssertionError("realified equation covectors were dependent")
    return form.normalized()


@dataclass(frozen=True)
class HomologyClass:
    """Cycle class in fixed degree, coefficients on coordinate multi-indices."""

    degree: int
    ambient: int
    coeffs: tuple[tuple[tuple[int, ...], Fraction], ...]

    @classmethod
    def from_dict(cls, degree: int, ambient: int, table: dict) -> HomologyClass:
        items = []
        for k, v in sorted(table.items()):
            v = Fraction(v)
            if v != 0:
                items.append((tuple(k), v))
        return cls(degree, ambient, tuple(items))

    def pair_with_form(self, form: ExteriorForm):
        """Integrate a form of the same degree over this cycle."""
        if form.degree != self.degree or form.ambient != self.ambient:
            raise DegreeMismatch("cycle and form degrees differ")
        total = Fraction(0)
        for k, c in self.coeffs:
            if k in form.coeffs:
                total = _scal_add(total, _scal_mul(c, form.coeffs[k]))
        return total

    def dual_form(self) -> ExteriorForm:
        """Form eta with integral(alpha ^ eta) = pairing(self, alpha) for all alpha."""
        n = self.ambient
        table: dict[tuple[int, ...], Fraction] = {}
        for k, c in self.coeffs:
            comp = tuple(i for i in range(1, n + 1) if i not in k)
            sm = _perm_sign_merge(k, comp)
            sign, _ = sm
            table[comp] = table.get(comp, Fraction(0)) + c * sign
        return ExteriorForm(n - self.degree, n, table)


class TrivialClassError(ValueError):
    pass


def class_of_hypersurface(m: int, n: int, g: int = 2) -> HomologyClass:
    """Cycle class of a bidegree-(m, n) hypersurface in a product of 2 curves.

    m counts intersections with a horizontal fiber E_1 x {pt} and n with a
    vertical fiber {pt} x E_2, so the class is m [{pt} x E_2] + n [E_1 x {pt}]
    with the vertical fiber spanning the (a_2, b_2) directions.
    """
    if g != 2:
        raise ValueError("hypersurface classes are implemented for two factors")
    if m < 0 or n < 0 or int(m) != m or int(n) != n:
        raise ValueError("bidegree entries must be nonnegative integers")
    if m == 0 and n == 0:
        raise TrivialClassError("bidegree (0, 0) names the trivial class")
    return HomologyClass.from_dict(2, 4, {(3, 4): m, (1, 2): n})


def hypersurface_form(m: int, n: int) -> ExteriorForm:
    """Dual 2-form of a bidegree-(m, n) hypersurface class: m e12 + n e34."""
    return class_of_hypersurface(m, n).dual_form()


@dataclass(frozen=True)
class Certificate:
    """Outcome of the non-vanishing check for a pair (L, W).

    value is the pairing of the W class against omega_T ^ omega_T', with
    omega_T the wedge of the primitive integer equations of the hull T and
    omega_T' the wedge of realified equations of L that stay independent
    modulo T. cross_value pairs against the full realified equation volume of
    L instead; the two must vanish together.
    """

    value: object
    value_str: str
    value_float: float
    cross_value: object
    cross_float: float
    omega_T: ExteriorForm
    omega_T_prime: ExteriorForm
    eta_W: ExteriorForm
    hull: HullResult
    assumptions: tuple[str, ...]

    @property
    def nonzero(self) -> bool:
        if isinstance(self.value, float):
            return abs(self.value) > 1e-12
        return not _scal_is_zero(self.value)


def residual_covectors(L: ExactSubspace, hull: HullResult, A: ProductVariety
                       ) -> list[list[MultiQuadElem]]:
    """Realified equations of L that are independent modulo the hull equations.

    Scans R_1..R_d then I_1..I_d and keeps a covector iff it enlarges the
    span of the hull equations plus those already kept. Exactly 2d - codim(T)
    survive; anything else means the hull disagreed with the equations.
    """
    lams = L.complex_equations()
    d = len(lams)
    base = [[MultiQuadElem.from_rational(c) for c in e] for e in hull.equations]
    need = 2 * d - len(base)
    rows_all: list[list[MultiQuadElem]] = []
    for lam in lams:
        r, _ = realify_covector(lam, A)
        rows_all.append(r)
    for lam in lams:
        _, i = realify_covector(lam, A)
        rows_all.append(i)
    kept: list[list[MultiQuadElem]] = []
    span = list(base)
    r0 = rank_exact(span)
    for row in rows_all:
        if rank_exact(span + [row]) > r0:
            kept.append(row)
            span.append(row)
            r0 += 1
    if len(kept) != need:
        raise CertificateError(
            f"complementary equations: expected {need}, found {len(kept)}")
    return kept


def eac_certificate(eta_W: ExteriorForm, L: ExactSubspace, A: ProductVariety,
                    hull: HullResult | None = None) -> Certificate:
    """Pair the W class form against omega_T ^ omega_T' on the torus.

    eta_W must have degree 2 dim_C(L) so the product is a top form. The hull
    is recomputed from L unless supplied, in which case it is checked. Exact
    inputs give an exact multiquadratic value and its canonical rendering.
    """
    g = A.g
    n = 2 * g
    if L.kind != "complex" or L.ambient != g:
        raise CertificateError("certificate needs a complex subspace of C^g")
    if hull is None:
        hull = rational_hull(L, A)
    else:
        check = rational_hull(L, A)
        if not (check.T.same_as(hull.T) and check.equations == hull.equations):
            raise CertificateError("supplied hull disagrees with rational_hull(L)")
    d = g - L.dim
    if eta_W.degree != 2 * L.dim:
        raise DegreeMismatch(
            f"class form degree {eta_W.degree} does not complement codim {d}")
    omega_T = ExteriorForm.constant(Fraction(1), n)
    for e in hull.equations:
        omega_T = omega_T.wedge(ExteriorForm.covector(list(e), n))
    kept = residual_covectors(L, hull, A)
    omega_Tp = ExteriorForm.constant(Fraction(1), n)
    for row in kept:
        omega_Tp = omega_Tp.wedge(ExteriorForm.covector(row, n))
    # the combined system must cut out exactly the realification of L
    combined = [[MultiQuadElem.from_rational(c) for c in e] for e in hull.equations]
    combined += kept
    if rank_exact(combined) != 2 * d:
        raise CertificateError("hull and complementary equations are degenerate")
    value = integrate_top(eta_W.wedge(omega_T).wedge(omega_Tp), g)
    cross_form = ExteriorForm.constant(Fraction(1), n)
    lams = L.complex_equations()
    res, ims = [], []
    for lam in lams:
        r, i = realify_covector(lam, A)
        res.append(r)
        ims.append(i)
    for row in res + ims:
        cross_form = cross_form.wedge(ExteriorForm.covector(row, n))
    cross = integrate_top(eta_W.wedge(cross_form), g)
    vz = _scal_is_zero(value) if not isinstance(value, float) else abs(value) < 1e-12
    cz = _scal_is_zero(cross) if not isinstance(cross, float) else abs(cross) < 1e-12
    if vz != cz:
        raise CertificateError(
            "certificate and realified-equation pairing disagree on vanishing")
    if isinstance(value, MultiQuadElem):
        vstr = render_mq(value)
    else:
        vstr = str(value)
    return Certificate(
        value=value,
        value_str=vstr,
        value_float=_as_float(value),
        cross_value=cross,
        cross_float=_as_float(cross),
        omega_T=omega_T,
        omega_T_prime=omega_Tp,
        eta_W=eta_W,
        hull=hull,
        assumptions=tuple(A.assumptions()),
    )
