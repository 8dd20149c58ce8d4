"""Exact operator calculus on the family x^(mu+1/2) Q(x^2) exp(-c|x|^2).

Everything here is symbolic: polynomials in the squared coordinates
carry Fraction coefficients, and the two first-order reductions

    T_i u = (1/x_i) du/dx_i
    S_i f = d^2 f/dx_i^2 - (4 mu_i^2 - 1) / (4 x_i^2) f

act exactly on the family.  S_i is applied through its conjugated form
x^(-mu_i-1/2) S_i x^(mu_i+1/2) = x_i^2 T_i^2 + 2 (mu_i + 1) T_i, which
never leaves the family.  Rational orders keep all results rational;
float orders degrade gracefully to float coefficients.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .bessel import MuVector
from .errors import DimensionMismatch, DomainError
from .multiindex import (
    MultiIndex,
    graded_key,
    mi_below,
    mi_binomial,
    mi_graded_enumerate,
    unit_index,
)

__all__ = [
    "EvenPolynomial",
    "GaussianPolynomial",
    "SymbolicHFunction",
    "OperatorPoly",
    "EvenRational",
    "HypothesisReport",
    "apply_T",
    "apply_Tk",
    "apply_S",
    "apply_Sk",
    "apply_L",
    "leibniz_Tk",
    "koh_zemanian_coeffs",
    "koh_zemanian_coeffs_nd",
    "kernel_basis",
    "check_hypothesis",
    "eval_symbolic",
]


def _coeff(v):
    """Coerce a coefficient: exact types become Fraction, floats stay."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, float):
        return v
    raise DomainError(f"unsupported coefficient type {type(v)!r}")


def _coeff_to_json(v):
    return str(v) if isinstance(v, Fraction) else float(v)


class EvenPolynomial:
    """Polynomial in squared coordinates: Q = sum_k q_k * s^k, s_i = x_i^2.

    Zero coefficients are never stored, so equality is structural.
    """

    __slots__ = ("dim", "_coeffs")

    def __init__(self, dim: int, coeffs=None):
        if dim < 1:
            raise DomainError(f"dimension must be >= 1, got {dim}")
        self.dim = dim
        clean: dict[MultiIndex, object] = {}
        for k, v in (coeffs or {}).items():
            k = MultiIndex(k)
            if k.dim != dim:
                raise DimensionMismatch(
                    f"term {tuple(k)} has dimension {k.dim}, expected {dim}"
                )
            c = _coeff(v)
            if c != 0:
                prev = clean.get(k)
                clean[k] = c if prev is None else prev + c
                if clean[k] == 0:
                    del clean[k]
        self._coeffs = clean

    @classmethod
    def zero(cls, dim: int) -> "EvenPolynomial":
        return cls(dim)

    @classmethod
    def constant(cls, dim: int, value) -> "EvenPolynomial":
        return cls(dim, {MultiIndex([0] * dim): value})

    @classmethod
    def monomial(cls, k, value=1) -> "EvenPolynomial":
        k = MultiIndex(k)
        return cls(k.dim, {k: value})

    def items(self):
        """Terms in graded-lex order."""
        return sorted(self._coeffs.items(), key=lambda kv: graded_key(kv[0]))

    def coefficient(self, k):
        return self._coeffs.get(MultiIndex(k), Fraction(0))

    @property
    def is_zero(self) -> bool:
        return not self._coeffs

    @property
    def degree(self) -> int:
        """Largest total order |k|; -1 for the zero polynomial."""
        return max((k.order for k in self._coeffs), default=-1)

    def constant_term(self):
        return self._coeffs.get(MultiIndex([0] * self.dim), Fraction(0))

    def _check_dim(self, other: "EvenPolynomial"):
        if self.dim != other.dim:
            raise DimensionMismatch(f"dimensions {self.dim} and {other.dim}")

    def __eq__(self, other):
        if not isinstance(other, EvenPolynomial):
            return NotImplemented
        return self.dim == other.dim and self._coeffs == other._coeffs

    def __hash__(self):
        return hash((self.dim, frozenset(self._coeffs.items())))

    def __add__(self, other):
        self._check_dim(other)
        out = dict(self._coeffs)
        for k, v in other._coeffs.items():
            out[k] = out.get(k, Fraction(0)) + v
        return EvenPolynomial(self.dim, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return EvenPolynomial(self.dim, {k: -v for k, v in self._coeffs.items()})

    def scale(self, factor) -> "EvenPolynomial":
        factor = _coeff(factor)
        return EvenPolynomial(
            self.dim, {k: v * factor for k, v in self._coeffs.items()}
        )

    def __mul__(self, other):
        if not isinstance(other, EvenPolynomial):
            return self.scale(other)
        self._check_dim(other)
        out: dict[MultiIndex, object] = {}
        for ka, va in self._coeffs.items():
            for kb, vb in other._coeffs.items():
                key = ka + kb
                out[key] = out.get(key, Fraction(0)) + va * vb
        return EvenPolynomial(self.dim, out)

    __rmul__ = __mul__

    def shift(self, k) -> "EvenPolynomial":
        """Multiply by the monomial s^k."""
        k = MultiIndex(k)
        return EvenPolynomial(
            self.dim, {key + k: v for key, v in self._coeffs.items()}
        )

    def evaluate(self, squares):
        """Evaluate at squared coordinates (scalars or broadcastable arrays)."""
        if len(squares) != self.dim:
            raise DimensionMismatch(
                f"need {self.dim} coordinate arrays, got {len(squares)}"
            )
        cols = [np.asarray(s, dtype=float) for s in squares]
        total = np.zeros(np.broadcast(*cols).shape) if self.dim > 1 else np.zeros(
            np.shape(cols[0])
        )
        for k, v in self._coeffs.items():
            term = float(v)
            for c, p in zip(cols, k):
                if p:
                    term = term * c**p
            total = total + term
        return total

    def json_terms(self, key="q"):
        return [
            {"k": list(k), key: _coeff_to_json(v)} for k, v in self.items()
        ]

    @classmethod
    def from_json_terms(cls, dim, terms, key="q") -> "EvenPolynomial":
        coeffs = {}
        for t in terms:
            k = MultiIndex(t["k"])
            if k in coeffs:
                raise DomainError(f"duplicate term {list(k)}")
            coeffs[k] = t[key]
        return cls(dim, coeffs)

    def __repr__(self):
        body = " + ".join(f"{v}*s^{tuple(k)}" for k, v in self.items()) or "0"
        return f"EvenPolynomial({self.dim}, {body})"


def _check_decay(decay):
    d = _coeff(decay)
    if d < 0:
        raise DomainError(f"decay rate must be >= 0, got {decay}")
    return d


class GaussianPolynomial:
    """A u-part: Q(x^2) * exp(-c |x|^2) with Q even and c >= 0."""

    __slots__ = ("poly", "decay")

    def __init__(self, poly: EvenPolynomial, decay=0):
        self.poly = poly
        self.decay = _check_decay(decay)

    @property
    def dim(self) -> int:
        return self.poly.dim

    def __eq__(self, other):
        if not isinstance(other, GaussianPolynomial):
            return NotImplemented
        if self.poly.is_zero and other.poly.is_zero:
            return self.poly.dim == other.poly.dim
        return self.poly == other.poly and self.decay == other.decay

    def __hash__(self):
        return hash((self.poly, self.decay))

    def __add__(self, other):
        if self.decay != other.decay and not (
            self.poly.is_zero or other.poly.is_zero
        ):
            raise DomainError("cannot add envelopes with different decay rates")
        decay = other.decay if self.poly.is_zero else self.decay
        return GaussianPolynomial(self.poly + other.poly, decay)

    def __mul__(self, other):
        if isinstance(other, GaussianPolynomial):
            if self.dim != other.dim:
                raise DimensionMismatch(f"dimensions {self.dim} and {other.dim}")
            return GaussianPolynomial(
                self.poly * other.poly, self.decay + other.decay
            )
        return GaussianPolynomial(self.poly.scale(other), self.decay)

    __rmul__ = __mul__

    def evaluate(self, coords):
        """Evaluate at positive coordinates (scalars or arrays)."""
        cols = [np.asarray(c, dtype=float) for c in coords]
        squares = [c * c for c in cols]
        val = self.poly.evaluate(squares)
        if self.decay != 0:
            ssum = squares[0]
            for s in squares[1:]:
                ssum = ssum + s
            val = val * np.exp(-float(self.decay) * ssum)
        return val

    def __repr__(self):
        return f"GaussianPolynomial({self.poly!r}, decay={self.decay})"


class SymbolicHFunction:
    """Family member x^(mu+1/2) * Q(x^2) * exp(-decay |x|^2)."""

    __slots__ = ("mu", "poly", "decay")

    def __init__(self, mu, poly: EvenPolynomial, decay=0):
        self.mu = mu if isinstance(mu, MuVector) else MuVector(mu)
        if poly.dim != self.mu.dim:
            raise DimensionMismatch(
                f"polynomial dimension {poly.dim} != order vector {self.mu.dim}"
            )
        self.poly = poly
        self.decay = _check_decay(decay)

    @property
    def dim(self) -> int:
        return self.mu.dim

    @property
    def u(self) -> GaussianPolynomial:
        """The u-part, i.e. the function divided by x^(mu+1/2)."""
        return GaussianPolynomial(self.poly, self.decay)

    def with_u(self, u: GaussianPolynomial) -> "SymbolicHFunction":
        return SymbolicHFunction(self.mu, u.poly, u.decay)

    def __eq__(self, other):
        if not isinstance(other, SymbolicHFunction):
            return NotImplemented
        return self.mu == other.mu and self.u == other.u

    def __hash__(self):
        return hash((self.mu, self.u))

    def __add__(self, other):
        if self.mu != other.mu:
            raise DomainError("cannot add functions with different orders")
        u = self.u + other.u
        return SymbolicHFunction(self.mu, u.poly, u.decay)

    def scale(self, factor) -> "SymbolicHFunction":
        return SymbolicHFunction(self.mu, self.poly.scale(factor), self.decay)

    def evaluate(self, coords):
        cols = [np.asarray(c, dtype=float) for c in coords]
        if len(cols) != self.dim:
            raise DimensionMismatch(
                f"need {self.dim} coordinates, got {len(cols)}"
            )
        val = self.u.evaluate(cols)
        for c, m in zip(cols, self.mu):
            val = val * c ** (float(m) + 0.5)
        return val

    def to_json(self) -> dict:
        return {
            "mu": self.mu.to_json(),
            "decay": _coeff_to_json(self.decay),
            "terms": self.poly.json_terms(key="q"),
        }

    @classmethod
    def from_json(cls, data: dict) -> "SymbolicHFunction":
        mu = MuVector.from_json(data["mu"])
        poly = EvenPolynomial.from_json_terms(mu.dim, data["terms"], key="q")
        return cls(mu, poly, data.get("decay", 0))

    def __repr__(self):
        return (
            f"SymbolicHFunction(mu={tuple(self.mu)}, poly={self.poly!r}, "
            f"decay={self.decay})"
        )


def eval_symbolic(f: SymbolicHFunction, x):
    """Evaluate f at a point (or arrays of points) with all x_i > 0."""
    cols = [np.asarray(c, dtype=float) for c in x]
    if len(cols) != f.dim:
        raise DimensionMismatch(f"need {f.dim} coordinates, got {len(cols)}")
    for i, c in enumerate(cols):
        if c.size and float(c.min()) <= 0.0:
            raise DomainError(f"coordinate {i} must be positive")
    val = f.evaluate(cols)
    return float(val) if np.ndim(val) == 0 else val


# ---------------------------------------------------------------------------
# T and S application


def apply_T(axis: int, u: GaussianPolynomial) -> GaussianPolynomial:
    """Apply T_axis = (1/x_axis) d/dx_axis to a u-part.

    On a term q * s^k * exp(-c sum s): contributes 2 k_axis q s^(k-e) and
    -2 c q s^k.
    """
    n = u.dim
    if not 0 <= axis < n:
        raise DomainError(f"axis {axis} outside range(0, {n})")
    e = unit_index(n, axis)
    out: dict[MultiIndex, object] = {}
    two_c = 2 * u.decay
    for k, q in u.poly._coeffs.items():
        if k[axis] >= 1:
            key = k - e
            out[key] = out.get(key, Fraction(0)) + 2 * k[axis] * q
        if two_c != 0:
            out[k] = out.get(k, Fraction(0)) - two_c * q
    return GaussianPolynomial(EvenPolynomial(n, out), u.decay)


def apply_Tk(k, u: GaussianPolynomial) -> GaussianPolynomial:
    """Apply the mixed power T^k = T_n^{k_n} ... T_1^{k_1}."""
    k = MultiIndex(k)
    if k.dim != u.dim:
        raise DimensionMismatch(f"index dimension {k.dim}, u-part {u.dim}")
    out = u
    for axis, power in enumerate(k):
        for _ in range(power):
            out = apply_T(axis, out)
    return out


def leibniz_Tk(
    k, theta: GaussianPolynomial, phi: GaussianPolynomial
) -> GaussianPolynomial:
    """Product rule: T^k(theta * phi) = sum_j C(k,j) T^(k-j)theta T^j phi."""
    k = MultiIndex(k)
    if theta.dim != phi.dim:
        raise DimensionMismatch(f"dimensions {theta.dim} and {phi.dim}")
    if k.dim != theta.dim:
        raise DimensionMismatch(f"index dimension {k.dim}, factors {theta.dim}")
    total = None
    for j in mi_below(k):
        term = apply_Tk(k - j, theta) * apply_Tk(j, phi)
        term = mi_binomial(k, j) * term
        total = term if total is None else total + term
    return total


def apply_S(axis: int, f: SymbolicHFunction) -> SymbolicHFunction:
    """Apply the Bessel operator on one axis via its conjugated form."""
    n = f.dim
    if not 0 <= axis < n:
        raise DomainError(f"axis {axis} outside range(0, {n})")
    u = f.u
    t1 = apply_T(axis, u)
    t2 = apply_T(axis, t1)
    e = unit_index(n, axis)
    poly = t2.poly.shift(e) + t1.poly.scale(2 * (f.mu[axis] + 1))
    return SymbolicHFunction(f.mu, poly, f.decay)


def apply_Sk(k, f: SymbolicHFunction) -> SymbolicHFunction:
    """Apply the mixed power S^k (per-axis powers commute)."""
    k = MultiIndex(k)
    if k.dim != f.dim:
        raise DimensionMismatch(f"index dimension {k.dim}, function {f.dim}")
    out = f
    for axis, power in enumerate(k):
        for _ in range(power):
            out = apply_S(axis, out)
    return out


# ---------------------------------------------------------------------------
# Operator polynomials


class OperatorPoly:
    """Operator polynomial L = sum_alpha (-1)^|alpha| a_alpha S^alpha.

    The coefficient map also defines the plain polynomial
    P(x) = sum_alpha a_alpha x^alpha used in the hypothesis checks and in
    the transform-side multiplier P[y^2].
    """

    __slots__ = ("dim", "_coeffs")

    def __init__(self, dim: int, coeffs):
        if dim < 1:
            raise DomainError(f"dimension must be >= 1, got {dim}")
        self.dim = dim
        clean: dict[MultiIndex, object] = {}
        for k, v in coeffs.items():
            k = MultiIndex(k)
            if k.dim != dim:
                raise DimensionMismatch(
                    f"term {tuple(k)} has dimension {k.dim}, expected {dim}"
                )
            c = _coeff(v)
            if c != 0:
                clean[k] = clean.get(k, Fraction(0)) + c
        if not clean:
            raise DomainError("operator polynomial has no nonzero terms")
        self._coeffs = clean

    def items(self):
        return sorted(self._coeffs.items(), key=lambda kv: graded_key(kv[0]))

    def coefficient(self, k):
        return self._coeffs.get(MultiIndex(k), Fraction(0))

    @property
    def degree(self) -> int:
        return max(k.order for k in self._coeffs)

    def __eq__(self, other):
        if not isinstance(other, OperatorPoly):
            return NotImplemented
        return self.dim == other.dim and self._coeffs == other._coeffs

    def evaluate_plain(self, coords):
        """P(x) with plain (not squared) powers, vectorized."""
        cols = [np.asarray(c, dtype=float) for c in coords]
        total = 0.0
        for k, v in self._coeffs.items():
            term = float(v)
            for c, p in zip(cols, k):
                if p:
                    term = term * c**p
            total = total + term
        return total

    def as_even_polynomial(self) -> EvenPolynomial:
        """Reinterpret the coefficients as the even polynomial P[x^2]."""
        return EvenPolynomial(self.dim, dict(self._coeffs))

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "terms": [
                {"k": list(k), "a": _coeff_to_json(v)} for k, v in self.items()
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "OperatorPoly":
        dim = data.get("dim")
        terms = data["terms"]
        if dim is None:
            if not terms:
                raise DomainError("cannot infer dimension from empty terms")
            dim = len(terms[0]["k"])
        coeffs = {}
        for t in terms:
            k = MultiIndex(t["k"])
            if k in coeffs:
                raise DomainError(f"duplicate term {list(k)}")
            coeffs[k] = t["a"]
        return cls(dim, coeffs)

    def __repr__(self):
        body = " + ".join(f"{v}*x^{tuple(k)}" for k, v in self.items())
        return f"OperatorPoly({self.dim}, {body})"


def apply_L(L: OperatorPoly, f: SymbolicHFunction) -> SymbolicHFunction:
    """Apply L = sum (-1)^|alpha| a_alpha S^alpha to a family member."""
    if L.dim != f.dim:
        raise DimensionMismatch(f"operator dimension {L.dim}, function {f.dim}")
    total = None
    for alpha, a in L.items():
        term = apply_Sk(alpha, f)
        sign = -a if alpha.order % 2 else a
        term = term.scale(sign)
        total = term if total is None else total + term
    return total


# ---------------------------------------------------------------------------
# Normal-ordered expansion of S^k in terms of x^(2l) T^(k+l)


def _falling(a: int, j: int) -> int:
    out = 1
    for i in range(j):
        out *= a - i
    return out


def _compose_1d(A: dict, B: dict) -> dict:
    """Product of normal-ordered 1-D operators sum c[(a,b)] x^(2a) T^b.

    Uses T^b x^(2a) = sum_j C(b,j) 2^j a!/(a-j)! x^(2(a-j)) T^(b-j).
    """
    out: dict[tuple, object] = {}
    for (a1, b1), c1 in A.items():
        for (a2, b2), c2 in B.items():
            for j in range(min(b1, a2) + 1):
                w = math.comb(b1, j) * (2**j) * _falling(a2, j)
                key = (a1 + a2 - j, b1 - j + b2)
                val = out.get(key, Fraction(0)) + c1 * c2 * w
                if val == 0:
                    out.pop(key, None)
                else:
                    out[key] = val
    return out


def koh_zemanian_coeffs(k: int, mu_axis) -> dict:
    """Coefficients b_{l,k} with S^k u-side = sum_l b_{l,k} x^(2l) T^(k+l).

    One axis; mu_axis is that axis's order.  For k = 1 this returns
    {0: 2(mu+1), 1: 1}.
    """
    if k < 0:
        raise DomainError(f"power must be >= 0, got {k}")
    mu_axis = _coeff(mu_axis) if not isinstance(mu_axis, float) else mu_axis
    op = {(0, 0): Fraction(1)}
    base = {(1, 2): Fraction(1), (0, 1): 2 * (mu_axis + 1)}
    for _ in range(k):
        op = _compose_1d(base, op)
    out = {}
    for (a, b), c in op.items():
        if b - a != k:
            raise DomainError("normal ordering produced an unexpected term")
        out[a] = c
    return out


def koh_zemanian_coeffs_nd(k, mu: MuVector) -> dict:
    """Tensor version: b_{l,k} = prod_i b_{l_i,k_i}(mu_i), for l <= k."""
    k = MultiIndex(k)
    mu = mu if isinstance(mu, MuVector) else MuVector(mu)
    if k.dim != mu.dim:
        raise DimensionMismatch(f"index dimension {k.dim}, orders {mu.dim}")
    per_axis = [koh_zemanian_coeffs(ki, mi) for ki, mi in zip(k, mu)]
    out = {}
    for l in mi_below(k):
        b = 1
        for li, table in zip(l, per_axis):
            b = b * table[li]
        out[l] = b
    return out


# ---------------------------------------------------------------------------
# Kernel solves and the operator hypothesis


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Fractions; returns (rref, pivot columns)."""
    rows = [list(r) for r in rows]
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows, pivots


def kernel_basis(L: OperatorPoly, mu: MuVector, max_degree: int):
    """Exact basis of {f = x^(mu+1/2) Q(x^2) : deg Q <= max_degree, L f = 0}.

    Requires rational orders; the solve runs entirely over Fractions and
    the basis is returned in graded-lex echelon form.
    """
    mu = mu if isinstance(mu, MuVector) else MuVector(mu)
    if not mu.is_rational:
        raise DomainError("kernel solves need rational orders")
    if L.dim != mu.dim:
        raise DimensionMismatch(f"operator dimension {L.dim}, orders {mu.dim}")
    if max_degree < 0:
        raise DomainError(f"max_degree must be >= 0, got {max_degree}")
    monos = mi_graded_enumerate(mu.dim, max_degree)
    row_of = {m: i for i, m in enumerate(monos)}
    # column j holds the u-side coefficients of L applied to monomial j
    columns = []
    for m in monos:
        f = SymbolicHFunction(mu, EvenPolynomial.monomial(m), 0)
        g = apply_L(L, f)
        col = [Fraction(0)] * len(monos)
        for key, v in g.poly._coeffs.items():
            col[row_of[key]] = v
        columns.append(col)
    matrix = [
        [columns[j][i] for j in range(len(monos))] for i in range(len(monos))
    ]
    rref, pivots = _rref(matrix)
    pivot_set = set(pivots)
    free = [j for j in range(len(monos)) if j not in pivot_set]
    basis = []
    for fcol in free:
        vec = [Fraction(0)] * len(monos)
        vec[fcol] = Fraction(1)
        for r, p in enumerate(pivots):
            vec[p] = -rref[r][fcol]
        poly = EvenPolynomial(
            mu.dim, {monos[j]: vec[j] for j in range(len(monos)) if vec[j] != 0}
        )
        basis.append(SymbolicHFunction(mu, poly, 0))
    return basis


class HypothesisReport:
    """Outcome of the sign/nonvanishing test for an operator polynomial."""

    __slots__ = (
        "passed",
        "same_sign",
        "sign",
        "orthant_nonvanishing",
        "failing_axis",
        "grid_min_abs",
        "grid_points",
        "reason",
    )

    def __init__(self, **kw):
        for name in self.__slots__:
            setattr(self, name, kw.get(name))

    def to_json(self) -> dict:
        return {name: getattr(self, name) for name in self.__slots__}

    def __bool__(self):
        return bool(self.passed)

    def __repr__(self):
        return f"HypothesisReport(passed={self.passed}, reason={self.reason!r})"


def _simplex_lattice(n: int, target: int):
    """Rational lattice on the unit simplex with roughly `target` points."""
    if n == 1:
        return [(Fraction(1),)]
    m = 1
    while math.comb(m + n - 1, n - 1) < target:
        m += 1
    pts = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            pts.append(prefix + (Fraction(remaining, m),))
            return
        for v in range(remaining + 1):
            rec(prefix + (Fraction(v, m),), remaining - v, slots - 1)

    rec((), m, n)
    return pts


def check_hypothesis(P: OperatorPoly, grid_points: int = 10000) -> HypothesisReport:
    """Test that P has same-sign coefficients and no zero on the closed
    positive orthant away from the origin.

    The structural criterion is exact: with same-sign coefficients, P is
    orthant-nonvanishing away from 0 iff the constant term is nonzero or
    every axis carries a pure power of that variable.  A lattice on the
    unit simplex double-checks the conclusion numerically.
    """
    signs = {1 if v > 0 else -1 for _, v in P.items()}
    same_sign = len(signs) == 1
    sign = signs.pop() if same_sign else 0

    zero = MultiIndex([0] * P.dim)
    failing_axis = None
    if P.coefficient(zero) != 0:
        orthant = True
    else:
        orthant = True
        for axis in range(P.dim):
            has_pure = any(
                k[axis] > 0 and all(k[i] == 0 for i in range(P.dim) if i != axis)
                for k, _ in P.items()
            )
            if not has_pure:
                orthant = False
                failing_axis = axis
                break

    # numerical double check on the simplex; same-sign coefficients mean a
    # float sum of the terms has no cancellation, so a zero there is exact
    pts = _simplex_lattice(P.dim, grid_points)
    cols = [np.array([float(p[i]) for p in pts]) for i in range(P.dim)]
    vals = np.abs(P.evaluate_plain(cols))
    grid_min = float(np.min(vals)) if len(pts) else math.inf

    passed = same_sign and orthant and (not same_sign or grid_min > 0.0)
    if not same_sign:
        reason = "coefficients change sign"
    elif not orthant:
        reason = f"vanishes along axis {failing_axis} (no pure power term)"
    elif grid_min == 0.0:
        reason = "zero found on the unit simplex grid"
    else:
        reason = None
    return HypothesisReport(
        passed=passed,
        same_sign=same_sign,
        sign=sign,
        orthant_nonvanishing=orthant,
        failing_axis=failing_axis,
        grid_min_abs=grid_min,
        grid_points=len(pts),
        reason=reason,
    )


# ---------------------------------------------------------------------------
# Exact rational functions of the squared coordinates


class EvenRational:
    """Quotient N(x^2) / D(x^2)^power with exact T-derivatives.

    The quotient rule keeps a single denominator base:
    T_i (N / D^p) = (T_i N * D - p * N * T_i D) / D^(p+1).
    """

    __slots__ = ("numer", "denom", "power")

    def __init__(self, numer: EvenPolynomial, denom: EvenPolynomial = None, power: int = 1):
        self.numer = numer
        if denom is None:
            denom = EvenPolynomial.constant(numer.dim, 1)
            power = 0
        if denom.dim != numer.dim:
            raise DimensionMismatch(
                f"dimensions {numer.dim} and {denom.dim}"
            )
        if denom.is_zero:
            raise DomainError("denominator is identically zero")
        if power < 0:
            raise DomainError(f"power must be >= 0, got {power}")
        self.denom = denom
        self.power = power if not denom.is_zero else 0

    @property
    def dim(self) -> int:
        return self.numer.dim

    def t_derivative(self, axis: int) -> "EvenRational":
        tn = apply_T(axis, GaussianPolynomial(self.numer, 0)).poly
        if self.power == 0:
            return EvenRational(tn, self.denom, 0)
        td = apply_T(axis, GaussianPolynomial(self.denom, 0)).poly
        new_numer = tn * self.denom - self.numer.scale(self.power) * td
        return EvenRational(new_numer, self.denom, self.power + 1)

    def t_power(self, k) -> "EvenRational":
        k = MultiIndex(k)
        out = self
        for axis, power in enumerate(k):
            for _ in range(power):
                out = out.t_derivative(axis)
        return out

    def evaluate(self, squares):
        num = self.numer.evaluate(squares)
        if self.power == 0:
            return num
        den = self.denom.evaluate(squares)
        return num / den**self.power
