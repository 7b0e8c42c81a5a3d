"""Dense tensor-monomial polynomials with unbounded integer coefficients.

A polynomial in ``n`` variables is stored as an ``n``-dimensional numpy array
of Python ints (``dtype=object``) whose entry at multi-index ``(i_1, ..., i_n)``
is the coefficient of ``x_1**i_1 * ... * x_n**i_n``.  The array shape is
``(d_1 + 1, ..., d_n + 1)`` where ``d_k`` is the *declared* degree in ``x_k``;
the flat, row-major (C order) view of that array is the canonical coefficient
sequence.

Axes are 0-based throughout.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction
from functools import reduce
from numbers import Integral, Rational
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "TensorPoly",
    "Sign",
    "shift_axis",
    "shift_all",
    "reciprocal_axis",
    "contract_axis",
    "mobius_axis",
    "evaluate",
    "interval_evaluate",
    "partial_derivative",
    "face_lower",
    "face_upper",
    "substitute_axis",
    "sign_summary",
]


class Sign(enum.Enum):
    """Sign pattern of the nonzero coefficients of a polynomial."""

    ALL_NONNEG = "all_nonneg"
    ALL_NONPOS = "all_nonpos"
    MIXED = "mixed"
    ZERO = "zero"

    @property
    def is_constant(self) -> bool:
        return self in (Sign.ALL_NONNEG, Sign.ALL_NONPOS)


def _as_int(value) -> int:
    if isinstance(value, bool) or not isinstance(value, Integral):
        raise TypeError(f"coefficients must be integers, got {value!r}")
    return int(value)


def _object_array(data) -> np.ndarray:
    arr = np.array(data, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, value in np.ndenumerate(arr):
        out[idx] = _as_int(value)
    return out


def _trim(arr: np.ndarray) -> np.ndarray:
    for k in range(arr.ndim):
        size = arr.shape[k]
        while size > 1:
            slab = np.take(arr, [size - 1], axis=k)
            if any(v != 0 for v in slab.flat):
                break
            size -= 1
        if size != arr.shape[k]:
            arr = np.take(arr, range(size), axis=k)
    return arr


class TensorPoly:
    """Immutable dense multivariate integer polynomial.

    ``TensorPoly(coeffs)`` trims all-zero leading slabs so that the stored
    degrees are exact.  Pass ``trim=False`` to keep a declared degree (needed
    so that :func:`reciprocal_axis` is an involution for a fixed degree).
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs, *, trim: bool = True):
        if isinstance(coeffs, np.ndarray) and coeffs.dtype == object:
            arr = coeffs.copy()
        else:
            arr = _object_array(coeffs)
        if trim:
            arr = _trim(arr)
        arr.flags.writeable = False
        self._c = arr
        self._hash = None

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "TensorPoly":
        # internal fast path: arr is a fresh object array owned by the result
        obj = cls.__new__(cls)
        arr.flags.writeable = False
        obj._c = arr
        obj._hash = None
        return obj

    @classmethod
    def from_terms(
        cls,
        terms: Mapping[tuple[int, ...], int],
        nvars: int,
        degrees: Sequence[int] | None = None,
    ) -> "TensorPoly":
        """Build from ``{exponent tuple: coefficient}``.

        If ``degrees`` is given it is kept as the declared degree vector.
        """
        if degrees is None:
            shape = [1] * nvars
            for exps in terms:
                if len(exps) != nvars:
                    raise ValueError(f"exponent {exps} does not have {nvars} entries")
                for k, e in enumerate(exps):
                    shape[k] = max(shape[k], e + 1)
        else:
            shape = [d + 1 for d in degrees]
        arr = np.zeros(tuple(shape), dtype=object)
        arr[...] = 0
        for exps, c in terms.items():
            if any(e < 0 or e >= s for e, s in zip(exps, shape)):
                raise ValueError(f"exponent {exps} exceeds declared degrees")
            arr[tuple(exps)] += _as_int(c)
        return cls._wrap(_trim(arr) if degrees is None else arr)

    @classmethod
    def from_flat(cls, degrees: Sequence[int], flat: Iterable[int]) -> "TensorPoly":
        """Build from the row-major coefficient sequence; degrees are kept."""
        values = [_as_int(v) for v in flat]
        shape = tuple(d + 1 for d in degrees)
        if len(values) != math.prod(shape):
            raise ValueError("coefficient count does not match degrees")
        arr = np.empty(len(values), dtype=object)
        arr[:] = values
        return cls._wrap(arr.reshape(shape))

    @classmethod
    def constant(cls, value: int, nvars: int) -> "TensorPoly":
        arr = np.empty((1,) * nvars, dtype=object)
        arr[...] = _as_int(value)
        return cls._wrap(arr)

    @classmethod
    def variable(cls, k: int, nvars: int) -> "TensorPoly":
        exps = [0] * nvars
        exps[k] = 1
        return cls.from_terms({tuple(exps): 1}, nvars)

    # -- basic accessors -------------------------------------------------

    @property
    def coeffs(self) -> np.ndarray:
        """Read-only coefficient tensor."""
        return self._c

    @property
    def nvars(self) -> int:
        return self._c.ndim

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(s - 1 for s in self._c.shape)

    @property
    def flat(self) -> tuple[int, ...]:
        return tuple(self._c.flat)

    def coeff(self, exps: Sequence[int]) -> int:
        if any(e < 0 or e > d for e, d in zip(exps, self.degrees)):
            return 0
        return self._c[tuple(exps)]

    def terms(self) -> dict[tuple[int, ...], int]:
        return {idx: c for idx, c in np.ndenumerate(self._c) if c != 0}

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self._c.flat)

    def trimmed(self) -> "TensorPoly":
        return TensorPoly._wrap(_trim(self._c.copy()))

    def with_degrees(self, degrees: Sequence[int]) -> "TensorPoly":
        """Pad with zero slabs up to the given declared degrees."""
        if len(degrees) != self.nvars:
            raise ValueError("degree vector has wrong length")
        if any(d < cur for d, cur in zip(degrees, self.degrees)):
            if any(c != 0 for c in self._slab_excess(degrees)):
                raise ValueError("cannot lower degrees below nonzero coefficients")
        arr = np.zeros(tuple(d + 1 for d in degrees), dtype=object)
        arr[...] = 0
        src = tuple(slice(0, min(d + 1, s)) for d, s in zip(degrees, self._c.shape))
        arr[src] = self._c[src]
        return TensorPoly._wrap(arr)

    def _slab_excess(self, degrees):
        for idx, c in np.ndenumerate(self._c):
            if any(i > d for i, d in zip(idx, degrees)):
                yield c

    def content(self) -> int:
        return reduce(math.gcd, self._c.flat, 0)

    def primitive(self) -> "TensorPoly":
        """Divide by the (positive) content; the zero polynomial is returned as is."""
        g = self.content()
        if g in (0, 1):
            return self
        arr = np.empty(self._c.shape, dtype=object)
        for idx, c in np.ndenumerate(self._c):
            arr[idx] = c // g
        return TensorPoly._wrap(arr)

    # -- arithmetic ------------------------------------------------------

    def _padded(self, shape) -> np.ndarray:
        arr = np.zeros(shape, dtype=object)
        arr[...] = 0
        arr[tuple(slice(0, s) for s in self._c.shape)] = self._c
        return arr

    def _check_nvars(self, other: "TensorPoly"):
        if self.nvars != other.nvars:
            raise ValueError("polynomials have different numbers of variables")

    def __add__(self, other):
        if isinstance(other, Integral):
            other = TensorPoly.constant(other, self.nvars)
        if not isinstance(other, TensorPoly):
            return NotImplemented
        self._check_nvars(other)
        shape = tuple(max(a, b) for a, b in zip(self._c.shape, other._c.shape))
        return TensorPoly._wrap(self._padded(shape) + other._padded(shape))

    __radd__ = __add__

    def __neg__(self):
        return TensorPoly._wrap(-self._c)

    def __sub__(self, other):
        if isinstance(other, Integral):
            other = TensorPoly.constant(other, self.nvars)
        if not isinstance(other, TensorPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Integral):
            return TensorPoly._wrap(self._c * int(other))
        if not isinstance(other, TensorPoly):
            return NotImplemented
        self._check_nvars(other)
        shape = tuple(a + b - 1 for a, b in zip(self._c.shape, other._c.shape))
        out = np.zeros(shape, dtype=object)
        out[...] = 0
        for idx, c in np.ndenumerate(self._c):
            if c == 0:
                continue
            window = tuple(slice(i, i + s) for i, s in zip(idx, other._c.shape))
            out[window] += c * other._c
        return TensorPoly._wrap(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        result = TensorPoly.constant(1, self.nvars)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, TensorPoly):
            return NotImplemented
        return self._c.shape == other._c.shape and all(
            a == b for a, b in zip(self._c.flat, other._c.flat)
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._c.shape, tuple(self._c.flat)))
        return self._hash

    def __call__(self, *point):
        return evaluate(self, point)

    def to_string(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = _default_names(self.nvars)
        parts = []
        for exps in sorted(self.terms(), key=lambda e: (-sum(e), tuple(-x for x in e))):
            c = self._c[exps]
            mono = "*".join(
                name if e == 1 else f"{name}^{e}" for name, e in zip(names, exps) if e
            )
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts) if parts else "0"

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"TensorPoly(degrees={self.degrees}, {self.to_string()!r})"


def _default_names(n: int) -> list[str]:
    if n <= 3:
        return ["x", "y", "z"][:n]
    return [f"x{k + 1}" for k in range(n)]


def _check_axis(f: TensorPoly, k: int):
    if not 0 <= k < f.nvars:
        raise IndexError(f"axis {k} out of range for {f.nvars} variables")


# -- homography generators ----------------------------------------------


def shift_axis(f: TensorPoly, k: int, c: int) -> TensorPoly:
    """Taylor shift ``x_k -> x_k + c``; one synthetic-division pass per fiber."""
    _check_axis(f, k)
    c = _as_int(c)
    if c < 0:
        raise ValueError("shift amount must be nonnegative")
    d = f.degrees[k]
    if c == 0 or d == 0:
        return f
    out = f.coeffs.copy()
    a = np.moveaxis(out, k, 0)
    for i in range(d):
        for j in range(d - 1, i - 1, -1):
            a[j] += c * a[j + 1]
    return TensorPoly._wrap(out)


def shift_all(f: TensorPoly, u: Sequence[int]) -> TensorPoly:
    """``f(x + u)``; axes are processed in increasing bit size of ``u_k``."""
    if len(u) != f.nvars:
        raise ValueError("shift vector has wrong length")
    order = sorted(range(f.nvars), key=lambda k: (_as_int(u[k]).bit_length(), k))
    for k in order:
        f = shift_axis(f, k, u[k])
    return f


def reciprocal_axis(f: TensorPoly, k: int) -> TensorPoly:
    """``x_k**d_k * f(.., 1/x_k, ..)`` for the declared degree ``d_k``."""
    _check_axis(f, k)
    return TensorPoly._wrap(np.flip(f.coeffs, axis=k).copy())


def _axis_vector(values, ndim: int, k: int) -> np.ndarray:
    vec = np.empty(len(values), dtype=object)
    vec[:] = values
    shape = [1] * ndim
    shape[k] = len(values)
    return vec.reshape(shape)


def contract_axis(f: TensorPoly, k: int, c: int) -> TensorPoly:
    """``x_k -> c * x_k``; powers of ``c`` are built incrementally."""
    _check_axis(f, k)
    c = _as_int(c)
    if c < 1:
        raise ValueError("contraction factor must be >= 1")
    if c == 1:
        return f
    powers = [1]
    for _ in range(f.degrees[k]):
        powers.append(powers[-1] * c)
    return TensorPoly._wrap(f.coeffs * _axis_vector(powers, f.nvars, k))


def _poly_mul(p: list[int], q: list[int]) -> list[int]:
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def mobius_matrix(d: int, a: int, b: int, c: int, e: int) -> np.ndarray:
    """Row ``i`` holds the coefficients of ``(a x + b)**i * (c x + e)**(d - i)``."""
    num = [[1]]
    den = [[1]]
    for _ in range(d):
        num.append(_poly_mul(num[-1], [b, a]))
        den.append(_poly_mul(den[-1], [e, c]))
    mat = np.zeros((d + 1, d + 1), dtype=object)
    mat[...] = 0
    for i in range(d + 1):
        row = _poly_mul(num[i], den[d - i])
        mat[i, : len(row)] = row
    return mat


def mobius_axis(f: TensorPoly, k: int, a: int, b: int, c: int, e: int) -> TensorPoly:
    """``(c x_k + e)**d_k * f(.., (a x_k + b)/(c x_k + e), ..)`` for integer entries."""
    _check_axis(f, k)
    d = f.degrees[k]
    mat = mobius_matrix(d, *(_as_int(v) for v in (a, b, c, e)))
    out = np.tensordot(f.coeffs, mat, axes=([k], [0]))
    return TensorPoly._wrap(np.ascontiguousarray(np.moveaxis(out, -1, k)))


# -- evaluation ---------------------------------------------------------


def evaluate(f: TensorPoly, p: Sequence) -> Fraction:
    """Exact nested Horner evaluation at a rational point."""
    if len(p) != f.nvars:
        raise ValueError("point has wrong dimension")
    acc = f.coeffs
    for k in range(f.nvars - 1, -1, -1):
        x = Fraction(p[k])
        d = acc.shape[-1] - 1
        r = acc[..., d]
        for i in range(d - 1, -1, -1):
            r = r * x + acc[..., i]
        acc = r
    return Fraction(acc if not isinstance(acc, np.ndarray) else acc[()])


def _power_interval(lo: Fraction, hi: Fraction, e: int) -> tuple[Fraction, Fraction]:
    if e == 0:
        return Fraction(1), Fraction(1)
    a, b = lo**e, hi**e
    if lo >= 0 or e % 2 == 1:
        return (a, b) if a <= b else (b, a)
    if hi <= 0:
        return b, a
    return Fraction(0), max(a, b)


def interval_evaluate(f: TensorPoly, box: Sequence[tuple]) -> tuple[Fraction, Fraction]:
    """Naive monomial-wise interval extension over a bounded box."""
    if len(box) != f.nvars:
        raise ValueError("box has wrong dimension")
    pw = []
    for (lo, hi), d in zip(box, f.degrees):
        if isinstance(hi, float) or isinstance(lo, float):
            if math.isinf(hi) or math.isinf(lo):
                raise ValueError("interval evaluation needs a bounded box")
        lo, hi = Fraction(lo), Fraction(hi)
        pw.append([_power_interval(lo, hi, e) for e in range(d + 1)])
    low = high = Fraction(0)
    for idx, c in np.ndenumerate(f.coeffs):
        if c == 0:
            continue
        mlo = mhi = Fraction(1)
        for k, e in enumerate(idx):
            if e == 0:
                continue
            plo, phi = pw[k][e]
            cands = (mlo * plo, mlo * phi, mhi * plo, mhi * phi)
            mlo, mhi = min(cands), max(cands)
        if c > 0:
            low += c * mlo
            high += c * mhi
        else:
            low += c * mhi
            high += c * mlo
    return low, high


# -- derived polynomials ------------------------------------------------


def partial_derivative(f: TensorPoly, k: int) -> TensorPoly:
    _check_axis(f, k)
    d = f.degrees[k]
    if d == 0:
        return TensorPoly._wrap(f.coeffs * 0)
    sub = np.take(f.coeffs, range(1, d + 1), axis=k)
    return TensorPoly._wrap(sub * _axis_vector(list(range(1, d + 1)), f.nvars, k))


def face_lower(f: TensorPoly, k: int) -> TensorPoly:
    """``f`` restricted to ``x_k = 0``; the result has degree 0 in ``x_k``."""
    _check_axis(f, k)
    return TensorPoly._wrap(np.take(f.coeffs, [0], axis=k))


def face_upper(f: TensorPoly, k: int) -> TensorPoly:
    """``f`` at ``x_k = infinity``: the slab of the declared leading degree."""
    _check_axis(f, k)
    return TensorPoly._wrap(np.take(f.coeffs, [f.degrees[k]], axis=k))


def substitute_axis(f: TensorPoly, k: int, value, *, drop: bool = False) -> TensorPoly:
    """Substitute ``x_k = p/q`` and multiply by ``q**d_k`` to stay integral.

    With ``drop=True`` the substituted axis is removed from the result.
    """
    _check_axis(f, k)
    if not isinstance(value, Rational):
        raise TypeError("substituted value must be rational")
    value = Fraction(value)
    p, q = value.numerator, value.denominator
    d = f.degrees[k]
    weights = [p**i * q ** (d - i) for i in range(d + 1)]
    vec = np.empty(d + 1, dtype=object)
    vec[:] = weights
    out = np.tensordot(f.coeffs, vec, axes=([k], [0]))
    if not isinstance(out, np.ndarray):
        arr = np.empty((), dtype=object)
        arr[()] = out
        out = arr
    if not drop:
        out = np.expand_dims(out, k)
    return TensorPoly._wrap(np.ascontiguousarray(out))


def sign_summary(f: TensorPoly) -> Sign:
    pos = neg = False
    for c in f.coeffs.flat:
        if c > 0:
            pos = True
        elif c < 0:
            neg = True
        if pos and neg:
            return Sign.MIXED
    if pos:
        return Sign.ALL_NONNEG
    if neg:
        return Sign.ALL_NONPOS
    return Sign.ZERO
