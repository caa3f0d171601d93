"""Dense complex polynomials in ascending-coefficient form."""

from fractions import Fraction

import numpy as np

TRIM_RTOL = 1e-14


def _trim(coeffs, rtol=TRIM_RTOL):
    c = np.asarray(coeffs, dtype=complex).ravel()
    if c.size == 0:
        return c
    mags = np.abs(c)
    top = mags.max()
    if top == 0.0:
        return c[:0]
    keep = np.nonzero(mags > rtol * top)[0]
    return c[: keep[-1] + 1].copy()


class ComplexPolynomial:
    """Polynomial ``sum_k c[k] x**k`` with complex coefficients.

    Trailing coefficients below ``1e-14`` times the largest modulus are
    dropped on construction, so the zero polynomial has no coefficients
    and ``degree == -1``.
    """

    __slots__ = ("_c",)

    def __init__(self, coefficients=()):
        c = _trim(coefficients)
        c.setflags(write=False)
        self._c = c

    @classmethod
    def monomial(cls, k, value=1.0):
        c = np.zeros(k + 1, dtype=complex)
        c[k] = value
        return cls(c)

    @classmethod
    def hermite(cls, n):
        """Physicists' Hermite polynomial H_n."""
        prev, cur = np.zeros(0, complex), np.array([1.0 + 0j])
        for k in range(n):
            nxt = np.zeros(k + 2, dtype=complex)
            nxt[1:] += 2.0 * cur
            nxt[: prev.size] -= 2.0 * k * prev
            prev, cur = cur, nxt
        return cls(cur)

    @property
    def coefficients(self):
        return self._c

    @property
    def degree(self):
        return self._c.size - 1

    def is_zero(self):
        return self._c.size == 0

    def __len__(self):
        return self._c.size

    def __repr__(self):
        return f"ComplexPolynomial({self._c.tolist()!r})"

    def __add__(self, other):
        if not isinstance(other, ComplexPolynomial):
            other = ComplexPolynomial([other])
        n = max(self._c.size, other._c.size)
        out = np.zeros(n, dtype=complex)
        out[: self._c.size] += self._c
        out[: other._c.size] += other._c
        return ComplexPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return ComplexPolynomial(-self._c)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, factor):
        return ComplexPolynomial(complex(factor) * self._c)

    def __mul__(self, other):
        if isinstance(other, ComplexPolynomial):
            if self.is_zero() or other.is_zero():
                return ComplexPolynomial()
            return ComplexPolynomial(np.convolve(self._c, other._c))
        return self.scale(other)

    __rmul__ = __mul__

    def shift(self, k=1):
        """Multiply by ``x**k``."""
        if self.is_zero():
            return self
        return ComplexPolynomial(np.concatenate([np.zeros(k, complex), self._c]))

    def conj(self):
        return ComplexPolynomial(self._c.conj())

    def differentiate(self):
        if self._c.size <= 1:
            return ComplexPolynomial()
        return ComplexPolynomial(self._c[1:] * np.arange(1, self._c.size))

    def evaluate(self, x):
        # Horner
        x = np.asarray(x)
        acc = np.zeros_like(x, dtype=complex)
        for c in self._c[::-1]:
            acc = acc * x + c
        return acc

    __call__ = evaluate

    def max_abs(self):
        return float(np.abs(self._c).max()) if self._c.size else 0.0

    def allclose(self, other, rtol=1e-9, atol=0.0):
        d = (self - other).max_abs()
        return d <= atol + rtol * max(self.max_abs(), other.max_abs())


def max_coefficient_gap(p, q):
    """Largest coefficient-wise modulus of ``p - q``."""
    n = max(len(p), len(q))
    a = np.zeros(n, complex)
    b = np.zeros(n, complex)
    a[: len(p)] = p.coefficients
    b[: len(q)] = q.coefficients
    return float(np.abs(a - b).max()) if n else 0.0


def _dyadic_pair(z):
    """``(re_num, im_num, shift)`` with ``z = (re_num + i im_num) / 2**shift`` exactly."""
    z = complex(z)
    (rn, rd), (im_n, im_d) = z.real.as_integer_ratio(), z.imag.as_integer_ratio()
    s = max(rd.bit_length(), im_d.bit_length()) - 1
    return rn << (s - rd.bit_length() + 1), im_n << (s - im_d.bit_length() + 1), s


class DyadicPolynomial:
    """Exact complex polynomial with coefficients ``(re + i im) / 2**shift``.

    Binary floats are dyadic rationals, so the ladder recursions driven by
    float coefficients can be run without any rounding.  Near the edge of
    the admissible region the pairings of high-index functions are so badly
    conditioned that even one rounding of the coefficients is visible.
    """

    __slots__ = ("pairs", "shift")

    def __init__(self, pairs=(), shift=0):
        pairs = [(int(r), int(i)) for r, i in pairs]
        while pairs and pairs[-1] == (0, 0):
            pairs.pop()
        self.pairs = tuple(pairs)
        self.shift = int(shift)

    @classmethod
    def from_values(cls, values):
        parts = [_dyadic_pair(z) for z in values]
        s = max((p[2] for p in parts), default=0)
        return cls([(r << (s - t), i << (s - t)) for r, i, t in parts], s)

    def __len__(self):
        return len(self.pairs)

    def is_zero(self):
        return not self.pairs

    def _aligned(self, s):
        d = s - self.shift
        return [(r << d, i << d) for r, i in self.pairs]

    def __add__(self, other):
        s = max(self.shift, other.shift)
        a, b = self._aligned(s), other._aligned(s)
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, (r, i) in enumerate(b):
            out[k] = (out[k][0] + r, out[k][1] + i)
        return DyadicPolynomial(out, s)

    def scale(self, factor):
        fr, fi, t = _dyadic_pair(factor)
        return DyadicPolynomial(
            [(r * fr - i * fi, r * fi + i * fr) for r, i in self.pairs], self.shift + t
        )

    def shift_up(self, k=1):
        """Multiply by ``x**k``."""
        if not self.pairs:
            return self
        return DyadicPolynomial([(0, 0)] * k + list(self.pairs), self.shift)

    def differentiate(self):
        return DyadicPolynomial([(k * r, k * i) for k, (r, i) in enumerate(self.pairs)][1:], self.shift)

    def to_complex(self):
        return ComplexPolynomial([
            complex(Fraction(r, 1 << self.shift), Fraction(i, 1 << self.shift))
            for r, i in self.pairs
        ])
