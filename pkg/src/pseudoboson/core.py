"""Parameters, ladder coefficients and Gaussian-polynomial functions.

Every function handled here has the form ``p(x) * exp(-c x**2 / 2)`` with a
complex polynomial ``p`` and complex width ``c`` (``Re c > 0``).  This class
is closed under ``x``, ``d/dx`` and multiplication by scalars, and its inner
products reduce to Gaussian moments, so all identities can be checked on
polynomial coefficients without any grid.
"""

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DegenerateError, DomainError
from .polynomial import ComplexPolynomial, DyadicPolynomial

SQRT2 = math.sqrt(2.0)
ADMISSIBILITY_MARGIN = 1e-12


@dataclass(frozen=True)
class ParameterPoint:
    epsilon: float
    eta: complex
    theta: float


def make_parameters(epsilon, eta):
    """Validate ``(epsilon, eta)`` and compute ``theta = sqrt(eps^2 - 4|eta|^2)``."""
    epsilon = float(epsilon)
    eta = complex(eta)
    if not (math.isfinite(epsilon) and cmath.isfinite(eta)):
        raise DomainError(f"non-finite parameters epsilon={epsilon!r}, eta={eta!r}")
    disc = epsilon * epsilon - 4.0 * abs(eta) ** 2
    if not disc > 0.0:
        raise DomainError(
            f"epsilon^2 > 4|eta|^2 is violated: epsilon^2 = {epsilon * epsilon!r}, "
            f"4|eta|^2 = {4.0 * abs(eta) ** 2!r}"
        )
    return ParameterPoint(epsilon, eta, math.sqrt(disc))


@dataclass(frozen=True)
class CoefficientSet:
    kA1: complex
    kA2: complex
    kB1: complex
    kB2: complex
    kAplus: complex
    kAminus: complex
    kBplus: complex
    kBminus: complex
    theta: float

    def determinant(self):
        """``kA- kB+ - kA+ kB-``; equals one for every valid point."""
        return self.kAminus * self.kBplus - self.kAplus * self.kBminus

    def hermite_product(self):
        """``kA- kB-``; the Hermite special case is where this equals -1/2."""
        return self.kAminus * self.kBminus


def coefficient_set(p):
    eps, eta, th = p.epsilon, p.eta, p.theta
    ch = math.cosh(th)
    shc = math.sinh(th) / th
    kA2 = -2.0 * eta.conjugate() * shc
    kB1 = 2.0 * eta * shc
    # kA1 kB2 - kA2 kB1 = 1; derive the small diagonal entry from the large one
    # so that cosh - sinh never cancels catastrophically.
    offdiag = (kA2 * kB1).real
    if eps >= 0.0:
        kB2 = ch + eps * shc
        kA1 = (1.0 + offdiag) / kB2
    else:
        kA1 = ch - eps * shc
        kB2 = (1.0 + offdiag) / kA1
    kA1, kB2 = complex(kA1), complex(kB2)
    return CoefficientSet(
        kA1=kA1,
        kA2=kA2,
        kB1=kB1,
        kB2=kB2,
        kAplus=(kA1 + kA2) / SQRT2,
        kAminus=(kA1 - kA2) / SQRT2,
        kBplus=(kB1 + kB2) / SQRT2,
        kBminus=(kB1 - kB2) / SQRT2,
        theta=th,
    )


def vacuum_widths(c):
    """Widths of the two vacua: ``kA+/kA-`` and ``-conj(kB+/kB-)``."""
    if c.kAminus == 0 or c.kBminus == 0:
        raise DegenerateError("kA- or kB- vanishes; vacuum width undefined")
    return c.kAplus / c.kAminus, -(c.kBplus / c.kBminus).conjugate()


def admissibility(c):
    """Return ``(Re(kA+/kA-) > 0, Re(kB+/kB-) < 0)`` with a 1e-12 dead band."""
    if c.kAminus == 0 or c.kBminus == 0:
        raise DegenerateError("kA- or kB- vanishes; admissibility ratios undefined")
    ra = (c.kAplus / c.kAminus).real
    rb = (c.kBplus / c.kBminus).real
    return ra > ADMISSIBILITY_MARGIN, rb < -ADMISSIBILITY_MARGIN


def gaussian_moment(c, k):
    """``integral of x^(2k) exp(-c x^2)`` over the real line, principal branch."""
    c = complex(c)
    if not c.real > 0.0:
        raise DomainError(f"Gaussian moment needs Re c > 0, got c={c!r}")
    val = cmath.sqrt(math.pi / c)
    for j in range(k):
        val *= (2 * j + 1) / (2.0 * c)
    return val


def gaussian_moments(c, kmax):
    """Array of ``gaussian_moment(c, k)`` for ``k = 0..kmax``."""
    c = complex(c)
    if not c.real > 0.0:
        raise DomainError(f"Gaussian moment needs Re c > 0, got c={c!r}")
    out = np.empty(kmax + 1, dtype=complex)
    out[0] = cmath.sqrt(math.pi / c)
    for j in range(kmax):
        out[j + 1] = out[j] * (2 * j + 1) / (2.0 * c)
    return out


@dataclass(frozen=True)
class GaussPolyFn:
    """``poly(x) * exp(-width * x**2 / 2)``.

    ``exact`` optionally holds the same polynomial up to the factor
    ``exact_scale`` as a :class:`DyadicPolynomial`; inner products then use
    it instead of the rounded ``poly``.
    """

    poly: ComplexPolynomial
    width: complex
    exact: DyadicPolynomial = field(default=None, compare=False, repr=False)
    exact_scale: complex = field(default=1.0, compare=False, repr=False)

    def __post_init__(self):
        if not complex(self.width).real > 0.0:
            raise DomainError(f"width must have positive real part, got {self.width!r}")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.poly(x) * np.exp(-0.5 * self.width * x * x)

    def scale(self, factor):
        if self.exact is None:
            return GaussPolyFn(self.poly.scale(factor), self.width)
        return GaussPolyFn(self.poly.scale(factor), self.width, self.exact,
                           complex(factor) * self.exact_scale)

    def with_poly(self, poly):
        return GaussPolyFn(poly, self.width)

    def is_zero(self):
        return self.poly.is_zero()


def hermite_function(m):
    """Normalised oscillator eigenfunction ``H_m(x) exp(-x^2/2) / sqrt(2^m m! sqrt(pi))``."""
    log_norm = 0.5 * (m * math.log(2.0) + math.lgamma(m + 1) + 0.5 * math.log(math.pi))
    return GaussPolyFn(ComplexPolynomial.hermite(m).scale(math.exp(-log_norm)), 1.0)


@dataclass(frozen=True)
class LadderCoefficients:
    """First-order operator ``kx * x + kd * d/dx``."""

    kx: complex
    kd: complex

    def adjoint(self):
        # (d/dx)^dagger = -d/dx on L^2
        return LadderCoefficients(complex(self.kx).conjugate(), -complex(self.kd).conjugate())


def annihilation():
    return LadderCoefficients(1 / SQRT2, 1 / SQRT2)


def creation():
    return LadderCoefficients(1 / SQRT2, -1 / SQRT2)


def ladder_A(c):
    return LadderCoefficients(c.kAplus, c.kAminus)


def ladder_B(c):
    return LadderCoefficients(c.kBplus, c.kBminus)


def apply_ladder(op, f):
    """Apply ``kx x + kd d/dx`` to ``f = p exp(-c x^2/2)``.

    Result is ``((kx - kd c) x p + kd p') exp(-c x^2/2)``.  A multiplier of
    ``x p`` that is pure cancellation noise (below 1e-14 of its parts) is set
    to zero, which makes vacua map exactly to the zero function.
    """
    kx, kd, w = complex(op.kx), complex(op.kd), complex(f.width)
    mult = kx - kd * w
    if abs(mult) <= 1e-14 * max(abs(kx), abs(kd * w)):
        mult = 0.0
    poly = f.poly.shift(1).scale(mult) + f.poly.differentiate().scale(kd)
    return GaussPolyFn(poly, w)


def combined_width(bra, ket):
    """Exponent ``C`` in ``conj(bra) ket = (...) exp(-C x^2)``."""
    return (complex(bra.width).conjugate() + complex(ket.width)) / 2.0


def _moment_series(pa, wa, pb, wb):
    """``sum_m q_2m (2m-1)!! / (2C)^m`` summed exactly, where ``q = conj(pa) pb``.

    ``pa`` and ``pb`` are :class:`DyadicPolynomial`; the widths are floats,
    hence dyadic too.  The series is accumulated in integer arithmetic and
    rounded once.  Double-precision summation loses up to nine digits here
    for degree-20 Hermite-like polynomials.
    """
    a, sa = pa.pairs, pa.shift
    b, sb = pb.pairs, pb.shift
    # 2C = conj(c_bra) + c_ket = (Xr + i Xi) / 2**t, summed exactly
    X = DyadicPolynomial.from_values([complex(wa).conjugate(), complex(wb)])
    t = X.shift
    Xr = sum(r for r, _ in X.pairs)
    Xi = sum(i for _, i in X.pairs)
    nq = len(a) + len(b) - 1
    q = [[0, 0] for _ in range((nq + 1) // 2)]
    for i, (ar, ai) in enumerate(a):
        for j, (br, bi) in enumerate(b):
            if (i + j) % 2:
                continue
            acc = q[(i + j) // 2]
            # conj(a) * b
            acc[0] += ar * br + ai * bi
            acc[1] += ar * bi - ai * br
    K = len(q) - 1
    Q = Xr * Xr + Xi * Xi
    num_r = num_i = 0
    # Horner over m with 1/(2C) = 2**t (Xr - i Xi) / Q
    for m in range(K, -1, -1):
        qr, qi = q[m]
        num_r, num_i = num_r + qr * Q ** (K - m), num_i + qi * Q ** (K - m)
        if m:
            fr, fi = (2 * m - 1) * Xr << t, -((2 * m - 1) * Xi << t)
            num_r, num_i = num_r * fr - num_i * fi, num_r * fi + num_i * fr
    # num was built as sum_m q_m P_m (2**t conj(X))^m Q^(K-m); scale back
    den = Q ** K << (sa + sb)
    return complex(Fraction(num_r, den), Fraction(num_i, den))


def inner_product(bra, ket):
    """``<bra, ket> = integral conj(bra) ket dx`` via closed-form Gaussian moments.

    ``conj(p_bra) p_ket`` is expanded in monomials and integrated term by
    term against ``exp(-C x^2)`` with ``C = (conj(c_bra) + c_ket) / 2``.
    Functions carrying an exact polynomial are paired through it.
    """
    C = combined_width(bra, ket)
    if not C.real > 0.0:
        raise DomainError(f"combined width {C!r} is not integrable")
    if bra.is_zero() or ket.is_zero():
        return 0j
    pa, sa = _exact_form(bra)
    pb, sb = _exact_form(ket)
    series = _moment_series(pa, bra.width, pb, ket.width)
    return series * (sa.conjugate() * sb) * cmath.sqrt(math.pi / C)


def _exact_form(f):
    """``(exact polynomial, factor)`` with ``f.poly`` equal to their product."""
    if f.exact is not None:
        return f.exact, complex(f.exact_scale)
    return DyadicPolynomial.from_values(f.poly.coefficients), 1.0 + 0j


def norm(f):
    return math.sqrt(max(inner_product(f, f).real, 0.0))
