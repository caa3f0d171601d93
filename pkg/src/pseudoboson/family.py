"""Biorthogonal families phi_n, Psi_n and the checks run on them."""

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    CoefficientSet,
    GaussPolyFn,
    ParameterPoint,
    admissibility,
    apply_ladder,
    coefficient_set,
    hermite_function,
    inner_product,
    ladder_A,
    ladder_B,
    make_parameters,
    norm,
    vacuum_widths,
)
from .errors import InadmissibleError
from .polynomial import ComplexPolynomial, DyadicPolynomial, max_coefficient_gap

DEFAULT_NMAX = 20
DEFAULT_GRAM_SIZE = 16
BASE_RTOL = 1e-9


def scaled_tolerance(n, base=BASE_RTOL):
    """Per-index relative tolerance ``base * (1 + n^2)``."""
    return base * (1 + n * n)


@dataclass(frozen=True)
class BiorthogonalFamily:
    params: ParameterPoint
    coeffs: CoefficientSet
    phi: tuple
    psi: tuple
    # unnormalised recursion polynomials p_n^phi, p_n^Psi (p_0 = 1)
    p_phi: tuple
    p_psi: tuple
    norm_phi: float
    norm_psi: complex

    @property
    def n_max(self):
        return len(self.phi) - 1

    @property
    def width_phi(self):
        return self.phi[0].width

    @property
    def width_psi(self):
        return self.psi[0].width


def build_family(p, n_max=DEFAULT_NMAX):
    """Build phi_0..phi_nmax and Psi_0..Psi_nmax at parameter point ``p``.

    ``phi_0`` has unit norm with a real positive prefactor; ``Psi_0`` is then
    scaled so that ``<Psi_0, phi_0> = 1``.
    """
    c = coefficient_set(p)
    cond_a, cond_b = admissibility(c)
    if not (cond_a and cond_b):
        raise InadmissibleError(
            f"vacua not square integrable at epsilon={p.epsilon!r}, eta={p.eta!r}: "
            f"Re(kA+/kA-) > 0 is {cond_a}, Re(kB+/kB-) < 0 is {cond_b}"
        )
    w_phi, w_psi = vacuum_widths(c)

    inv_kam = 1.0 / c.kAminus
    kbm = c.kBminus
    x_psi = -1.0 / kbm.conjugate()
    d_psi = -c.kAminus.conjugate()

    # the recursions run exactly on the (float, hence dyadic) coefficients
    e_phi = [DyadicPolynomial([(1, 0)])]
    e_psi = [DyadicPolynomial([(1, 0)])]
    for _ in range(n_max):
        q = e_phi[-1]
        e_phi.append(q.shift_up().scale(inv_kam) + q.differentiate().scale(kbm))
        q = e_psi[-1]
        e_psi.append(q.shift_up().scale(x_psi) + q.differentiate().scale(d_psi))
    p_phi = [e.to_complex() for e in e_phi]
    p_psi = [e.to_complex() for e in e_psi]

    n0_phi = (w_phi.real / math.pi) ** 0.25
    phi0 = GaussPolyFn(ComplexPolynomial([n0_phi]), w_phi)
    psi0_raw = GaussPolyFn(ComplexPolynomial([1.0]), w_psi)
    n0_psi = 1.0 / inner_product(psi0_raw, phi0).conjugate()

    phi, psi = [], []
    pref_phi, pref_psi = n0_phi, n0_psi
    for n in range(n_max + 1):
        if n:
            s = 1.0 / math.sqrt(n)
            pref_phi *= s
            pref_psi *= s
        phi.append(GaussPolyFn(p_phi[n].scale(pref_phi), w_phi, e_phi[n], pref_phi))
        psi.append(GaussPolyFn(p_psi[n].scale(pref_psi), w_psi, e_psi[n], pref_psi))

    return BiorthogonalFamily(
        params=p,
        coeffs=c,
        phi=tuple(phi),
        psi=tuple(psi),
        p_phi=tuple(p_phi),
        p_psi=tuple(p_psi),
        norm_phi=n0_phi,
        norm_psi=complex(n0_psi),
    )


def family_at(epsilon, eta, n_max=DEFAULT_NMAX):
    return build_family(make_parameters(epsilon, eta), n_max)


def pairing_matrix(f, inner=inner_product):
    """Matrix ``G[n, m] = <Psi_n, phi_m>``."""
    size = f.n_max + 1
    G = np.empty((size, size), dtype=complex)
    for n in range(size):
        for m in range(size):
            G[n, m] = inner(f.psi[n], f.phi[m])
    return G


def verify_biorthonormality(f, inner=inner_product):
    """Return ``(max |<Psi_n, phi_m> - delta_nm|, pairing matrix)``.

    ``inner`` may be swapped for an independent integrator (the quadrature
    oracle) to cross-check the closed-form route.
    """
    G = pairing_matrix(f, inner)
    dev = float(np.abs(G - np.eye(G.shape[0])).max())
    return dev, G


def _relative_gap(lhs, rhs, scale):
    """Coefficient-wise gap of two functions sharing a width, relative to ``scale``."""
    gap = max_coefficient_gap(lhs.poly, rhs.poly)
    denom = max(lhs.poly.max_abs(), rhs.poly.max_abs(), scale)
    return gap / denom if denom > 0 else gap


@dataclass
class IdentityCheck:
    name: str
    residuals: list
    tolerances: list

    @property
    def max_residual(self):
        return max(self.residuals) if self.residuals else 0.0

    @property
    def passed(self):
        return all(r <= t for r, t in zip(self.residuals, self.tolerances))

    def as_dict(self):
        return {
            "max_residual": self.max_residual,
            "passed": self.passed,
            "residuals": list(self.residuals),
        }


@dataclass
class CheckReport:
    checks: dict = field(default_factory=dict)

    def add(self, check):
        self.checks[check.name] = check

    @property
    def passed(self):
        return all(c.passed for c in self.checks.values())

    def as_dict(self):
        return {
            "passed": self.passed,
            "checks": {k: v.as_dict() for k, v in self.checks.items()},
        }


def ladder_consistency(f, base_rtol=BASE_RTOL):
    """Raising and lowering relations of both families, coefficient by coefficient.

    Operator route (``apply_ladder`` with A, B and their adjoints) is compared
    against the recursion-built families.  ``scale`` guards the relative
    measure when both sides vanish, as for ``A phi_0``.
    """
    c = f.coeffs
    A, B = ladder_A(c), ladder_B(c)
    Ad, Bd = A.adjoint(), B.adjoint()
    top = f.n_max
    checks = {k: IdentityCheck(k, [], []) for k in (
        "B_phi_raises", "A_phi_lowers", "Adag_psi_raises", "Bdag_psi_lowers",
        "A_phi_derivative_form",
    )}

    for n in range(top + 1):
        tol = scaled_tolerance(n, base_rtol)
        phi_n, psi_n = f.phi[n], f.psi[n]
        sphi, spsi = phi_n.poly.max_abs(), psi_n.poly.max_abs()
        if n < top:
            lhs = apply_ladder(B, phi_n)
            rhs = f.phi[n + 1].scale(math.sqrt(n + 1))
            checks["B_phi_raises"].residuals.append(_relative_gap(lhs, rhs, sphi))
            checks["B_phi_raises"].tolerances.append(tol)
            lhs = apply_ladder(Ad, psi_n)
            rhs = f.psi[n + 1].scale(math.sqrt(n + 1))
            checks["Adag_psi_raises"].residuals.append(_relative_gap(lhs, rhs, spsi))
            checks["Adag_psi_raises"].tolerances.append(tol)

        lower_phi = f.phi[n - 1].scale(math.sqrt(n)) if n else phi_n.with_poly(ComplexPolynomial())
        lhs = apply_ladder(A, phi_n)
        checks["A_phi_lowers"].residuals.append(_relative_gap(lhs, lower_phi, sphi))
        checks["A_phi_lowers"].tolerances.append(tol)

        # kA- (p_n^phi)' = n p_{n-1}^phi on the raw recursion polynomials
        dl = f.p_phi[n].differentiate().scale(c.kAminus)
        dr = f.p_phi[n - 1].scale(n) if n else ComplexPolynomial()
        gap = max_coefficient_gap(dl, dr)
        denom = max(dl.max_abs(), dr.max_abs(), f.p_phi[n].max_abs())
        checks["A_phi_derivative_form"].residuals.append(gap / denom)
        checks["A_phi_derivative_form"].tolerances.append(tol)

        lower_psi = f.psi[n - 1].scale(math.sqrt(n)) if n else psi_n.with_poly(ComplexPolynomial())
        lhs = apply_ladder(Bd, psi_n)
        checks["Bdag_psi_lowers"].residuals.append(_relative_gap(lhs, lower_psi, spsi))
        checks["Bdag_psi_lowers"].tolerances.append(tol)

    report = CheckReport()
    for chk in checks.values():
        report.add(chk)
    return report


def number_eigencheck(f, base_rtol=BASE_RTOL):
    """``B A phi_n = n phi_n`` and ``A^dag B^dag Psi_n = n Psi_n``."""
    c = f.coeffs
    A, B = ladder_A(c), ladder_B(c)
    Ad, Bd = A.adjoint(), B.adjoint()
    n_phi = IdentityCheck("N_phi_eigen", [], [])
    n_psi = IdentityCheck("Ndag_psi_eigen", [], [])
    for n in range(f.n_max + 1):
        tol = scaled_tolerance(n, base_rtol)
        phi_n, psi_n = f.phi[n], f.psi[n]
        lhs = apply_ladder(B, apply_ladder(A, phi_n))
        n_phi.residuals.append(_relative_gap(lhs, phi_n.scale(n), phi_n.poly.max_abs()))
        n_phi.tolerances.append(tol)
        lhs = apply_ladder(Ad, apply_ladder(Bd, psi_n))
        n_psi.residuals.append(_relative_gap(lhs, psi_n.scale(n), psi_n.poly.max_abs()))
        n_psi.tolerances.append(tol)
    report = CheckReport()
    report.add(n_phi)
    report.add(n_psi)
    return report


@dataclass
class HermiteCaseReport:
    applicable: bool
    product: complex
    phi_deviation: float = float("nan")
    psi_deviation: float = float("nan")
    standard_oscillator: bool = False
    standard_deviation: float = float("nan")
    tolerance: float = 1e-9
    reason: str = ""

    @property
    def passed(self):
        if not self.applicable:
            return True
        ok = self.phi_deviation <= self.tolerance and self.psi_deviation <= self.tolerance
        if self.standard_oscillator:
            ok = ok and self.standard_deviation <= self.tolerance
        return ok

    def as_dict(self):
        d = {
            "applicable": self.applicable,
            "kAminus_kBminus": self.product,
            "passed": self.passed,
        }
        if self.applicable:
            d.update(
                phi_deviation=self.phi_deviation,
                psi_deviation=self.psi_deviation,
                standard_oscillator=self.standard_oscillator,
            )
            if self.standard_oscillator:
                d["standard_deviation"] = self.standard_deviation
        else:
            d["reason"] = self.reason
        return d


def hermite_case_check(f, tol=1e-10, rtol=BASE_RTOL, n_upto=None):
    """Closed Hermite forms when ``kA- kB- = -1/2``.

    There ``p_n^phi = (-kB-)^n H_n`` and ``p_n^Psi = conj(kA-)^n H_n``.  If in
    addition ``kA- = -kB- = 1/sqrt(2)`` the normalised ``phi_n`` must equal
    ``N0 H_n / sqrt(n! 2^n)``.  Deviations are relative to the largest
    coefficient of the recursion output.
    """
    c = f.coeffs
    prod = c.hermite_product()
    if abs(prod + 0.5) > tol:
        return HermiteCaseReport(
            applicable=False,
            product=prod,
            tolerance=rtol,
            reason=f"|kA- kB- + 1/2| = {abs(prod + 0.5):.3e} exceeds {tol:.1e}",
        )
    top = f.n_max if n_upto is None else min(n_upto, f.n_max)
    dphi = dpsi = 0.0
    for n in range(top + 1):
        h = ComplexPolynomial.hermite(n)
        want = h.scale((-c.kBminus) ** n)
        dphi = max(dphi, max_coefficient_gap(f.p_phi[n], want) / f.p_phi[n].max_abs())
        want = h.scale(c.kAminus.conjugate() ** n)
        dpsi = max(dpsi, max_coefficient_gap(f.p_psi[n], want) / f.p_psi[n].max_abs())

    standard = abs(c.kAminus - 2 ** -0.5) <= tol and abs(c.kBminus + 2 ** -0.5) <= tol
    dstd = float("nan")
    if standard:
        dstd = 0.0
        for n in range(top + 1):
            pref = f.norm_phi / math.sqrt(math.factorial(n) * 2.0 ** n)
            want = ComplexPolynomial.hermite(n).scale(pref)
            dstd = max(dstd, max_coefficient_gap(f.phi[n].poly, want) / want.max_abs())
    return HermiteCaseReport(
        applicable=True,
        product=prod,
        phi_deviation=dphi,
        psi_deviation=dpsi,
        standard_oscillator=standard,
        standard_deviation=dstd,
        tolerance=rtol,
    )


def hermite_limit_sequence(alpha, etas, n_max=10):
    """Distance of normalised ``phi_n`` from the oscillator functions along ``eps = alpha eta``.

    For each ``eta`` returns the largest relative coefficient gap between
    ``phi_n`` and ``Phi_n`` over ``n <= n_max`` together with ``|width - 1|``.
    Both should shrink as ``eta -> 0``.
    """
    refs = [hermite_function(n) for n in range(n_max + 1)]
    out = []
    for eta in etas:
        f = family_at(alpha * eta, eta, n_max)
        gap = 0.0
        for n in range(n_max + 1):
            ref = refs[n].poly
            gap = max(gap, max_coefficient_gap(f.phi[n].poly, ref) / ref.max_abs())
        out.append({"eta": float(eta), "poly_gap": gap, "width_gap": abs(f.width_phi - 1.0)})
    return out


@dataclass
class RieszReport:
    d: list
    gram_cond_phi: float
    gram_cond_psi: float
    gram_size: int
    lower_bound_ok: bool
    increasing_from: int | None
    growth_factor: float

    def as_dict(self):
        return {
            "d_n": list(self.d),
            "gram_condition_phi": self.gram_cond_phi,
            "gram_condition_psi": self.gram_cond_psi,
            "gram_size": self.gram_size,
            "d_n_at_least_one": self.lower_bound_ok,
            "strictly_increasing_from": self.increasing_from,
            "growth_factor": self.growth_factor,
        }


def _gram(fns):
    k = len(fns)
    G = np.empty((k, k), dtype=complex)
    for i in range(k):
        for j in range(i, k):
            G[i, j] = inner_product(fns[i], fns[j])
            G[j, i] = G[i, j].conjugate()
    return G


def _spectral_condition(G):
    ev = np.linalg.eigvalsh(G)
    lo, hi = ev.min(), ev.max()
    return float(hi / lo) if lo > 0 else float("inf")


def riesz_diagnostic(f, gram_size=DEFAULT_GRAM_SIZE, floor=1e-10):
    """``d_n = ||phi_n|| ||Psi_n||`` and Gram-matrix condition numbers.

    Biorthonormality and Cauchy-Schwarz force ``d_n >= 1``; unbounded growth
    of ``d_n`` is the visible sign that neither family is a Riesz basis.
    ``increasing_from`` is the smallest ``n0`` such that ``d_n`` increases
    strictly for every ``n >= n0`` (``None`` if it does not at the end).
    """
    d = [norm(p) * norm(q) for p, q in zip(f.phi, f.psi)]
    k = min(gram_size, len(f.phi))
    cond_phi = _spectral_condition(_gram(f.phi[:k]))
    cond_psi = _spectral_condition(_gram(f.psi[:k]))
    start = None
    for n in range(len(d) - 1, 0, -1):
        if d[n] > d[n - 1]:
            start = n - 1
        else:
            break
    return RieszReport(
        d=d,
        gram_cond_phi=cond_phi,
        gram_cond_psi=cond_psi,
        gram_size=k,
        lower_bound_ok=all(x >= 1.0 - floor for x in d),
        increasing_from=start,
        growth_factor=d[-1] / d[0],
    )


def _vacuum_expansion(width, size):
    """Oscillator-basis coefficients of ``exp(-width x^2 / 2)``.

    Only even modes contribute:
    ``b_{2j+2} = b_{2j} r sqrt((2j+1)/(2j+2))`` with ``r = (1-c)/(1+c)``
    and ``b_0 = pi^{-1/4} sqrt(2 pi / (1+c))``.
    """
    c = complex(width)
    r = (1.0 - c) / (1.0 + c)
    out = np.zeros(size, dtype=complex)
    if size == 0:
        return out
    b = math.pi ** -0.25 * np.sqrt(2.0 * math.pi / (1.0 + c))
    for m in range(0, size, 2):
        out[m] = b
        j = m // 2
        b = b * r * math.sqrt((2 * j + 1) / (2 * j + 2))
    return out


def _apply_position(v):
    """Multiply by ``x = (a + a^dag)/sqrt(2)`` in the oscillator basis (truncated)."""
    n = v.size
    out = np.zeros_like(v)
    idx = np.arange(n)
    out[1:] += np.sqrt(idx[1:] / 2.0) * v[:-1]
    out[:-1] += np.sqrt(idx[1:] / 2.0) * v[1:]
    return out


def hermite_expansion(g, M):
    """Coefficients ``<Phi_m, g>`` for ``m < M``.

    Evaluates ``p(x) exp(-c x^2/2)`` in the oscillator basis by Horner's rule
    with the position matrix acting on the closed-form Gaussian expansion.
    Working length ``M + deg p`` keeps the first ``M`` entries free of
    truncation.  This avoids the monomial-moment route, whose cancellations
    wipe out all digits beyond ``m`` of about 30.
    """
    if M < 1:
        raise ValueError("M must be at least 1")
    coeffs = g.poly.coefficients
    if coeffs.size == 0:
        return np.zeros(M, dtype=complex)
    L = M + coeffs.size
    base = _vacuum_expansion(g.width, L)
    v = coeffs[-1] * base
    for ck in coeffs[-2::-1]:
        v = _apply_position(v) + ck * base
    return v[:M].copy()


@dataclass
class FrameTruncation:
    M: int
    K: int
    Sphi: np.ndarray
    Spsi: np.ndarray

    def hermitian_deviation(self):
        return max(
            float(np.abs(self.Sphi - self.Sphi.conj().T).max()),
            float(np.abs(self.Spsi - self.Spsi.conj().T).max()),
        )

    def min_eigenvalue(self):
        return min(
            float(np.linalg.eigvalsh(self.Sphi).min()),
            float(np.linalg.eigvalsh(self.Spsi).min()),
        )

    def is_positive_semidefinite(self, tol=1e-9):
        """Smallest eigenvalue of each matrix is above ``-tol * max(1, largest)``.

        Rounding in an eigensolve is proportional to the largest eigenvalue,
        which for Psi frames grows quickly with ``K``.
        """
        for S in (self.Sphi, self.Spsi):
            ev = np.linalg.eigvalsh(S)
            if ev.min() < -tol * max(1.0, ev.max()):
                return False
        return True

    def product_deviation(self, modes=None):
        """``max |Sphi Spsi - I|`` over the leading ``modes`` block."""
        k = self.M if modes is None else modes
        P = self.Sphi @ self.Spsi
        return float(np.abs(P[:k, :k] - np.eye(k)).max())


def _expansions(fns, K, M):
    return np.array([hermite_expansion(fns[n], M) for n in range(K)]).reshape(K, M)


def frame_truncation(f, M, K):
    """Truncated ``S_phi = sum_{n<K} |phi_n><phi_n|`` and likewise for Psi on ``M`` modes."""
    if K > len(f.phi):
        raise ValueError(f"K={K} exceeds the {len(f.phi)} built family members")
    V = _expansions(f.phi, K, M)
    W = _expansions(f.psi, K, M)
    return FrameTruncation(M, K, V.T @ V.conj(), W.T @ W.conj())


def resolution_diagnostic(f, M, K, modes=None):
    """``T_K = sum_{n<K} |phi_n><Psi_n|`` on ``M`` oscillator modes.

    Returns the matrix, the per-row max deviation from the identity and the
    max deviation on the leading ``modes`` block (default ``max(1, K//2)``).
    Purely diagnostic: no convergence rate is claimed.
    """
    if K > len(f.phi):
        raise ValueError(f"K={K} exceeds the {len(f.phi)} built family members")
    V = _expansions(f.phi, K, M)
    W = _expansions(f.psi, K, M)
    T = V.T @ W.conj()
    E = T - np.eye(M)
    k = max(1, K // 2) if modes is None else modes
    return {
        "T": T,
        "row_deviation": np.abs(E).max(axis=1),
        "block_deviation": float(np.abs(E[:k, :k]).max()),
        "modes": k,
    }
