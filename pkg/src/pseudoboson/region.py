"""Admissibility on the real slice ``epsilon = alpha * eta``."""

import math
from dataclasses import dataclass

from .core import admissibility, coefficient_set, make_parameters
from .errors import DegenerateError, DomainError, SingularError

BOUNDARY_BAND = 1e-9
RATIO_MARGIN = 1e-12


def _check_alpha(alpha):
    alpha = float(alpha)
    if not (math.isfinite(alpha) and alpha * alpha > 4.0):
        raise DomainError(f"alpha^2 > 4 required, got alpha={alpha!r}")
    return alpha


def artanh(x):
    return 0.5 * math.log((1.0 + x) / (1.0 - x))


def eta_window(alpha):
    """Half-width ``eta0`` of the admissible interval ``]-eta0, eta0[``.

    ``eta0 = artanh(sqrt((|a|-2)/(|a|+2))) / sqrt(a^2 - 4)``.  The window
    depends on ``|alpha|`` only: flipping the sign of alpha swaps the roles
    of the two vacua, and admissibility needs both.
    """
    alpha = abs(_check_alpha(alpha))
    root = math.sqrt(alpha * alpha - 4.0)
    return artanh(math.sqrt((alpha - 2.0) / (alpha + 2.0))) / root


def tanh_conditions(alpha, eta):
    """The two tanh ratios whose positivity is equivalent to admissibility.

    With ``s = sqrt(alpha^2 - 4)`` and ``t = tanh(eta s)``::

        ratioA = (1 - (alpha+2)/s * t) / (1 - (alpha-2)/s * t)
        ratioB = (1 + (alpha+2)/s * t) / (1 + (alpha-2)/s * t)

    For ``alpha > 2`` the factors are ``sqrt((alpha+2)/(alpha-2))`` and its
    inverse.  Keeping them signed also makes ``ratioA > 0`` match
    ``Re(kA+/kA-) > 0`` when ``alpha < -2``.
    """
    alpha = _check_alpha(alpha)
    eta = float(eta)
    s = math.sqrt(alpha * alpha - 4.0)
    t = math.tanh(eta * s)
    up, down = (alpha + 2.0) / s, (alpha - 2.0) / s
    den_a = 1.0 - down * t
    den_b = 1.0 + down * t
    if den_a == 0.0 or den_b == 0.0:
        raise SingularError(f"tanh ratio denominator vanishes at eta={eta!r}", eta=eta)
    return (1.0 - up * t) / den_a, (1.0 + up * t) / den_b


@dataclass(frozen=True)
class RegionPoint:
    alpha: float
    eta: float
    epsilon: float
    eta0: float
    classification: str  # admissible | inadmissible | boundary | excluded | singular
    admissible: bool | None = None
    condA: bool | None = None
    condB: bool | None = None
    ratioA: float | None = None
    ratioB: float | None = None
    coeff_admissible: bool | None = None
    consistent: bool | None = None
    message: str = ""

    def row(self):
        return {
            "alpha": self.alpha,
            "eta": self.eta,
            "epsilon": self.epsilon,
            "ratioA": self.ratioA,
            "ratioB": self.ratioB,
            "condA": self.condA,
            "condB": self.condB,
            "admissible": self.admissible,
            "eta0": self.eta0,
            "classification": self.classification,
            "classification_consistent": self.consistent,
        }


def classify_point(alpha, eta, band=BOUNDARY_BAND):
    """Classify one ``(alpha, eta)`` point three ways and compare.

    The three routes are the complex coefficient-set test, the tanh ratios
    and the closed-form window.  Points within ``band`` of ``|eta| = eta0``
    are labelled ``boundary`` and never count as inconsistent.
    """
    alpha = _check_alpha(alpha)
    eta = float(eta)
    eps = alpha * eta
    eta0 = eta_window(alpha)
    try:
        p = make_parameters(eps, eta)
    except DomainError as exc:
        return RegionPoint(alpha, eta, eps, eta0, "excluded", message=str(exc))

    # kA-/kB- and the tanh denominators can vanish; for alpha < -2 this
    # happens exactly on |eta| = eta0, where it is a boundary point
    on_edge = abs(abs(eta) - eta0) <= band

    def _undefined(exc, coeff_adm=None):
        return RegionPoint(
            alpha, eta, eps, eta0, "boundary" if on_edge else "singular",
            coeff_admissible=coeff_adm, consistent=True if on_edge else None, message=str(exc)
        )

    try:
        cond_ak, cond_bk = admissibility(coefficient_set(p))
    except DegenerateError as exc:
        return _undefined(exc)
    coeff_adm = cond_ak and cond_bk
    try:
        ra, rb = tanh_conditions(alpha, eta)
    except SingularError as exc:
        return _undefined(exc, coeff_adm)
    cond_a, cond_b = ra > RATIO_MARGIN, rb > RATIO_MARGIN
    adm = cond_a and cond_b

    if on_edge:
        return RegionPoint(
            alpha, eta, eps, eta0, "boundary", adm, cond_a, cond_b, ra, rb, coeff_adm, True
        )
    window = abs(eta) < eta0
    consistent = (adm == coeff_adm == window) and cond_a == cond_ak and cond_b == cond_bk
    label = "admissible" if adm else "inadmissible"
    return RegionPoint(
        alpha, eta, eps, eta0, label, adm, cond_a, cond_b, ra, rb, coeff_adm, consistent
    )


def scan_region(alpha_grid, eta_grid, band=BOUNDARY_BAND):
    """Classify every grid point, alpha-major, in input order."""
    alphas = [_check_alpha(a) for a in alpha_grid]
    return [classify_point(a, e, band) for a in alphas for e in eta_grid]


def linspace(lo, hi, steps):
    """Evenly spaced grid with exact endpoints and an exact zero when symmetric."""
    if steps < 1:
        raise DomainError("grid needs at least one step")
    if steps == 1:
        return [float(lo)]
    h = (hi - lo) / (steps - 1)
    pts = [lo + i * h for i in range(steps)]
    pts[-1] = float(hi)
    # snap roundoff-level values to zero so the excluded eta=0 row is reported
    return [0.0 if abs(x) < 1e-12 * max(abs(lo), abs(hi), 1.0) else float(x) for x in pts]
