"""Truncated Fock-space matrices and quadrature: an independent check layer.

Nothing here uses the polynomial families except :func:`verify_eq35`,
which compares the family's oscillator-basis expansion against columns
of the truncated similarity transform ``S = exp(M)``.
"""

import math

import numpy as np

from .core import coefficient_set, combined_width, make_parameters
from .errors import ConvergenceError, DomainError, ToleranceError
from .family import build_family, hermite_expansion

EPS = np.finfo(float).eps
DEFAULT_BLOCK = 20


def annihilation_matrix(D):
    """``a`` on the first ``D`` number states: ``a[n, n+1] = sqrt(n+1)``."""
    return np.diag(np.sqrt(np.arange(1, D, dtype=float)), 1).astype(complex)


def creation_matrix(D):
    return annihilation_matrix(D).conj().T


def generator_matrix(p, D):
    """``M = eps a^dag a + eta a^2 + conj(eta) a^dag^2`` truncated to ``D`` levels."""
    a = annihilation_matrix(D)
    ad = a.conj().T
    eta = complex(p.eta)
    return p.epsilon * (ad @ a) + eta * (a @ a) + eta.conjugate() * (ad @ ad)


def matrix_exponential(M, tol=EPS, max_terms=60):
    """Scaling and squaring with a Taylor kernel.

    ``M`` is scaled by ``2**-s`` until its 1-norm is at most 1/2; the series
    is summed until the remainder bound drops below ``tol`` relative to the
    partial sum, then squared back ``s`` times.
    """
    M = np.asarray(M, dtype=complex)
    if not np.all(np.isfinite(M)):
        raise ConvergenceError("matrix has non-finite entries")
    n = M.shape[0]
    nrm = np.abs(M).sum(axis=0).max() if n else 0.0
    s = max(0, int(math.ceil(math.log2(nrm / 0.5)))) if nrm > 0.5 else 0
    X = M / (2.0 ** s)
    x = nrm / (2.0 ** s)
    result = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    for k in range(1, max_terms + 1):
        term = term @ X / k
        result = result + term
        tnorm = np.abs(term).sum(axis=0).max()
        ratio = x / (k + 2)
        tail = tnorm * ratio / (1.0 - ratio)
        if tail <= tol * np.abs(result).sum(axis=0).max():
            break
    else:
        raise ConvergenceError(f"Taylor kernel did not reach tol={tol} in {max_terms} terms")
    for _ in range(s):
        result = result @ result
    if not np.all(np.isfinite(result)):
        raise ConvergenceError("matrix exponential overflowed")
    return result


def _block_residual(X, Y, block):
    """Max-entry gap on the leading block, absolute and relative to the entry scale."""
    Xb, Yb = X[:block, :block], Y[:block, :block]
    absolute = float(np.abs(Xb - Yb).max())
    scale = max(1.0, float(np.abs(Xb).max()), float(np.abs(Yb).max()))
    return absolute / scale, absolute


def _check_block(D, block):
    if block < 1 or 3 * block > D:
        raise DomainError(f"interior block {block} must satisfy 1 <= block <= D/3 (D={D})")


def similarity_pair(p, D):
    M = generator_matrix(p, D)
    return matrix_exponential(M), matrix_exponential(-M)


def inverse_residual(p, D, block=None):
    """``exp(M) exp(-M) - I``: ``(interior-block max, full-matrix max)``.

    The full-matrix value is limited by the condition number of the
    truncated ``exp(M)`` (above 1e15 at ``D = 80``) and is reported only.
    The block defaults to the oracle block of 20, capped at ``D/3``.
    """
    block = min(DEFAULT_BLOCK, D // 3) if block is None else block
    _check_block(D, block)
    S, Si = similarity_pair(p, D)
    E = S @ Si - np.eye(D)
    return float(np.abs(E[:block, :block]).max()), float(np.abs(E).max())


def verify_eq31(p, D=80, block=20):
    """Compare ``S a S^-1`` and ``S a^dag S^-1`` with ``kA1 a + kA2 a^dag``, ``kB1 a + kB2 a^dag``.

    Returns a dict with relative (``resA``, ``resB``) and absolute residuals
    on the leading ``block x block`` submatrix.
    """
    _check_block(D, block)
    c = coefficient_set(p)
    a = annihilation_matrix(D)
    ad = a.conj().T
    S, Si = similarity_pair(p, D)
    resA, absA = _block_residual(S @ a @ Si, c.kA1 * a + c.kA2 * ad, block)
    resB, absB = _block_residual(S @ ad @ Si, c.kB1 * a + c.kB2 * ad, block)
    return {"resA": resA, "resB": resB, "absA": absA, "absB": absB, "dim": D, "block": block}


ROUNDING_FLOOR = 1e-12


def eq31_convergence(p, dims=(40, 60, 80), block=12, floor=ROUNDING_FLOOR):
    """Conjugation residuals at several truncations on a fixed block.

    Residuals are clamped at ``floor`` before testing monotonicity: once the
    truncation error is gone, what is left is rounding in products with
    ``exp(M)``, and that grows with ``D``.
    """
    rows = [verify_eq31(p, D, block) for D in dims]
    worst = [max(r["resA"], r["resB"]) for r in rows]
    clamped = [max(r, floor) for r in worst]
    ok = all(b <= a for a, b in zip(clamped, clamped[1:]))
    return {"dims": list(dims), "block": block, "residuals": worst,
            "rounding_floor": floor, "non_increasing": ok}


def verify_eq35(p, D=80, n_max=8):
    """Single-constant link ``phi_n = g S Phi_n`` and ``Psi_n = S^-1 Phi_n / conj(g)``.

    ``g`` is fitted once by least squares on the ``n = 0`` column and then
    held fixed.  The Psi side uses ``1/conj(g)``, which is what
    ``<Psi_0, phi_0> = 1`` and self-adjointness of ``S`` require; for real
    ``eta`` the constant is real and this is ``1/g``.
    """
    if n_max < 0 or 4 * n_max > D:
        raise DomainError(f"n_max={n_max} must satisfy 0 <= n_max <= D/4 (D={D})")
    fam = build_family(p, n_max)
    S, Si = similarity_pair(p, D)
    v = [hermite_expansion(fam.phi[n], D) for n in range(n_max + 1)]
    u = [hermite_expansion(fam.psi[n], D) for n in range(n_max + 1)]
    w0 = S[:, 0]
    gamma = complex(np.vdot(w0, v[0]) / np.vdot(w0, w0))
    dev_phi, dev_psi, spread = [], [], []
    for n in range(n_max + 1):
        wn, zn = S[:, n], Si[:, n]
        dev_phi.append(float(np.linalg.norm(v[n] - gamma * wn) / np.linalg.norm(v[n])))
        dev_psi.append(
            float(np.linalg.norm(u[n] - zn / gamma.conjugate()) / np.linalg.norm(u[n]))
        )
        gn = np.vdot(wn, v[n]) / np.vdot(wn, wn)
        spread.append(float(abs(gn - gamma) / abs(gamma)))
    return {
        "gamma": gamma,
        "phi_deviation": max(dev_phi),
        "psi_deviation": max(dev_psi),
        "gamma_spread": max(spread),
        "phi_deviations": dev_phi,
        "psi_deviations": dev_psi,
        "dim": D,
        "n_max": n_max,
    }


def verify_intertwining(p, D=80, block=20, omega=1.0):
    """``H S = S h`` and ``S H^dag = h S`` with ``H = omega B A``, ``h = omega a^dag a``."""
    _check_block(D, block)
    c = coefficient_set(p)
    a = annihilation_matrix(D)
    ad = a.conj().T
    A = c.kA1 * a + c.kA2 * ad
    B = c.kB1 * a + c.kB2 * ad
    H = omega * (B @ A)
    h = omega * (ad @ a)
    S, _ = similarity_pair(p, D)
    r1, a1 = _block_residual(H @ S, S @ h, block)
    r2, a2 = _block_residual(S @ H.conj().T, h @ S, block)
    return {"HS_Sh": r1, "SHdag_hS": r2, "abs_HS_Sh": a1, "abs_SHdag_hS": a2,
            "dim": D, "block": block, "omega": omega}


# -- quadrature -------------------------------------------------------------

_GL_ORDER = 20


def quadrature_integral(func, half_width, nodes=800):
    """Composite Gauss-Legendre integral of ``func`` over ``[-L, L]``.

    ``nodes`` is rounded up to whole 20-point panels.
    """
    panels = max(1, -(-nodes // _GL_ORDER))
    t, wt = np.polynomial.legendre.leggauss(_GL_ORDER)
    edges = np.linspace(-half_width, half_width, panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    rad = 0.5 * (edges[1:] - edges[:-1])
    x = (mid[:, None] + rad[:, None] * t[None, :]).ravel()
    w = (rad[:, None] * wt[None, :]).ravel()
    vals = func(x)
    return complex(np.dot(w, vals)), x, w, vals


def _tail_ratio(f, g, L, C, total_abs):
    edge = max(abs(complex(np.conj(f(L)) * g(L))), abs(complex(np.conj(f(-L)) * g(-L))))
    # Gaussian tail beyond L is bounded by about edge / (2 Re C L)
    return edge / (2.0 * C.real * L) / max(total_abs, 1e-300)


def quadrature_inner_product(f, g, half_width=None, nodes=800, tail_tol=1e-16):
    """``<f, g>`` by composite quadrature; an oracle for the closed-form route.

    With ``half_width=None`` the interval starts at ``sqrt(80 / Re C)`` and
    widens until the estimated tail is below ``tail_tol``; an explicit
    ``half_width`` that leaves a larger tail raises :class:`ToleranceError`.
    """
    C = combined_width(f, g)
    if not C.real > 0.0:
        raise DomainError(f"combined width {C!r} is not integrable")

    def integrand(x):
        return np.conj(f(x)) * g(x)

    auto = half_width is None
    L = math.sqrt(2.0 * 40.0 / C.real) if auto else float(half_width)
    for _ in range(40):
        val, _, w, vals = quadrature_integral(integrand, L, nodes)
        total_abs = float(np.dot(w, np.abs(vals)))
        ratio = _tail_ratio(f, g, L, C, total_abs)
        if ratio <= tail_tol:
            return val
        if not auto:
            break
        L *= 1.25
        nodes = int(nodes * 1.25)
    raise ToleranceError(f"integrand tail ratio {ratio:.2e} above {tail_tol:.0e} at L={L:.3g}")


def hermite_function_values(m_max, x):
    """Rows ``Phi_0(x) .. Phi_{m_max}(x)`` by the normalised three-term recurrence."""
    x = np.asarray(x, dtype=float)
    out = np.empty((m_max + 1,) + x.shape)
    out[0] = math.pi ** -0.25 * np.exp(-0.5 * x * x)
    if m_max >= 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for m in range(1, m_max):
        out[m + 1] = math.sqrt(2.0 / (m + 1)) * x * out[m] - math.sqrt(m / (m + 1)) * out[m - 1]
    return out


def quadrature_hermite_expansion(g, M, half_width=None, nodes=1600):
    """``<Phi_m, g>`` for ``m < M`` by quadrature (oracle for ``hermite_expansion``)."""
    L = half_width or max(math.sqrt(2.0 * 40.0 / min(complex(g.width).real, 1.0)),
                          math.sqrt(2.0 * M + 1.0) + 8.0)
    _, x, w, gv = quadrature_integral(g, L, nodes)
    Phi = hermite_function_values(M - 1, x)
    return Phi @ (w * gv)


def oracle_summary(epsilon, eta, D=80, block=20, n_max=8, omega=1.0):
    p = make_parameters(epsilon, eta)
    return {
        "eq31": verify_eq31(p, D, block),
        "eq35": verify_eq35(p, D, n_max),
        "intertwining": verify_intertwining(p, D, block, omega),
    }

