"""Factorization of high-degree real-coefficient polynomials.

Coefficients are ordered highest power first (the convention numpy.roots
uses): a trace s_0 .. s_{N-1} interpreted as P(u) = sum_m s_m u^{N-1-m} is
passed as-is. Degrees up to 64 go through companion-matrix eigenvalues;
larger ones use a simultaneous (Aberth-Ehrlich) iteration started on
Newton-polygon circles, with the reversed polynomial evaluated for |z| > 1
so nothing overflows at high degree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RootFindError

#: Degrees at or below this go straight to companion-matrix eigenvalues.
COMPANION_MAX_DEGREE = 64

_STATIONARY_REL = 1e-13     # per-root update size considered "stopped moving"
_RESIDUAL_CHECK_EVERY = 20  # periodic residual-based early exit


@dataclass(frozen=True, eq=False)
class RootSet:
    """Roots of a real polynomial plus the bookkeeping needed to verify them.

    max_residual is the largest scaled residual
    |p(u)| / (||coeffs||_inf * max(1, |u|)^degree) over the returned roots.
    """

    roots: np.ndarray
    leading_coeff: float
    degree: int
    max_residual: float
    iterations: int
    method: str


def _strip_zeros(coeffs: np.ndarray):
    """Split off exact leading/trailing zero coefficients.

    Returns (core, n_zero_roots). Trailing zeros are roots at u = 0 exactly;
    leading zeros only lower the degree.
    """
    nz = np.nonzero(coeffs)[0]
    if nz.size == 0:
        raise RootFindError("all-zero coefficient array")
    n_trail = coeffs.size - 1 - nz[-1]
    return coeffs[nz[0]:nz[-1] + 1], n_trail


def _initial_guesses(coeffs: np.ndarray) -> np.ndarray:
    """Start points on circles sized by the Newton polygon of |coeffs|.

    The upper convex hull of (k, log|a_k|) over ascending powers k gives,
    per hull edge, a cluster radius exp((h1 - h2)/m) carrying m roots; the
    guesses are spread evenly in angle with a fixed offset so they avoid
    the real axis.
    """
    n = coeffs.size - 1
    asc = coeffs[::-1]
    k_idx = np.nonzero(asc)[0]
    logm = np.log(np.abs(asc[k_idx]))
    hull: list[tuple[int, float]] = []
    for k, h in zip(k_idx, logm):
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (k - x2) <= (h - y2) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append((int(k), float(h)))
    guesses = np.empty(n, dtype=complex)
    pos = 0
    for (k1, h1), (k2, h2) in zip(hull[:-1], hull[1:]):
        m = k2 - k1
        radius = np.exp((h1 - h2) / m)
        angles = 2.0 * np.pi * (np.arange(m) + 0.5) / m + 0.7
        guesses[pos:pos + m] = radius * np.exp(1j * angles)
        pos += m
    return guesses


def _newton_ratio(coeffs, dcoeffs, rcoeffs, rdcoeffs, z):
    """p'(z)/p(z), using the reversed polynomial for |z| > 1.

    For |z| > 1, with w = 1/z and q(w) = w^n p(1/w):
    p'(z)/p(z) = n*w - q'(w)*w^2/q(w). Points where p evaluates to exact
    zero are already roots; their ratio is returned as inf so the Aberth
    update leaves them in place.
    """
    n = coeffs.size - 1
    out = np.empty_like(z)
    inner = np.abs(z) <= 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        zi = z[inner]
        p = np.polyval(coeffs, zi)
        out[inner] = np.polyval(dcoeffs, zi) / p
        w = 1.0 / z[~inner]
        q = np.polyval(rcoeffs, w)
        out[~inner] = n * w - np.polyval(rdcoeffs, w) / q * w * w
    exact = np.zeros(z.shape, dtype=bool)
    exact[inner] = p == 0
    exact[~inner] = q == 0
    out[exact] = np.inf
    return out, exact


def _scaled_residuals(coeffs: np.ndarray, roots: np.ndarray) -> np.ndarray:
    """|p(u)| / (||c||_inf * max(1,|u|)^deg), overflow-safe at any degree."""
    coeffs = np.asarray(coeffs, dtype=complex)
    cmax = np.abs(coeffs).max()
    out = np.empty(roots.size)
    inner = np.abs(roots) <= 1.0
    out[inner] = np.abs(np.polyval(coeffs, roots[inner])) / cmax
    # |p(u)|/|u|^n = |q(1/u)| with q the reversed polynomial
    w = 1.0 / roots[~inner]
    out[~inner] = np.abs(np.polyval(coeffs[::-1], w)) / cmax
    return out


def _aberth(coeffs: np.ndarray, tol: float, max_iter: int):
    coeffs = coeffs / np.abs(coeffs).max()
    n = coeffs.size - 1
    dcoeffs = coeffs[:-1] * np.arange(n, 0, -1)
    rcoeffs = coeffs[::-1]
    rdcoeffs = rcoeffs[:-1] * np.arange(n, 0, -1)
    z = _initial_guesses(coeffs)
    best_res = np.inf
    for it in range(1, max_iter + 1):
        ratio, exact = _newton_ratio(coeffs, dcoeffs, rcoeffs, rdcoeffs, z)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            pair_sum = np.sum(1.0 / diff, axis=1) - 1.0
            delta = 1.0 / (ratio - pair_sum)
        delta[exact] = 0.0
        delta[~np.isfinite(delta)] = 0.0
        z = z - delta
        stationary = np.all(
            np.abs(delta) <= _STATIONARY_REL * np.maximum(1.0, np.abs(z))
        )
        if stationary or it % _RESIDUAL_CHECK_EVERY == 0:
            res = _scaled_residuals(coeffs, z).max()
            best_res = min(best_res, res)
            if res <= tol and (stationary or res <= tol * 1e-4):
                return z, it, res
            if stationary:
                return z, it, res
    return z, max_iter, best_res


def factor_polynomial(
    coeffs,
    tol: float = 1e-8,
    max_iter: int = 200,
) -> RootSet:
    """Find all complex roots of a real-coefficient polynomial.

    Parameters
    ----------
    coeffs : array_like
        Real coefficients, highest power first.
    tol : float
        Acceptance threshold on the scaled residual of every root.
    max_iter : int
        Iteration budget for the simultaneous solver.

    Returns
    -------
    RootSet
        Deterministic for a fixed input and configuration.

    Raises
    ------
    RootFindError
        Degree-0 input, or residuals above tol after max_iter iterations
        (the best residual reached is attached to the error).
    """
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.ndim != 1 or coeffs.size == 0:
        raise RootFindError("coefficients must be a non-empty 1-D array")
    core, n_zero_roots = _strip_zeros(coeffs)
    degree = core.size - 1 + n_zero_roots
    if degree == 0:
        raise RootFindError("cannot factor a degree-0 polynomial")

    if core.size - 1 == 0:
        roots = np.zeros(0, dtype=complex)
        iterations = 0
        method = "companion"
    elif core.size - 1 <= COMPANION_MAX_DEGREE:
        roots = np.roots(core)
        iterations = 0
        method = "companion"
    else:
        roots, iterations, _ = _aberth(core.astype(complex), tol, max_iter)
        method = "aberth"

    if n_zero_roots:
        roots = np.concatenate([roots, np.zeros(n_zero_roots, dtype=complex)])
    max_res = float(_scaled_residuals(coeffs, roots).max()) if roots.size else 0.0
    if max_res > tol:
        raise RootFindError(
            f"root finding did not converge: max scaled residual "
            f"{max_res:.3e} > tol {tol:.1e} after {iterations} iterations",
            best_residual=max_res,
        )
    return RootSet(
        roots=roots,
        leading_coeff=float(core[0]),
        degree=degree,
        max_residual=max_res,
        iterations=iterations,
        method=method,
    )


def eval_residuals(coeffs, rootset: RootSet) -> np.ndarray:
    """Scaled residual of each root of a RootSet against coeffs."""
    return _scaled_residuals(np.asarray(coeffs, dtype=float), rootset.roots)


def expand_roots(roots, leading_coeff: float = 1.0) -> np.ndarray:
    """Multiply out leading_coeff * prod(u - u_k), highest power first.

    Conjugate pairs are combined into real quadratics first and the factors
    are merged pairwise (a balanced product tree), which keeps the expansion
    stable enough to reconstruct coefficients at degree ~255.
    """
    roots = np.asarray(roots, dtype=complex)
    factors = []
    used = np.zeros(roots.size, dtype=bool)
    order = np.argsort(roots.imag)
    for i in order:
        if used[i]:
            continue
        u = roots[i]
        if abs(u.imag) < 1e-14 * max(1.0, abs(u)):
            factors.append(np.array([1.0, -u.real]))
            used[i] = True
            continue
        # find the best conjugate partner among unused roots
        cand = np.where(~used)[0]
        cand = cand[cand != i]
        if cand.size:
            j = cand[np.argmin(np.abs(roots[cand] - np.conj(u)))]
        else:
            j = -1
        if j >= 0 and abs(roots[j] - np.conj(u)) <= 1e-6 * max(1.0, abs(u)):
            v = 0.5 * (u + np.conj(roots[j]))
            factors.append(np.array([1.0, -2.0 * v.real, abs(v) ** 2]))
            used[i] = used[j] = True
        else:
            factors.append(np.array([1.0 + 0j, -u]))
            used[i] = True
    # merge factor k with factor k + half rather than its neighbour: paired
    # factors then sit on roughly opposite sides of the root cluster, which
    # keeps intermediate products from growing far beyond the final result
    while len(factors) > 1:
        half = (len(factors) + 1) // 2
        factors = [
            np.convolve(factors[k], factors[k + half])
            if k + half < len(factors)
            else factors[k]
            for k in range(half)
        ]
    out = factors[0] if factors else np.array([1.0])
    if np.iscomplexobj(out) and np.abs(out.imag).max() <= 1e-8 * max(
        1.0, np.abs(out.real).max()
    ):
        out = out.real
    return leading_coeff * out
