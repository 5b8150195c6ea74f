"""Schmidt decomposition of a sampled biphoton amplitude through the SVD."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .biphoton import BiphotonMatrix, KGrid

DEGENERACY_TOL = 1e-12
NORMALIZATION_TOL = 1e-10


@dataclass(frozen=True)
class SVD:
    """``A = U @ diag(d) @ V.conj().T`` with ``d`` descending."""

    U: np.ndarray
    d: np.ndarray
    V: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.U * self.d) @ self.V.conj().T


def _jacobi_pairs(n: int):
    """Round-robin schedule: n-1 rounds (n even) of disjoint column pairs."""
    m = n + (n % 2)
    players = list(range(m))
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        yield [(a, b) if a < b else (b, a) for a, b in pairs if a < n and b < n]
        players = [players[0]] + [players[-1]] + players[1:-1]


def jacobi_svd(a: np.ndarray, tol: float = 1e-15, max_sweeps: int = 60) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """One-sided (Hestenes) Jacobi SVD for a tall complex matrix.

    Each round rotates a set of disjoint column pairs at once, so a sweep costs
    n-1 vectorized updates. Returns unsorted ``(U, d, V)``.
    """
    w = np.array(a, dtype=complex, copy=True)
    m, n = w.shape
    v = np.eye(n, dtype=complex)
    schedule = [np.array(p, dtype=int).reshape(-1, 2) for p in _jacobi_pairs(n)]
    # couplings below this are roundoff between numerically null columns
    floor = (np.finfo(float).eps * np.linalg.norm(w)) ** 2
    for _ in range(max_sweeps):
        off = 0.0
        for pairs in schedule:
            if not len(pairs):
                continue
            i, j = pairs[:, 0], pairs[:, 1]
            wi, wj = w[:, i], w[:, j]
            alpha = np.sum(np.abs(wi) ** 2, axis=0)
            beta = np.sum(np.abs(wj) ** 2, axis=0)
            gamma = np.sum(wi.conj() * wj, axis=0)
            g = np.abs(gamma)
            scale = np.sqrt(alpha * beta)
            active = (g > tol * scale) & (g > floor)
            if not active.any():
                continue
            off = max(off, float(np.max(g[active] / scale[active])))
            i, j, alpha, beta, gamma, g = i[active], j[active], alpha[active], beta[active], gamma[active], g[active]
            phase = gamma / g
            zeta = (beta - alpha) / (2 * g)
            t = np.where(zeta >= 0, 1.0, -1.0) / (np.abs(zeta) + np.sqrt(1 + zeta**2))
            cs = 1 / np.sqrt(1 + t**2)
            sn = cs * t
            for mat in (w, v):
                ci = mat[:, i]
                cj = mat[:, j] * phase.conj()
                mat[:, i] = cs * ci - sn * cj
                mat[:, j] = (sn * ci + cs * cj) * phase
        if off <= tol:
            break
    d = np.linalg.norm(w, axis=0)
    u = np.zeros_like(w)
    nz = d > 0
    u[:, nz] = w[:, nz] / d[nz]
    return u, d, v


def _phase_fix(U: np.ndarray, V: np.ndarray) -> None:
    """Make the largest-magnitude entry of each U column real positive; compensate V.

    Entries within a relative 1e-8 of the maximum count as tied and the lowest
    index wins, so mirror-symmetric modes get the same phase from any backend.
    """
    mags = np.abs(U)
    idx = np.argmax(mags >= (1 - 1e-8) * mags.max(axis=0), axis=0)
    top = U[idx, np.arange(U.shape[1])]
    ph = np.where(np.abs(top) > 0, top / np.where(np.abs(top) > 0, np.abs(top), 1), 1.0)
    U *= ph.conj()
    V *= ph.conj()


def _order(U: np.ndarray, d: np.ndarray) -> np.ndarray:
    """Descending singular values; near-ties ordered by the phase of each U column's first nonzero entry."""
    order = list(np.argsort(-d, kind="stable"))
    d1 = d[order[0]] if len(order) else 0.0
    keys = []
    for col in range(U.shape[1]):
        mags = np.abs(U[:, col])
        nz = np.flatnonzero(mags > 1e-8 * (mags.max() if mags.size else 0))
        first = nz[0] if nz.size else 0
        keys.append((float(np.angle(U[first, col])), int(first)))
    out, start = [], 0
    while start < len(order):
        stop = start + 1
        while stop < len(order) and d[order[start]] - d[order[stop]] < DEGENERACY_TOL * d1:
            stop += 1
        out.extend(sorted(order[start:stop], key=lambda c: keys[c]))
        start = stop
    return np.array(out, dtype=int)


def svd(a: np.ndarray, method: str = "lapack") -> SVD:
    """Thin SVD with a fixed phase and ordering convention.

    ``method`` is ``"lapack"`` (divide and conquer via numpy) or ``"jacobi"``.
    """
    a = np.asarray(a)
    if not np.all(np.isfinite(a)):
        raise FloatingPointError("svd input contains non-finite entries")
    a = a.astype(complex)
    if method == "lapack":
        U, d, Vh = np.linalg.svd(a, full_matrices=False)
        V = Vh.conj().T
    elif method == "jacobi":
        if a.shape[0] >= a.shape[1]:
            U, d, V = jacobi_svd(a)
        else:
            V, d, U = jacobi_svd(a.conj().T)
    else:
        raise ValueError(f"unknown svd method {method!r}")
    U, V = U.copy(), V.copy()
    _phase_fix(U, V)
    order = _order(U, d)
    return SVD(U[:, order], d[order], V[:, order])


@dataclass(frozen=True)
class SchmidtDecomposition:
    """Schmidt weights and sampled mode functions on a :class:`KGrid`.

    ``mu[:, l]`` samples mu_l on ``grid.k1`` and ``nu[:, l]`` samples nu_l on
    ``grid.k2``; both are normalized so that ``sum |mu_l|^2 dk = 1``.
    """

    p: np.ndarray
    mu: np.ndarray = field(repr=False)
    nu: np.ndarray = field(repr=False)
    beta: float
    grid: KGrid = field(repr=False)
    trunc_tol: float = 1e-12
    p_total: float = 1.0

    @property
    def r(self) -> np.ndarray:
        return self.beta * np.sqrt(self.p)

    @property
    def dk(self) -> float:
        return self.grid.dk

    @property
    def schmidt_number(self) -> float:
        return float(1.0 / np.sum(self.p**2))

    @property
    def rank(self) -> int:
        return len(self.p)

    def truncated(self, n_modes: int) -> "SchmidtDecomposition":
        return SchmidtDecomposition(
            self.p[:n_modes], self.mu[:, :n_modes], self.nu[:, :n_modes],
            self.beta, self.grid, self.trunc_tol, self.p_total,
        )


def schmidt_decompose(
    phi: BiphotonMatrix, beta_squeeze: float, trunc_tol: float = 1e-12, method: str = "lapack"
) -> SchmidtDecomposition:
    if abs(phi.norm - 1) > NORMALIZATION_TOL:
        raise ValueError(f"biphoton matrix is not normalized (norm = {phi.norm!r})")
    dk = phi.grid.dk
    res = svd(phi.values, method=method)
    p_all = res.d**2 * dk**2
    keep = p_all >= trunc_tol * p_all[0]
    keep &= p_all > 0
    mu = res.U[:, keep] / math.sqrt(dk)
    nu = res.V[:, keep].conj() / math.sqrt(dk)
    return SchmidtDecomposition(
        p=p_all[keep], mu=mu, nu=nu, beta=float(beta_squeeze), grid=phi.grid,
        trunc_tol=trunc_tol, p_total=float(p_all.sum()),
    )


def reconstruct(dec: SchmidtDecomposition) -> np.ndarray:
    """Resample ``sum_l sqrt(p_l) mu_l(k1) nu_l(k2)`` on the grid."""
    return (dec.mu * np.sqrt(dec.p)) @ dec.nu.T
