"""Symplectic linear algebra and Gaussian entropies.

Conventions used throughout the package:

* quadratures are interleaved, ``(q1, p1, q2, p2, ...)``;
* covariance matrices are vacuum-normalized: the vacuum of one mode is the
  2x2 identity, a thermal mode with mean photon number ``n`` is
  ``(2n + 1) * I``, and every symplectic eigenvalue of a physical state is
  at least 1.

Covariance and symplectic matrices are plain ``numpy`` arrays; the
``check_*`` helpers enforce their invariants where a caller needs it.
"""

import numpy as np
from scipy.linalg import block_diag, schur

from .errors import NonConvergence, ShapeMismatch, UnphysicalState
from .tolerances import DEFAULT

_OMEGA = np.array([[0.0, 1.0], [-1.0, 0.0]])


def symplectic_form(n):
    """Return ``J(n)``, the direct sum of ``n`` copies of ``[[0, 1], [-1, 0]]``."""
    if n < 0:
        raise ValueError(f"mode count must be nonnegative, got {n}")
    return np.kron(np.eye(n), _OMEGA)


def n_modes(m):
    """Number of modes of a square ``2n x 2n`` matrix."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
        raise ShapeMismatch(f"expected a square matrix of even size, got shape {m.shape}")
    return m.shape[0] // 2


def direct_sum(*blocks):
    """Block-diagonal assembly of covariance matrices, modes in argument order."""
    return block_diag(*[np.asarray(b, dtype=float) for b in blocks])


def is_symmetric(m, tol=DEFAULT.sym):
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and bool(np.max(np.abs(m - m.T), initial=0.0) <= tol)


def psd_margin(real_part, imag_part):
    """Smallest eigenvalue of the Hermitian matrix ``R + iK``.

    Computed from the real embedding ``[[R, -K], [K, R]]``, whose spectrum is
    that of ``R + iK`` with each eigenvalue repeated twice.
    """
    r = np.asarray(real_part, dtype=float)
    k = np.asarray(imag_part, dtype=float)
    if r.ndim != 2 or r.shape[0] != r.shape[1] or r.shape != k.shape:
        raise ShapeMismatch(f"real and imaginary parts must be equal square matrices, got {r.shape} and {k.shape}")
    emb = np.block([[r, -k], [k, r]])
    emb = 0.5 * (emb + emb.T)
    return float(np.linalg.eigvalsh(emb)[0])


def is_psd_hermitian(real_part, imag_part, tol=DEFAULT.psd):
    """True iff ``real_part + i * imag_part`` is positive semidefinite.

    ``real_part`` must be symmetric and ``imag_part`` antisymmetric. The test
    allows a relative slack ``tol * (1 + max|entry|)``.
    """
    margin = psd_margin(real_part, imag_part)
    scale = 1.0 + max(np.max(np.abs(real_part), initial=0.0), np.max(np.abs(imag_part), initial=0.0))
    return bool(margin >= -tol * scale)


def is_physical(g, tol=DEFAULT.psd):
    """Uncertainty relation ``g + iJ >= 0``."""
    g = np.asarray(g, dtype=float)
    return is_symmetric(g, max(DEFAULT.sym, DEFAULT.sym * np.max(np.abs(g)))) and is_psd_hermitian(
        g, symplectic_form(n_modes(g)), tol
    )


def check_covariance(g):
    """Return ``g`` as a float array after checking shape, symmetry and physicality."""
    g = np.asarray(g, dtype=float)
    n_modes(g)
    if not is_symmetric(g, max(DEFAULT.sym, DEFAULT.sym * np.max(np.abs(g)))):
        raise UnphysicalState("covariance matrix is not symmetric")
    if not is_psd_hermitian(g, symplectic_form(n_modes(g))):
        raise UnphysicalState("covariance matrix violates the uncertainty relation g + iJ >= 0")
    return g


def symplectic_residual(s):
    """``max|S J S^T - J|``."""
    s = np.asarray(s, dtype=float)
    j = symplectic_form(n_modes(s))
    return float(np.max(np.abs(s @ j @ s.T - j)))


def is_symplectic(s, tol=DEFAULT.symp):
    return symplectic_residual(s) <= tol


def symplectic_eigenvalues(g):
    """Symplectic spectrum of ``g``, sorted descending.

    The eigenvalues of ``J g`` come in pairs ``+-i*lam``; each pair yields one
    value ``lam >= 0``.
    """
    g = np.asarray(g, dtype=float)
    n = n_modes(g)
    if n == 0:
        return np.zeros(0)
    try:
        ev = np.linalg.eigvals(symplectic_form(n) @ g)
    except np.linalg.LinAlgError as exc:
        raise NonConvergence(f"eigenvalue solver failed: {exc}") from exc
    mags = np.sort(np.abs(ev.imag))[::-1]
    upper, lower = mags[0::2], mags[1::2]
    residual = float(np.max(np.abs(upper - lower)))
    if not np.all(np.isfinite(mags)) or residual > 1e-6 * (1.0 + mags[0]):
        raise NonConvergence("eigenvalues of J g do not pair into conjugates", residual=residual)
    return np.maximum(0.5 * (upper + lower), 0.0)


def entropy_terms(lams, tol=DEFAULT.eig):
    """Per-mode entropies in bits for symplectic eigenvalues ``lams``."""
    lams = np.asarray(lams, dtype=float)
    if np.any(lams < 1.0 - tol):
        raise UnphysicalState(f"symplectic eigenvalue {lams.min():.12g} below 1")
    lams = np.maximum(lams, 1.0)
    plus = 0.5 * (lams + 1.0)
    minus = 0.5 * (lams - 1.0)
    mixed = lams > 1.0 + tol
    out = plus * np.log2(plus)
    out[mixed] -= minus[mixed] * np.log2(minus[mixed])
    return out


def thermal_entropy(nbar):
    """Entropy in bits of a thermal mode with mean photon number ``nbar``."""
    return float(entropy_terms([2.0 * nbar + 1.0])[0])


def gaussian_entropy(g, tol=DEFAULT.eig):
    """Von Neumann entropy (bits) of the zero-mean Gaussian state with covariance ``g``."""
    return float(np.sum(entropy_terms(symplectic_eigenvalues(g), tol)))


def two_mode_squeezed(r):
    """Covariance of the two-mode squeezed vacuum with squeezing ``r``."""
    c, s = np.cosh(2 * r), np.sinh(2 * r)
    z = np.diag([s, -s])
    return np.block([[c * np.eye(2), z], [z, c * np.eye(2)]])


def thermal_purification(lam):
    """Pure two-mode state whose first mode is thermal with symplectic eigenvalue ``lam``."""
    if lam < 1.0:
        raise UnphysicalState(f"thermal eigenvalue {lam} below 1")
    s = np.sqrt(lam * lam - 1.0)
    z = np.diag([s, -s])
    return np.block([[lam * np.eye(2), z], [z, lam * np.eye(2)]])


def williamson(g):
    """Williamson decomposition ``g = S diag(lam, lam, ...) S^T``.

    Returns ``(lams, S)`` with ``S`` symplectic. Requires ``g`` positive
    definite.
    """
    g = np.asarray(g, dtype=float)
    n = n_modes(g)
    w, v = np.linalg.eigh(0.5 * (g + g.T))
    if w[0] <= 0:
        raise UnphysicalState("Williamson decomposition needs a positive definite matrix")
    root = (v * np.sqrt(w)) @ v.T
    inv_root = (v / np.sqrt(w)) @ v.T
    # inv_root J inv_root is antisymmetric; its real Schur form is block diagonal
    a = inv_root @ symplectic_form(n) @ inv_root
    t, q = schur(0.5 * (a - a.T), output="real")
    basis = np.zeros_like(q)
    lams = np.zeros(n)
    for k in range(n):
        d = t[2 * k, 2 * k + 1]
        e, f = q[:, 2 * k], q[:, 2 * k + 1]
        if d < 0:
            e, f, d = f, e, -d
        basis[:, 2 * k], basis[:, 2 * k + 1] = e, f
        lams[k] = 1.0 / d
    s = root @ basis @ np.diag(np.repeat(1.0 / np.sqrt(lams), 2))
    return lams, s
