"""Symplectic dilations of Gaussian channels.

A dilation of an ``n``-mode channel is a symplectic ``S`` on ``n + k`` modes
together with a pure ``k``-mode environment state ``env_state`` such that::

    S (g + env_state) S^T = [[X g X^T + Y,  *], [*,  complementary output]]

(``+`` being the direct sum). The top-left ``2n x 2n`` block of ``S`` is the
channel's ``X``.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import block_diag, null_space

from .channels import ChannelKind, GaussianChannel, apply, cp_matrix, validate
from .errors import CompletionFailure, InvalidChannel, ShapeMismatch
from .symplectic import (
    direct_sum,
    gaussian_entropy,
    n_modes,
    symplectic_form,
    symplectic_residual,
    thermal_purification,
)
from .tolerances import DEFAULT

RANK_THRESHOLD = 1e-10


@dataclass(frozen=True, eq=False)
class Dilation:
    channel: GaussianChannel
    S: np.ndarray
    env_state: np.ndarray

    @property
    def n_modes(self):
        return self.channel.in_modes

    @property
    def env_modes(self):
        return n_modes(self.env_state)

    @property
    def Z(self):
        n = 2 * self.n_modes
        return self.S[:n, n:]

    @property
    def X_c(self):
        n = 2 * self.n_modes
        return self.S[n:, :n]

    @property
    def Z_c(self):
        n = 2 * self.n_modes
        return self.S[n:, n:]

    def symplectic_residual(self):
        return symplectic_residual(self.S)

    def reconstruction_residual(self, g):
        out = joint_output(self, g).out_block
        return float(np.max(np.abs(out - apply(self.channel, g))))


@dataclass(frozen=True, eq=False)
class JointOutput:
    joint: np.ndarray
    n_out: int

    @property
    def out_block(self):
        m = 2 * self.n_out
        return self.joint[:m, :m]

    @property
    def env_block(self):
        m = 2 * self.n_out
        return self.joint[m:, m:]

    @property
    def cross_block(self):
        m = 2 * self.n_out
        return self.joint[:m, m:]


def _freeze(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def _make(ch, s, env):
    return Dilation(ch, _freeze(s), _freeze(env))


def _beam_splitter(t):
    a, b = np.sqrt(t), np.sqrt(1.0 - t)
    i2 = np.eye(2)
    return np.block([[a * i2, b * i2], [-b * i2, a * i2]])


def _dilate_identity(ch):
    n = ch.in_modes
    return _make(ch, np.eye(2 * n + 2), np.eye(2))


def _dilate_lossy(ch):
    return _make(ch, _beam_splitter(ch.params["T"]), np.eye(2))


def _dilate_thermal(ch):
    t, nbar = ch.params["T"], ch.params["N"]
    s = block_diag(_beam_splitter(t), np.eye(2))
    return _make(ch, s, thermal_purification(2.0 * nbar + 1.0))


def symplectic_gram_schmidt(vectors, form):
    """Symplectic basis of the span of ``vectors`` (columns).

    At each step the pair with the largest pairing magnitude is taken as the
    next ``(e, f)``, normalized so that ``e^T form f = 1``; the remaining
    vectors are projected onto the symplectic complement of the pair.
    Returns the basis as rows ``e1, f1, e2, f2, ...``.
    """
    vecs = [np.asarray(v, dtype=float) for v in np.asarray(vectors).T]
    if len(vecs) % 2:
        raise CompletionFailure("odd-dimensional subspace cannot be symplectic")
    rows = []
    while vecs:
        mat = np.array(vecs)
        pair = mat @ form @ mat.T
        i, j = np.unravel_index(np.argmax(np.abs(pair)), pair.shape)
        p = pair[i, j]
        if abs(p) < 1e-12:
            raise CompletionFailure("subspace is degenerate under the symplectic form", residual=abs(p))
        e, f = vecs[i], vecs[j] / p
        rows.extend([e, f])
        rest = []
        for m, v in enumerate(vecs):
            if m in (i, j):
                continue
            rest.append(v - (v @ form @ f) * e + (v @ form @ e) * f)
        vecs = rest
    return np.array(rows)


def _dilate_general(ch):
    n = ch.in_modes
    m = ch.Y + 1j * cp_matrix(ch)
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    top = w[-1] if w.size else 0.0
    keep = w > RANK_THRESHOLD * top if top > 0 else np.zeros_like(w, dtype=bool)
    cols = v[:, keep] * np.sqrt(w[keep])
    k = max(1, cols.shape[1])
    z = np.zeros((2 * n, 2 * k))
    # column c = z_q - i z_p for each environment mode
    z[:, 0 : 2 * cols.shape[1] : 2] = cols.real
    z[:, 1 : 2 * cols.shape[1] : 2] = -cols.imag
    first = np.hstack([ch.X, z])
    form = symplectic_form(n + k)
    complement = null_space(first @ form)
    if complement.shape[1] != 2 * k:
        raise CompletionFailure(
            f"symplectic complement has dimension {complement.shape[1]}, expected {2 * k}",
            residual=float(np.max(np.abs(first @ form @ first.T - symplectic_form(n)))),
        )
    s = np.vstack([first, symplectic_gram_schmidt(complement, form)])
    residual = symplectic_residual(s)
    if residual > 1e-6 * (1.0 + np.max(np.abs(s)) ** 2):
        raise CompletionFailure(f"completed matrix is not symplectic (residual {residual:.3g})", residual=residual)
    return _make(ch, s, np.eye(2 * k))


def dilate(ch, method="auto"):
    """Build a dilation of a valid square channel.

    ``method="auto"`` uses closed forms for named channels and assembles
    tensor products factor by factor; ``method="general"`` always uses the
    factorization of ``Y + i(J - X J X^T)`` followed by symplectic completion,
    with a vacuum environment.
    """
    if not ch.is_square:
        raise ShapeMismatch("only square channels can be dilated")
    check = validate(ch)
    if not check:
        raise InvalidChannel(f"channel is not completely positive (min eigenvalue {check.min_eigenvalue:.3g})")
    if method == "general":
        return _dilate_general(ch)
    if method != "auto":
        raise ValueError(f"unknown dilation method {method!r}")
    if ch.parts:
        return tensor_dilation(*[dilate(p) for p in ch.parts], channel=ch)
    if ch.kind is ChannelKind.IDENTITY:
        return _dilate_identity(ch)
    if ch.kind is ChannelKind.LOSSY:
        return _dilate_lossy(ch)
    if ch.kind is ChannelKind.THERMAL_ATTENUATOR:
        return _dilate_thermal(ch)
    return _dilate_general(ch)


def tensor_dilation(*dils, channel=None):
    """Dilation of a tensor product from dilations of its factors.

    Mode order of the result: all system modes (factor order), then all
    environment modes (factor order).
    """
    if channel is None:
        from .channels import tensor

        channel = tensor(*[d.channel for d in dils])
    sys_idx, env_idx = [], []
    offset = 0
    for d in dils:
        ns, ne = 2 * d.n_modes, 2 * d.env_modes
        sys_idx.extend(range(offset, offset + ns))
        env_idx.extend(range(offset + ns, offset + ns + ne))
        offset += ns + ne
    order = sys_idx + env_idx
    s = block_diag(*[d.S for d in dils])[np.ix_(order, order)]
    env = direct_sum(*[d.env_state for d in dils])
    return _make(channel, s, env)


def with_env_transform(d, s_env):
    """Same channel, environment outputs post-processed by the symplectic ``s_env``."""
    n = 2 * d.n_modes
    s = block_diag(np.eye(n), s_env) @ d.S
    return _make(d.channel, s, d.env_state)


def joint_output(d, g):
    g = np.asarray(g, dtype=float)
    if n_modes(g) != d.n_modes:
        raise ShapeMismatch(f"dilation takes {d.n_modes} modes, state has {n_modes(g)}")
    joint = d.S @ direct_sum(g, d.env_state) @ d.S.T
    return JointOutput(0.5 * (joint + joint.T), d.n_modes)


def complementary_entropy(d, g, tol=DEFAULT.eig):
    """Entropy (bits) of the environment output."""
    return gaussian_entropy(joint_output(d, g).env_block, tol)
