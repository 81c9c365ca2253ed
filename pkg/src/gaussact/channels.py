"""Gaussian channels acting on covariance matrices as ``g -> X g X^T + Y``."""

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import block_diag

from .errors import DomainError, ShapeMismatch
from .symplectic import (
    direct_sum,
    is_psd_hermitian,
    n_modes,
    psd_margin,
    symplectic_form,
    two_mode_squeezed,
)
from .tolerances import DEFAULT


class ChannelKind(enum.Enum):
    LOSSY = "lossy"
    THERMAL_ATTENUATOR = "thermal"
    SSY_PPT = "ssy-ppt"
    IDENTITY = "identity"
    CUSTOM = "custom"


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class GaussianChannel:
    """Zero-mean Gaussian channel given by the pair ``(X, Y)``.

    ``kind`` and ``params`` record how a named channel was built; ``parts``
    holds the factors of a channel produced by :func:`tensor`. Construction
    does not validate; call :func:`validate`.
    """

    X: np.ndarray
    Y: np.ndarray
    kind: ChannelKind = ChannelKind.CUSTOM
    params: dict = field(default_factory=dict)
    parts: tuple = ()

    def __post_init__(self):
        x, y = _frozen(self.X), _frozen(self.Y)
        if x.ndim != 2 or x.shape[0] % 2 or x.shape[1] % 2:
            raise ShapeMismatch(f"X must be 2*out x 2*in, got {x.shape}")
        if y.shape != (x.shape[0], x.shape[0]):
            raise ShapeMismatch(f"Y must be {x.shape[0]}x{x.shape[0]}, got {y.shape}")
        object.__setattr__(self, "X", x)
        object.__setattr__(self, "Y", y)

    @property
    def in_modes(self):
        return self.X.shape[1] // 2

    @property
    def out_modes(self):
        return self.X.shape[0] // 2

    @property
    def is_square(self):
        return self.in_modes == self.out_modes

    def __repr__(self):
        label = self.kind.value
        if self.params:
            label += "(" + ", ".join(f"{k}={v!r}" for k, v in self.params.items()) + ")"
        return f"GaussianChannel<{label}, {self.in_modes}->{self.out_modes}>"

    def __call__(self, g):
        return apply(self, g)


@dataclass(frozen=True)
class Validity:
    """Outcome of :func:`validate`; truthy iff the channel is completely positive."""

    valid: bool
    min_eigenvalue: float

    def __bool__(self):
        return bool(self.valid)


def apply(ch, g):
    g = np.asarray(g, dtype=float)
    if n_modes(g) != ch.in_modes:
        raise ShapeMismatch(f"channel takes {ch.in_modes} modes, state has {n_modes(g)}")
    return ch.X @ g @ ch.X.T + ch.Y


def cp_matrix(ch):
    """Imaginary part ``J_out - X J_in X^T`` of the complete-positivity condition."""
    return symplectic_form(ch.out_modes) - ch.X @ symplectic_form(ch.in_modes) @ ch.X.T


def validate(ch, tol=DEFAULT.psd):
    """Check ``Y + i(J - X J X^T) >= 0``."""
    if np.max(np.abs(ch.Y - ch.Y.T), initial=0.0) > DEFAULT.sym:
        return Validity(False, float("nan"))
    k = cp_matrix(ch)
    return Validity(is_psd_hermitian(ch.Y, k, tol), psd_margin(ch.Y, k))


def _flatten(ch):
    return ch.parts if ch.parts else (ch,)


def tensor(*chans):
    """Parallel composition; modes are ordered as the arguments."""
    if not chans:
        raise ValueError("tensor needs at least one channel")
    if len(chans) == 1:
        return chans[0]
    parts = tuple(p for c in chans for p in _flatten(c))
    x = block_diag(*[c.X for c in chans])
    y = block_diag(*[c.Y for c in chans])
    return GaussianChannel(x, y, ChannelKind.CUSTOM, {}, parts)


def compose(after, before):
    """Serial composition: ``before`` acts first."""
    if before.out_modes != after.in_modes:
        raise ShapeMismatch(f"cannot feed {before.out_modes} output modes into {after.in_modes} input modes")
    x = after.X @ before.X
    y = after.X @ before.Y @ after.X.T + after.Y
    return GaussianChannel(x, y)


def _check_transmissivity(t):
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"transmissivity must lie in [0, 1], got {t}")


def make_identity(n=1):
    return GaussianChannel(np.eye(2 * n), np.zeros((2 * n, 2 * n)), ChannelKind.IDENTITY, {"n": n})


def make_lossy(T):
    """Pure-loss channel: a beam splitter of transmissivity ``T`` mixing in vacuum."""
    _check_transmissivity(T)
    return GaussianChannel(np.sqrt(T) * np.eye(2), (1.0 - T) * np.eye(2), ChannelKind.LOSSY, {"T": T})


def make_thermal_attenuator(T, N):
    """Beam splitter of transmissivity ``T`` mixing in a thermal mode with ``N`` mean photons."""
    _check_transmissivity(T)
    if not N >= 0.0:
        raise DomainError(f"thermal photon number must be nonnegative, got {N}")
    y = (1.0 - T) * (2.0 * N + 1.0) * np.eye(2)
    return GaussianChannel(np.sqrt(T) * np.eye(2), y, ChannelKind.THERMAL_ATTENUATOR, {"T": T, "N": N})


def make_ssy_ppt():
    """Two-mode PPT (entanglement-binding) channel of Smith, Smolin and Yard."""
    r2 = np.sqrt(2.0)
    x = np.array(
        [
            [r2, 0.0, 1.0, 0.0],
            [0.0, -r2, 0.0, 1.0],
            [-1.0, 0.0, 0.0, 0.0],
            [0.0, -1.0, 0.0, 0.0],
        ]
    )
    y = np.array(
        [
            [2.0, 0.0, -r2, 0.0],
            [0.0, 2.0, 0.0, r2],
            [-r2, 0.0, 2.0, 0.0],
            [0.0, r2, 0.0, 2.0],
        ]
    )
    return GaussianChannel(x, y, ChannelKind.SSY_PPT)


def make_channel(kind, T=None, N=0.0, n=1):
    """Named constructor dispatch used by the CLI."""
    kind = ChannelKind(kind)
    if kind is ChannelKind.LOSSY:
        return make_lossy(T)
    if kind is ChannelKind.THERMAL_ATTENUATOR:
        return make_thermal_attenuator(T, N)
    if kind is ChannelKind.SSY_PPT:
        return make_ssy_ppt()
    if kind is ChannelKind.IDENTITY:
        return make_identity(n)
    raise DomainError("custom channels need explicit X and Y")


def ppt_margin(ch):
    """Minimum eigenvalue of ``Y + i(J + X J X^T)``."""
    if not ch.is_square:
        raise ShapeMismatch("PPT condition is defined for square channels only")
    return psd_margin(ch.Y, symplectic_form(ch.out_modes) + ch.X @ symplectic_form(ch.in_modes) @ ch.X.T)


def is_ppt_channel(ch, tol=DEFAULT.psd):
    """True iff ``Y + i(J + X J X^T) >= 0``, i.e. composing with transposition stays CP."""
    if not ch.is_square:
        raise ShapeMismatch("PPT condition is defined for square channels only")
    k = symplectic_form(ch.out_modes) + ch.X @ symplectic_form(ch.in_modes) @ ch.X.T
    return is_psd_hermitian(ch.Y, k, tol)


def partial_transpose_form(n_a, n_b):
    return direct_sum(symplectic_form(n_a), -symplectic_form(n_b))


def is_nondistillable_state(g_ab, split, tol=DEFAULT.psd):
    """PPT criterion ``g_AB + i(J_A + (-J_B)) >= 0`` with A the first ``split`` modes."""
    g_ab = np.asarray(g_ab, dtype=float)
    n = n_modes(g_ab)
    if not 0 < split < n:
        raise ShapeMismatch(f"split must lie strictly between 0 and {n}, got {split}")
    return is_psd_hermitian(g_ab, partial_transpose_form(split, n - split), tol)


def choi_state(ch, r=1.0):
    """Finite-squeezing Choi surrogate of a square channel.

    Each input mode is half of a two-mode squeezed vacuum with squeezing
    ``r``; the channel acts on those halves. Output ordering: the ``n``
    reference modes, then the ``n`` channel outputs.
    """
    if not ch.is_square:
        raise ShapeMismatch("Choi surrogate is built for square channels only")
    n = ch.in_modes
    pairs = direct_sum(*[two_mode_squeezed(r)] * n)
    # pairs is ordered (a1, b1, a2, b2, ...); regroup to (a..., b...)
    order = [2 * (2 * k) + q for k in range(n) for q in (0, 1)] + [2 * (2 * k + 1) + q for k in range(n) for q in (0, 1)]
    g = pairs[np.ix_(order, order)]
    full = GaussianChannel(block_diag(np.eye(2 * n), ch.X), block_diag(np.zeros((2 * n, 2 * n)), ch.Y))
    return apply(full, g)


def is_entanglement_binding(ch, squeezings=(0.5, 1.0, 2.0)):
    """Non-distillability of the Choi surrogate at every tested squeezing."""
    return all(is_nondistillable_state(choi_state(ch, r), ch.in_modes) for r in squeezings)


def is_entanglement_breaking_ta(T, N):
    """Thermal attenuator is entanglement breaking iff ``T <= (1 - T) N`` (equality counts as breaking)."""
    _check_transmissivity(T)
    if not N >= 0.0:
        raise DomainError(f"thermal photon number must be nonnegative, got {N}")
    return T <= (1.0 - T) * N
