"""Coherent information, closed-form capacities and activation gaps."""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .channels import apply
from .dilation import dilate, joint_output
from .errors import DomainError, InfinityError
from .symplectic import (
    direct_sum,
    entropy_terms,
    n_modes,
    symplectic_eigenvalues,
    thermal_entropy,
    thermal_purification,
    williamson,
)


class CapacityKind(enum.Enum):
    EXACT = "exact"
    UPPER_BOUND = "upper_bound"
    LOWER_BOUND = "lower_bound"


@dataclass(frozen=True)
class CapacityValue:
    """A capacity in bits, tagged with what it is; ``value`` may be ``inf``."""

    value: float
    kind: CapacityKind

    @property
    def is_infinite(self):
        return math.isinf(self.value)


@dataclass(frozen=True, eq=False)
class CoherentInfoResult:
    i_c: float
    h_out: float
    h_env: float
    out_spectrum: np.ndarray
    env_spectrum: np.ndarray


def coherent_information(ch, g, dilation=None):
    """``H(output) - H(environment)`` for input covariance ``g``.

    A precomputed ``dilation`` of ``ch`` may be passed to skip its
    construction; its channel is trusted to be ``ch``.
    """
    d = dilation if dilation is not None else dilate(ch)
    out = joint_output(d, g)
    lam_out = symplectic_eigenvalues(out.out_block)
    lam_env = symplectic_eigenvalues(out.env_block)
    h_out = float(np.sum(entropy_terms(lam_out)))
    h_env = float(np.sum(entropy_terms(lam_env)))
    return CoherentInfoResult(h_out - h_env, h_out, h_env, lam_out, lam_env)


def purify(g):
    """Pure state on ``2n`` modes whose first ``n`` modes have covariance ``g``."""
    n = n_modes(g)
    lams, s = williamson(g)
    pure = np.zeros((4 * n, 4 * n))
    for k, lam in enumerate(lams):
        idx = [2 * k, 2 * k + 1, 2 * n + 2 * k, 2 * n + 2 * k + 1]
        pure[np.ix_(idx, idx)] = thermal_purification(max(lam, 1.0))
    w = direct_sum(s, np.eye(2 * n))
    return w @ pure @ w.T


def coherent_information_purified(ch, g):
    """Coherent information via a purification of the input.

    Uses ``H(environment) = H(output, reference)``, which holds because the
    global state is pure; no dilation is involved.
    """
    n = n_modes(g)
    psi = purify(g)
    sys_out = apply(ch, psi[: 2 * n, : 2 * n])
    cross = ch.X @ psi[: 2 * n, 2 * n :]
    joint = np.block([[sys_out, cross], [cross.T, psi[2 * n :, 2 * n :]]])
    h_out = float(np.sum(entropy_terms(symplectic_eigenvalues(sys_out))))
    h_joint = float(np.sum(entropy_terms(symplectic_eigenvalues(joint))))
    return h_out - h_joint


def lossy_thermal_coherent_information(T, nbar):
    """Closed form for a thermal input through the pure-loss channel."""
    return thermal_entropy(T * nbar) - thermal_entropy((1.0 - T) * nbar)


def lossy_capacity(T):
    """Quantum capacity of the pure-loss channel, ``max(0, log2(T / (1 - T)))``."""
    if not 0.0 <= T <= 1.0:
        raise DomainError(f"transmissivity must lie in [0, 1], got {T}")
    if T == 1.0:
        return CapacityValue(math.inf, CapacityKind.EXACT)
    if T <= 0.5:
        return CapacityValue(0.0, CapacityKind.EXACT)
    return CapacityValue(max(0.0, math.log2(T / (1.0 - T))), CapacityKind.EXACT)


def ta_capacity_upper_bound(T, N):
    """Upper bound on the quantum capacity of the thermal attenuator.

    Valid for ``T >= 0.5`` and ``T > (1 - T) N``. Evaluated in the
    sign-simplified form ``log2((T - N (1 - T)) / ((1 + N) (1 - T)))``.
    """
    if not (0.5 <= T <= 1.0) or not N >= 0.0:
        raise DomainError(f"bound needs 0.5 <= T <= 1 and N >= 0, got T={T}, N={N}")
    if not T > (1.0 - T) * N:
        raise DomainError(f"bound needs a non-entanglement-breaking attenuator, T={T} <= (1-T)N")
    if T == 1.0:
        return CapacityValue(math.inf, CapacityKind.UPPER_BOUND)
    ratio = (T - N * (1.0 - T)) / ((1.0 + N) * (1.0 - T))
    return CapacityValue(max(0.0, math.log2(ratio)), CapacityKind.UPPER_BOUND)


def activation_gap(i_c, cap):
    """``i_c - cap``; positive values certify activation (relative to ``cap.kind``)."""
    if cap.is_infinite:
        raise InfinityError("activation gap against an infinite capacity is undefined")
    return i_c - cap.value
