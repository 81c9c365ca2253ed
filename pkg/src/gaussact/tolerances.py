"""Numerical tolerances shared by every module."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    """Tolerance record.

    Attributes:
        sym: max absolute asymmetry accepted for a "symmetric" matrix.
        psd: relative slack for positive-semidefiniteness tests; the
            effective bound is ``-psd * (1 + max|entry|)``.
        eig: slack on symplectic eigenvalues around 1 (purity).
        symp: max residual of ``S J S^T - J`` for a symplectic matrix.
    """

    sym: float = 1e-10
    psd: float = 1e-9
    eig: float = 1e-8
    symp: float = 1e-9


DEFAULT = Tolerances()
