"""Representations of quantum maps and the operations connecting them.

A map T acting on d x d matrices is stored as the d^2 x d^2 matrix T-hat with
T(rho) = unvec(T-hat vec(rho)).  Vectorization is row-major, so for d = 2

    vec(rho) = (rho_00, rho_01, rho_10, rho_11)

and the matrix-unit basis is ordered |0><0|, |0><1|, |1><0|, |1><1|.  Worked
example: the Kraus channel {sigma_x} sends rho_ij to rho_{1-i,1-j}, so its
transfer matrix is the permutation

        00 01 10 11
    00 [ .  .  .  1 ]
    01 [ .  .  1  . ]
    10 [ .  1  .  . ]
    11 [ 1  .  .  . ]

which is exactly sigma_x (x) conj(sigma_x).

The Gamma involution swaps the inner index pair, <i,j|M^Gamma|k,l> =
<i,k|M|j,l>.  The Choi matrix used here is T-hat^Gamma = d (T (x) id)(omega)
with omega the maximally entangled state; note the factor d, which some
conventions drop.  For a trace-preserving map the partial trace of the Choi
matrix over the first tensor factor is the identity, and complete positivity
is positive semidefiniteness of the Choi matrix.

Hermiticity preservation reads F T-hat F = conj(T-hat) in the matrix-unit
basis, with F the flip permutation F|a,b> = |b,a>.  In the normalized Pauli
basis (elements {1, sigma_x, sigma_y, sigma_z}/sqrt(2), d = 2 only) the same
condition is simply that the matrix is real.  The basis change is conjugation
by the unitary U with row alpha equal to conj(vec(P_alpha/sqrt(2))), i.e.
T_pauli = U T_mu U^dag; the round trip is exact up to rounding.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .bases import flip_operator, omega_vector, pauli_transform, sup_norm, unvec, vec
from .config import default_tolerances
from .errors import (
    DimensionMismatch,
    InvalidForm,
    NonRealDeterminant,
    NotAChannel,
    NotASquareOfSquare,
    RangeError,
    UnsupportedBasis,
)


class BasisTag(Enum):
    MATRIX_UNITS = "matrix_units"
    PAULI_NORMALIZED = "pauli"


@dataclass(frozen=True)
class OperatorBasis:
    """An orthonormal operator basis labelling the rows and columns of a
    transfer matrix."""

    tag: BasisTag
    dimension: int

    def __post_init__(self):
        if self.dimension < 1:
            raise DimensionMismatch(f"dimension must be positive, got {self.dimension}")
        if self.tag is BasisTag.PAULI_NORMALIZED and self.dimension != 2:
            raise UnsupportedBasis("the normalized Pauli basis exists only for d = 2")

    @classmethod
    def matrix_units(cls, d: int) -> "OperatorBasis":
        return cls(BasisTag.MATRIX_UNITS, d)

    @classmethod
    def pauli(cls) -> "OperatorBasis":
        return cls(BasisTag.PAULI_NORMALIZED, 2)

    def elements(self) -> tuple[np.ndarray, ...]:
        """The basis operators in order, as d x d arrays."""
        d = self.dimension
        if self.tag is BasisTag.MATRIX_UNITS:
            out = []
            for i in range(d):
                for j in range(d):
                    E = np.zeros((d, d), dtype=complex)
                    E[i, j] = 1.0
                    out.append(E)
            return tuple(out)
        from .bases import PAULIS

        return tuple(P / np.sqrt(2) for P in PAULIS)


def _square_side(M: np.ndarray) -> int:
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {M.shape}")
    n = M.shape[0]
    d = int(round(np.sqrt(n)))
    if d * d != n:
        raise NotASquareOfSquare(f"matrix side {n} is not a perfect square")
    return d


@dataclass(frozen=True)
class ChannelMatrix:
    """A linear map on d x d matrices, stored in a declared operator basis."""

    entries: np.ndarray
    basis: OperatorBasis

    def __post_init__(self):
        M = np.asarray(self.entries, dtype=complex)
        d = _square_side(M)
        if d != self.basis.dimension:
            raise DimensionMismatch(
                f"matrix is {M.shape[0]}x{M.shape[0]} but basis has d = {self.basis.dimension}"
            )
        M = M.copy()
        M.setflags(write=False)
        object.__setattr__(self, "entries", M)

    @property
    def d(self) -> int:
        return self.basis.dimension


@dataclass(frozen=True)
class ChoiMatrix:
    entries: np.ndarray
    dimension: int

    def __post_init__(self):
        M = np.asarray(self.entries, dtype=complex)
        if _square_side(M) != self.dimension:
            raise DimensionMismatch("Choi matrix size does not match the declared dimension")
        M = M.copy()
        M.setflags(write=False)
        object.__setattr__(self, "entries", M)


@dataclass(frozen=True)
class KrausSet:
    operators: tuple[np.ndarray, ...]

    def __post_init__(self):
        ops = tuple(np.asarray(K, dtype=complex) for K in self.operators)
        if not ops:
            raise InvalidForm("a Kraus set needs at least one operator")
        d = ops[0].shape[0] if ops[0].ndim == 2 else 0
        for K in ops:
            if K.ndim != 2 or K.shape != (d, d):
                raise DimensionMismatch("Kraus operators must all be square with equal size")
        if len(ops) > d * d:
            raise InvalidForm(f"at most d^2 = {d * d} Kraus operators are meaningful, got {len(ops)}")
        frozen = []
        for K in ops:
            K = K.copy()
            K.setflags(write=False)
            frozen.append(K)
        object.__setattr__(self, "operators", tuple(frozen))

    @property
    def d(self) -> int:
        return self.operators[0].shape[0]


@dataclass(frozen=True)
class DensityMatrix:
    rho: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.rho, dtype=complex)
        if r.ndim != 2 or r.shape[0] != r.shape[1]:
            raise DimensionMismatch(f"a state must be square, got shape {r.shape}")
        eps = default_tolerances().check * max(1.0, sup_norm(r))
        if sup_norm(r - r.conj().T) > eps:
            raise InvalidForm("state is not Hermitian")
        if abs(np.trace(r).real - 1.0) > eps or abs(np.trace(r).imag) > eps:
            raise InvalidForm("state trace is not 1")
        if np.linalg.eigvalsh((r + r.conj().T) / 2).min() < -eps:
            raise InvalidForm("state has a negative eigenvalue")
        r = r.copy()
        r.setflags(write=False)
        object.__setattr__(self, "rho", r)

    @property
    def d(self) -> int:
        return self.rho.shape[0]


def transfer_from_kraus(kraus: KrausSet | Sequence[np.ndarray]) -> ChannelMatrix:
    """Build the matrix-unit-basis transfer matrix sum_a K_a (x) conj(K_a)."""
    if not isinstance(kraus, KrausSet):
        kraus = KrausSet(tuple(kraus))
    d = kraus.d
    T = np.zeros((d * d, d * d), dtype=complex)
    for K in kraus.operators:
        T += np.kron(K, K.conj())
    return ChannelMatrix(T, OperatorBasis.matrix_units(d))


def involution_gamma(M: np.ndarray) -> np.ndarray:
    """The index swap <i,j|M^Gamma|k,l> = <i,k|M|j,l>; an exact involution."""
    M = np.asarray(M)
    d = _square_side(M)
    return M.reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(d * d, d * d)


def as_matrix_units(T: ChannelMatrix) -> ChannelMatrix:
    if T.basis.tag is BasisTag.MATRIX_UNITS:
        return T
    return change_basis(T, OperatorBasis.matrix_units(T.d))


def choi_of(T: ChannelMatrix) -> ChoiMatrix:
    """Choi matrix T-hat^Gamma = d (T (x) id)(omega); trace d when T is TP."""
    T = as_matrix_units(T)
    return ChoiMatrix(involution_gamma(T.entries), T.d)


@dataclass(frozen=True)
class ChannelReport:
    hermiticity_preserving: bool
    trace_preserving: bool
    completely_positive: bool
    min_choi_eigenvalue: float
    hermiticity_violation: float
    trace_violation: float
    tolerance: float

    @property
    def is_channel(self) -> bool:
        return self.hermiticity_preserving and self.trace_preserving and self.completely_positive


def verify_channel(T: ChannelMatrix, tol: float | None = None) -> ChannelReport:
    """Check the three channel properties and report numeric witnesses.

    The default tolerance is 1e-9 relative to the largest entry of the
    matrix (floored at 1e-9 absolute).
    """
    eps = tol if tol is not None else default_tolerances().check * max(1.0, sup_norm(T.entries))

    # Hermiticity preservation in the native basis: real entries (Pauli) or
    # the flip-conjugation identity (matrix units).  The two are equivalent.
    if T.basis.tag is BasisTag.PAULI_NORMALIZED:
        hp_viol = sup_norm(T.entries.imag)
    else:
        F = flip_operator(T.d)
        hp_viol = sup_norm(F @ T.entries @ F - T.entries.conj())

    Tmu = as_matrix_units(T)
    omega = omega_vector(T.d)
    tp_viol = sup_norm(Tmu.entries.conj().T @ omega - omega)

    C = involution_gamma(Tmu.entries)
    lam_min = float(np.linalg.eigvalsh((C + C.conj().T) / 2).min())

    return ChannelReport(
        hermiticity_preserving=hp_viol <= eps,
        trace_preserving=tp_viol <= eps,
        completely_positive=lam_min >= -eps,
        min_choi_eigenvalue=lam_min,
        hermiticity_violation=float(hp_viol),
        trace_violation=float(tp_viol),
        tolerance=float(eps),
    )


def compose(T2: ChannelMatrix, T1: ChannelMatrix) -> ChannelMatrix:
    """The map T2 after T1; its matrix is the product T2-hat T1-hat."""
    if T2.d != T1.d:
        raise DimensionMismatch(f"cannot compose maps with d = {T2.d} and d = {T1.d}")
    if T1.basis.tag is not T2.basis.tag:
        T1 = change_basis(T1, T2.basis)
    return ChannelMatrix(T2.entries @ T1.entries, T2.basis)


def mix(T1: ChannelMatrix, T2: ChannelMatrix, p: float) -> ChannelMatrix:
    """Convex combination p T1 + (1 - p) T2."""
    if not 0.0 <= p <= 1.0:
        raise RangeError(f"mixing weight must lie in [0, 1], got {p}")
    if T1.d != T2.d:
        raise DimensionMismatch(f"cannot mix maps with d = {T1.d} and d = {T2.d}")
    if T2.basis.tag is not T1.basis.tag:
        T2 = change_basis(T2, T1.basis)
    return ChannelMatrix(p * T1.entries + (1.0 - p) * T2.entries, T1.basis)


def change_basis(T: ChannelMatrix, target: OperatorBasis) -> ChannelMatrix:
    if target.dimension != T.d:
        raise DimensionMismatch("target basis has a different dimension")
    if target.tag is T.basis.tag:
        return ChannelMatrix(T.entries, target)
    U = pauli_transform()
    if target.tag is BasisTag.PAULI_NORMALIZED:
        return ChannelMatrix(U @ T.entries @ U.conj().T, target)
    return ChannelMatrix(U.conj().T @ T.entries @ U, target)


def determinant(T: ChannelMatrix, tol: float | None = None) -> float:
    """det(T-hat), basis-independent and real for Hermiticity-preserving maps."""
    det = complex(np.linalg.det(T.entries))
    eps = tol if tol is not None else default_tolerances().check * max(1.0, abs(det))
    if abs(det.imag) > eps:
        raise NonRealDeterminant(
            f"determinant {det} has imaginary part beyond {eps}; "
            "the map does not preserve Hermiticity"
        )
    return det.real


def apply_channel(T: ChannelMatrix, rho: np.ndarray | DensityMatrix) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        rho = rho.rho
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (T.d, T.d):
        raise DimensionMismatch(f"state shape {rho.shape} does not match d = {T.d}")
    return unvec(as_matrix_units(T).entries @ vec(rho))


def kraus_from_choi(choi: ChoiMatrix, tol: float | None = None) -> KrausSet:
    """Extract Kraus operators from the Choi eigendecomposition.

    Eigenvalues in [-eps, 0) are clamped to zero; anything below -eps means
    the map is not completely positive and raises.
    """
    C = choi.entries
    eps = tol if tol is not None else default_tolerances().check * max(1.0, sup_norm(C))
    lam, vecs = np.linalg.eigh((C + C.conj().T) / 2)
    if lam.min() < -eps:
        raise NotAChannel(f"Choi matrix has eigenvalue {lam.min():.3e} below -{eps:.3e}")
    lam = np.clip(lam, 0.0, None)
    ops = []
    for k in range(lam.size):
        if lam[k] > eps:
            ops.append(np.sqrt(lam[k]) * unvec(vecs[:, k]))
    if not ops:
        # the zero map; keep the contract of at least one operator
        ops.append(np.zeros((choi.dimension, choi.dimension), dtype=complex))
    return KrausSet(tuple(ops))
