"""Time-dependent Markovianity for qubit channels.

A qubit channel can be reached by integrating some time-local generator of
valid form exactly when (for generic spectra) its determinant is positive and
the Lorentz-metric singular values satisfy s1^2 s4^2 >= s1 s2 s3 s4.  The s_i
are the square roots of the eigenvalues of T g T' g, where g is the metric
diag(1, -1, -1, -1), T is written in the normalized Pauli basis (a real 4x4
matrix for a Hermiticity-preserving map) and T' is its transpose, so g T' g
is the Lorentz adjoint of T.  Pairing T with its Lorentz adjoint is what
makes the construction the metric analogue of ordinary singular values; the
product of T with itself instead has complex eigenvalues for most non-normal
channels and supports no criterion.  The condition compares the extreme pair
against the middle pair, so it does not care whether s is sorted ascending
or descending; descending is used here.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import ChannelMatrix, OperatorBasis, change_basis, verify_channel
from .config import default_tolerances
from .errors import ComplexLorentzSpectrum, NotHermiticityPreserving, NotQubit

_G_METRIC = np.diag([1.0, -1.0, -1.0, -1.0])


@dataclass(frozen=True)
class LorentzSingularValues:
    s: tuple[float, float, float, float]
    det_T: float


@dataclass(frozen=True)
class TdReport:
    td_markovian: bool
    s: LorentzSingularValues


def lorentz_singular_values(T: ChannelMatrix) -> LorentzSingularValues:
    """Square roots of the eigenvalues of T g T' g, sorted descending.

    With a negative determinant the criterion is already decided, so complex
    or negative eigenvalues of T g T' g are then resolved best-effort (real
    parts, clipped at zero).  With positive determinant they are an error:
    the channel is outside the generic family the criterion covers.
    """
    if T.d != 2:
        raise NotQubit(f"the divisibility criterion is for qubits, got d = {T.d}")
    tols = default_tolerances()
    rep = verify_channel(T)
    if not rep.hermiticity_preserving:
        raise NotHermiticityPreserving(
            f"Lorentz singular values need a Hermiticity-preserving map "
            f"(violation {rep.hermiticity_violation:.3e})"
        )
    M = change_basis(T, OperatorBasis.pauli()).entries.real
    det_T = float(np.linalg.det(M))
    X = M @ _G_METRIC @ M.T @ _G_METRIC
    vals = np.linalg.eigvals(X)

    itol = tols.lorentz_imag
    troubled = [v for v in vals if abs(v.imag) > itol * max(1.0, abs(v))]
    if not troubled:
        troubled = [v for v in vals if v.real < -itol * max(1.0, abs(v))]
    if troubled and det_T > tols.check:
        raise ComplexLorentzSpectrum(
            f"T g T' g has eigenvalues {np.round(vals, 9)} off the nonnegative axis "
            "while det > 0; the criterion is undefined for this non-generic channel"
        )
    s = np.sqrt(np.clip(vals.real, 0.0, None))
    s = tuple(float(x) for x in np.sort(s)[::-1])
    return LorentzSingularValues(s=s, det_T=det_T)


def td_markovian_check(T: ChannelMatrix) -> TdReport:
    """True iff det T is positive and s1^2 s4^2 >= s1 s2 s3 s4 (within
    tolerance; equality counts)."""
    lsv = lorentz_singular_values(T)
    tols = default_tolerances()
    if lsv.det_T <= tols.check:
        return TdReport(td_markovian=False, s=lsv)
    s1, s2, s3, s4 = lsv.s
    ok = s1 * s1 * s4 * s4 >= s1 * s2 * s3 * s4 - tols.lorentz_imag
    return TdReport(td_markovian=ok, s=lsv)
