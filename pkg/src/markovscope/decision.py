"""The snapshot decision: is one channel consistent with a time-independent
Markovian evolution, and if not, how far off is it.

Every Hermiticity-preserving logarithm branch L_m differs from the principal
one by winding terms on the complex eigenvalue pairs, and only the
conditional-complete-positivity test depends on the branch.  Compressing the
relevant Choi-type matrices once to the complement of the entangled vector,

    A_0 = compress(L_0^Gamma),   A_c = compress((2 pi i (P_c - F conj(P_c) F))^Gamma),

turns the branch search into integer optimization of the concave function
f(m) = lambda_min(A_0 + sum_c m_c A_c).  The map is Markovian exactly when
some integer vector makes f nonnegative; otherwise the worst eigenvalue gap
converts into the least admixture of isotropic noise that would repair the
best branch, mu_min = d * max(0, -max_m f(m)), and into the measure
M(T) = exp[mu_min (1 - d^2)].

Maps with a zero or negative real eigenvalue have no logarithm family at all
and receive their own verdicts (and measure 0).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .bases import perp_isometry, sup_norm
from .channels import ChannelMatrix, involution_gamma, verify_channel
from .config import default_tolerances
from .errors import DefectiveMatrix, NotAChannel, UnpairedComplexEigenvalue
from .spectral import (
    BranchIndex,
    ClusterKind,
    SpectralData,
    branch_shift,
    eigendecompose,
    principal_log,
)

MAX_BRANCH_CANDIDATES = 250_000


class Verdict(Enum):
    MARKOVIAN = "MARKOVIAN"
    NOT_MARKOVIAN = "NOT_MARKOVIAN"
    NO_HERMITIAN_LOG = "NO_HERMITIAN_LOG"
    SINGULAR = "SINGULAR"
    UNSUPPORTED_SPECTRUM = "UNSUPPORTED_SPECTRUM"


@dataclass(frozen=True)
class AMatrices:
    dimension: int
    A0: np.ndarray
    Ac: tuple[np.ndarray, ...]

    def __post_init__(self):
        A0 = np.asarray(self.A0, dtype=complex).copy()
        A0.setflags(write=False)
        object.__setattr__(self, "A0", A0)
        frozen = []
        for A in self.Ac:
            A = np.asarray(A, dtype=complex).copy()
            A.setflags(write=False)
            frozen.append(A)
        object.__setattr__(self, "Ac", tuple(frozen))

    @property
    def num_pairs(self) -> int:
        return len(self.Ac)

    def at(self, m: tuple[int, ...] | BranchIndex) -> np.ndarray:
        if isinstance(m, BranchIndex):
            m = m.m
        A = self.A0
        for mc, Amat in zip(m, self.Ac):
            if mc:
                A = A + mc * Amat
        return A


@dataclass(frozen=True)
class MarkovReport:
    verdict: Verdict
    dimension: int
    witness_branch: BranchIndex | None
    best_branch: BranchIndex | None
    max_min_eigenvalue: float
    mu_min: float
    measure: float
    m_max: int
    diagnostics: str


def _compress_hermitian(X: np.ndarray, V: np.ndarray, what: str) -> np.ndarray:
    A = V.conj().T @ X @ V
    resid = sup_norm(A - A.conj().T)
    if resid > 1e-8 * max(1.0, sup_norm(A)):
        raise DefectiveMatrix(
            f"compressed {what} has anti-Hermitian residual {resid:.3e}; "
            "spectral projectors are too inaccurate to decide"
        )
    return (A + A.conj().T) / 2


def build_a_matrices(S: SpectralData) -> AMatrices:
    """Compress the principal log and the per-pair winding offsets."""
    L0 = principal_log(S)
    V = perp_isometry(S.dimension)
    A0 = _compress_hermitian(involution_gamma(L0.entries), V, "principal log")
    Ac = tuple(
        _compress_hermitian(involution_gamma(branch_shift(S, c)), V, f"winding term {c}")
        for c in range(S.num_complex_pairs)
    )
    return AMatrices(S.dimension, A0, Ac)


def _lambda_min(A: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(A).min())


def branch_candidates(C: int, m_max: int):
    """All integer vectors with |m|_inf <= m_max, by increasing shell and
    lexicographically inside each shell.  The zero vector comes first."""
    if C == 0:
        yield ()
        return
    for shell in range(m_max + 1):
        for m in itertools.product(range(-shell, shell + 1), repeat=C):
            if max(abs(x) for x in m) == shell:
                yield m


@dataclass(frozen=True)
class BranchSearchResult:
    m_star: float
    value: float


def qubit_branch_search(A: AMatrices, m_max: int = 2) -> BranchSearchResult:
    """Maximize f(m) = lambda_min(A0 + m A1) over real m by golden-section
    search on [-m_max - 1, m_max + 1]; f is concave, so this is global."""
    A0, A1 = A.A0, A.Ac[0]
    if sup_norm(A1) == 0.0:
        return BranchSearchResult(0.0, _lambda_min(A0))

    def f(m: float) -> float:
        return _lambda_min(A0 + m * A1)

    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = -float(m_max) - 1.0, float(m_max) + 1.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > 1e-6:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    m_star = (a + b) / 2.0
    return BranchSearchResult(float(m_star), f(m_star))


def _early_report(verdict: Verdict, d: int, m_max: int, diagnostics: str) -> MarkovReport:
    return MarkovReport(
        verdict=verdict,
        dimension=d,
        witness_branch=None,
        best_branch=None,
        max_min_eigenvalue=float("nan"),
        mu_min=float("inf"),
        measure=0.0,
        m_max=m_max,
        diagnostics=diagnostics,
    )


def markovian_check(
    T: ChannelMatrix,
    m_max: int = 2,
    tol: float | None = None,
    tol_cluster: float | None = None,
) -> MarkovReport:
    """Search the logarithm branches of a channel for a valid generator.

    For qubit spectra with one complex pair the concave real relaxation is
    solved first and the two neighboring integers (clamped into the search
    box) are checked; otherwise the box is enumerated shell by shell.  The
    witness branch reported on success is the first feasible one in
    enumeration order, so results are deterministic.
    """
    rep = verify_channel(T)
    if not rep.is_channel:
        raise NotAChannel(
            "markovian_check needs a channel: "
            f"hermiticity={rep.hermiticity_preserving} (viol {rep.hermiticity_violation:.2e}), "
            f"trace={rep.trace_preserving} (viol {rep.trace_violation:.2e}), "
            f"cp={rep.completely_positive} (min Choi eig {rep.min_choi_eigenvalue:.2e})"
        )
    d = T.d
    try:
        S = eigendecompose(T, tol_cluster=tol_cluster)
    except UnpairedComplexEigenvalue as exc:
        return _early_report(
            Verdict.UNSUPPORTED_SPECTRUM, d, m_max, f"spectral pairing failed: {exc}"
        )
    if S.has_kind(ClusterKind.ZERO):
        return _early_report(
            Verdict.SINGULAR, d, m_max,
            "zero eigenvalue: the map is singular and admits no logarithm",
        )
    if S.has_kind(ClusterKind.REAL_NEGATIVE):
        neg = min(c.value.real for c in S.clusters if c.kind is ClusterKind.REAL_NEGATIVE)
        return _early_report(
            Verdict.NO_HERMITIAN_LOG, d, m_max,
            f"negative real eigenvalue {neg:.6g}: no Hermiticity-preserving logarithm exists",
        )

    A = build_a_matrices(S)
    C = A.num_pairs
    tol_m = tol if tol is not None else default_tolerances().markov * (
        1.0 + float(np.linalg.norm(A.A0, 2))
    )

    if C == 0:
        best_m, best_v = (), _lambda_min(A.A0)
    elif d == 2 and C == 1:
        sr = qubit_branch_search(A, m_max)
        lo = int(np.clip(math.floor(sr.m_star), -m_max, m_max))
        hi = int(np.clip(math.ceil(sr.m_star), -m_max, m_max))
        cands = sorted({(lo,), (hi,)}, key=lambda m: (max(abs(x) for x in m), m))
        best_m, best_v = None, -np.inf
        for m in cands:
            v = _lambda_min(A.at(m))
            if v > best_v:
                best_m, best_v = m, v
    else:
        if (2 * m_max + 1) ** C > MAX_BRANCH_CANDIDATES:
            return _early_report(
                Verdict.UNSUPPORTED_SPECTRUM, d, m_max,
                f"{C} complex pairs give {(2 * m_max + 1) ** C} branch candidates, "
                f"beyond the supported budget of {MAX_BRANCH_CANDIDATES}",
            )
        best_m, best_v = None, -np.inf
        for m in branch_candidates(C, m_max):
            v = _lambda_min(A.at(m))
            if v > best_v:
                best_m, best_v = m, v

    best = BranchIndex(best_m)
    if best_v >= -tol_m:
        witness = best
        for m in branch_candidates(C, m_max):
            if m == best_m or _lambda_min(A.at(m)) >= -tol_m:
                witness = BranchIndex(m)
                break
        return MarkovReport(
            verdict=Verdict.MARKOVIAN,
            dimension=d,
            witness_branch=witness,
            best_branch=best,
            max_min_eigenvalue=best_v,
            mu_min=0.0,
            measure=1.0,
            m_max=m_max,
            diagnostics=(
                f"valid generator at branch m = {witness.m} "
                f"(searched |m|_inf <= {m_max}, {C} complex pairs)"
            ),
        )
    mu = d * max(0.0, -best_v)
    return MarkovReport(
        verdict=Verdict.NOT_MARKOVIAN,
        dimension=d,
        witness_branch=None,
        best_branch=best,
        max_min_eigenvalue=best_v,
        mu_min=mu,
        measure=math.exp(mu * (1 - d * d)),
        m_max=m_max,
        diagnostics=(
            f"no valid branch in |m|_inf <= {m_max} ({C} complex pairs); "
            f"best lambda_min = {best_v:.6e} at m = {best.m}"
        ),
    )


def mu_min(
    T: ChannelMatrix,
    m_max: int = 2,
    tol: float | None = None,
    tol_cluster: float | None = None,
) -> float:
    """Least isotropic noise rate repairing the best branch; 0 for Markovian
    channels, infinite when no logarithm family exists."""
    return markovian_check(T, m_max=m_max, tol=tol, tol_cluster=tol_cluster).mu_min


def markovianity_measure(
    T: ChannelMatrix,
    m_max: int = 2,
    tol: float | None = None,
    tol_cluster: float | None = None,
) -> float:
    """M(T) = exp[mu_min (1 - d^2)] in [0, 1]; exactly 1 for Markovian
    channels and exactly 0 when no Hermiticity-preserving logarithm exists."""
    return markovian_check(T, m_max=m_max, tol=tol, tol_cluster=tol_cluster).measure
