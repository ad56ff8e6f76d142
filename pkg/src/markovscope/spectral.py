"""Eigenstructure of transfer matrices and the logarithm branches compatible
with Hermiticity preservation.

A Hermiticity-preserving map has a spectrum closed under complex conjugation.
After clustering numerically coincident eigenvalues, each cluster carries a
spectral projector P = V_k W_k (right-eigenvector block times the matching
rows of the inverse).  The logarithms of the map that are themselves
Hermiticity-preserving form a discrete family indexed by one integer per
complex-conjugate eigenvalue pair,

    L_m = L_0 + 2 pi i sum_c m_c (P_c - F conj(P_c) F),

with L_0 the principal branch and F the flip permutation.  Real negative
eigenvalues admit no such logarithm at all, and a singular map admits none.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.linalg import expm

from .bases import flip_operator, sup_norm
from .channels import (
    ChannelMatrix,
    OperatorBasis,
    as_matrix_units,
    change_basis,
    verify_channel,
)
from .config import default_tolerances
from .errors import (
    BranchLengthMismatch,
    DefectiveMatrix,
    NegativeRealEigenvalue,
    NotHermiticityPreserving,
    RangeError,
    SingularChannel,
    UnpairedComplexEigenvalue,
)
from .lindblad import GeneratorMatrix


class ClusterKind(Enum):
    REAL_POSITIVE = "real_positive"
    REAL_NEGATIVE = "real_negative"
    ZERO = "zero"
    COMPLEX_PAIR_MEMBER = "complex_pair_member"


@dataclass(frozen=True)
class Cluster:
    value: complex
    multiplicity: int
    projector: np.ndarray
    kind: ClusterKind

    def __post_init__(self):
        P = np.asarray(self.projector, dtype=complex).copy()
        P.setflags(write=False)
        object.__setattr__(self, "projector", P)


@dataclass(frozen=True)
class SpectralData:
    """Clustered eigenvalues and projectors of a transfer matrix.

    pairs holds index tuples (c_plus, c_minus) into clusters, one per
    complex-conjugate pair, with c_plus the member in the upper half plane.
    """

    dimension: int
    clusters: tuple[Cluster, ...]
    pairs: tuple[tuple[int, int], ...]
    entries: np.ndarray

    def __post_init__(self):
        M = np.asarray(self.entries, dtype=complex).copy()
        M.setflags(write=False)
        object.__setattr__(self, "entries", M)

    @property
    def num_complex_pairs(self) -> int:
        return len(self.pairs)

    def reconstruct(self) -> np.ndarray:
        out = np.zeros_like(self.entries)
        for c in self.clusters:
            out = out + c.value * c.projector
        return out

    def has_kind(self, kind: ClusterKind) -> bool:
        return any(c.kind is kind for c in self.clusters)


@dataclass(frozen=True)
class BranchIndex:
    m: tuple[int, ...]

    def __post_init__(self):
        try:
            m = tuple(int(x) for x in self.m)
        except (TypeError, ValueError) as exc:
            raise RangeError(f"branch index must be a sequence of integers, got {self.m!r}") from exc
        object.__setattr__(self, "m", m)

    @classmethod
    def zeros(cls, length: int) -> "BranchIndex":
        return cls((0,) * length)

    @property
    def norm_inf(self) -> int:
        return max((abs(x) for x in self.m), default=0)


def _union_find_clusters(vals: np.ndarray, tol: float) -> list[list[int]]:
    n = vals.size
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(vals[i] - vals[j]) <= tol:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: (-abs(vals[g].mean()), -vals[g].mean().real, -vals[g].mean().imag))


def eigendecompose(T: ChannelMatrix, tol_cluster: float | None = None) -> SpectralData:
    """Cluster the spectrum of T and build the spectral projectors.

    Eigenvalues closer than tol_cluster times the matrix norm are merged into
    one cluster.  Conjugate pairs are matched and their projectors checked
    against (and then replaced by) the flip-conjugation partner, which keeps
    every later branch construction Hermiticity-preserving to rounding.
    """
    tols = default_tolerances()
    rep = verify_channel(T)
    if not rep.hermiticity_preserving:
        raise NotHermiticityPreserving(
            f"spectral analysis needs a Hermiticity-preserving map "
            f"(violation {rep.hermiticity_violation:.3e})"
        )
    Tmu = as_matrix_units(T)
    M = Tmu.entries
    d = Tmu.d
    scale = max(1.0, float(np.linalg.norm(M, 2)))
    ctol = (tol_cluster if tol_cluster is not None else tols.cluster) * scale

    vals, V = np.linalg.eig(M)
    cond = np.linalg.cond(V)
    if not np.isfinite(cond) or cond > tols.condition_limit:
        raise DefectiveMatrix(
            f"eigenbasis condition number {cond:.3e} exceeds {tols.condition_limit:.1e}; "
            "the matrix is defective or too close to it"
        )
    W = np.linalg.inv(V)

    F = flip_operator(d)
    ptol = tols.projector
    clusters: list[dict] = []
    for idx in _union_find_clusters(vals, ctol):
        value = vals[idx].mean()
        P = V[:, idx] @ W[idx, :]
        if sup_norm(P @ P - P) > ptol * max(1.0, sup_norm(P)):
            raise DefectiveMatrix(
                "a cluster projector is not idempotent; eigenvalue clustering "
                "merged a defective block"
            )
        if abs(value) <= ctol:
            kind = ClusterKind.ZERO
            value = 0.0 + 0.0j
        elif abs(value.imag) <= ctol:
            value = complex(value.real)
            kind = ClusterKind.REAL_POSITIVE if value.real > 0 else ClusterKind.REAL_NEGATIVE
        else:
            kind = ClusterKind.COMPLEX_PAIR_MEMBER
        clusters.append({"value": value, "mult": len(idx), "P": P, "kind": kind})

    # Real clusters: enforce the flip-conjugation symmetry exactly.
    for c in clusters:
        if c["kind"] is not ClusterKind.COMPLEX_PAIR_MEMBER:
            Psym = (c["P"] + F @ c["P"].conj() @ F) / 2
            if sup_norm(Psym - c["P"]) > ptol * max(1.0, sup_norm(c["P"])):
                raise UnpairedComplexEigenvalue(
                    "a real-eigenvalue projector is not flip-conjugation symmetric"
                )
            c["P"] = Psym

    # Complex clusters: greedy nearest-conjugate matching, then pin the lower
    # partner to F conj(P_plus) F so the pair is exactly conjugation-closed.
    plus = [k for k, c in enumerate(clusters) if c["kind"] is ClusterKind.COMPLEX_PAIR_MEMBER and c["value"].imag > 0]
    minus = [k for k, c in enumerate(clusters) if c["kind"] is ClusterKind.COMPLEX_PAIR_MEMBER and c["value"].imag < 0]
    if len(plus) != len(minus):
        raise UnpairedComplexEigenvalue(
            f"{len(plus)} upper-half-plane clusters vs {len(minus)} lower; "
            "spectrum is not conjugation-closed"
        )
    pairs: list[tuple[int, int]] = []
    unused = list(minus)
    for cp in plus:
        target = np.conj(clusters[cp]["value"])
        dist = [abs(clusters[cm]["value"] - target) for cm in unused]
        k = int(np.argmin(dist))
        if dist[k] > ctol:
            raise UnpairedComplexEigenvalue(
                f"no conjugate partner within tolerance for eigenvalue {clusters[cp]['value']:.6g}"
            )
        cm = unused.pop(k)
        partner = F @ clusters[cp]["P"].conj() @ F
        if sup_norm(partner - clusters[cm]["P"]) > ptol * max(1.0, sup_norm(partner)):
            raise UnpairedComplexEigenvalue(
                "conjugate-pair projectors are inconsistent with flip conjugation"
            )
        if clusters[cp]["mult"] != clusters[cm]["mult"]:
            raise UnpairedComplexEigenvalue("conjugate clusters have different multiplicities")
        clusters[cm]["P"] = partner
        clusters[cm]["value"] = complex(np.conj(clusters[cp]["value"]))
        pairs.append((cp, cm))

    data = SpectralData(
        dimension=d,
        clusters=tuple(
            Cluster(value=c["value"], multiplicity=c["mult"], projector=c["P"], kind=c["kind"])
            for c in clusters
        ),
        pairs=tuple(pairs),
        entries=M,
    )
    resid = sup_norm(data.reconstruct() - M)
    if resid > tols.reconstruction * scale:
        raise DefectiveMatrix(
            f"spectral reconstruction residual {resid:.3e} exceeds tolerance; "
            "clustering is unreliable for this matrix"
        )
    return data


def principal_log(S: SpectralData) -> GeneratorMatrix:
    """L_0 = sum_k log(lambda_k) P_k with the principal scalar logarithm."""
    if S.has_kind(ClusterKind.ZERO):
        raise SingularChannel("the map has a zero eigenvalue; no logarithm exists")
    if S.has_kind(ClusterKind.REAL_NEGATIVE):
        raise NegativeRealEigenvalue(
            "a negative real eigenvalue rules out every Hermiticity-preserving logarithm"
        )
    n = S.dimension * S.dimension
    L = np.zeros((n, n), dtype=complex)
    for c in S.clusters:
        L = L + np.log(c.value) * c.projector
    resid = sup_norm(expm(L) - S.entries)
    scale = max(1.0, sup_norm(S.entries))
    if resid > default_tolerances().reconstruction * scale:
        raise DefectiveMatrix(
            f"exp(log T) misses T by {resid:.3e}; spectral data is unreliable"
        )
    return GeneratorMatrix(L, OperatorBasis.matrix_units(S.dimension))


def branch_shift(S: SpectralData, c: int) -> np.ndarray:
    """The generator offset of one winding of pair c: 2 pi i (P_c - F conj(P_c) F)."""
    cp, cm = S.pairs[c]
    return 2j * np.pi * (S.clusters[cp].projector - S.clusters[cm].projector)


def branch_log(S: SpectralData, m: BranchIndex) -> GeneratorMatrix:
    """The branch of log T with winding numbers m, one per complex pair."""
    if len(m.m) != S.num_complex_pairs:
        raise BranchLengthMismatch(
            f"branch index has length {len(m.m)} but the spectrum has "
            f"{S.num_complex_pairs} complex pairs"
        )
    L = principal_log(S).entries.copy()
    for c, mc in enumerate(m.m):
        if mc:
            L = L + mc * branch_shift(S, c)
    return GeneratorMatrix(L, OperatorBasis.matrix_units(S.dimension))


def fractional_power(
    T: ChannelMatrix,
    s: float,
    m: BranchIndex | None = None,
    tol_cluster: float | None = None,
) -> ChannelMatrix:
    """T^s = exp(s L_m) on a chosen logarithm branch (principal by default).

    On a fixed branch this is a semigroup in s, interpolating the snapshot
    into a continuous family.
    """
    if s < 0:
        warnings.warn(
            "negative power inverts the map; the result is generally not a channel",
            RuntimeWarning,
            stacklevel=2,
        )
    S = eigendecompose(T, tol_cluster=tol_cluster)
    if m is None:
        m = BranchIndex.zeros(S.num_complex_pairs)
    L = branch_log(S, m)
    out = ChannelMatrix(expm(s * L.entries), OperatorBasis.matrix_units(S.dimension))
    return change_basis(out, T.basis)
