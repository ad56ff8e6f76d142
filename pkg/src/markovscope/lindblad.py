"""Generators of quantum dynamical semigroups.

A matrix L-hat is a valid generator exactly when three things hold: it
preserves Hermiticity, its adjoint kills the identity (trace preservation of
the flow), and it is conditionally completely positive.  The last condition
compresses the Choi-type matrix L-hat^Gamma to the orthogonal complement of
the maximally entangled vector and asks for positive semidefiniteness there.
Working on an explicit orthonormal basis of that complement (perp_isometry)
avoids the spurious zero modes a full-space projected form would have.

Valid generators decompose into a standard form

    L(rho) = i[rho, H] + sum_ab G_ab (F_a rho F_b^dag - {F_b^dag F_a, rho}/2)

with H Hermitian and G positive semidefinite over a traceless operator basis.
For qubits the F-basis is the plain Pauli set {sigma_x, sigma_y, sigma_z}, so
a single sigma_z jump with rate 1 reads G = diag(0, 0, 1); for d > 2 the
orthonormal traceless basis from perp_isometry is used instead.  The matrix
kappa bundles the Hamiltonian and the anticommutator part, kappa = iH +
phi*(1)/2, so kappa + kappa^dag is the adjoint of the CP part on the identity
and H = (kappa - kappa^dag)/(2i).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import expm

from .bases import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    jump_basis,
    omega_vector,
    perp_isometry,
    sup_norm,
    unvec,
)
from .channels import (
    BasisTag,
    ChannelMatrix,
    OperatorBasis,
    _square_side,
    change_basis,
    involution_gamma,
)
from .config import default_tolerances
from .errors import (
    DimensionMismatch,
    InvalidForm,
    NotAGenerator,
    NotHermiticityPreserving,
    RangeError,
    StepFailure,
)

STEP_TOL = 1e-8

# Jump-basis elements for d = 2 written over the Paulis: J_a = sum_k S[a,k] sigma_k.
_JUMP_TO_PAULI = np.array(
    [
        [0.5, 0.5j, 0.0],
        [0.5, -0.5j, 0.0],
        [0.0, 0.0, 1.0 / np.sqrt(2)],
    ],
    dtype=complex,
)


@dataclass(frozen=True)
class GeneratorMatrix:
    """A candidate generator; whether it is valid is a checked property, not
    an invariant of the type."""

    entries: np.ndarray
    basis: OperatorBasis

    def __post_init__(self):
        M = np.asarray(self.entries, dtype=complex)
        if _square_side(M) != self.basis.dimension:
            raise DimensionMismatch(
                f"matrix is {M.shape[0]}x{M.shape[0]} but basis has d = {self.basis.dimension}"
            )
        M = M.copy()
        M.setflags(write=False)
        object.__setattr__(self, "entries", M)

    @property
    def d(self) -> int:
        return self.basis.dimension


def _generator_entries_mu(L: GeneratorMatrix) -> np.ndarray:
    if L.basis.tag is BasisTag.MATRIX_UNITS:
        return L.entries
    # reuse the channel basis change; it is plain conjugation either way
    return change_basis(
        ChannelMatrix(L.entries, L.basis), OperatorBasis.matrix_units(L.d)
    ).entries


def trace_basis(d: int) -> tuple[np.ndarray, ...]:
    """The traceless operator basis the G-matrix refers to."""
    if d == 2:
        return (SIGMA_X, SIGMA_Y, SIGMA_Z)
    return jump_basis(d)


@dataclass(frozen=True)
class LindbladForm:
    """Standard-form data (H, G, kappa) of a generator.

    G is indexed by trace_basis(d); kappa is derived from H and G when not
    supplied.
    """

    H: np.ndarray
    G: np.ndarray
    kappa: np.ndarray | None = None

    def __post_init__(self):
        H = np.asarray(self.H, dtype=complex)
        G = np.asarray(self.G, dtype=complex)
        if H.ndim != 2 or H.shape[0] != H.shape[1]:
            raise InvalidForm(f"H must be square, got shape {H.shape}")
        d = H.shape[0]
        if G.shape != (d * d - 1, d * d - 1):
            raise InvalidForm(
                f"G must be {(d * d - 1)}x{(d * d - 1)} for d = {d}, got shape {G.shape}"
            )
        eps = default_tolerances().check * max(1.0, sup_norm(H), sup_norm(G))
        if sup_norm(H - H.conj().T) > eps:
            raise InvalidForm("H is not Hermitian")
        if sup_norm(G - G.conj().T) > eps:
            raise InvalidForm("G is not Hermitian")
        if np.linalg.eigvalsh((G + G.conj().T) / 2).min() < -eps:
            raise InvalidForm("G has a negative eigenvalue; rates must be nonnegative")
        if self.kappa is None:
            kappa = 1j * H + self._phi_star_identity(G, d) / 2
        else:
            kappa = np.asarray(self.kappa, dtype=complex)
            if kappa.shape != (d, d):
                raise InvalidForm(f"kappa must be {d}x{d}, got shape {kappa.shape}")
            if sup_norm(kappa + kappa.conj().T - self._phi_star_identity(G, d)) > 1e3 * eps:
                raise InvalidForm("kappa + kappa^dag does not match the CP part on the identity")
        for name, M in (("H", H), ("G", G), ("kappa", kappa)):
            M = M.copy()
            M.setflags(write=False)
            object.__setattr__(self, name, M)

    @staticmethod
    def _phi_star_identity(G: np.ndarray, d: int) -> np.ndarray:
        ops = trace_basis(d)
        M = np.zeros((d, d), dtype=complex)
        for a in range(len(ops)):
            for b in range(len(ops)):
                if G[a, b] != 0:
                    M += G[a, b] * (ops[b].conj().T @ ops[a])
        return M

    @property
    def d(self) -> int:
        return self.H.shape[0]

    def jump_decomposition(self, cutoff: float = 1e-12) -> list[tuple[float, np.ndarray]]:
        """Diagonalize G into (rate, jump operator) pairs, largest rate first."""
        ops = trace_basis(self.d)
        lam, U = np.linalg.eigh((self.G + self.G.conj().T) / 2)
        out = []
        for k in range(lam.size - 1, -1, -1):
            if lam[k] > cutoff:
                J = sum(U[a, k] * ops[a] for a in range(len(ops)))
                out.append((float(lam[k]), J))
        return out


def _assemble(H: np.ndarray, G: np.ndarray, ops: Sequence[np.ndarray]) -> np.ndarray:
    """Matrix-unit-basis L-hat for given H, rate matrix and jump basis.  No
    validation; callers wanting the checked path use generator_from_form."""
    d = H.shape[0]
    eye = np.eye(d)
    L = 1j * (np.kron(eye, H.T) - np.kron(H, eye))
    M = np.zeros((d, d), dtype=complex)
    for a, Fa in enumerate(ops):
        for b, Fb in enumerate(ops):
            g = G[a, b]
            if g == 0:
                continue
            L = L + g * np.kron(Fa, Fb.conj())
            M = M + g * (Fb.conj().T @ Fa)
    L = L - 0.5 * (np.kron(M, eye) + np.kron(eye, M.T))
    return L


@dataclass(frozen=True)
class CcpReport:
    is_ccp: bool
    min_eigenvalue: float


def ccp_test(L: GeneratorMatrix, tol: float | None = None) -> CcpReport:
    """Conditional complete positivity: compress L-hat^Gamma to the
    complement of the entangled vector and check for a negative eigenvalue.

    Hamiltonian and anticommutator terms vanish under the compression, so
    only the CP part of the generator is probed.
    """
    from .channels import verify_channel  # local import keeps module order simple

    rep = verify_channel(ChannelMatrix(L.entries, L.basis))
    if not rep.hermiticity_preserving:
        raise NotHermiticityPreserving(
            f"ccp is only defined for Hermiticity-preserving generators "
            f"(violation {rep.hermiticity_violation:.3e})"
        )
    Lmu = _generator_entries_mu(L)
    Q = involution_gamma(Lmu)
    V = perp_isometry(L.d)
    A = V.conj().T @ Q @ V
    A = (A + A.conj().T) / 2
    lam_min = float(np.linalg.eigvalsh(A).min())
    eps = tol if tol is not None else default_tolerances().check * max(1.0, sup_norm(A))
    return CcpReport(is_ccp=lam_min >= -eps, min_eigenvalue=lam_min)


@dataclass(frozen=True)
class GeneratorReport:
    hermitian: bool
    unital_adjoint: bool
    ccp: bool
    hermiticity_violation: float
    unitality_violation: float
    ccp_min_eigenvalue: float

    @property
    def valid(self) -> bool:
        return self.hermitian and self.unital_adjoint and self.ccp


def is_lindblad_generator(L: GeneratorMatrix, tol: float | None = None) -> GeneratorReport:
    """The three-part validity test for semigroup generators."""
    from .channels import verify_channel

    eps = tol if tol is not None else default_tolerances().check * max(1.0, sup_norm(L.entries))
    rep = verify_channel(ChannelMatrix(L.entries, L.basis), tol=eps)
    hermitian = rep.hermiticity_preserving

    Lmu = _generator_entries_mu(L)
    omega = omega_vector(L.d)
    unital_viol = sup_norm(Lmu.conj().T @ omega)
    unital = unital_viol <= eps

    if hermitian:
        ccp_rep = ccp_test(L, tol=eps)
        ccp, ccp_min = ccp_rep.is_ccp, ccp_rep.min_eigenvalue
    else:
        ccp, ccp_min = False, float("nan")

    return GeneratorReport(
        hermitian=hermitian,
        unital_adjoint=unital,
        ccp=ccp,
        hermiticity_violation=rep.hermiticity_violation,
        unitality_violation=float(unital_viol),
        ccp_min_eigenvalue=float(ccp_min),
    )


def generator_from_form(form: LindbladForm) -> GeneratorMatrix:
    """Assemble the standard form into a matrix-unit-basis generator."""
    L = _assemble(form.H, form.G, trace_basis(form.d))
    return GeneratorMatrix(L, OperatorBasis.matrix_units(form.d))


def lindblad_decompose(L: GeneratorMatrix) -> LindbladForm:
    """Recover (H, G, kappa) from a valid generator.

    Writes L-hat^Gamma = P - |psi><omega| - |omega><psi| with P supported on
    the complement of the entangled vector (that choice of gauge makes G the
    plain compression), reads kappa off psi = vec(kappa), and fixes the free
    imaginary part of <omega|psi> to zero, which is the traceless-H gauge.
    """
    report = is_lindblad_generator(L)
    if not report.valid:
        raise NotAGenerator(
            "decomposition needs a valid generator "
            f"(hermitian={report.hermitian}, unital_adjoint={report.unital_adjoint}, "
            f"ccp={report.ccp})"
        )
    d = L.d
    Lmu = _generator_entries_mu(L)
    Q = involution_gamma(Lmu)
    Q = (Q + Q.conj().T) / 2

    V = perp_isometry(d)
    Gj = V.conj().T @ Q @ V
    Gj = (Gj + Gj.conj().T) / 2

    omega = omega_vector(d)
    v = -(Q @ omega) / d
    v = v - omega * ((omega @ v) / d)
    re_overlap = -float(np.real(omega @ Q @ omega)) / (2 * d)
    psi = v + (re_overlap / d) * omega

    kappa = unvec(psi)
    H = (kappa - kappa.conj().T) / 2j
    H = (H + H.conj().T) / 2

    if d == 2:
        S = _JUMP_TO_PAULI
        G = S.T @ Gj @ S.conj()
        G = (G + G.conj().T) / 2
    else:
        G = Gj

    form = LindbladForm(H=H, G=G, kappa=kappa)
    resid = sup_norm(generator_from_form(form).entries - Lmu)
    if resid > 1e-8 * max(1.0, sup_norm(Lmu)):
        raise NotAGenerator(
            f"standard-form rebuild misses the input by {resid:.3e}; "
            "the matrix is not a generator within tolerance"
        )
    return form


def evolve(L: GeneratorMatrix, t: float) -> ChannelMatrix:
    """exp(t L-hat), in the basis the generator is given in."""
    if t < 0:
        raise RangeError(f"evolution time must be nonnegative, got {t}")
    return ChannelMatrix(expm(t * L.entries), L.basis)


def _rate_entries(value) -> tuple[np.ndarray, OperatorBasis | None]:
    if isinstance(value, GeneratorMatrix):
        return value.entries, value.basis
    return np.asarray(value, dtype=complex), None


def _ordered_product(rates: Callable, t_final: float, n: int) -> tuple[np.ndarray, OperatorBasis | None]:
    dt = t_final / n
    mids = (np.arange(n) + 0.5) * dt
    mats = []
    basis = None
    for tm in mids:
        M, b = _rate_entries(rates(float(tm)))
        basis = basis or b
        mats.append(M)
    steps = expm(np.stack(mats) * dt)
    out = np.eye(mats[0].shape[0], dtype=complex)
    for k in range(n):
        out = steps[k] @ out
    return out, basis


def evolve_time_dependent(
    rates: Callable[[float], GeneratorMatrix | np.ndarray],
    t_final: float,
    dt_max: float,
    tol: float = STEP_TOL,
    max_steps: int = 1 << 20,
) -> ChannelMatrix:
    """Time-ordered exponential of a generator family over [0, t_final].

    Midpoint product of per-step exponentials, each step a channel whenever
    the instantaneous generator is valid; the step is halved until two
    refinements agree within tol.
    """
    if dt_max <= 0:
        raise RangeError(f"dt_max must be positive, got {dt_max}")
    if t_final < 0:
        raise RangeError(f"t_final must be nonnegative, got {t_final}")
    M0, basis = _rate_entries(rates(0.0))
    n_side = M0.shape[0]
    d = int(round(math.sqrt(n_side)))
    basis = basis or OperatorBasis.matrix_units(d)
    if t_final == 0:
        return ChannelMatrix(np.eye(n_side, dtype=complex), basis)

    n = max(1, math.ceil(t_final / dt_max))
    prev, basis_seen = _ordered_product(rates, t_final, n)
    basis = basis_seen or basis
    while True:
        n *= 2
        if n > max_steps:
            raise StepFailure(
                f"time-ordered product did not converge to {tol:.1e} within {max_steps} steps"
            )
        cur, _ = _ordered_product(rates, t_final, n)
        if sup_norm(cur - prev) <= tol:
            return ChannelMatrix(cur, basis)
        prev = cur
