"""Two-qubit correlation measures: concurrence, Bures entanglement, trace
MIN and UIN.

Each nonlocality measure has a closed-formula path and an independent
brute-force oracle that optimizes directly over local measurements. When
they disagree the oracle is authoritative.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from . import kernels
from .errors import InvalidArgument
from .qmat import (
    PAULIS,
    SY,
    bloch_op,
    canonicalize_fano,
    eigvalsh,
    hermiticity_error,
    local_op,
    pauli_decompose,
    sqrtm_psd,
    trace_norm,
)
from .sphere import maximize_on_sphere

STATE_TOL = 1e-10
MARGINAL_TOL = 1e-9
FLAG_TOL = 1e-3
BURES_MAX = 2.0 - math.sqrt(2.0)
YY = np.kron(SY, SY)


def validate_state(rho, tol=STATE_TOL):
    r = np.asarray(rho, dtype=np.complex128)
    if r.shape != (4, 4):
        raise InvalidArgument(f"expected a 4x4 density matrix, got shape {r.shape}")
    if hermiticity_error(r) > tol:
        raise InvalidArgument("density matrix is not Hermitian")
    if abs(np.trace(r) - 1.0) > tol:
        raise InvalidArgument(f"density matrix trace is {np.trace(r).real!r}, expected 1")
    if eigvalsh(r)[0] < -tol:
        raise InvalidArgument("density matrix is not positive semidefinite")
    return r


def spin_flip(rho):
    return YY @ np.conj(rho) @ YY


def concurrence_pure(psi):
    v = np.asarray(psi, dtype=np.complex128).reshape(-1)
    if v.shape != (4,) or abs(np.linalg.norm(v) - 1.0) > STATE_TOL:
        raise InvalidArgument("expected a normalized two-qubit state vector")
    return float(min(1.0, abs(v @ YY @ v)))


def concurrence_taus(rho, method="product"):
    """Descending tau_i: square roots of the spectrum of rho * rho~.

    ``method="sqrt"`` takes them from sqrt(rho) rho~ sqrt(rho) instead.
    """
    if method == "product":
        lam = np.linalg.eigvals(rho @ spin_flip(rho)).real
    elif method == "sqrt":
        q = sqrtm_psd(rho)
        lam = eigvalsh(q @ spin_flip(rho) @ q)
    else:
        raise InvalidArgument(f"unknown concurrence method {method!r}")
    return np.sort(np.sqrt(np.clip(lam, 0.0, None)))[::-1]


def concurrence_mixed(rho, method="product"):
    r = validate_state(rho)
    tau = concurrence_taus(r, method)
    return float(min(1.0, max(0.0, tau[0] - tau[1] - tau[2] - tau[3])))


def bures_entanglement(c):
    """(raw, normalized) Bures entanglement of a state with concurrence ``c``."""
    if not -1e-10 <= c <= 1.0 + 1e-10:
        raise InvalidArgument(f"concurrence must lie in [0, 1], got {c!r}")
    c = min(max(c, 0.0), 1.0)
    raw = 2.0 - 2.0 * math.sqrt((1.0 + math.sqrt(1.0 - c * c)) / 2.0)
    return raw, raw / BURES_MAX


@dataclass(frozen=True)
class TminIntermediates:
    x: np.ndarray
    c: np.ndarray
    tmin_alpha: float
    tmin_beta: float
    chi_plus: float
    chi_minus: float
    branch: str  # "x=0" or "x!=0"
    norm: str


def tmin_closed(f, norm="l1"):
    """Closed-formula trace MIN from a canonical Fano form.

    ``norm="l1"`` reads the vector norms in the formula as 1-norms (the
    literal reading); ``norm="l2"`` uses Euclidean norms, which is the
    reading that agrees with :func:`tmin_oracle`.
    """
    if not f.canonical:
        raise InvalidArgument("tmin_closed needs a canonical Fano form")
    if norm not in ("l1", "l2"):
        raise InvalidArgument(f"unknown norm {norm!r}")
    x, c = np.asarray(f.s, float), np.asarray(f.c, float)
    if np.linalg.norm(x) <= MARGINAL_TOL:
        val = float(np.abs(c).max())
        return val, TminIntermediates(x, c, 0.0, 0.0, 0.0, 0.0, "x=0", norm)
    ord_ = 1 if norm == "l1" else 2
    nx, nc = np.linalg.norm(x, ord_), np.linalg.norm(c, ord_)
    x2, c2 = x * x, c * c
    a = nc**2 * nx**2 - float(np.sum(c2 * x2))
    b = x2[0] * c2[1] * c2[2] + x2[1] * c2[2] * c2[0] + x2[2] * c2[0] * c2[1]
    chi_p = a + 2.0 * math.sqrt(b) * nx
    chi_m = a - 2.0 * math.sqrt(b) * nx
    val = (math.sqrt(max(chi_p, 0.0)) + math.sqrt(max(chi_m, 0.0))) / (2.0 * nx)
    return val, TminIntermediates(x, c, a, b, chi_p, chi_m, "x!=0", norm)


def measure_a(rho, n):
    """Post-measurement state for the projective measurement of n . sigma on A."""
    out = np.zeros((4, 4), dtype=np.complex128)
    for sign in (1.0, -1.0):
        proj = local_op(0.5 * (np.eye(2) + sign * bloch_op(n)), None)
        out += proj @ rho @ proj
    return out


def tmin_oracle(rho):
    """Trace MIN by direct optimization over marginal-preserving measurements."""
    r = validate_state(rho)
    s = pauli_decompose(r).s
    ns = np.linalg.norm(s)
    if ns > MARGINAL_TOL:
        return trace_norm(r - measure_a(r, s / ns))
    val, _ = maximize_on_sphere(lambda d: kernels.tmin_objective(r, d))
    return val


def skew_information(rho, obs):
    """Wigner-Yanase skew information Tr[rho R^2] - Tr[sqrt(rho) R sqrt(rho) R]."""
    r = np.asarray(rho, dtype=np.complex128)
    k = np.asarray(obs, dtype=np.complex128)
    if k.shape != (4, 4) or hermiticity_error(k) > STATE_TOL:
        raise InvalidArgument("observable must be a 4x4 Hermitian matrix")
    q = sqrtm_psd(r)
    return float(np.trace(r @ k @ k).real - np.trace(q @ k @ q @ k).real)


def uin_w_matrix(sqrt_rho):
    ops = [local_op(p, None) for p in PAULIS]
    w = np.array([[np.trace(sqrt_rho @ a @ sqrt_rho @ b) for b in ops] for a in ops]).real
    return 0.5 * (w + w.T)


def uin_closed(rho, s_prime="sqrt"):
    """Closed-formula UIN.

    ``s_prime="sqrt"`` uses s'_i = Tr[sqrt(rho) (sigma_i x 1)];
    ``s_prime="bloch"`` uses the Bloch vector of the A marginal.
    """
    r = validate_state(rho)
    q = sqrtm_psd(r)
    w = uin_w_matrix(q)
    if s_prime == "sqrt":
        sv = np.array([np.trace(q @ local_op(p, None)).real for p in PAULIS])
    elif s_prime == "bloch":
        sv = pauli_decompose(r).s
    else:
        raise InvalidArgument(f"unknown s' reading {s_prime!r}")
    n2 = float(sv @ sv)
    if math.sqrt(n2) > MARGINAL_TOL:
        return float(1.0 - sv @ w @ sv / n2)
    return float(1.0 - np.linalg.eigvalsh(w)[0])


def uin_oracle(rho):
    """UIN by direct maximization of skew information over local observables."""
    r = validate_state(rho)
    s = pauli_decompose(r).s
    ns = np.linalg.norm(s)
    if ns > MARGINAL_TOL:
        n = s / ns
        return max(skew_information(r, local_op(bloch_op(sign * n), None)) for sign in (1.0, -1.0))
    q = sqrtm_psd(r)
    val, _ = maximize_on_sphere(lambda d: kernels.skew_objective(q, d))
    return val


@dataclass
class CorrelationReport:
    concurrence: float
    bures_raw: float
    bures_normalized: float
    tmin_closed: float
    tmin_oracle: float
    uin_closed: float
    uin_oracle: float
    discrepancy_flags: list = field(default_factory=list)

    @property
    def tmin(self):
        return self.tmin_oracle

    @property
    def uin(self):
        return self.uin_oracle


def full_report(rho, concurrence=None):
    """All measures for one state. Oracle values are the primary ones."""
    r = validate_state(rho)
    c = concurrence_mixed(r) if concurrence is None else concurrence
    raw, normalized = bures_entanglement(c)
    tc, _ = tmin_closed(canonicalize_fano(pauli_decompose(r)))
    to = tmin_oracle(r)
    uc = uin_closed(r)
    uo = uin_oracle(r)
    flags = []
    if abs(tc - to) > FLAG_TOL:
        flags.append(("tmin", abs(tc - to)))
    if abs(uc - uo) > FLAG_TOL:
        flags.append(("uin", abs(uc - uo)))
    return CorrelationReport(c, raw, normalized, tc, to, uc, uo, flags)
