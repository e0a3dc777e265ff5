"""Effective pseudo-spin (sublattice) x valley Hamiltonian of a graphene sheet.

Basis order is |up,1>, |up,0>, |down,1>, |down,0>, i.e. the two-qubit
|ab> amplitudes |00>, |01>, |10>, |11> in index order 0..3. Energies are in
units where k_B = 1.
"""
from dataclasses import dataclass
import math

import numpy as np

from .errors import InvalidArgument, UnsupportedParameters
from .qmat import I2, SX, SY, SZ, EigenSystem, eigvalsh, hermitian_function

ELEMENT_INDEX = {
    "rho11": (0, 0),
    "rho12": (0, 1),
    "rho13": (0, 2),
    "rho14": (0, 3),
    "rho23": (1, 2),
    "rho24": (1, 3),
    "rho34": (2, 3),
}


@dataclass(frozen=True)
class GrapheneParams:
    eta: float = 1.0
    eta_x: float = 1.0
    eta_y: float = 1.0
    lam: float = 1.0
    alpha: float = 0.0

    def __post_init__(self):
        for name in ("eta", "eta_x", "eta_y", "lam", "alpha"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidArgument(f"parameter {name} must be finite")

    def _require_lambda(self):
        if self.lam == 0.0:
            raise UnsupportedParameters("closed forms need lambda != 0; use the numeric path")

    @property
    def eta11(self):
        self._require_lambda()
        return self.eta * self.eta_x / self.lam

    @property
    def eta22(self):
        self._require_lambda()
        return self.eta * self.eta_y / self.lam


def build_hamiltonian(p):
    kinetic = p.eta * (p.eta_x * np.kron(SX, I2) + p.eta_y * np.kron(SY, SZ))
    valley = I2 + math.cos(p.alpha) * SX + math.sin(p.alpha) * SY
    h = kinetic + p.lam * np.kron(I2, valley)
    return 0.5 * (h + h.conj().T)


def n_coefficients(p):
    """(n_+, n_-, N_+, N_-) of the analytic eigenvectors."""
    e11, e22 = p.eta11, p.eta22
    n_plus, n_minus = e11 + 1.0, e11 - 1.0

    def coeff(n, sign):
        r = math.hypot(n, e22)
        # n = eta22 = 0: the branch pair is degenerate and any unit phase works
        return -(n + sign * 1j * e22) / (2.0 * r) if r > 0.0 else -0.5 + 0j

    return n_plus, n_minus, coeff(n_plus, -1.0), coeff(n_minus, 1.0)


@dataclass(frozen=True)
class BranchEigensystem:
    """Analytic energies E1..E4 and states phi1..phi4 (columns), in that order."""

    energies: np.ndarray
    states: np.ndarray

    def sorted(self):
        order = np.argsort(self.energies, kind="stable")
        return EigenSystem(self.energies[order], self.states[:, order])

    def residual(self, h):
        r = h @ self.states - self.states * self.energies
        return np.linalg.norm(r, axis=0)


def analytic_eigensystem(p):
    n_plus, n_minus, big_plus, big_minus = n_coefficients(p)
    lam, e22 = p.lam, p.eta22
    rp, rm = math.hypot(n_plus, e22), math.hypot(n_minus, e22)
    energies = np.array([lam * (1 - rp), lam * (1 + rp), lam * (1 - rm), lam * (1 + rm)])
    ph = np.exp(-1j * p.alpha)
    states = np.array(
        [
            [ph * big_plus, 0.5, ph / 2, big_plus],
            [-ph * big_plus, 0.5, ph / 2, -big_plus],
            [-ph / 2, big_minus, -ph * big_minus, 0.5],
            [-ph / 2, -big_minus, ph * big_minus, 0.5],
        ],
        dtype=np.complex128,
    ).T
    return BranchEigensystem(energies, states)


@dataclass(frozen=True)
class GroundState:
    kind: str  # "unique" | "degenerate-superposition"
    state: np.ndarray
    energy: float
    label: str
    beta: float | None = None


def ground_state(p, beta_phase=0.0):
    """Ground state chosen by the signs of lambda and eta11.

    At eta11 == 0 the two lowest branches are degenerate and the state is
    their equal-weight superposition with relative phase ``beta_phase``.
    """
    branches = analytic_eigensystem(p)
    e11 = p.eta11
    lo, hi = (0, 2) if p.lam > 0 else (1, 3)
    if e11 == 0.0:
        psi = (np.exp(1j * beta_phase) * branches.states[:, lo] + branches.states[:, hi]) / math.sqrt(2)
        label = "phi_g+" if p.lam > 0 else "phi_g-"
        return GroundState("degenerate-superposition", psi, float(branches.energies[lo]), label, beta_phase)
    k = lo if e11 > 0 else hi
    return GroundState("unique", branches.states[:, k].copy(), float(branches.energies[k]), f"phi{k + 1}")


def thermal_state(p, T):
    """Gibbs state exp(-H/T)/Z, evaluated with the exponent shifted by E_min."""
    if not T > 0:
        raise InvalidArgument(f"temperature must be positive, got {T!r}")
    h = build_hamiltonian(p)
    e_min = eigvalsh(h)[0]
    unnorm = hermitian_function(h - e_min * np.eye(4), lambda x: math.exp(-x / T))
    return unnorm / np.trace(unnorm).real


@dataclass(frozen=True)
class ThermalClosedForm:
    Z: float
    Zprime: float
    elements: dict

    def matrix(self):
        """Normalized density matrix assembled from the closed element formulas."""
        m = np.zeros((4, 4), dtype=np.complex128)
        for name, (i, j) in ELEMENT_INDEX.items():
            m[i, j] = self.elements[name]
            m[j, i] = np.conj(self.elements[name])
        for i in range(4):
            m[i, i] = self.elements["rho11"]
        return m / self.Z


def thermal_closed_elements(p, T):
    """Matrix elements of the thermal state from their literal closed forms."""
    if not T > 0:
        raise InvalidArgument(f"temperature must be positive, got {T!r}")
    _, _, big_plus, big_minus = n_coefficients(p)
    energies = analytic_eigensystem(p).energies
    w = np.exp(-energies / T)
    z = float(w.sum())
    zp = float(w[1] + w[2] - w[3])
    ea = np.exp(-1j * p.alpha)
    npc, nmc = np.conj(big_plus), np.conj(big_minus)
    el = {
        "rho11": z / 4,
        "rho12": 0.5 * ea * (w[0] * big_plus - zp * nmc),
        "rho13": 0.5 * (w[0] * big_plus + zp * nmc),
        "rho14": -0.25 * ea * (-2 * w[0] + z),
        "rho24": 0.5 * (w[0] * npc + zp * big_minus),
        "rho23": -0.25 * np.conj(ea) * (-2 * w[0] + z),
        "rho34": 0.5 * ea * (w[0] * npc - zp * big_minus),
    }
    return ThermalClosedForm(z, zp, el)
