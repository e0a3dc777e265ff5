"""Two-qubit teleportation through two copies of a thermal channel.

The Bell outcome ``i`` (projector ``E^i``) is paired with the Pauli
correction ``sigma_i`` in the order (1, x, y, z), which is the standard
correction map for a singlet resource: a perfect |Psi-> channel returns the
input unchanged.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from .errors import InvalidArgument
from .graphene import thermal_state
from .qmat import I2, SX, SY, SZ, sqrtm_psd

CLASSICAL_BOUND = 2.0 / 3.0
N_THETA = 32
N_PHI = 64

_S = 1.0 / math.sqrt(2.0)
PSI_MINUS = np.array([0, _S, -_S, 0], dtype=np.complex128)
PHI_MINUS = np.array([_S, 0, 0, -_S], dtype=np.complex128)
PHI_PLUS = np.array([_S, 0, 0, _S], dtype=np.complex128)
PSI_PLUS = np.array([0, _S, _S, 0], dtype=np.complex128)
CORRECTIONS = (I2, SX, SY, SZ)


def bell_projectors():
    """E^0..E^3 = |Psi-><Psi-|, |Phi-><Phi-|, |Phi+><Phi+|, |Psi+><Psi+|."""
    return tuple(np.outer(v, v.conj()) for v in (PSI_MINUS, PHI_MINUS, PHI_PLUS, PSI_PLUS))


_PAIR_OPS = np.array([np.kron(a, b) for a in CORRECTIONS for b in CORRECTIONS])


def channel_probabilities(rho_ch):
    return np.array([np.trace(e @ rho_ch).real for e in bell_projectors()])


@dataclass(frozen=True)
class InputState:
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise InvalidArgument(f"theta must lie in [0, pi], got {self.theta!r}")

    @property
    def vector(self):
        return input_vectors(np.array([self.theta]), np.array([self.phi]))[0]

    @property
    def rho(self):
        v = self.vector
        return np.outer(v, v.conj())


def input_vectors(theta, phi):
    """cos(theta/2)|10> + e^{i phi} sin(theta/2)|01>, one row per (theta, phi)."""
    theta, phi = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float))
    out = np.zeros(theta.shape + (4,), dtype=np.complex128)
    out[..., 2] = np.cos(theta / 2)
    out[..., 1] = np.exp(1j * phi) * np.sin(theta / 2)
    return out


def _pair_weights(probs):
    p = np.asarray(probs, dtype=float)
    return np.outer(p, p).reshape(-1)


def teleport_output(rho_in, rho_ch=None, probs=None):
    """Output state sum_ij P_i P_j (sigma_i x sigma_j) rho_in (sigma_i x sigma_j).

    ``rho_in`` may carry leading batch dimensions.
    """
    if probs is None:
        if rho_ch is None:
            raise InvalidArgument("need a channel state or its Bell probabilities")
        probs = channel_probabilities(rho_ch)
    w = _pair_weights(probs)
    r = np.asarray(rho_in, dtype=np.complex128)
    return np.einsum("k,kab,...bc,kcd->...ad", w, _PAIR_OPS, r, _PAIR_OPS, optimize=True)


def output_closed_ab(p, T):
    """(a, b) of the closed-form output matrix, b from its hyperbolic closed form."""
    e11, e22 = p.eta11, p.eta22
    n_plus, n_minus = e11 + 1.0, e11 - 1.0
    xm = p.lam * math.sqrt(n_minus**2 + e22**2) / T
    xp = p.lam * math.sqrt(n_plus**2 + e22**2) / T
    # cosh/sinh scaled by exp(-max) so small T does not overflow
    m = max(abs(xm), abs(xp))

    def ch(x):
        return 0.5 * (math.exp(x - m) + math.exp(-x - m))

    def sh(x):
        return 0.5 * (math.exp(x - m) - math.exp(-x - m))

    b = math.cos(p.alpha) ** 2 * (ch(xm) - sh(xp)) ** 2 / (4 * (ch(xm) + ch(xp)) ** 2)
    return 0.25, b


def x_output_matrix(a, b, theta):
    """Output matrix with constant diagonal ``a`` and anti-diagonal ``b sin(theta)``."""
    m = np.eye(4, dtype=np.complex128) * a
    m[np.arange(4), 3 - np.arange(4)] = b * math.sin(theta)
    return m


def fidelity_pure(psi_in, rho_out):
    """<psi|rho_out|psi>: the Uhlmann fidelity for a pure input."""
    v = psi_in.vector if isinstance(psi_in, InputState) else np.asarray(psi_in, dtype=np.complex128)
    return float(min(1.0, max(0.0, (v.conj() @ rho_out @ v).real)))


def uhlmann_fidelity(rho, sigma):
    """(Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2 for general states."""
    q = sqrtm_psd(rho)
    return float(np.trace(sqrtm_psd(q @ sigma @ q)).real ** 2)


def sphere_average(fid, n_theta=N_THETA, n_phi=N_PHI):
    """(1/4pi) int dphi int fid(theta, phi) sin(theta) dtheta.

    Gauss-Legendre in theta over [0, pi], uniform trapezoid in phi.
    ``fid`` receives broadcast arrays of theta and phi.
    """
    x, wx = np.polynomial.legendre.leggauss(n_theta)
    theta = 0.5 * math.pi * (x + 1.0)
    wt = 0.5 * math.pi * wx
    phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
    wp = 2.0 * math.pi / n_phi
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    vals = np.asarray(fid(tt, pp), dtype=float)
    return float(np.sum(vals * (wt * np.sin(theta))[:, None]) * wp / (4.0 * math.pi))


def channel_fidelity(probs, theta, phi):
    """Fidelity of the full channel map for inputs (theta, phi).

    For a pure input the output overlap is sum_k w_k |<psi|U_k|psi>|^2,
    so the output matrices never need to be formed.
    """
    psi = input_vectors(theta, phi)
    amp = np.einsum("...a,kab,...b->...k", psi.conj(), _PAIR_OPS, psi, optimize=True)
    return (np.abs(amp) ** 2) @ _pair_weights(probs)


def average_fidelity_channel(rho_ch, n_theta=N_THETA, n_phi=N_PHI):
    probs = channel_probabilities(rho_ch)
    return sphere_average(lambda t, f: channel_fidelity(probs, t, f), n_theta, n_phi)


def average_fidelity(p, T, n_theta=N_THETA, n_phi=N_PHI):
    """Average teleportation fidelity over pure inputs for the thermal channel."""
    return average_fidelity_channel(thermal_state(p, T), n_theta, n_phi)


def average_fidelity_x_family(a, b, n_theta=N_THETA, n_phi=N_PHI):
    """Quadrature average for the constant-diagonal family at phi = 0 inputs."""

    def fid(theta, _phi):
        psi = input_vectors(theta, 0.0)
        return np.array(
            [fidelity_pure(v, x_output_matrix(a, b, t)) for v, t in zip(psi.reshape(-1, 4), theta.reshape(-1))]
        ).reshape(theta.shape)

    return sphere_average(fid, n_theta, n_phi)


def classical_threshold_check(fa):
    """True when the average fidelity beats the classical bound 2/3."""
    return fa > CLASSICAL_BOUND


@dataclass
class TeleportResult:
    probs: np.ndarray
    rho_out: np.ndarray
    a_closed: float
    b_closed: float
    fidelity_at: dict = field(default_factory=dict)
    avg_fidelity: float = float("nan")

    @property
    def avg_fidelity_closed(self):
        return self.a_closed + 2.0 * self.b_closed / 3.0


def teleport(p, T, theta=math.pi / 2, phi=0.0, thetas=()):
    """Teleport through two copies of the thermal state of ``p`` at temperature ``T``."""
    rho_ch = thermal_state(p, T)
    probs = channel_probabilities(rho_ch)
    state = InputState(theta, phi)
    rho_out = teleport_output(state.rho, probs=probs)
    a, b = output_closed_ab(p, T)
    fid = {}
    for th in (theta, *thetas):
        s = InputState(th, phi)
        fid[th] = fidelity_pure(s, teleport_output(s.rho, probs=probs))
    avg = average_fidelity_channel(rho_ch)
    return TeleportResult(probs, rho_out, a, b, fid, avg)
