"""Dense 2x2 / 4x4 complex matrix kernel.

Matrices are plain ``numpy.ndarray`` objects of dtype complex128. The
two-qubit basis is ordered |00>, |01>, |10>, |11> with the first factor
being subsystem A.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from . import kernels
from .errors import DomainError, InvalidArgument

HERMITIAN_TOL = 1e-10
PSD_CLAMP = 1e-12
EIG_FLOOR_ULPS = 16

I2 = np.eye(2, dtype=np.complex128)
SX = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SY = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SZ = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PAULIS = (SX, SY, SZ)


def as_matrix(m, dims=(2, 4)):
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] not in dims:
        raise InvalidArgument(f"expected a square matrix of dimension {dims}, got shape {a.shape}")
    return a


def hermiticity_error(m):
    """Largest entrywise |M - M^dagger|."""
    a = np.asarray(m)
    return float(np.abs(a - a.conj().T).max())


def kron(a, b):
    """Tensor product of two 2x2 operators."""
    a = as_matrix(a, dims=(2,))
    b = as_matrix(b, dims=(2,))
    return np.kron(a, b)


@dataclass(frozen=True)
class EigenSystem:
    values: np.ndarray
    vectors: np.ndarray
    sweeps: int = 0

    def residual(self, m):
        """max_i ||M v_i - lambda_i v_i||."""
        r = np.asarray(m) @ self.vectors - self.vectors * self.values
        return float(np.linalg.norm(r, axis=0).max())


def _fix_phase(v):
    # largest-magnitude component (first among near-ties) made real positive
    for j in range(v.shape[1]):
        col = v[:, j]
        mags = np.abs(col)
        k = int(np.argmax(mags >= mags.max() - 1e-12))
        v[:, j] = col * (abs(col[k]) / col[k])
    return v


def hermitian_eig(m, tol=HERMITIAN_TOL):
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Eigenvalues are returned ascending; each eigenvector has its largest
    component real and positive so identical input gives identical output.
    """
    a = as_matrix(m)
    err = hermiticity_error(a)
    if err > tol:
        raise InvalidArgument(f"matrix is not Hermitian (max |M - M^H| = {err:.3e})")
    a = 0.5 * (a + a.conj().T)
    w, v, sweeps = kernels.jacobi_eigh(a)
    if sweeps < 0:
        raise DomainError("Jacobi iteration did not converge")
    order = np.argsort(w, kind="stable")
    return EigenSystem(w[order], _fix_phase(v[:, order]), sweeps)


def eigvalsh(m):
    a = as_matrix(m)
    w, _, sweeps = kernels.jacobi_eigh(0.5 * (a + a.conj().T), vectors=False)
    if sweeps < 0:
        raise DomainError("Jacobi iteration did not converge")
    return np.sort(w)


def hermitian_function(m, f):
    """Apply a real scalar function to a Hermitian matrix via its spectrum.

    ``f`` is called once per eigenvalue; a raised ``ValueError`` or a
    non-finite result is reported as a :class:`DomainError`.
    """
    es = hermitian_eig(m)
    fv = np.empty_like(es.values)
    for i, x in enumerate(es.values):
        try:
            y = f(float(x))
        except (ValueError, ZeroDivisionError, OverflowError) as exc:
            raise DomainError(f"function undefined at eigenvalue {x!r}: {exc}") from None
        if not math.isfinite(y):
            raise DomainError(f"function undefined at eigenvalue {x!r}")
        fv[i] = y
    out = (es.vectors * fv) @ es.vectors.conj().T
    return 0.5 * (out + out.conj().T)


def _psd_sqrt(x):
    if x < 0.0:
        if x < -PSD_CLAMP:
            raise ValueError("negative eigenvalue beyond clamp tolerance")
        return 0.0
    return math.sqrt(x)


def sqrtm_psd(m):
    """Square root of a PSD Hermitian matrix; eigenvalues in [-1e-12, 0) clamp to 0.

    Eigenvalues below the solver's resolution (a few ulps of the spectral
    radius) are also taken as zero, otherwise round-off of order 1e-17
    would leak into the root at order 1e-9.
    """
    a = as_matrix(m)
    floor = EIG_FLOOR_ULPS * np.finfo(float).eps * float(np.abs(eigvalsh(a)).max(initial=0.0))
    return hermitian_function(a, lambda x: 0.0 if abs(x) <= floor else _psd_sqrt(x))


def trace_norm(m):
    """Sum of singular values; Hermitian input uses the eigenvalue fast path."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim == 2 and a.shape[0] == a.shape[1] and a.shape[0] <= 4 and hermiticity_error(a) <= 1e-12:
        return float(np.abs(eigvalsh(a)).sum())
    return float(np.linalg.svd(a, compute_uv=False).sum())


def partial_trace(rho, keep):
    """Reduced state of subsystem ``keep`` ("A"/0 or "B"/1) of a two-qubit operator."""
    r = as_matrix(rho, dims=(4,)).reshape(2, 2, 2, 2)
    if keep in ("A", "a", 0):
        return np.einsum("ijkj->ik", r)
    if keep in ("B", "b", 1):
        return np.einsum("ijil->jl", r)
    raise InvalidArgument(f"invalid subsystem id {keep!r}; use 'A' or 'B'")


def local_op(a=None, b=None):
    """a (x) b with identity for a missing factor."""
    return np.kron(I2 if a is None else a, I2 if b is None else b)


def bloch_op(n):
    """n . sigma for a real 3-vector n."""
    return n[0] * SX + n[1] * SY + n[2] * SZ


@dataclass(frozen=True)
class FanoForm:
    """Local Bloch vectors ``s`` (A), ``r`` (B) and correlation matrix ``T``.

    In canonical form ``T`` is diagonal, ``c`` holds its diagonal, and
    ``rot_a``/``rot_b`` are the proper rotations that produced it.
    """

    s: np.ndarray
    r: np.ndarray
    T: np.ndarray
    canonical: bool = False
    c: np.ndarray | None = None
    rot_a: np.ndarray | None = field(default=None, repr=False)
    rot_b: np.ndarray | None = field(default=None, repr=False)

    def density_matrix(self):
        rho = np.eye(4, dtype=np.complex128)
        for j in range(3):
            rho = rho + self.s[j] * local_op(PAULIS[j], None)
            rho = rho + self.r[j] * local_op(None, PAULIS[j])
            for k in range(3):
                rho = rho + self.T[j, k] * np.kron(PAULIS[j], PAULIS[k])
        return rho / 4


def pauli_decompose(rho):
    """Fano parametrization of a two-qubit state."""
    a = as_matrix(rho, dims=(4,))
    s = np.array([np.trace(a @ local_op(p, None)) for p in PAULIS])
    r = np.array([np.trace(a @ local_op(None, p)) for p in PAULIS])
    t = np.array([[np.trace(a @ np.kron(p, q)) for q in PAULIS] for p in PAULIS])
    return FanoForm(s.real.copy(), r.real.copy(), t.real.copy())


def _signed_permutation(d):
    order = np.argsort(-np.abs(d), kind="stable")
    u = np.zeros((3, 3))
    v = np.zeros((3, 3))
    for col, idx in enumerate(order):
        u[idx, col] = 1.0 if d[idx] >= 0 else -1.0
        v[idx, col] = 1.0
    return u, np.abs(d[order]), v.T


def canonicalize_fano(f):
    """Diagonalize the correlation matrix with proper local rotations.

    T = U diag(c) V^T with det U = det V = +1; any leftover sign sits on
    c[2]. The local Bloch vectors are rotated into the same frames.
    """
    if f.canonical:
        raise InvalidArgument("Fano form is already canonical")
    t = np.asarray(f.T, dtype=float)
    if np.abs(t - np.diag(np.diag(t))).max() <= 1e-14:
        u, sv, vt = _signed_permutation(np.diag(t))
    else:
        u, sv, vt = np.linalg.svd(t)
    c = np.array(sv, dtype=float)
    v = vt.T.copy()
    u = u.copy()
    if np.linalg.det(u) < 0:
        u[:, 2] *= -1
        c[2] *= -1
    if np.linalg.det(v) < 0:
        v[:, 2] *= -1
        c[2] *= -1
    rot_a, rot_b = u.T, v.T
    return FanoForm(
        s=rot_a @ f.s,
        r=rot_b @ f.r,
        T=np.diag(c),
        canonical=True,
        c=c,
        rot_a=rot_a,
        rot_b=rot_b,
    )
