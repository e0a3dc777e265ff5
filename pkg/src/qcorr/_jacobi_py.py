"""Pure-Python twin of the compiled ``_jacobi`` kernels.

Same algorithm, same sweep order, same return conventions. Used when the
extension is not built or when ``QCORR_PURE_PYTHON`` is set.
"""
import math

import numpy as np

MAX_SWEEPS = 64


def _jacobi(a, v, n, want_v, rel_tol):
    fro = math.sqrt(sum(abs(a[p][q]) ** 2 for p in range(n) for q in range(n)))
    if fro == 0.0:
        return 0
    for sweep in range(MAX_SWEEPS):
        off = sum(abs(a[p][q]) ** 2 for p in range(n) for q in range(n) if p != q)
        if math.sqrt(off) < rel_tol * fro:
            return sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                g = abs(a[p][q])
                if g < 1e-300:
                    continue
                ph = a[p][q] / g
                phc = ph.conjugate()
                tau = (a[q][q].real - a[p][p].real) / (2.0 * g)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                for k in range(n):
                    akp, akq = a[k][p], a[k][q]
                    a[k][p] = c * akp - s * phc * akq
                    a[k][q] = s * ph * akp + c * akq
                for k in range(n):
                    apk, aqk = a[p][k], a[q][k]
                    a[p][k] = c * apk - s * ph * aqk
                    a[q][k] = s * phc * apk + c * aqk
                a[p][q] = 0j
                a[q][p] = 0j
                a[p][p] = complex(a[p][p].real)
                a[q][q] = complex(a[q][q].real)
                if want_v:
                    for k in range(n):
                        akp, akq = v[k][p], v[k][q]
                        v[k][p] = c * akp - s * phc * akq
                        v[k][q] = s * ph * akp + c * akq
    return -1


def jacobi_eigh(a, vectors=True, rel_tol=1e-14):
    """Raw Jacobi diagonalization; returns (diag, V, sweeps), unsorted."""
    work = [[complex(x) for x in row] for row in np.asarray(a)]
    n = len(work)
    v = [[1.0 + 0j if i == j else 0j for j in range(n)] for i in range(n)]
    sweeps = _jacobi(work, v, n, vectors, rel_tol)
    w = np.array([work[i][i].real for i in range(n)])
    return w, np.array(v, dtype=np.complex128), sweeps


def _pauli_a(nx, ny, nz):
    m = complex(nx, -ny)
    p = complex(nx, ny)
    return [
        [nz, 0j, m, 0j],
        [0j, nz, 0j, m],
        [p, 0j, -nz, 0j],
        [0j, p, 0j, -nz],
    ]


def _matmul4(x, y):
    return [[sum(x[i][l] * y[l][j] for l in range(4)) for j in range(4)] for i in range(4)]


def tmin_objective(rho, dirs):
    """Trace norm of rho - Pi_n(rho) for each unit direction n (rows of dirs)."""
    r = [[complex(x) for x in row] for row in np.asarray(rho)]
    out = np.empty(len(dirs))
    for idx, (nx, ny, nz) in enumerate(np.asarray(dirs, dtype=float)):
        k = _pauli_a(nx, ny, nz)
        krk = _matmul4(_matmul4(k, r), k)
        diff = [[0.5 * (r[i][j] - krk[i][j]) for j in range(4)] for i in range(4)]
        _jacobi(diff, None, 4, False, 1e-14)
        out[idx] = sum(abs(diff[i][i].real) for i in range(4))
    return out


def skew_objective(sqrt_rho, dirs):
    """Skew information of rho w.r.t. (n . sigma) (x) 1 for each direction n."""
    q = [[complex(x) for x in row] for row in np.asarray(sqrt_rho)]
    qq = _matmul4(q, q)
    out = np.empty(len(dirs))
    for idx, (nx, ny, nz) in enumerate(np.asarray(dirs, dtype=float)):
        k = _pauli_a(nx, ny, nz)
        qk = _matmul4(q, k)
        kk = _matmul4(k, k)
        t_rkk = sum(qq[i][j] * kk[j][i] for i in range(4) for j in range(4))
        t_qkqk = sum(qk[i][j] * qk[j][i] for i in range(4) for j in range(4))
        out[idx] = (t_rkk - t_qkqk).real
    return out
