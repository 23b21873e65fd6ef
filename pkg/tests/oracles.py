"""Independent reference computations used as test oracles.

None of these share code paths with the package internals they check:
geometry uses finite differences of the metric alone, the continuum packet
is rebuilt by direct quadrature of the two-branch mode integral, the FRW
evolution by adaptive ODE integration per mode, and the waveguide check by
a matrix exponential of the finite-difference Dirac operator.
"""
import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import expm

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


# -- geometry ---------------------------------------------------------------

def fd_christoffel(gfun, p, h=1e-4):
    """Gamma^l_{mn} from a central-difference metric derivative."""
    p = np.asarray(p, float)
    dg = np.empty((2, 2, 2))
    for r in range(2):
        e = np.zeros(2)
        e[r] = h
        dg[r] = (gfun(p + e) - gfun(p - e)) / (2 * h)
    ginv = np.linalg.inv(gfun(p))
    gam = np.zeros((2, 2, 2))
    for l in range(2):
        for m in range(2):
            for n in range(2):
                gam[l, m, n] = 0.5 * sum(
                    ginv[l, s] * (dg[m, n, s] + dg[n, s, m] - dg[s, m, n]) for s in range(2)
                )
    return gam


def fd_ricci_scalar(gfun, p, h=1e-3):
    """R = g^{mn} R_{mn} with nested finite differences of the metric only."""
    p = np.asarray(p, float)
    gam = fd_christoffel(gfun, p)
    dgam = np.empty((2, 2, 2, 2))
    for a in range(2):
        e = np.zeros(2)
        e[a] = h
        dgam[a] = (fd_christoffel(gfun, p + e) - fd_christoffel(gfun, p - e)) / (2 * h)
    ric = np.zeros((2, 2))
    for m in range(2):
        for n in range(2):
            ric[m, n] = sum(dgam[l, l, m, n] - dgam[n, l, m, l] for l in range(2))
            ric[m, n] += sum(
                gam[l, m, n] * gam[s, l, s] - gam[l, m, s] * gam[s, n, l]
                for l in range(2)
                for s in range(2)
            )
    return float(np.sum(np.linalg.inv(gfun(p)) * ric))


# -- continuum Dirac --------------------------------------------------------

def eig_pair(k, m):
    """Eigenvectors of k sx + m sz from a dense eigensolver, sorted (neg, pos)."""
    w, v = np.linalg.eigh(k * SX + m * SZ)
    return w, v


def two_branch_mean_x(a_plus, a_minus, k, m, x, t):
    """<x>(t) of psi = int dk [a+ u+ e^{-iEt} + a- u- e^{iEt}] e^{ikx} by quadrature.

    ``a_plus``/``a_minus`` are branch amplitudes on the uniform ``k`` grid.
    """
    dk = k[1] - k[0]
    E = np.sqrt(k**2 + m**2)
    up = np.empty((k.size, 2), complex)
    un = np.empty((k.size, 2), complex)
    for i, kk in enumerate(k):
        _, v = eig_pair(kk, m)
        un[i], up[i] = v[:, 0], v[:, 1]
    out = []
    phase = np.exp(1j * np.outer(x, k))
    for tt in np.atleast_1d(t):
        spec = (a_plus * np.exp(-1j * E * tt))[:, None] * up + (a_minus * np.exp(1j * E * tt))[:, None] * un
        psi = phase @ spec * dk
        dens = np.sum(np.abs(psi) ** 2, axis=1)
        out.append(np.sum(x * dens) / np.sum(dens))
    return np.array(out)


def branch_amplitudes(f, k, m):
    """Project constant-per-mode spinors ``f`` (shape (nk, 2)) on the branches."""
    ap = np.empty(k.size, complex)
    an = np.empty(k.size, complex)
    for i, kk in enumerate(k):
        _, v = eig_pair(kk, m)
        an[i] = v[:, 0].conj() @ f[i]
        ap[i] = v[:, 1].conj() @ f[i]
    return ap, an


def mode_ode(f0, k, m, omega, t0, t1, rtol=1e-12, atol=1e-14):
    """Integrate i d/dt f = (k sx + m Omega(t) sz) f for one mode."""

    def rhs(t, y):
        f = y[:2] + 1j * y[2:]
        h = k * SX + m * omega(t) * SZ
        d = -1j * (h @ f)
        return np.concatenate([d.real, d.imag])

    y0 = np.concatenate([np.real(f0), np.imag(f0)])
    sol = solve_ivp(rhs, (t0, t1), y0, method="DOP853", rtol=rtol, atol=atol)
    assert sol.success, sol.message
    y = sol.y[:, -1]
    return y[:2] + 1j * y[2:]


def transition_probability(k, m, omega, t0, t1):
    """|<u+|U|u->|^2 for one mode through the profile between t0 and t1."""
    _, v = eig_pair(k, m)
    f = mode_ode(v[:, 0], k, m, omega, t0, t1)
    return abs(v[:, 1].conj() @ f) ** 2


# -- waveguides -------------------------------------------------------------

def dirac_difference_matrix(n_sites, d, m):
    """Finite-difference Dirac generator on (psi1(0..n-1), psi2(0..n-1)).

    i psi1' = -i (psi2(n+1) - psi2(n))/d + m psi1
    i psi2' = -i (psi1(n) - psi1(n-1))/d - m psi2
    with psi2 beyond the right edge and psi1 beyond the left edge set to zero.
    """
    h = np.zeros((2 * n_sites, 2 * n_sites), complex)
    for n in range(n_sites):
        i1, i2 = n, n_sites + n
        h[i1, i1] = m
        h[i2, i2] = -m
        h[i1, i2] += 1j / d
        if n + 1 < n_sites:
            h[i1, n_sites + n + 1] += -1j / d
        h[i2, i1] += -1j / d
        if n - 1 >= 0:
            h[i2, n - 1] += 1j / d
    return h


def dirac_difference_evolve(psi, d, m, z):
    n = psi.shape[0]
    h = dirac_difference_matrix(n, d, m)
    v = np.concatenate([psi[:, 0], psi[:, 1]])
    out = expm(-1j * h * z) @ v
    return np.stack([out[:n], out[n:]], axis=1)
