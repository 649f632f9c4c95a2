"""First nonzero Neumann eigenvalue of the weighted 1D problem.

Two independent routes to the same number:

* ``first_eigenvalue`` -- shooting.  Integrate the initial value problem
  ``phi'' - (n-1)*tk*phi' + sigma*phi = 0``, ``phi(0) = 0``, ``phi'(0) = 1``
  on [0, D/2] and bisect sigma on the predicate "phi' stays positive".  The
  eigenvalue is the supremum of sigmas for which the predicate holds; at that
  value phi' first vanishes at the endpoint, which is exactly the Neumann
  condition of the weighted form.
* ``sl_fd_oracle`` -- a finite-volume discretization of the weight form
  ``-(w*phi')'/w`` with ``w = ck^(n-1)`` on [-D/2, D/2], Neumann via ghost
  reflection, solved by Sturm-sequence bisection on the symmetric tridiagonal
  matrix.  Serves as a cross-check oracle for the shooting route.

The two forms agree because ``(ck^(n-1))'/ck^(n-1) = -(n-1)*tk``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import InvalidParamsError, ModelParams, NonConvergenceError, PoleError
from .specialfn import ck_array, tk_array

# Starting grid for the shooting integrator; refined by doubling until two
# successive refinements move the eigenvalue by less than tol/4.
_INITIAL_STEPS = 128
_MAX_STEPS = 1 << 22

# The sigma bracket is resolved to tol/8 so that the cross-grid Richardson
# comparison at tol/4 measures grid error, not bisection slack.
_SIGMA_REFINE = 8.0

_SIGMA_CAP = 1e12

# Values beyond this magnitude are treated as numerical blow-up of the IVP
# (possible for badly under-resolved grids near the Bonnet-Myers ceiling).
_BLOWUP = 1e200


@dataclass(frozen=True)
class PhiTrajectory:
    """Sampled IVP solution (phi, phi') on the uniform grid over [0, D/2]."""

    sigma: float
    grid: np.ndarray
    phi: np.ndarray
    dphi: np.ndarray
    first_dphi_zero: float | None


@dataclass(frozen=True)
class EigenResult:
    """Converged eigenvalue with its final bisection bracket."""

    mu: float
    bracket_lo: float
    bracket_hi: float
    iterations: int
    tol: float
    steps: int
    trajectory: PhiTrajectory


def _tk_half_table(kappa: float, half: float, steps: int) -> list[float]:
    """tk at the nodes and half-nodes s = j*h/2, j = 0..2*steps."""
    if kappa > 0 and half >= math.pi / (2.0 * math.sqrt(kappa)):
        raise PoleError(
            "integration interval [0, %g] contains a pole of tk at pi/(2*sqrt(kappa))" % half
        )
    pts = np.arange(2 * steps + 1) * (half / (2 * steps))
    return tk_array(kappa, pts).tolist()


def _dphi_positive(nm1: float, sigma: float, h: float, steps: int, tks: list[float]) -> bool:
    """Early-exit check that phi' stays positive across the whole interval."""
    phi, dphi = 0.0, 1.0
    h2 = 0.5 * h
    h6 = h / 6.0
    for i in range(steps):
        t0 = tks[2 * i]
        tm = tks[2 * i + 1]
        t1 = tks[2 * i + 2]
        k1d = nm1 * t0 * dphi - sigma * phi
        p2 = phi + h2 * dphi
        d2 = dphi + h2 * k1d
        k2d = nm1 * tm * d2 - sigma * p2
        p3 = phi + h2 * d2
        d3 = dphi + h2 * k2d
        k3d = nm1 * tm * d3 - sigma * p3
        p4 = phi + h * d3
        d4 = dphi + h * k3d
        k4d = nm1 * t1 * d4 - sigma * p4
        phi += h6 * (dphi + 2.0 * (d2 + d3) + d4)
        dphi += h6 * (k1d + 2.0 * (k2d + k3d) + k4d)
        if not dphi > 0.0:
            return False
        if dphi > _BLOWUP or phi > _BLOWUP or phi < -_BLOWUP:
            # phi' grew without sign change: positivity holds on this grid
            return True
    return True


def _hermite_dphi_zero(
    h: float, s0: float, d0: float, dd0: float, d1: float, dd1: float
) -> float:
    """Refine the zero of phi' inside one step via its cubic Hermite model.

    ``d0``/``d1`` are phi' at the step ends, ``dd0``/``dd1`` the corresponding
    phi'' values; the zero is bisected down to 1e-13 in s.
    """
    if d1 == 0.0:
        return s0 + h
    if not math.isfinite(d1):
        return s0
    c0 = d0
    c1 = h * dd0
    c2 = -3.0 * d0 - 2.0 * h * dd0 + 3.0 * d1 - h * dd1
    c3 = 2.0 * d0 + h * dd0 - 2.0 * d1 + h * dd1

    def hermite(th: float) -> float:
        return c0 + th * (c1 + th * (c2 + th * c3))

    lo, hi = 0.0, 1.0
    for _ in range(64):
        if (hi - lo) * h <= 1e-13:
            break
        mid = 0.5 * (lo + hi)
        if hermite(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return s0 + 0.5 * (lo + hi) * h


def integrate_phi(params: ModelParams, sigma: float, steps: int) -> PhiTrajectory:
    """Integrate the shooting IVP with classical 4th-order steps.

    Returns the sampled trajectory on [0, D/2] together with the location of
    the first zero of phi' (if any), refined inside the detecting step via a
    cubic Hermite model of phi'.  The odd extension of the solution covers
    [-D/2, 0], so integrating the right half suffices.
    """
    if steps < 16:
        raise InvalidParamsError(f"steps must be >= 16, got {steps}")
    half = params.half_diameter
    nm1 = float(params.n - 1)
    h = half / steps
    tks = _tk_half_table(params.kappa, half, steps)

    phis = np.empty(steps + 1)
    dphis = np.empty(steps + 1)
    phi, dphi = 0.0, 1.0
    phis[0] = phi
    dphis[0] = dphi
    h2 = 0.5 * h
    h6 = h / 6.0
    first_zero = None
    for i in range(steps):
        t0 = tks[2 * i]
        tm = tks[2 * i + 1]
        t1 = tks[2 * i + 2]
        k1d = nm1 * t0 * dphi - sigma * phi
        p2 = phi + h2 * dphi
        d2 = dphi + h2 * k1d
        k2d = nm1 * tm * d2 - sigma * p2
        p3 = phi + h2 * d2
        d3 = dphi + h2 * k2d
        k3d = nm1 * tm * d3 - sigma * p3
        p4 = phi + h * d3
        d4 = dphi + h * k3d
        k4d = nm1 * t1 * d4 - sigma * p4
        phi_prev, dphi_prev = phi, dphi
        phi += h6 * (dphi + 2.0 * (d2 + d3) + d4)
        dphi += h6 * (k1d + 2.0 * (k2d + k3d) + k4d)
        phis[i + 1] = phi
        dphis[i + 1] = dphi
        if first_zero is None and not dphi > 0.0:
            ddphi_prev = nm1 * t0 * dphi_prev - sigma * phi_prev
            ddphi_cur = nm1 * t1 * dphi - sigma * phi
            first_zero = _hermite_dphi_zero(h, i * h, dphi_prev, ddphi_prev, dphi, ddphi_cur)
    grid = np.arange(steps + 1) * h
    return PhiTrajectory(sigma=sigma, grid=grid, phi=phis, dphi=dphis, first_dphi_zero=first_zero)


def _bisect_level(
    params: ModelParams,
    tol_sigma: float,
    steps: int,
    hint: tuple[float, float] | None,
) -> tuple[float, float, float, int]:
    """One bisection pass at a fixed grid; returns (mu, lo, hi, evaluations)."""
    half = params.half_diameter
    nm1 = float(params.n - 1)
    h = half / steps
    tks = _tk_half_table(params.kappa, half, steps)

    def pred(sigma: float) -> bool:
        return _dphi_positive(nm1, sigma, h, steps, tks)

    evals = 0
    lo = hi = None
    if hint is not None:
        cand_lo, cand_hi = max(0.0, hint[0]), hint[1]
        evals += 2
        if pred(cand_lo) and not pred(cand_hi):
            lo, hi = cand_lo, cand_hi
    if lo is None:
        # sigma = 0 always satisfies the predicate: phi' solves a first-order
        # linear equation with positive initial data.
        lo = 0.0
        hi = max(1.0, params.n * max(params.kappa, 0.0) + 4.0 * (math.pi / params.diameter) ** 2)
        while pred(hi):
            evals += 1
            lo = hi
            hi *= 2.0
            if hi > _SIGMA_CAP:
                raise NonConvergenceError(
                    "positivity of phi' persisted up to sigma = %g; input is ill-posed" % _SIGMA_CAP
                )
        evals += 1
    while hi - lo > tol_sigma:
        mid = 0.5 * (lo + hi)
        if pred(mid):
            lo = mid
        else:
            hi = mid
        evals += 1
    return 0.5 * (lo + hi), lo, hi, evals


def first_eigenvalue(params: ModelParams, tol: float) -> EigenResult:
    """Shooting eigenvalue: sup of sigma keeping phi' positive on [0, D/2].

    The sigma bisection runs on successively doubled integration grids until
    two successive refinements move the eigenvalue by less than tol/4, so the
    reported value carries both a tight bracket and a grid-convergence check.
    A zero of phi' at the endpoint counts as predicate failure (the Neumann
    condition holds exactly at the eigenvalue).
    """
    if not (tol > 0 and math.isfinite(tol)):
        raise InvalidParamsError(f"tol must be positive, got {tol}")
    tol_sigma = tol / _SIGMA_REFINE
    steps = _INITIAL_STEPS
    hint = None
    mus: list[float] = []
    while True:
        mu, lo, hi, evals = _bisect_level(params, tol_sigma, steps, hint)
        mus.append(mu)
        deltas = [abs(b - a) for a, b in zip(mus[:-1], mus[1:])]
        if len(deltas) >= 2 and deltas[-1] < tol / 4 and deltas[-2] < tol / 4:
            trajectory = integrate_phi(params, lo, steps)
            return EigenResult(
                mu=mu,
                bracket_lo=lo,
                bracket_hi=hi,
                iterations=evals,
                tol=hi - lo,
                steps=steps,
                trajectory=trajectory,
            )
        margin = max(64.0 * tol, 1e-6 * max(1.0, abs(mu)))
        hint = (lo - margin, hi + margin)
        steps *= 2
        if steps > _MAX_STEPS:
            raise NonConvergenceError(
                "grid refinement exceeded %d steps without eigenvalue convergence" % _MAX_STEPS
            )


def sphere_limit_eigenvalue(n: int, kappa: float) -> float:
    """Analytic eigenvalue n*kappa at the Bonnet-Myers limiting diameter.

    Diameters at (or numerically indistinguishable from) pi/sqrt(kappa) are
    rejected by :class:`ModelParams` because the ODE coefficient has a pole at
    the limiting half-diameter; this closed form covers that boundary case.
    """
    if not isinstance(n, int) or n < 2:
        raise InvalidParamsError(f"dimension n must be an integer >= 2, got {n!r}")
    if not kappa > 0:
        raise InvalidParamsError("the limiting diameter exists only for kappa > 0")
    return n * kappa


def _fd_weights(params: ModelParams, gridpoints: int) -> tuple[np.ndarray, np.ndarray, float]:
    """Node masses, midpoint weights, and spacing of the finite-volume grid.

    ``gridpoints`` counts cells, giving gridpoints + 1 nodes on [-D/2, D/2]
    (so doubling it halves the spacing exactly, which Richardson pairing and
    order checks rely on).  The weight is w = ck^(n-1); midpoint values serve
    the fluxes and the end cells carry half mass (Neumann closure by ghost
    reflection).
    """
    n_nodes = gridpoints + 1
    d = params.diameter
    dx = d / (n_nodes - 1)
    x = -0.5 * d + np.arange(n_nodes) * dx
    xm = x[:-1] + 0.5 * dx
    p = params.n - 1
    w = ck_array(params.kappa, x) ** p
    wm = ck_array(params.kappa, xm) ** p
    mass = w.copy()
    mass[0] *= 0.5
    mass[-1] *= 0.5
    return mass, wm, dx


def _fd_tridiagonal(params: ModelParams, gridpoints: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Symmetric tridiagonal (diag, offdiag, node masses) of the weight form.

    Finite-volume discretization of -(w*phi')'/w, symmetrized with the node
    masses so the spectrum is real; used for inverse-iteration eigenvectors.
    """
    mass, wm, dx = _fd_weights(params, gridpoints)
    n_nodes = gridpoints + 1
    diag = np.empty(n_nodes)
    diag[0] = wm[0]
    diag[-1] = wm[-1]
    diag[1:-1] = wm[:-1] + wm[1:]
    diag /= dx * dx * mass
    off = -wm / (dx * dx * np.sqrt(mass[:-1] * mass[1:]))
    return diag, off, mass


def _fd_flux_factor(params: ModelParams, gridpoints: int) -> np.ndarray:
    """Golub-Kahan off-diagonal sequence of the discrete operator.

    The stiffness matrix factors as K = B^T diag(wm)/dx^2 B with B the
    bidiagonal difference matrix, so the symmetrized operator is G^T G with a
    bidiagonal G.  Its nonzero eigenvalues are squared singular values of G,
    and the zero-diagonal Golub-Kahan tridiagonal of G allows a Sturm count
    without subtracting the O(1) shift from O(1/dx^2) diagonal entries -- the
    cancellation that otherwise floors absolute accuracy at eps*||A||.
    Returns the interleaved |G[i,i]|, |G[i,i+1]| sequence.
    """
    mass, wm, dx = _fd_weights(params, gridpoints)
    root = np.sqrt(wm) / dx
    c = np.empty(2 * gridpoints)
    c[0::2] = root / np.sqrt(mass[:-1])
    c[1::2] = root / np.sqrt(mass[1:])
    return c


def _sv_count(c2: list[float], x: float) -> int:
    """Eigenvalues of the zero-diagonal tridiagonal (off^2 = c2) below x."""
    count = 0
    q = -x
    if q < 0.0:
        count += 1
    for ck2 in c2:
        if q == 0.0:
            q = 1e-300
        q = -x - ck2 / q
        if q < 0.0:
            count += 1
    return count


def _fd_singular_value(params: ModelParams, gridpoints: int, index: int) -> float:
    """index-th smallest singular value (1-based) of the bidiagonal factor.

    For x > 0 the Golub-Kahan tridiagonal (one row/column per node and per
    cell) has ``gridpoints`` negative eigenvalues and one zero below x, so
    sigma_k < x exactly when the Sturm count reaches gridpoints + 1 + k.
    """
    c = _fd_flux_factor(params, gridpoints)
    c2 = (c * c).tolist()
    want = gridpoints + 1 + index
    lo = 0.0
    hi = 2.0 * float(np.max(c))
    while hi - lo > 1e-14 * hi:
        mid = 0.5 * (lo + hi)
        if _sv_count(c2, mid) >= want:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def sl_fd_oracle(params: ModelParams, gridpoints: int) -> float:
    """Finite-difference eigenvalue oracle, independent of the shooting route.

    Returns the smallest eigenvalue whose eigenvector is not the constant,
    i.e. the second-smallest eigenvalue of the discrete Neumann operator (the
    smallest is zero on constants by construction, and is excluded here as
    the structural null space of the bidiagonal factorization).
    """
    if gridpoints < 64:
        raise InvalidParamsError(f"gridpoints must be >= 64, got {gridpoints}")
    sigma = _fd_singular_value(params, gridpoints, 1)
    return sigma * sigma


def sl_fd_oracle_extrapolated(params: ModelParams, gridpoints: int) -> float:
    """Richardson extrapolation of the oracle over exactly-halved spacings.

    Doubling the cell count halves the spacing exactly, cancelling the
    second-order error term.
    """
    coarse = sl_fd_oracle(params, gridpoints)
    fine = sl_fd_oracle(params, 2 * gridpoints)
    return (4.0 * fine - coarse) / 3.0


def _thomas_solve(diag: np.ndarray, off: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Tridiagonal solve with a pivot floor (inverse-iteration workhorse)."""
    n = len(diag)
    c = np.empty(n - 1)
    d = np.empty(n)
    piv = diag[0]
    if abs(piv) < 1e-300:
        piv = 1e-300
    c[0] = off[0] / piv
    d[0] = rhs[0] / piv
    for i in range(1, n):
        piv = diag[i] - off[i - 1] * c[i - 1]
        if abs(piv) < 1e-300:
            piv = 1e-300
        if i < n - 1:
            c[i] = off[i] / piv
        d[i] = (rhs[i] - off[i - 1] * d[i - 1]) / piv
    x = np.empty(n)
    x[-1] = d[-1]
    for i in range(n - 2, -1, -1):
        x[i] = d[i] - c[i] * x[i + 1]
    return x


def sl_fd_modes(params: ModelParams, gridpoints: int, count: int) -> tuple[np.ndarray, np.ndarray]:
    """First ``count`` non-constant Neumann eigenpairs of the discrete operator.

    Eigenvalues come from Sturm bisection, eigenvectors from inverse iteration
    on the symmetrized tridiagonal matrix; vectors are returned in node space,
    sup-normalized, with a deterministic sign convention.
    """
    if gridpoints < 64:
        raise InvalidParamsError(f"gridpoints must be >= 64, got {gridpoints}")
    if count < 1:
        raise InvalidParamsError(f"count must be >= 1, got {count}")
    diag, off, mass = _fd_tridiagonal(params, gridpoints)
    n_nodes = gridpoints + 1
    evals = np.empty(count)
    evecs = np.empty((count, n_nodes))
    js = np.arange(n_nodes)
    for k in range(1, count + 1):
        sigma = _fd_singular_value(params, gridpoints, k)
        lam = sigma * sigma
        evals[k - 1] = lam
        # cos profile in node index: a good overlap with the k-th mode
        v = np.cos(k * math.pi * js / (n_nodes - 1))
        shifted = diag - lam
        for _ in range(3):
            v = _thomas_solve(shifted, off, v)
            v /= np.max(np.abs(v))
        phi = v / np.sqrt(mass)
        phi /= np.max(np.abs(phi))
        # orient deterministically: the right endpoint is a Neumann extremum
        anchor = phi[-1] if abs(phi[-1]) > 1e-6 else phi[np.argmax(np.abs(phi))]
        if anchor < 0:
            phi = -phi
        evecs[k - 1] = phi
    return evals, evecs
