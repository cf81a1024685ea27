"""The kicked-particle torus map and its periodic orbits.

One step on the lift (no modular reduction):

    J' = J + k*sin(theta + J) + omega
    theta' = theta + J

The map is area preserving (the step Jacobian [[1 + k*c, k*c], [1, 1]] with
c = cos(theta + J) has determinant 1) and acts on first homology as the
shear (1 0; 1 1): shifting J by 2*pi shifts the image by 2*pi in both
coordinates, shifting theta by 2*pi shifts only theta.

Periodic orbits are zeros of G(x) = F^p(x) - x - 2*pi*(w_J, w_theta) for
prescribed winding numbers, found by damped Newton iteration with the exact
chain-rule Jacobian.  An orbit of period p and J-winding w_J has rotation
number (w_J mod p)/p and accelerates at alpha = 2*pi*w_J/p - omega.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .rationals import Rational, make_rational

TWO_PI = 2.0 * math.pi

PARABOLIC_TOL = 1e-8
SINGULAR_TOL = 1e-13
DIVERGENCE_BOUND = 1e8
MAX_STEP_HALVINGS = 5


@dataclass(frozen=True)
class MapParams:
    """Kick strength k >= 0 and per-step momentum drift omega (radians)."""

    k: float
    omega: float

    def __post_init__(self):
        if not math.isfinite(self.k) or self.k < 0:
            raise ValueError(f"k must be finite and non-negative, got {self.k}")
        if not math.isfinite(self.omega):
            raise ValueError(f"omega must be finite, got {self.omega}")


@dataclass(frozen=True)
class LiftedPoint:
    J: float
    theta: float


class Stability(Enum):
    ELLIPTIC = "elliptic"
    HYPERBOLIC = "hyperbolic"
    PARABOLIC = "parabolic"


@dataclass(frozen=True)
class PeriodicOrbit:
    """One period of a numerically converged orbit, base point first.

    `residual` is the sup-norm of G at the base point; `trace` is tr D(f^p)
    there (the same at every point of the orbit).
    """

    points: tuple[LiftedPoint, ...]
    p: int
    w_J: int
    w_theta: int
    residual: float
    trace: float
    stability: Stability

    def rotation_number(self) -> Rational:
        return make_rational(self.w_J, self.p)


class OrbitNotFound(Exception):
    """Newton failed; `reason` is 'max_iterations' or 'singular_jacobian'."""

    def __init__(self, reason: str, message: str):
        super().__init__(message)
        self.reason = reason


def lift_step(x: LiftedPoint, params: MapParams) -> LiftedPoint:
    phi = x.theta + x.J
    return LiftedPoint(x.J + params.k * math.sin(phi) + params.omega, phi)


def step(x: LiftedPoint, params: MapParams) -> LiftedPoint:
    """Torus map: lift_step followed by reduction of both coordinates mod 2*pi."""
    y = lift_step(x, params)
    return LiftedPoint(y.J % TWO_PI, y.theta % TWO_PI)


def jacobian_step(x: LiftedPoint, params: MapParams) -> np.ndarray:
    """d(J', theta')/d(J, theta); determinant is identically 1."""
    c = params.k * math.cos(x.theta + x.J)
    return np.array([[1.0 + c, c], [1.0, 1.0]])


def classify_stability(trace: float) -> Stability:
    if abs(abs(trace) - 2.0) <= PARABOLIC_TOL:
        return Stability.PARABOLIC
    return Stability.ELLIPTIC if abs(trace) < 2.0 else Stability.HYPERBOLIC


def acceleration(orbit: PeriodicOrbit, params: MapParams) -> float:
    """alpha = 2*pi*w_J/p - omega; zero on the center line of a tongue."""
    return TWO_PI * orbit.w_J / orbit.p - params.omega


# ---------------------------------------------------------------------------
# Vectorized Newton engine.  All arrays are 1-D float64 of a common length;
# k, omega, w_J, w_theta broadcast against the seed arrays so a single call
# can mix parameter cells and winding targets.


def _advance(J, T, K, p, omega, want_jacobian):
    """p lifted steps; optionally accumulates the chain-rule Jacobian."""
    J = J.copy()
    T = T.copy()
    if want_jacobian:
        a = np.ones_like(J)
        b = np.zeros_like(J)
        c = np.zeros_like(J)
        d = np.ones_like(J)
    for _ in range(p):
        phi = T + J
        if want_jacobian:
            kc = K * np.cos(phi)
            a, b, c, d = (1 + kc) * a + kc * c, (1 + kc) * b + kc * d, a + c, b + d
        J, T = J + K * np.sin(phi) + omega, phi
    if want_jacobian:
        return J, T, a, b, c, d
    return J, T


def _residual_norm(J0, T0, K, W, p, WJ, WT):
    J, T = _advance(J0, T0, K, p, W, want_jacobian=False)
    return np.maximum(np.abs(J - J0 - TWO_PI * WJ), np.abs(T - T0 - TWO_PI * WT))


def _newton_batch(J0, T0, K, W, p, WJ, WT, tol, max_iter):
    """Damped Newton on every seed at once.

    Returns (J, T, converged, singular, residual, trace).  Seeds are frozen
    as soon as they converge; seeds with a numerically singular D(f^p) - I or
    divergent iterates are abandoned.
    """
    n = J0.shape[0]
    J = J0.astype(float).copy()
    T = T0.astype(float).copy()
    K = np.broadcast_to(np.asarray(K, float), (n,)).copy()
    W = np.broadcast_to(np.asarray(W, float), (n,)).copy()
    WJ = np.broadcast_to(np.asarray(WJ, float), (n,)).copy()
    WT = np.broadcast_to(np.asarray(WT, float), (n,)).copy()
    converged = np.zeros(n, dtype=bool)
    singular = np.zeros(n, dtype=bool)
    dead = np.zeros(n, dtype=bool)

    for _ in range(max_iter):
        idx = np.flatnonzero(~(converged | singular | dead))
        if idx.size == 0:
            break
        Ji, Ti, Ki, Wi = J[idx], T[idx], K[idx], W[idx]
        WJi, WTi = WJ[idx], WT[idx]
        Jp, Tp, a, b, c, d = _advance(Ji, Ti, Ki, p, Wi, want_jacobian=True)
        G0 = Jp - Ji - TWO_PI * WJi
        G1 = Tp - Ti - TWO_PI * WTi
        norm = np.maximum(np.abs(G0), np.abs(G1))
        hit = norm <= tol
        converged[idx[hit]] = True
        act = ~hit
        det = (a - 1.0) * (d - 1.0) - b * c
        sing = act & (np.abs(det) < SINGULAR_TOL)
        singular[idx[sing]] = True
        act &= ~sing
        if not act.any():
            continue
        sub = idx[act]
        safe_det = np.where(det == 0.0, 1.0, det)
        dJ = (-G0 * (d - 1.0) + G1 * b) / safe_det
        dT = (G0 * c - G1 * (a - 1.0)) / safe_det
        dJ, dT, base = dJ[act], dT[act], norm[act]
        # step-halving: retreat while the residual got worse
        s = np.ones(sub.size)
        for _ in range(MAX_STEP_HALVINGS):
            trial = _residual_norm(J[sub] + s * dJ, T[sub] + s * dT, K[sub], W[sub], p, WJ[sub], WT[sub])
            worse = trial > base
            if not worse.any():
                break
            s[worse] *= 0.5
        J[sub] += s * dJ
        T[sub] += s * dT
        gone = (np.abs(J[sub]) > DIVERGENCE_BOUND) | (np.abs(T[sub]) > DIVERGENCE_BOUND)
        dead[sub[gone]] = True

    Jp, Tp, a, b, c, d = _advance(J, T, K, p, W, want_jacobian=True)
    residual = np.maximum(np.abs(Jp - J - TWO_PI * WJ), np.abs(Tp - T - TWO_PI * WT))
    converged = (residual <= tol) & ~singular
    trace = a + d
    return J, T, converged, singular, residual, trace


# ---------------------------------------------------------------------------
# Public orbit search


def _orbit_from_base(Jb: float, Tb: float, params: MapParams, p: int):
    """Assemble orbit data from a converged base point; windings recomputed."""
    pts = []
    x = LiftedPoint(Jb, Tb)
    for _ in range(p):
        pts.append(x)
        x = lift_step(x, params)
    w_J = round((x.J - Jb) / TWO_PI)
    w_theta = round((x.theta - Tb) / TWO_PI)
    residual = max(abs(x.J - Jb - TWO_PI * w_J), abs(x.theta - Tb - TWO_PI * w_theta))
    _, _, a, b, c, d = _advance(
        np.array([Jb]), np.array([Tb]), np.array([params.k]), p, np.array([params.omega]), True
    )
    trace = float(a[0] + d[0])
    return PeriodicOrbit(
        points=tuple(pts),
        p=p,
        w_J=w_J,
        w_theta=w_theta,
        residual=residual,
        trace=trace,
        stability=classify_stability(trace),
    )


def find_periodic_orbit(
    params: MapParams,
    p: int,
    w_J: int,
    w_theta: int,
    seed: LiftedPoint,
    tol: float = 1e-12,
    max_iter: int = 50,
) -> PeriodicOrbit:
    """Newton search for a period-p orbit with the given windings from one seed.

    Raises OrbitNotFound('max_iterations') when the iteration does not reach
    tol, OrbitNotFound('singular_jacobian') when D(f^p) - I degenerates (a
    parabolic/tangency configuration); both signal the caller to reseed.
    """
    if p < 1:
        raise ValueError(f"period must be positive, got {p}")
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    J, T, conv, sing, residual, trace = _newton_batch(
        np.array([seed.J]), np.array([seed.theta]),
        params.k, params.omega, p, w_J, w_theta, tol, max_iter,
    )
    if not conv[0]:
        if sing[0]:
            raise OrbitNotFound(
                "singular_jacobian",
                f"D(f^{p}) - I numerically singular near (J={J[0]:.6g}, theta={T[0]:.6g})",
            )
        raise OrbitNotFound(
            "max_iterations",
            f"no convergence after {max_iter} iterations (residual {residual[0]:.3g})",
        )
    pts = []
    x = LiftedPoint(float(J[0]), float(T[0]))
    for _ in range(p):
        pts.append(x)
        x = lift_step(x, params)
    tr = float(trace[0])
    return PeriodicOrbit(
        points=tuple(pts),
        p=p,
        w_J=w_J,
        w_theta=w_theta,
        residual=float(residual[0]),
        trace=tr,
        stability=classify_stability(tr),
    )


def w_theta_range(k: float, p: int, w_J: int) -> range:
    """Theta-winding targets consistent with the shear relation for orbits
    whose base point lies in the fundamental domain [0, 2*pi)^2."""
    spread = p * (p - 1) * k / TWO_PI
    base = w_J * (p - 1) / 2.0
    lo = math.floor(base - spread) - 1
    hi = math.ceil(p + base + spread) + 1
    return range(lo, hi + 1)


def _torus_dist(a: float, b: float) -> float:
    d = (a - b) % TWO_PI
    return min(d, TWO_PI - d)


def _same_orbit(o1: PeriodicOrbit, o2: PeriodicOrbit, tol: float) -> bool:
    """Point sets coincide on the torus within 10*tol."""
    eps = 10.0 * tol
    for x in o1.points:
        if not any(
            _torus_dist(x.J, y.J) <= eps and _torus_dist(x.theta, y.theta) <= eps
            for y in o2.points
        ):
            return False
    return True


def orbit_search_grid(
    params: MapParams,
    p: int,
    w_J: int,
    grid_n: int,
    tol: float = 1e-12,
    max_iter: int = 50,
) -> list[PeriodicOrbit]:
    """Deterministic orbit census: Newton from a grid_n x grid_n seed lattice
    over [0, 2*pi)^2 for every theta-winding in w_theta_range, deduplicated as
    point sets on the torus and sorted by base point.

    Each returned orbit is canonicalized: its base point is the
    lexicographically smallest (J, theta) of the orbit reduced to the
    fundamental domain, and w_theta is recomputed for that lift.
    """
    if grid_n < 1:
        raise ValueError(f"grid_n must be positive, got {grid_n}")
    if p < 1:
        raise ValueError(f"period must be positive, got {p}")
    xs = (np.arange(grid_n) + 0.5) * TWO_PI / grid_n
    Jg, Tg = np.meshgrid(xs, xs, indexing="ij")
    Js, Ts = Jg.ravel(), Tg.ravel()
    wts = list(w_theta_range(params.k, p, w_J))
    J0 = np.tile(Js, len(wts))
    T0 = np.tile(Ts, len(wts))
    WT = np.repeat(np.array(wts, dtype=float), Js.size)
    J, T, conv, _, _, _ = _newton_batch(
        J0, T0, params.k, params.omega, p, w_J, WT, tol, max_iter
    )
    candidates = []
    for Jc, Tc in zip(J[conv], T[conv]):
        candidates.append(_canonicalize(float(Jc), float(Tc), params, p, tol, max_iter))
    candidates = [o for o in candidates if o is not None]
    candidates.sort(key=lambda o: (o.points[0].J, o.points[0].theta))
    orbits: list[PeriodicOrbit] = []
    for o in candidates:
        if not any(_same_orbit(o, kept, tol) for kept in orbits):
            orbits.append(o)
    return orbits


def _canonicalize(Jc, Tc, params, p, tol, max_iter):
    """Pick the lexicographically smallest fundamental-domain base along the
    orbit, re-polish there, and rebuild the orbit record."""
    traj = []
    x = LiftedPoint(Jc, Tc)
    for _ in range(p):
        traj.append(x)
        x = lift_step(x, params)
    base = min(((pt.J % TWO_PI, pt.theta % TWO_PI) for pt in traj))
    # one short Newton polish absorbs the roundoff from the mod reduction
    probe = _orbit_from_base(base[0], base[1], params, p)
    J, T, conv, _, _, _ = _newton_batch(
        np.array([base[0]]), np.array([base[1]]),
        params.k, params.omega, p, probe.w_J, probe.w_theta, tol, 5,
    )
    if not conv[0]:
        return None
    return _orbit_from_base(float(J[0]), float(T[0]), params, p)


def orbit_to_json(orbit: PeriodicOrbit, params: MapParams) -> dict:
    """Wire format for one orbit record."""
    return {
        "k": params.k,
        "omega": params.omega,
        "p": orbit.p,
        "w_J": orbit.w_J,
        "w_theta": orbit.w_theta,
        "points": [[pt.J, pt.theta] for pt in orbit.points],
        "trace": orbit.trace,
        "stability": orbit.stability.value,
        "residual": orbit.residual,
        "alpha": acceleration(orbit, params),
    }
