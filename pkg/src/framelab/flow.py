"""Norm-preserving gradient flow driving a unit-norm frame toward tightness.

Each step rotates tau_j against the tangential component of S tau_j inside
the plane they span, by the angle t |omega_j|. The rotation preserves norms
exactly in exact arithmetic; in floating point the radial direction is
unstable (per-step error growth factor about 1 + 1/(2d)), so long runs need
the periodic maintenance renormalization offered by FlowConfig.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NotUnitNorm, StepTooLarge
from .frames import Frame

UNIT_TOL_STEP = 1e-9
UNIT_TOL_FINAL = 1e-9


@dataclass(frozen=True)
class FlowConfig:
    """Parameters of the flow run.

    step_t must satisfy 0 < t < 1/(2n) (checked against the frame at run
    time). renorm_every = 0 disables maintenance renormalization; a positive
    value rescales all rows to unit norm every that many steps, which keeps
    the radial instability at the rounding floor.
    """

    step_t: float
    max_iters: int = 100_000
    stop_defect: float = 1e-6
    zero_threshold: float = 1e-14
    renorm_every: int = 0


@dataclass(frozen=True)
class TangentFamily:
    """The tangential components omega_j = S tau_j - <S tau_j, tau_j> tau_j."""

    omegas: np.ndarray

    @property
    def norms(self):
        return np.linalg.norm(self.omegas, axis=1)


@dataclass
class FlowTrace:
    """Per-iteration diagnostics of a flow run."""

    iters: list[int] = field(default_factory=list)
    unit_defect_hs: list[float] = field(default_factory=list)
    frame_potential: list[float] = field(default_factory=list)
    max_tangent_norm: list[float] = field(default_factory=list)
    termination: str = ""
    final_index: int = 0
    displacement_hs: float = 0.0
    displacement_bound: float = 0.0
    initial_defect_sq_ok: bool = False
    gcd_nd: int = 0

    def rows(self):
        return zip(self.iters, self.unit_defect_hs, self.frame_potential,
                   self.max_tangent_norm)


def _require_unit(frame, tol=UNIT_TOL_STEP):
    dev = float(np.max(np.abs(np.linalg.norm(frame.vectors, axis=1) - 1.0)))
    if dev > tol:
        raise NotUnitNorm(f"norms deviate from 1 by {dev:.3e} (tol {tol:g})")


def _check_step(config, n):
    if not 0.0 < config.step_t < 1.0 / (2 * n):
        raise StepTooLarge(
            f"step_t {config.step_t} outside (0, 1/(2n)) = (0, {1.0 / (2 * n)})")


def tangent_family(frame):
    _require_unit(frame)
    v = frame.vectors
    vs = v @ (v.T @ v)
    ip = np.einsum("ij,ij->i", vs, v)
    return TangentFamily(omegas=vs - ip[:, None] * v)


def _rotate(v, omegas, t, zero_threshold):
    wn = np.linalg.norm(omegas, axis=1)
    moving = wn > zero_threshold
    out = v.copy()
    if np.any(moving):
        th = wn[moving] * t
        unit = omegas[moving] / wn[moving][:, None]
        out[moving] = (np.cos(th)[:, None] * v[moving]
                       - np.sin(th)[:, None] * unit)
    return out


def flow_step(frame, config):
    """One rotation update; vectors with |omega_j| at or below the zero
    threshold are left unchanged."""
    _check_step(config, frame.n)
    _require_unit(frame)
    omegas = tangent_family(frame).omegas
    return Frame(_rotate(frame.vectors, omegas, config.step_t,
                         config.zero_threshold))


def run_flow(frame, config):
    """Iterate flow_step until the unit-tightness defect reaches stop_defect
    or max_iters steps have been taken. Returns the final frame and a trace
    recorded at every visited iterate (the initial frame included)."""
    _check_step(config, frame.n)
    _require_unit(frame)
    n, d = frame.n, frame.dim
    target = n / d
    eye = np.eye(d)
    v = frame.vectors.copy()

    trace = FlowTrace(gcd_nd=math.gcd(n, d))
    s0 = v.T @ v
    initial_defect = float(np.linalg.norm(s0 - target * eye))
    trace.initial_defect_sq_ok = initial_defect ** 2 <= 2.0 / d ** 3
    trace.displacement_bound = (
        4.0 * d ** 20 * n ** 8.5 / (1.0 - 2 * n * config.step_t)
    ) * initial_defect

    k = 0
    while True:
        s = v.T @ v
        defect = float(np.linalg.norm(s - target * eye))
        vs = v @ s
        ip = np.einsum("ij,ij->i", vs, v)
        omegas = vs - ip[:, None] * v
        wn = np.linalg.norm(omegas, axis=1)

        trace.iters.append(k)
        trace.unit_defect_hs.append(defect)
        trace.frame_potential.append(float(np.sum(s * s)))
        trace.max_tangent_norm.append(float(np.max(wn)) if wn.size else 0.0)

        if defect <= config.stop_defect:
            trace.termination = "converged"
            break
        if k >= config.max_iters:
            trace.termination = "max_iters"
            break

        v = _rotate(v, omegas, config.step_t, config.zero_threshold)
        k += 1
        if config.renorm_every and k % config.renorm_every == 0:
            v = v / np.linalg.norm(v, axis=1)[:, None]

    trace.final_index = k
    trace.displacement_hs = float(np.linalg.norm(v.T @ v - s0))
    dev = float(np.max(np.abs(np.linalg.norm(v, axis=1) - 1.0)))
    if dev > UNIT_TOL_FINAL:
        raise NotUnitNorm(
            f"cumulative norm drift {dev:.3e} exceeds {UNIT_TOL_FINAL:g}; "
            "rerun with maintenance renormalization (renorm_every)")
    return Frame(v), trace
