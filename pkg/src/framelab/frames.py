"""Finite frames in real inner-product spaces.

A frame is stored as an (n, d) array whose rows are the vectors tau_j.
The analysis operator maps x to the n inner products <x, tau_j>, synthesis
is its adjoint, and the frame operator S = sum_j tau_j tau_j^T is their
composition. Nearness reports, the two closest-point constructions, the
Naimark complement, and the seeded generators live here.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    NoComplement,
    NotParseval,
    ShapeMismatch,
    SingularOperator,
    UnsupportedShape,
    ZeroVector,
)
from .spectral import PSD_FLOOR, inv_sqrt_psd, sym_eig

ZERO_NORM_FLOOR = 1e-300


@dataclass(frozen=True)
class Frame:
    """A finite family of n vectors in R^d, one per row."""

    vectors: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=float)
        if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] < 1:
            raise ShapeMismatch(f"expected an (n, d) array, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ShapeMismatch("frame entries must be finite")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)

    @property
    def n(self):
        return self.vectors.shape[0]

    @property
    def dim(self):
        return self.vectors.shape[1]


@dataclass(frozen=True)
class FrameReport:
    """Certified nearness quantities of a frame.

    eps_parseval is present iff the spectrum of S sits inside (0, 2) around
    1, i.e. max(1 - a, b - 1) < 1; eps_equal_norm is present iff every
    (n/d)|tau_j|^2 deviates from 1 by less than 1.
    """

    frame_bounds: tuple[float, float]
    eps_parseval: float | None
    eps_equal_norm: float | None
    tightness_defect_hs: float
    unit_defect_hs: float
    frame_potential: float
    norms_sq: np.ndarray

    @property
    def is_frame(self):
        return self.frame_bounds[0] > 0.0


def analysis(frame, x):
    x = np.asarray(x, dtype=float)
    if x.shape != (frame.dim,):
        raise ShapeMismatch(f"expected a vector of length {frame.dim}")
    return frame.vectors @ x


def synthesis(frame, c):
    c = np.asarray(c, dtype=float)
    if c.shape != (frame.n,):
        raise ShapeMismatch(f"expected coefficients of length {frame.n}")
    return frame.vectors.T @ c


def frame_operator(frame):
    v = frame.vectors
    return v.T @ v


def analyze_frame(frame):
    v = frame.vectors
    n, d = v.shape
    s = v.T @ v
    lam = sym_eig(s).eigenvalues
    a, b = float(lam[0]), float(lam[-1])
    norms_sq = np.sum(v * v, axis=1)

    dev_p = max(1.0 - a, b - 1.0)
    eps_parseval = dev_p if dev_p < 1.0 else None

    dev_e = float(np.max(np.abs((n / d) * norms_sq - 1.0)))
    eps_equal_norm = dev_e if dev_e < 1.0 else None

    center = float(np.trace(s)) / d
    eye = np.eye(d)
    return FrameReport(
        frame_bounds=(a, b),
        eps_parseval=eps_parseval,
        eps_equal_norm=eps_equal_norm,
        tightness_defect_hs=float(np.linalg.norm(s - center * eye)),
        unit_defect_hs=float(np.linalg.norm(s - (n / d) * eye)),
        frame_potential=float(np.sum(lam * lam)),
        norms_sq=norms_sq,
    )


def frame_dist(a, b):
    if a.vectors.shape != b.vectors.shape:
        raise ShapeMismatch(
            f"frames have shapes {a.vectors.shape} and {b.vectors.shape}")
    return float(np.sqrt(np.sum((a.vectors - b.vectors) ** 2)))


def closest_parseval(frame, floor=PSD_FLOOR):
    """Nearest Parseval frame S^{-1/2} tau_j and its squared distance."""
    v = frame.vectors
    root = inv_sqrt_psd(v.T @ v, floor=floor)
    w = v @ root
    dist_sq = float(np.sum((w - v) ** 2))
    return Frame(w), dist_sq


def closest_equal_norm(frame, target=None):
    """Nearest equal-norm family c tau_j / |tau_j| and its squared distance.

    With no explicit target the optimal common norm is the mean of the
    input norms. The construction divides by each |tau_j|, so zero vectors
    are rejected.
    """
    v = frame.vectors
    norms = np.linalg.norm(v, axis=1)
    small = np.nonzero(norms <= ZERO_NORM_FLOOR)[0]
    if small.size:
        raise ZeroVector(int(small[0]))
    if target is not None and not target > 0:
        raise ShapeMismatch(f"target norm must be positive, got {target}")
    c = float(target) if target is not None else float(np.mean(norms))
    w = (c / norms)[:, None] * v
    dist_sq = float(np.sum((norms - c) ** 2))
    return Frame(w), dist_sq


def naimark_complement(frame, tol=1e-8):
    """Parseval frame for R^{n-d} whose Gram projection completes the input's.

    The analysis matrix is re-orthonormalized through S^{-1/2} before the
    orthogonal completion, so the Gram identity holds to machine precision
    for any input that is Parseval within tol.
    """
    report = analyze_frame(frame)
    if report.eps_parseval is None or report.eps_parseval > tol:
        raise NotParseval(
            f"eps_parseval {report.eps_parseval} exceeds tol {tol:g}")
    n, d = frame.n, frame.dim
    if n == d:
        raise NoComplement("n = d leaves a zero-dimensional complement")
    if n < d:
        raise NoComplement(f"n = {n} < d = {d}")
    theta = frame.vectors @ inv_sqrt_psd(frame.vectors.T @ frame.vectors)
    q, _ = np.linalg.qr(theta, mode="complete")
    # The first d columns of q span col(theta); the rest span its
    # orthocomplement, giving the complementary Gram projection.
    return Frame(q[:, d:])


def _harmonic_rows(d, n):
    # Real trigonometric rows: orthonormal as functions of j by the discrete
    # orthogonality of cos/sin at distinct frequencies below n/2.
    cols = []
    j = np.arange(n)
    if d % 2 == 1:
        cols.append(np.full(n, 1.0 / np.sqrt(n)))
        pairs = (d - 1) // 2
        alternating = False
    elif d < n:
        pairs = d // 2
        alternating = False
    else:
        # d = n even: constant and alternating rows bracket the pairs.
        cols.append(np.full(n, 1.0 / np.sqrt(n)))
        pairs = d // 2 - 1
        alternating = True
    for k in range(1, pairs + 1):
        ang = 2.0 * np.pi * k * j / n
        cols.append(np.sqrt(2.0 / n) * np.cos(ang))
        cols.append(np.sqrt(2.0 / n) * np.sin(ang))
    if alternating:
        cols.append((-1.0) ** j / np.sqrt(n))
    return np.stack(cols, axis=1)


def generate(kind, d=None, n=None, seed=0, base=None, delta=None, eps=None):
    """Seeded frame generators.

    kind 'random' draws i.i.d. standard normal entries; 'random_parseval'
    follows with the closest-Parseval map; 'harmonic' is the deterministic
    trigonometric equal-norm Parseval family; 'perturb' displaces each
    vector of base inside a ball of radius delta; 'scaled' multiplies a
    Parseval base by sqrt(1 + eps).
    """
    if kind in ("random", "random_parseval", "harmonic"):
        if d is None or n is None:
            raise ShapeMismatch(f"kind {kind} needs d and n")
        if d < 1 or n < 1:
            raise ShapeMismatch("d and n must be positive")
    if kind == "random":
        rng = np.random.default_rng(seed)
        return Frame(rng.standard_normal((n, d)))
    if kind == "random_parseval":
        if n < d:
            raise UnsupportedShape(f"Parseval kinds need n >= d, got ({d}, {n})")
        rng = np.random.default_rng(seed)
        v = rng.standard_normal((n, d))
        while True:
            try:
                out, _ = closest_parseval(Frame(v))
                return out
            except SingularOperator:
                v = rng.standard_normal((n, d))
    if kind == "harmonic":
        if n < d:
            raise UnsupportedShape(f"Parseval kinds need n >= d, got ({d}, {n})")
        return Frame(_harmonic_rows(d, n))
    if kind == "perturb":
        if base is None or delta is None or delta < 0:
            raise ShapeMismatch("perturb needs a base frame and delta >= 0")
        rng = np.random.default_rng(seed)
        return Frame(base.vectors + ball_displacements(rng, base.n, base.dim, delta))
    if kind == "scaled":
        if base is None or eps is None or eps < 0:
            raise ShapeMismatch("scaled needs a base frame and eps >= 0")
        return Frame(np.sqrt(1.0 + eps) * base.vectors)
    raise ShapeMismatch(f"unknown kind {kind!r}")


def ball_displacements(rng, n, d, radius):
    """n independent draws from the radius-ball of the Euclidean norm."""
    if radius == 0:
        return np.zeros((n, d))
    g = rng.standard_normal((n, d))
    norms = np.linalg.norm(g, axis=1)
    norms[norms == 0] = 1.0
    r = radius * rng.random(n) ** (1.0 / d)
    return (r / norms)[:, None] * g
