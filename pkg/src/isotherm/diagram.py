"""Energy-entropy diagram geometry and plot-ready CSV export.

The physical region is bounded below by S = 0 (pure states) and above by
the concave thermal curve (E(beta), S(beta)) traced over all real beta.
Free energy reads as horizontal distance to the curve, athermality as
vertical distance, and the tangent line with slope beta has intercept
ln Z_beta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .energetics import report
from .gibbs import (
    GibbsFamily,
    boundary_energy,
    boundary_entropy,
    intrinsic_beta,
    log_partition,
    spontaneous_beta,
)
from .operators import DensityMatrix, entropy, expectation


@dataclass(frozen=True)
class DiagramPoint:
    E: float
    S: float


@dataclass(frozen=True)
class BoundarySample:
    betas: np.ndarray
    points: list
    family: GibbsFamily


def state_point(rho: DensityMatrix, fam: GibbsFamily) -> DiagramPoint:
    return DiagramPoint(E=expectation(fam.hamiltonian, rho), S=entropy(rho))


def warped_beta_grid(beta_min: float, beta_max: float, n_points: int) -> np.ndarray:
    """tanh-warped grid concentrating points near beta = 0, where the
    boundary curvature is largest."""
    u = np.linspace(math.tanh(beta_min / 4), math.tanh(beta_max / 4), n_points)
    u = np.clip(u, -1 + 1e-15, 1 - 1e-15)
    grid = 4 * np.arctanh(u)
    grid[0], grid[-1] = beta_min, beta_max
    return grid


def sample_boundary(fam: GibbsFamily, beta_min: float = -20.0, beta_max: float = 20.0,
                    n_points: int = 513, include_limits: bool = False) -> BoundarySample:
    if not beta_min < beta_max:
        raise ValueError("beta_min must be below beta_max")
    if n_points < 3:
        raise ValueError("need at least 3 sample points")
    betas = warped_beta_grid(beta_min, beta_max, n_points)
    if include_limits:
        betas = np.concatenate([[-math.inf], betas, [math.inf]])
    points = [DiagramPoint(boundary_energy(fam, b), boundary_entropy(fam, b))
              for b in betas]
    return BoundarySample(betas=betas, points=points, family=fam)


def tangent_line(fam: GibbsFamily, beta: float) -> tuple[float, float]:
    """Line S = beta E + intercept tangent to the thermal curve; the
    intercept equals ln Z_beta."""
    if math.isinf(beta):
        raise ValueError("tangent_line needs finite beta")
    s = boundary_entropy(fam, beta)
    e = boundary_energy(fam, beta)
    return beta, s - beta * e


@dataclass(frozen=True)
class StateProjection:
    point: DiagramPoint
    free_energy_horizontal: float
    bound_energy_horizontal: float
    athermality_vertical: float
    tangent_beta: float


def project_state(rho: DensityMatrix, fam: GibbsFamily) -> StateProjection:
    """Geometric readings of F, B, A off the diagram; they agree with the
    energetics module within 1e-8."""
    pt = state_point(rho, fam)
    beta = intrinsic_beta(fam, pt.S)
    b_geom = fam.energy_min if math.isinf(beta) else boundary_energy(fam, beta)
    beta_spont = spontaneous_beta(fam, pt.E)
    a_geom = boundary_entropy(fam, beta_spont) - pt.S
    return StateProjection(
        point=pt,
        free_energy_horizontal=pt.E - b_geom,
        bound_energy_horizontal=b_geom,
        athermality_vertical=a_geom,
        tangent_beta=beta,
    )


def _fmt(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0.0:
        return "0"  # normalize -0.0
    return f"{x:.12g}"


def export_diagram(sample: BoundarySample, states: list, path) -> None:
    """Write the boundary block and labelled state rows as CSV (UTF-8, LF).

    `states` is a list of (label, DensityMatrix) pairs evaluated against the
    sample's family.
    """
    fam = sample.family
    lines = ["beta,E,S"]
    for beta, pt in zip(sample.betas, sample.points):
        lines.append(f"{_fmt(beta)},{_fmt(pt.E)},{_fmt(pt.S)}")
    lines.append("label,E,S,F,B,A,beta_intrinsic,beta_spontaneous")
    for label, rho in states:
        rep = report(rho, fam)
        lines.append(",".join([
            str(label), _fmt(rep.energy), _fmt(rep.entropy),
            _fmt(rep.free_energy), _fmt(rep.bound_energy), _fmt(rep.athermality),
            _fmt(rep.intrinsic_beta), _fmt(rep.spontaneous_beta),
        ]))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
