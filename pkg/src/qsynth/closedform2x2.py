"""Analytic decomposition of an arbitrary complex 2x2 matrix.

A chain of explicit phase shifts and real beam splitter rotations reduces the
matrix to real upper-triangular form, whose singular structure then has a
closed form: ``T = U . D . BS(theta2) . PS_1(-xi1)`` with
``U = PS_1(alpha1) . PS_2(alpha2) . BS(gamma) . PS_1(beta1) . PS_2(beta2)``
and ``D = diag(sigma1, sigma2)``, ``sigma1 >= sigma2 >= 0``.  This module
computes the parameters, rebuilds the same circuit through the generic
element lifts, and serves as an independent cross-check of the numeric
pipeline.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np

from .blocks import BeamSplitter, Circuit, PhaseShifter, circuit_smatrix
from .mesh import PRUNE_EPS, wrap_angle
from .numkit import as_matrix, max_abs, quasiunitarity_deviation, upper_left_block
from .synth import (
    SynthesisConfig,
    SynthesisError,
    SynthesisResult,
    _singular_element,
    classify_singulars,
    count_elements,
)

# |cos(gamma)| may exceed 1 by rounding; anything beyond this is a logic error.
CLAMP_TOL = 1e-12


@dataclass(frozen=True)
class Params2x2:
    """Closed-form parameters; angles in radians, ``sigma1 >= sigma2 >= 0``."""

    phi11: float
    phi21: float
    vartheta: float
    xi1: float
    xi2: float
    theta1: float
    theta2: float
    sigma1: float
    sigma2: float
    alpha: float
    beta: float
    gamma: float
    alpha1: float
    alpha2: float
    beta1: float
    beta2: float


def _phase(z: complex) -> float:
    """arg normalized to (-pi, pi], with arg(0) = 0."""
    return wrap_angle(cmath.phase(z)) if z != 0 else 0.0


def analytic_params(t) -> Params2x2:
    """Compute the decomposition parameters of a finite complex 2x2 matrix."""
    t = as_matrix(t, "t")
    if t.shape != (2, 2):
        raise ValueError(f"t must be 2x2, got {t.shape}")

    phi11 = _phase(t[0, 0])
    phi21 = _phase(t[1, 0])
    # Rotate the left column real, then null the lower-left entry.
    vartheta = math.atan2(abs(t[1, 0]), abs(t[0, 0]))
    cv, sv = math.cos(vartheta), math.sin(vartheta)
    e12 = abs(t[0, 1]) * cmath.exp(1j * (_phase(t[0, 1]) - phi11))
    e22 = abs(t[1, 1]) * cmath.exp(1j * (_phase(t[1, 1]) - phi21))
    t11_t = abs(t[0, 0]) * cv + abs(t[1, 0]) * sv
    t12_t = cv * e12 + sv * e22
    t22_t = -sv * e12 + cv * e22
    xi1 = _phase(t12_t)
    xi2 = _phase(t22_t)

    # Real upper-triangular remainder [[a, b], [0, d]], all entries >= 0.
    a, b, d = t11_t, abs(t12_t), abs(t22_t)
    s = a * a + b * b + d * d
    p = (abs(b * d), abs(a * b))
    q = (a * a - d * d + b * b, a * a - d * d - b * b)
    theta1 = -0.5 * math.atan2(2.0 * p[0], q[0])
    theta2 = 0.5 * math.atan2(2.0 * p[1], q[1])
    root = (math.hypot(q[0], 2.0 * p[0]), math.hypot(q[1], 2.0 * p[1]))
    sigma1 = math.sqrt(max((s + root[0]) / 2.0, 0.0))
    sigma2 = math.sqrt(max((s - root[1]) / 2.0, 0.0))

    # Simplified form of the left unitary factor.
    mix = cmath.exp(1j * (xi2 - xi1))
    c1, s1 = math.cos(theta1), math.sin(theta1)
    x = cv * c1 + sv * s1 * mix
    y = cv * s1 - sv * c1 * mix
    alpha = _phase(x)
    beta = _phase(y)
    gamma = math.acos(_clamped_unit(abs(x)))
    return Params2x2(
        phi11=phi11,
        phi21=phi21,
        vartheta=vartheta,
        xi1=xi1,
        xi2=xi2,
        theta1=theta1,
        theta2=theta2,
        sigma1=sigma1,
        sigma2=sigma2,
        alpha=alpha,
        beta=beta,
        gamma=gamma,
        alpha1=phi11 + xi1 + (alpha + beta) / 2.0,
        alpha2=phi21 + xi2 - (alpha + beta) / 2.0,
        beta1=(alpha - beta) / 2.0,
        beta2=(beta - alpha) / 2.0,
    )


def _clamped_unit(value: float) -> float:
    if value > 1.0 + CLAMP_TOL:
        raise ValueError(f"cos(gamma) argument {value} exceeds 1 beyond rounding")
    return min(max(value, 0.0), 1.0)


def reconstruct_params(p: Params2x2) -> np.ndarray:
    """Multiply out the parameterized chain: the matrix the parameters encode."""
    def ps(mode: int, phi: float) -> np.ndarray:
        out = np.eye(2, dtype=complex)
        out[mode, mode] = cmath.exp(1j * phi)
        return out

    def bs(theta: float) -> np.ndarray:
        c, s = math.cos(theta), math.sin(theta)
        return np.array([[c, s], [-s, c]], dtype=complex)

    u = ps(0, p.alpha1) @ ps(1, p.alpha2) @ bs(p.gamma) @ ps(0, p.beta1) @ ps(1, p.beta2)
    d = np.diag([p.sigma1, p.sigma2]).astype(complex)
    w = bs(p.theta2) @ ps(0, -p.xi1)
    return u @ d @ w


def analytic_circuit(p: Params2x2, config: SynthesisConfig | None = None) -> SynthesisResult:
    """Build the circuit the closed form describes and verify its product.

    Uses only phase shifters, the two beam splitter rotations of the chain,
    and one loss/gain coupling per singular value different from 1 (mode 0
    pairs with the first ancilla, mode 1 with the next free one).  At most
    two ancillas appear, so the scattering matrix is at most 8x8.
    """
    cfg = config or SynthesisConfig()
    classification = classify_singulars((p.sigma1, p.sigma2), cfg.eps_sigma, 2)
    if any(ch.sigma > cfg.sigma_max for ch in classification.channels):
        raise ValueError(f"sigma1 = {p.sigma1:.3e} exceeds the gain ceiling {cfg.sigma_max:.3e}")

    elements = []

    def add_ps(mode: int, phi: float) -> None:
        phi = wrap_angle(phi)
        if abs(phi) > PRUNE_EPS:
            elements.append(PhaseShifter(mode=mode, phi=phi))

    def add_bs(theta: float) -> None:
        if abs(theta) > PRUNE_EPS:
            elements.append(BeamSplitter(mode_a=0, mode_b=1, theta=theta))

    add_ps(0, -p.xi1)
    add_bs(p.theta2)
    for j, ch in enumerate(classification.channels):
        if ch.ancilla is not None:
            elements.append(_singular_element(j, ch.ancilla, ch.sigma))
    add_ps(1, p.beta2)
    add_ps(0, p.beta1)
    add_bs(p.gamma)
    add_ps(1, p.alpha2)
    add_ps(0, p.alpha1)

    circuit = Circuit(
        n_modes=classification.n_total,
        n_nominal=2,
        elements=tuple(elements),
        full_ancillas=tuple(range(2, classification.n_total)),
    )
    s_total = circuit_smatrix(circuit)
    block_dev = max_abs(upper_left_block(s_total, 2, 2) - reconstruct_params(p))
    quasi_dev = quasiunitarity_deviation(s_total)
    if block_dev > cfg.tol or quasi_dev > cfg.tol:
        raise SynthesisError(block_dev, quasi_dev, cfg.tol)
    return SynthesisResult(
        circuit=circuit,
        s_total=s_total,
        classification=classification,
        counts=count_elements(circuit),
        block_deviation=block_dev,
        quasiunitarity_deviation=quasi_dev,
    )


def analytic_synthesize(t, config: SynthesisConfig | None = None) -> tuple[Params2x2, SynthesisResult]:
    """Closed-form pipeline: parameters plus the verified circuit for ``t``."""
    cfg = config or SynthesisConfig()
    t = as_matrix(t, "t")
    params = analytic_params(t)
    result = analytic_circuit(params, cfg)
    block_dev = max_abs(upper_left_block(result.s_total, 2, 2) - t)
    if block_dev > cfg.tol:
        raise SynthesisError(block_dev, result.quasiunitarity_deviation, cfg.tol)
    return params, replace(result, block_deviation=block_dev)


def params_to_json(p: Params2x2) -> dict:
    out = {name: float(getattr(p, name)) for name in p.__dataclass_fields__}
    out["schema"] = "qsynth/1"
    return out
