"""Elementary optical elements and their exact quasiunitary matrix lifts.

An element is one of three frozen dataclasses: a phase shifter on a single
mode, a beam splitter (real rotation ``[[cos t, sin t], [-sin t, cos t]]``)
between two modes, or a two-mode squeezer with gain ``cosh(xi)``.  A circuit
is an ordered element list applied first-to-last; the corresponding matrix
product therefore runs last-to-first.

The 2N x 2N lift of an element acts on the operator vector
``(a_1 .. a_N, a_1^dag .. a_N^dag)``: mode ``p`` couples to row/column ``p``
(annihilation) and ``p + N`` (creation).  Mode indices are 0-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np


@dataclass(frozen=True)
class PhaseShifter:
    mode: int
    phi: float


@dataclass(frozen=True)
class BeamSplitter:
    mode_a: int
    mode_b: int
    theta: float

    def __post_init__(self):
        if self.mode_a == self.mode_b:
            raise ValueError("beam splitter modes must be distinct")


@dataclass(frozen=True)
class TwoModeSqueezer:
    mode_a: int
    mode_b: int
    xi: float

    def __post_init__(self):
        if self.mode_a == self.mode_b:
            raise ValueError("squeezer modes must be distinct")


Element = Union[PhaseShifter, BeamSplitter, TwoModeSqueezer]


def element_modes(e: Element) -> tuple[int, ...]:
    if isinstance(e, PhaseShifter):
        return (e.mode,)
    return (e.mode_a, e.mode_b)


@dataclass(frozen=True)
class Circuit:
    """Ordered element list plus mode bookkeeping.

    ``n_modes`` counts every mode including ancillas; the first ``n_nominal``
    are the nominal ones.  ``ancilla_inputs`` / ``ancilla_outputs`` are the
    padding modes introduced to square up a non-square transformation (they
    live inside the nominal range), while ``full_ancillas`` are the
    vacuum-initialized modes present through the whole network, one per
    singular value different from 1.
    """

    n_modes: int
    n_nominal: int
    elements: tuple[Element, ...] = ()
    ancilla_inputs: tuple[int, ...] = ()
    ancilla_outputs: tuple[int, ...] = ()
    full_ancillas: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(self, "ancilla_inputs", tuple(self.ancilla_inputs))
        object.__setattr__(self, "ancilla_outputs", tuple(self.ancilla_outputs))
        object.__setattr__(self, "full_ancillas", tuple(self.full_ancillas))
        if not (0 < self.n_nominal <= self.n_modes):
            raise ValueError(f"need 0 < n_nominal <= n_modes, got {self.n_nominal}, {self.n_modes}")
        pad = set(self.ancilla_inputs) | set(self.ancilla_outputs)
        full = set(self.full_ancillas)
        if set(self.ancilla_inputs) & set(self.ancilla_outputs) or pad & full:
            raise ValueError("ancilla index sets must be pairwise disjoint")
        if any(not (0 <= i < self.n_nominal) for i in pad):
            raise ValueError("padding ancillas must lie inside the nominal range")
        if any(not (self.n_nominal <= i < self.n_modes) for i in full):
            raise ValueError("full ancillas must lie above the nominal range")
        for e in self.elements:
            if any(not (0 <= m < self.n_modes) for m in element_modes(e)):
                raise ValueError(f"element {e} references a mode >= n_modes = {self.n_modes}")


def lift_loss(sigma: float) -> np.ndarray:
    """4x4 quasiunitary for one attenuated channel, 0 <= sigma < 1.

    Basis (a_1, a_2, a_1^dag, a_2^dag) where mode 2 is the vacuum ancilla; the
    block-diagonal rotation has transmission ``sigma`` and reflection
    ``sqrt(1 - sigma^2)``.
    """
    if not 0.0 <= sigma < 1.0:
        raise ValueError(f"loss channel requires 0 <= sigma < 1, got {sigma}")
    r = math.sqrt(1.0 - sigma * sigma)
    block = np.array([[sigma, r], [-r, sigma]], dtype=complex)
    out = np.zeros((4, 4), dtype=complex)
    out[:2, :2] = block
    out[2:, 2:] = block
    return out


def lift_gain(sigma: float) -> np.ndarray:
    """4x4 quasiunitary for one amplified channel, sigma > 1 (``cosh(xi) = sigma``)."""
    if not sigma > 1.0:
        raise ValueError(f"gain channel requires sigma > 1, got {sigma}")
    r = math.sqrt(sigma * sigma - 1.0)
    return np.array(
        [
            [sigma, 0.0, 0.0, r],
            [0.0, sigma, r, 0.0],
            [0.0, r, sigma, 0.0],
            [r, 0.0, 0.0, sigma],
        ],
        dtype=complex,
    )


def lift_phase(phi: float) -> np.ndarray:
    """2x2 lift ``diag(e^{i phi}, e^{-i phi})`` of a single-mode phase shift."""
    if not math.isfinite(phi):
        raise ValueError(f"phase must be finite, got {phi}")
    return np.diag([np.exp(1j * phi), np.exp(-1j * phi)])


def element_unitary(e: Element, n_modes: int) -> np.ndarray:
    """n x n single-particle unitary of a passive element (phase shifter or beam splitter)."""
    _check_modes(e, n_modes)
    u = np.eye(n_modes, dtype=complex)
    if isinstance(e, PhaseShifter):
        u[e.mode, e.mode] = np.exp(1j * e.phi)
    elif isinstance(e, BeamSplitter):
        c, s = math.cos(e.theta), math.sin(e.theta)
        a, b = e.mode_a, e.mode_b
        u[a, a] = c
        u[a, b] = s
        u[b, a] = -s
        u[b, b] = c
    else:
        raise ValueError("a two-mode squeezer has no single-particle unitary")
    return u


def embed_element(e: Element, n_modes: int) -> np.ndarray:
    """2N x 2N quasiunitary lift of one element, identity outside its modes."""
    _check_modes(e, n_modes)
    n = n_modes
    out = np.eye(2 * n, dtype=complex)
    if isinstance(e, TwoModeSqueezer):
        a, b = e.mode_a, e.mode_b
        ch, sh = math.cosh(e.xi), math.sinh(e.xi)
        out[a, a] = out[b, b] = out[a + n, a + n] = out[b + n, b + n] = ch
        out[a, b + n] = out[b, a + n] = out[a + n, b] = out[b + n, a] = sh
        return out
    block = element_unitary(e, n)[np.ix_(element_modes(e), element_modes(e))]
    idx = list(element_modes(e))
    out[np.ix_(idx, idx)] = block
    idx_c = [m + n for m in idx]
    out[np.ix_(idx_c, idx_c)] = block.conj()
    return out


def circuit_smatrix(c: Circuit) -> np.ndarray:
    """Product of the embedded element lifts, last element leftmost."""
    s = np.eye(2 * c.n_modes, dtype=complex)
    for e in c.elements:
        s = embed_element(e, c.n_modes) @ s
    return s


def _check_modes(e: Element, n_modes: int) -> None:
    if any(not (0 <= m < n_modes) for m in element_modes(e)):
        raise ValueError(f"element {e} references a mode outside 0..{n_modes - 1}")


# --- netlist JSON -----------------------------------------------------------
#
# { "n_modes": int, "n_nominal": int, "ancilla_inputs": [int],
#   "ancilla_outputs": [int], "full_ancillas": [int],
#   "elements": [ {"type": "ps", "mode": i, "phi": x}
#               | {"type": "bs", "modes": [i, j], "theta": x}
#               | {"type": "tms", "modes": [i, j], "xi": x} ] }
#
# Elements apply in array order.  Mode indices are 0-based.

SCHEMA = "qsynth/1"


def element_to_json(e: Element) -> dict:
    if isinstance(e, PhaseShifter):
        return {"type": "ps", "mode": e.mode, "phi": e.phi}
    if isinstance(e, BeamSplitter):
        return {"type": "bs", "modes": [e.mode_a, e.mode_b], "theta": e.theta}
    return {"type": "tms", "modes": [e.mode_a, e.mode_b], "xi": e.xi}


def element_from_json(obj) -> Element:
    try:
        kind = obj["type"]
        if kind == "ps":
            return PhaseShifter(mode=int(obj["mode"]), phi=float(obj["phi"]))
        if kind == "bs":
            a, b = obj["modes"]
            return BeamSplitter(mode_a=int(a), mode_b=int(b), theta=float(obj["theta"]))
        if kind == "tms":
            a, b = obj["modes"]
            return TwoModeSqueezer(mode_a=int(a), mode_b=int(b), xi=float(obj["xi"]))
    except (TypeError, KeyError, ValueError) as exc:
        raise ValueError(f"malformed element JSON {obj!r}: {exc}") from exc
    raise ValueError(f"unknown element type {kind!r}")


def circuit_to_json(c: Circuit) -> dict:
    return {
        "schema": SCHEMA,
        "n_modes": c.n_modes,
        "n_nominal": c.n_nominal,
        "ancilla_inputs": list(c.ancilla_inputs),
        "ancilla_outputs": list(c.ancilla_outputs),
        "full_ancillas": list(c.full_ancillas),
        "elements": [element_to_json(e) for e in c.elements],
    }


def circuit_from_json(obj) -> Circuit:
    try:
        return Circuit(
            n_modes=int(obj["n_modes"]),
            n_nominal=int(obj["n_nominal"]),
            elements=tuple(element_from_json(e) for e in obj["elements"]),
            ancilla_inputs=tuple(int(i) for i in obj.get("ancilla_inputs", [])),
            ancilla_outputs=tuple(int(i) for i in obj.get("ancilla_outputs", [])),
            full_ancillas=tuple(int(i) for i in obj.get("full_ancillas", [])),
        )
    except (TypeError, KeyError) as exc:
        raise ValueError(f"malformed netlist JSON: {exc}") from exc
