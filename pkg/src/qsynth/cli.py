"""Command-line front end: JSON files in, JSON files/stdout out.

Exit codes: 0 success, 2 unreadable or malformed input, 3 verification
failure, 4 domain error (non-passive network in Fock mode, incomplete POVM,
empty postselection, out-of-range parameters).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import apps, closedform2x2, sim, synth
from .blocks import SCHEMA, Circuit, circuit_from_json, circuit_to_json, circuit_smatrix
from .mesh import NotUnitaryError, reck_decompose
from .numkit import DecompositionError, matrix_from_json, matrix_to_json
from .sim import NotPassiveError
from .synth import SynthesisConfig, SynthesisError

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VERIFY = 3
EXIT_DOMAIN = 4


@dataclass(frozen=True)
class Config:
    """Run-wide settings for all subcommands."""

    tol: float = 1e-10
    eps_sigma: float = 1e-9
    mesh: str = "reck"
    seed: int | None = None

    def synthesis(self) -> SynthesisConfig:
        return SynthesisConfig(tol=self.tol, eps_sigma=self.eps_sigma)


class ParseFailure(Exception):
    """Input file could not be read or decoded."""


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseFailure(f"cannot read {path}: {exc}") from exc


def _load_matrix(path: str) -> np.ndarray:
    obj = _load_json(path)
    try:
        return matrix_from_json(obj)
    except ValueError as exc:
        raise ParseFailure(f"{path}: {exc}") from exc


def _write_json(path: str | None, payload: dict) -> None:
    text = json.dumps(payload, indent=2)
    if path is None or path == "-":
        print(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def cmd_synth(matrix_file: str, out_netlist: str | None, out_report: str | None, config: Config) -> int:
    """Compile a matrix file into a netlist plus a verification report."""
    t = _load_matrix(matrix_file)
    result = synth.synthesize(t, config.synthesis())
    _write_json(out_netlist, circuit_to_json(result.circuit))
    _write_json(out_report, synth.verification_report(result))
    return EXIT_OK


def cmd_simulate(
    netlist_file: str,
    input_spec: str,
    predicate_spec: str | None,
    mode: str,
    config: Config,
) -> int:
    """Run a netlist: exact Fock statistics (passive only) or moment propagation."""
    netlist = _load_json(netlist_file)
    try:
        circuit = circuit_from_json(netlist)
    except ValueError as exc:
        raise ParseFailure(f"{netlist_file}: {exc}") from exc
    s_total = circuit_smatrix(circuit)

    if mode == "moments":
        alpha = _parse_complex_list(input_spec, circuit.n_modes)
        moments = sim.evolve_moments(s_total, sim.coherent_moments(alpha))
        means = moments.mean[: circuit.n_modes]
        _write_json(None, {
            "schema": SCHEMA,
            "means": [[float(z.real), float(z.imag)] for z in means],
        })
        return EXIT_OK

    occupation = _parse_occupation(input_spec, circuit.n_modes)
    block = sim.passive_block(s_total, config.tol)
    state = sim.fock_evolve(block, occupation, config.tol)
    predicate = _parse_predicate(predicate_spec)
    payload = {"schema": SCHEMA, "outcomes": _outcome_table(state)}
    if predicate is not None:
        conditioned, success = sim.postselect(state, predicate)
        payload["success_prob"] = success
        payload["postselected"] = _outcome_table(conditioned)
    _write_json(None, payload)
    return EXIT_OK


def _outcome_table(state: sim.FockState) -> list[dict]:
    rows = []
    for occ in sorted(state.amplitudes):
        amp = state.amplitudes[occ]
        rows.append(
            {
                "occupation": list(occ),
                "re": float(amp.real),
                "im": float(amp.imag),
                "prob": float(abs(amp) ** 2),
            }
        )
    return rows


def _parse_occupation(spec: str, n_modes: int) -> tuple[int, ...]:
    try:
        counts = [int(x) for x in spec.split(",") if x.strip() != ""]
    except ValueError as exc:
        raise ParseFailure(f"bad occupation {spec!r}: {exc}") from exc
    if len(counts) > n_modes:
        raise ParseFailure(f"occupation lists {len(counts)} modes, netlist has {n_modes}")
    return tuple(counts + [0] * (n_modes - len(counts)))


def _parse_complex_list(spec: str, n_modes: int) -> np.ndarray:
    try:
        values = [complex(x.strip().replace("i", "j")) for x in spec.split(",") if x.strip() != ""]
    except ValueError as exc:
        raise ParseFailure(f"bad amplitude list {spec!r}: {exc}") from exc
    if len(values) > n_modes:
        raise ParseFailure(f"amplitude list has {len(values)} modes, netlist has {n_modes}")
    out = np.zeros(n_modes, dtype=complex)
    out[: len(values)] = values
    return out


def _parse_predicate(spec: str | None):
    """Per-mode photon-count windows: JSON object mode -> [min, max]."""
    if spec is None:
        return None
    try:
        obj = json.loads(spec)
        windows = {int(mode): (int(lo), int(hi)) for mode, (lo, hi) in obj.items()}
    except (TypeError, ValueError) as exc:
        raise ParseFailure(f"bad predicate {spec!r}: {exc}") from exc

    def predicate(occ: tuple[int, ...]) -> bool:
        return all(lo <= occ[mode] <= hi for mode, (lo, hi) in windows.items())

    return predicate


def cmd_naimark(povm_file: str, out: str | None, config: Config) -> int:
    """POVM JSON -> extension unitary plus its mesh netlist."""
    obj = _load_json(povm_file)
    try:
        if "vectors" in obj:
            vectors = [[complex(re, im) for re, im in vec] for vec in obj["vectors"]]
            povm = apps.RankOnePovm.from_vectors(vectors)
        elif "operators" in obj:
            operators = [
                [[complex(re, im) for re, im in row] for row in op] for op in obj["operators"]
            ]
            povm = apps.RankOnePovm.from_operators(operators, config.tol)
        else:
            raise ParseFailure(f"{povm_file}: POVM JSON needs 'vectors' or 'operators'")
        if int(obj.get("dim", povm.dim)) != povm.dim:
            raise ParseFailure(f"{povm_file}: declared dim {obj['dim']} != vector length {povm.dim}")
    except (TypeError, KeyError) as exc:
        raise ParseFailure(f"{povm_file}: malformed POVM JSON: {exc}") from exc

    extension = apps.naimark_extension(povm, config.tol)
    elements = reck_decompose(extension, config.tol)
    m = extension.shape[0]
    circuit = Circuit(
        n_modes=m,
        n_nominal=m,
        elements=tuple(elements),
        ancilla_outputs=tuple(range(povm.dim, m)),
    )
    _write_json(out, {
        "schema": SCHEMA,
        "extension": matrix_to_json(extension),
        "netlist": circuit_to_json(circuit),
    })
    return EXIT_OK


def cmd_analytic2x2(matrix_file: str, out: str | None, config: Config) -> int:
    """Closed-form decomposition of a 2x2 matrix file."""
    t = _load_matrix(matrix_file)
    params, result = closedform2x2.analytic_synthesize(t, config.synthesis())
    _write_json(out, {
        "schema": SCHEMA,
        "params": closedform2x2.params_to_json(params),
        "netlist": circuit_to_json(result.circuit),
        "report": synth.verification_report(result),
    })
    return EXIT_OK


def cmd_cz(config: Config) -> int:
    """Synthesize the postselected controlled-Z network and report its checks."""
    result = synth.synthesize(apps.cz_gate_target(), config.synthesis())
    verification = apps.verify_cz(result, config.tol)
    _write_json(None, {
        "schema": SCHEMA,
        "success_prob": verification.success_prob,
        "success_probs": verification.success_probs,
        "phase_pattern": list(verification.phase_pattern),
        "amplitudes": {
            label: [float(a.real), float(a.imag)] for label, a in verification.amplitudes.items()
        },
        "singular_values": [float(s) for s in result.classification.sigmas()],
        "n_full_ancillas": result.classification.n_full_ancillas,
        "report": synth.verification_report(result),
    })
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qsynth",
        description="Compile linear optical transformations with loss and gain into element netlists.",
    )
    parser.add_argument("--tol", type=float, default=1e-10, help="verification tolerance")
    parser.add_argument("--eps-sigma", type=float, default=1e-9, help="singular values this close to 1 compile to no element")
    parser.add_argument("--seed", type=int, default=None, help="seed for randomized self-tests")
    parser.add_argument("--format", choices=["json"], default="json", help="output format")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="matrix JSON -> netlist + verification report")
    p.add_argument("matrix", help="input matrix JSON file")
    p.add_argument("--netlist", default=None, help="output netlist path (default: stdout)")
    p.add_argument("--report", default=None, help="output report path (default: stdout)")

    p = sub.add_parser("simulate", help="run a netlist on a Fock or coherent input")
    p.add_argument("netlist", help="netlist JSON file")
    p.add_argument("--input", required=True, help="comma-separated occupation (fock) or amplitudes (moments)")
    p.add_argument("--mode", choices=["fock", "moments"], default="fock")
    p.add_argument("--predicate", default=None, help='postselection windows, e.g. {"0": [1, 1]}')

    p = sub.add_parser("naimark", help="POVM JSON -> extension unitary + netlist")
    p.add_argument("povm", help="POVM JSON file")
    p.add_argument("--out", default=None, help="output path (default: stdout)")

    p = sub.add_parser("analytic2x2", help="closed-form decomposition of a 2x2 matrix file")
    p.add_argument("matrix", help="input matrix JSON file")
    p.add_argument("--out", default=None, help="output path (default: stdout)")

    sub.add_parser("cz", help="verify the postselected controlled-Z construction")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = Config(tol=args.tol, eps_sigma=args.eps_sigma, seed=args.seed)
    try:
        if args.command == "synth":
            return cmd_synth(args.matrix, args.netlist, args.report, config)
        if args.command == "simulate":
            return cmd_simulate(args.netlist, args.input, args.predicate, args.mode, config)
        if args.command == "naimark":
            return cmd_naimark(args.povm, args.out, config)
        if args.command == "analytic2x2":
            return cmd_analytic2x2(args.matrix, args.out, config)
        if args.command == "cz":
            return cmd_cz(config)
        raise AssertionError(f"unhandled command {args.command}")
    except ParseFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (SynthesisError, DecompositionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (NotPassiveError, NotUnitaryError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
