"""JSON schemas for states, operators, measures, and protocols.

Every document is a JSON object with a ``kind`` discriminator.  Complex
numbers are ``[re, im]`` pairs; matrices are row-major nested lists.  All
floats are emitted through one canonical formatter (17 significant digits,
enough for exact float64 round trips), so identical data always serializes
to identical bytes.  Parsing goes through :func:`json.loads`; any structural
problem is reported as :class:`InvalidInputError`.
"""

from __future__ import annotations

import json
import math
import sys
from typing import Any, Mapping, Optional, Sequence

import numpy as np

from .embezzle import TypeLabel
from .errors import InvalidInputError
from .locc import (
    Instrument,
    LoccProtocol,
    LoccRound,
    OneWayProtocol,
    instrument,
    locc_protocol,
    locc_round,
)
from .quantum import DensityMatrix, PureBipartiteState, density, pure_state
from .spectra import (
    AtomicMeasure,
    Spectrum,
    StepFunction,
    atomic_measure,
    spectrum,
    step_function,
)

__all__ = [
    "canonical_json",
    "format_float",
    "write_text",
    "load_document",
    "state_to_json",
    "state_from_json",
    "density_to_json",
    "density_from_json",
    "operator_to_json",
    "operator_from_json",
    "spectrum_to_json",
    "spectrum_from_json",
    "step_function_to_json",
    "step_function_from_json",
    "measure_to_json",
    "measure_from_json",
    "protocol_to_json",
    "protocol_from_json",
    "one_way_to_json",
    "one_way_from_json",
    "type_label_to_json",
    "HISTORY_SEP",
]

# Histories (tuples of outcome labels) become single JSON object keys.
HISTORY_SEP = ","


# --------------------------------------------------------------------------- #
#                          Canonical JSON emission                             #
# --------------------------------------------------------------------------- #

def format_float(x: float) -> str:
    """One canonical float format: 17 significant digits (exact round trip)."""
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        raise InvalidInputError("refusing to serialize NaN/Inf")
    return format(x, ".17g")


def canonical_json(value: Any) -> str:
    """Serialize to JSON with deterministic bytes.

    Mapping keys keep insertion order (schemas fix it), floats go through
    :func:`format_float`, and no whitespace depends on the platform.
    """
    parts: list[str] = []
    _emit(value, parts)
    return "".join(parts)


def _emit(value: Any, parts: list[str]) -> None:
    if value is None:
        parts.append("null")
    elif value is True:
        parts.append("true")
    elif value is False:
        parts.append("false")
    elif isinstance(value, str):
        parts.append(json.dumps(value))
    elif isinstance(value, (int, np.integer)):
        parts.append(str(int(value)))
    elif isinstance(value, (float, np.floating)):
        parts.append(format_float(float(value)))
    elif isinstance(value, Mapping):
        parts.append("{")
        for i, (key, sub) in enumerate(value.items()):
            if not isinstance(key, str):
                raise InvalidInputError(f"JSON object keys must be strings, got {key!r}")
            if i:
                parts.append(", ")
            parts.append(json.dumps(key))
            parts.append(": ")
            _emit(sub, parts)
        parts.append("}")
    elif isinstance(value, (list, tuple, np.ndarray)):
        parts.append("[")
        for i, sub in enumerate(list(value)):
            if i:
                parts.append(", ")
            _emit(sub, parts)
        parts.append("]")
    else:
        raise InvalidInputError(f"cannot serialize {type(value).__name__} to JSON")


def write_text(path: Optional[str], text: str) -> None:
    """Write to a file, or to stdout when ``path`` is None.

    A trailing newline is added only when the text does not already end in
    one, so CSV output (which carries its own CRLF terminators) is emitted
    byte-identically to both destinations.
    """
    if not text.endswith("\n"):
        text += "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def load_document(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "kind" not in doc:
        raise InvalidInputError(f"{path} must be a JSON object with a 'kind' field")
    return doc


def _expect_kind(doc: Mapping, kind: str) -> None:
    got = doc.get("kind")
    if got != kind:
        raise InvalidInputError(f"expected a {kind!r} document, got kind {got!r}")


def _field(doc: Mapping, name: str) -> Any:
    if name not in doc:
        raise InvalidInputError(f"document is missing field {name!r}")
    return doc[name]


def _float_list(raw: Any, name: str) -> list[float]:
    if not isinstance(raw, Sequence) or isinstance(raw, str):
        raise InvalidInputError(f"{name} must be a list of numbers")
    out = []
    for v in raw:
        if not isinstance(v, (int, float)) or isinstance(v, bool):
            raise InvalidInputError(f"{name} must contain only numbers, got {v!r}")
        out.append(float(v))
    return out


# --------------------------------------------------------------------------- #
#                         Complex scalars and matrices                         #
# --------------------------------------------------------------------------- #

def _complex_to_pair(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def _pair_to_complex(raw: Any, name: str) -> complex:
    if (
        not isinstance(raw, Sequence)
        or isinstance(raw, str)
        or len(raw) != 2
        or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in raw)
    ):
        raise InvalidInputError(f"{name} entries must be [re, im] pairs, got {raw!r}")
    return complex(float(raw[0]), float(raw[1]))


def operator_to_json(op: np.ndarray) -> dict:
    mat = np.asarray(op, dtype=complex)
    if mat.ndim != 2:
        raise InvalidInputError("operators must be 2-dimensional")
    return {
        "kind": "operator",
        "shape": [int(mat.shape[0]), int(mat.shape[1])],
        "entries": [[_complex_to_pair(z) for z in row] for row in mat],
    }


def _matrix_from_rows(rows: Any, name: str) -> np.ndarray:
    if not isinstance(rows, Sequence) or isinstance(rows, str) or not rows:
        raise InvalidInputError(f"{name} must be a non-empty list of rows")
    parsed = []
    width = None
    for row in rows:
        if not isinstance(row, Sequence) or isinstance(row, str):
            raise InvalidInputError(f"{name} rows must be lists")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise InvalidInputError(f"{name} rows have inconsistent lengths")
        parsed.append([_pair_to_complex(z, name) for z in row])
    return np.asarray(parsed, dtype=complex)


def operator_from_json(doc: Mapping) -> np.ndarray:
    _expect_kind(doc, "operator")
    mat = _matrix_from_rows(_field(doc, "entries"), "entries")
    shape = _field(doc, "shape")
    if list(mat.shape) != [int(shape[0]), int(shape[1])]:
        raise InvalidInputError(f"operator shape {shape} does not match entries {mat.shape}")
    return mat


# --------------------------------------------------------------------------- #
#                              States and spectra                              #
# --------------------------------------------------------------------------- #

def state_to_json(psi: PureBipartiteState) -> dict:
    return {
        "kind": "pure_bipartite",
        "dims": [int(psi.dims[0]), int(psi.dims[1])],
        "amplitudes": [_complex_to_pair(z) for z in psi.amplitudes],
    }


def state_from_json(doc: Mapping) -> PureBipartiteState:
    _expect_kind(doc, "pure_bipartite")
    dims = _field(doc, "dims")
    if not isinstance(dims, Sequence) or len(dims) != 2:
        raise InvalidInputError("dims must be a [dA, dB] pair")
    amps = [_pair_to_complex(z, "amplitudes") for z in _field(doc, "amplitudes")]
    return pure_state((int(dims[0]), int(dims[1])), amps)


def density_to_json(rho: DensityMatrix) -> dict:
    return {
        "kind": "density",
        "dim": int(rho.dim),
        "entries": [[_complex_to_pair(z) for z in row] for row in rho.entries],
    }


def density_from_json(doc: Mapping) -> DensityMatrix:
    _expect_kind(doc, "density")
    mat = _matrix_from_rows(_field(doc, "entries"), "entries")
    if mat.shape[0] != mat.shape[1] or mat.shape[0] != int(_field(doc, "dim")):
        raise InvalidInputError("density 'dim' does not match the entry grid")
    return density(mat)


def spectrum_to_json(s: Spectrum) -> dict:
    return {"kind": "spectrum", "values": list(s.values)}


def spectrum_from_json(doc: Mapping) -> Spectrum:
    _expect_kind(doc, "spectrum")
    return spectrum(_float_list(_field(doc, "values"), "values"))


def step_function_to_json(f: StepFunction) -> dict:
    return {
        "kind": "step_function",
        "breakpoints": list(f.breakpoints),
        "levels": list(f.levels),
    }


def step_function_from_json(doc: Mapping) -> StepFunction:
    _expect_kind(doc, "step_function")
    return step_function(
        _float_list(_field(doc, "breakpoints"), "breakpoints"),
        _float_list(_field(doc, "levels"), "levels"),
    )


def measure_to_json(m: AtomicMeasure) -> dict:
    return {"kind": "measure", "atoms": list(m.atoms), "masses": list(m.masses)}


def measure_from_json(doc: Mapping) -> AtomicMeasure:
    _expect_kind(doc, "measure")
    return atomic_measure(
        _float_list(_field(doc, "atoms"), "atoms"),
        _float_list(_field(doc, "masses"), "masses"),
    )


# --------------------------------------------------------------------------- #
#                                  Protocols                                   #
# --------------------------------------------------------------------------- #

def _instrument_to_json(instr: Instrument) -> dict:
    return {
        "kraus": [[[_complex_to_pair(z) for z in row] for row in k] for k in instr.kraus],
        "labels": list(instr.labels),
    }


def _instrument_from_json(doc: Mapping) -> Instrument:
    kraus_raw = _field(doc, "kraus")
    if not isinstance(kraus_raw, Sequence) or isinstance(kraus_raw, str):
        raise InvalidInputError("instrument 'kraus' must be a list of matrices")
    kraus = [_matrix_from_rows(k, "kraus") for k in kraus_raw]
    labels_raw = _field(doc, "labels")
    if not isinstance(labels_raw, Sequence) or any(not isinstance(l, str) for l in labels_raw):
        raise InvalidInputError("instrument 'labels' must be a list of strings")
    return instrument(kraus, list(labels_raw))


def protocol_to_json(protocol: LoccProtocol) -> dict:
    rounds = []
    for rnd in protocol.rounds:
        branches = {}
        for history in sorted(rnd.branches):
            branches[HISTORY_SEP.join(history)] = _instrument_to_json(rnd.branches[history])
        rounds.append({"party": rnd.party, "branches": branches})
    return {"kind": "locc_protocol", "rounds": rounds}


def protocol_from_json(doc: Mapping) -> LoccProtocol:
    _expect_kind(doc, "locc_protocol")
    rounds_raw = _field(doc, "rounds")
    if not isinstance(rounds_raw, Sequence) or isinstance(rounds_raw, str):
        raise InvalidInputError("'rounds' must be a list")
    rounds = []
    for entry in rounds_raw:
        if not isinstance(entry, Mapping):
            raise InvalidInputError("each round must be a JSON object")
        branches_raw = _field(entry, "branches")
        if not isinstance(branches_raw, Mapping):
            raise InvalidInputError("round 'branches' must be an object keyed by history")
        branches = {}
        for key, sub in branches_raw.items():
            history = tuple(part for part in key.split(HISTORY_SEP) if part != "")
            branches[history] = _instrument_from_json(sub)
        rounds.append(locc_round(str(_field(entry, "party")), branches))
    return locc_protocol(rounds)


def one_way_to_json(protocol: OneWayProtocol) -> dict:
    return {
        "kind": "one_way",
        "alice_kraus": [
            [[_complex_to_pair(z) for z in row] for row in k] for k in protocol.alice_kraus
        ],
        "bob_unitaries": [
            [[_complex_to_pair(z) for z in row] for row in u] for u in protocol.bob_unitaries
        ],
    }


def one_way_from_json(doc: Mapping) -> OneWayProtocol:
    _expect_kind(doc, "one_way")
    alice_raw = _field(doc, "alice_kraus")
    bob_raw = _field(doc, "bob_unitaries")
    for name, raw in (("alice_kraus", alice_raw), ("bob_unitaries", bob_raw)):
        if not isinstance(raw, Sequence) or isinstance(raw, str) or not raw:
            raise InvalidInputError(f"'{name}' must be a non-empty list of matrices")
    alice = tuple(_matrix_from_rows(k, "alice_kraus") for k in alice_raw)
    bob = tuple(_matrix_from_rows(u, "bob_unitaries") for u in bob_raw)
    if len(alice) != len(bob):
        raise InvalidInputError("alice_kraus and bob_unitaries must pair up one-to-one")
    return OneWayProtocol(alice_kraus=alice, bob_unitaries=bob)


# --------------------------------------------------------------------------- #
#                                Type labels                                   #
# --------------------------------------------------------------------------- #

def type_label_to_json(label: TypeLabel) -> dict:
    out: dict[str, Any] = {"family": label.family}
    if label.parameter is not None:
        out["lambda"] = float(label.parameter)
    return out
