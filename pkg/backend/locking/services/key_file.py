"""
JSON key files: the secret half of a locked circuit.
"""
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional, Tuple

from netlist.services.circuit import Circuit
from .keys import KeyVector, LockedCircuit, LockScheme
from ..exceptions import LockingError


@dataclass(frozen=True)
class KeyFile:
    scheme: LockScheme
    key: KeyVector
    key_inputs: Tuple[str, ...]
    blocks: Dict[str, Tuple[int, ...]] = field(default_factory=dict)
    params: Dict[str, object] = field(default_factory=dict)

    def attach(self, circuit: Circuit) -> LockedCircuit:
        """Rebuild the LockedCircuit for a locked bench read back from disk."""
        return LockedCircuit.from_circuit(
            circuit,
            key_inputs=self.key_inputs,
            correct_key=self.key,
            scheme=self.scheme,
            params=self.params,
            key_blocks=self.blocks,
        )


def key_file_payload(locked: LockedCircuit) -> dict:
    if locked.correct_key is None:
        raise LockingError("locked circuit has no recorded correct key")
    return {
        'scheme': locked.scheme.value,
        'key': str(locked.correct_key),
        'key_inputs': list(locked.key_inputs),
        'blocks': {name: list(indices) for name, indices in locked.key_blocks.items()},
        'params': locked.params,
    }


def parse_key_file(payload: dict) -> KeyFile:
    from ..serializers import KeyFileSerializer

    serializer = KeyFileSerializer(data=payload)
    if not serializer.is_valid():
        raise LockingError(f"invalid key file: {serializer.errors}")
    data = serializer.validated_data
    return KeyFile(
        scheme=LockScheme(data['scheme']),
        key=KeyVector.from_string(data['key']),
        key_inputs=tuple(data['key_inputs']),
        blocks={name: tuple(indices) for name, indices in data.get('blocks', {}).items()},
        params=dict(data.get('params', {})),
    )


def write_key_file(locked: LockedCircuit, path) -> None:
    Path(path).write_text(json.dumps(key_file_payload(locked), indent=2) + '\n')


def read_key_file(path, circuit: Optional[Circuit] = None):
    """KeyFile from ``path``; with ``circuit``, the attached LockedCircuit instead."""
    try:
        payload = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise LockingError(f"cannot read key file {path}: {exc}") from exc
    key_file = parse_key_file(payload)
    return key_file.attach(circuit) if circuit is not None else key_file
