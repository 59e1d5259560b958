"""
Command inputs and outputs.

Results go to a file when --output is given, else to stdout.
"""
import json
import sys
from pathlib import Path
from typing import List, NamedTuple, Optional, Tuple

from dowkernet.errors import ParseError, UsageError
from dowkernet.ingest import read_network
from dowkernet.network import DirectedNetwork
from dowkernet.persistence import PersistenceDiagram, diagrams_from_json


class CommandResult(NamedTuple):
    nodes: int
    outputs: Tuple[str, ...] = ()


def with_config(payload: dict, metadata: dict) -> str:
    """JSON text with the run config as the leading ``config`` field."""
    data = {"config": metadata}
    data.update(payload)
    return json.dumps(data, indent=2) + "\n"


def newick_comment(header_lines: List[str]) -> str:
    """Metadata as leading Newick comments, one ``[key=value]`` per line."""
    return "".join(f"[{line.lstrip('# ')}]\n" for line in header_lines)


def emit(text: str, output: Optional[str]) -> Optional[str]:
    """Write ``text`` to ``output`` (a file path) or stdout; returns the path written."""
    if output is None or output == "-":
        sys.stdout.write(text)
        return None
    return write_file(Path(output), text)


def write_file(path: Path, text: str) -> str:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        # newline="" keeps LF line endings on every platform
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    except OSError as e:
        raise ParseError(f"cannot write {path}: {e.strerror or e}") from None
    return str(path)


def load_network(config) -> DirectedNetwork:
    if not config.input:
        raise UsageError(f"{config.command} needs --input")
    return read_network(config.input, config.input_format)


def load_diagrams(path: str) -> List[PersistenceDiagram]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror or e}") from None
    return diagrams_from_json(text)
