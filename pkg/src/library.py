import json
import logging
from difflib import get_close_matches
from pathlib import Path
from typing import Dict, List, Optional, Union

from src.errors import KnotObsError
from src.seifert.forms import SeifertError, SeifertMatrix, connected_sum

logger = logging.getLogger(__name__)

MATRIX_FIELDS = ["name", "epsilon", "rows"]


class LibraryError(KnotObsError):
    """Base exception for matrix files and the built-in table"""
    pass


class UnknownMatrixError(LibraryError):
    """Raised when a matrix name resolves to nothing"""

    def __init__(self, name: str, suggestions: List[str] = None):
        self.name = name
        self.suggestions = suggestions or []
        hint = f" Did you mean: {', '.join(self.suggestions)}?" if self.suggestions else ""
        super().__init__(f"Unknown matrix {name!r}.{hint}")


# Seifert matrices shipped with the package; `matrices/*.json` is an export of this table
BUILTIN_MATRICES: Dict[str, Dict] = {
    "8_20": {
        "name": "8_20",
        "epsilon": -1,
        "rows": [[-1, -1, -1, -1],
                 [0, 0, -1, -1],
                 [0, -1, 0, -1],
                 [0, 0, -1, 0]],
    },
    "evenq_example": {
        "name": "evenq_example",
        "epsilon": 1,
        "rows": [[0, 0, 0, -1],
                 [0, 0, 1, -1],
                 [1, 0, 1, 0],
                 [0, 1, 0, 1]],
    },
    "trefoil": {
        "name": "trefoil",
        "epsilon": -1,
        "rows": [[-1, 1],
                 [0, -1]],
    },
    "unknot": {
        "name": "unknot",
        "epsilon": -1,
        "rows": [],
    },
}

# Published pairing b and endomorphism t of the Seifert forms of the first two entries
PRINTED_FORMS: Dict[str, Dict[str, List[List[int]]]] = {
    "8_20": {
        "b": [[0, -1, -1, -1],
              [1, 0, 0, -1],
              [1, 0, 0, 0],
              [1, 1, 0, 0]],
        "t": [[0, -1, 0, -1],
              [0, 1, -1, 1],
              [1, 1, 1, 0],
              [0, -1, 1, 0]],
    },
    "evenq_example": {
        "b": [[0, 0, 1, -1],
              [0, 0, 1, 0],
              [1, 1, 2, 0],
              [-1, 0, 0, 2]],
        "t": [[0, -1, 2, -1],
              [1, 1, -3, 3],
              [0, 0, 1, -1],
              [0, 0, 1, 0]],
    },
}


def matrix_from_dict(data: Dict, source: str = "matrix") -> SeifertMatrix:
    missing_fields = [f for f in MATRIX_FIELDS if f not in data]
    if missing_fields:
        raise LibraryError(f"{source}: missing required fields: {', '.join(missing_fields)}")
    if not isinstance(data["rows"], list) or not all(isinstance(r, list) for r in data["rows"]):
        raise LibraryError(f"{source}: 'rows' must be a list of integer lists")
    if any(not isinstance(v, int) or isinstance(v, bool) for r in data["rows"] for v in r):
        raise LibraryError(f"{source}: matrix entries must be integers")
    try:
        return SeifertMatrix.from_rows(data["rows"], int(data["epsilon"]), str(data["name"]))
    except (SeifertError, TypeError, ValueError) as e:
        raise LibraryError(f"{source}: {e}")


def builtin_matrix(name: str) -> SeifertMatrix:
    if name not in BUILTIN_MATRICES:
        raise UnknownMatrixError(name, get_close_matches(name, BUILTIN_MATRICES.keys(), n=3, cutoff=0.6))
    return matrix_from_dict(BUILTIN_MATRICES[name], f"built-in {name}")


def load_matrix_file(path: Union[str, Path]) -> SeifertMatrix:
    path = Path(path)
    try:
        with open(path, "r") as f:
            data = json.load(f)
    except FileNotFoundError:
        raise LibraryError(f"Matrix file not found: {path}")
    except json.JSONDecodeError as e:
        raise LibraryError(f"{path} contains invalid JSON: {e}")
    if not isinstance(data, dict):
        raise LibraryError(f"{path}: expected a JSON object with fields {', '.join(MATRIX_FIELDS)}")
    return matrix_from_dict(data, str(path))


def save_matrix_file(m: SeifertMatrix, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(m.to_dict(), f, indent=2)
        f.write("\n")
    return path


def _parse_inline(text: str, epsilon: int) -> SeifertMatrix:
    try:
        rows = json.loads(text)
    except json.JSONDecodeError as e:
        raise LibraryError(f"Cannot read inline matrix {text!r}: {e}")
    return matrix_from_dict({"name": text.replace(" ", ""), "epsilon": epsilon, "rows": rows}, "inline matrix")


def _resolve_single(spec: str, matrix_dir: Optional[Path], epsilon: Optional[int]) -> SeifertMatrix:
    spec = spec.strip()
    if spec.startswith("["):
        return _parse_inline(spec, epsilon if epsilon is not None else -1)

    candidates = [Path(spec)]
    if matrix_dir is not None:
        candidates += [Path(matrix_dir) / spec, Path(matrix_dir) / f"{spec}.json"]
    for path in candidates:
        if path.is_file():
            return load_matrix_file(path)

    if spec in BUILTIN_MATRICES:
        return builtin_matrix(spec)

    known = list(BUILTIN_MATRICES) + [p.stem for p in _directory_files(matrix_dir)]
    raise UnknownMatrixError(spec, get_close_matches(spec, known, n=3, cutoff=0.6))


def resolve_matrix(spec: str, matrix_dir: Optional[Path] = None, epsilon: Optional[int] = None) -> SeifertMatrix:
    """
    Turn a command-line matrix argument into a SeifertMatrix.

    Accepted forms: a built-in name, a JSON file path, a name under `matrix_dir`, an inline
    row list such as `[[0,1],[0,0]]`, or several of these joined by `#` for their connected
    sum. An explicit epsilon replaces the one stored with the matrix.
    """
    if not spec or not spec.strip():
        raise LibraryError("Empty matrix argument")
    # `#` inside an inline row list is not a separator, so only split outside brackets
    parts, depth, current = [], 0, ""
    for ch in spec:
        depth += ch == "["
        depth -= ch == "]"
        if ch == "#" and depth == 0:
            parts.append(current)
            current = ""
        else:
            current += ch
    parts.append(current)
    if any(not p.strip() for p in parts):
        raise LibraryError(f"Malformed connected sum {spec!r}")

    matrices = [_resolve_single(p, matrix_dir, epsilon) for p in parts]
    if epsilon is not None:
        matrices = [SeifertMatrix(m.psi, epsilon, m.name) for m in matrices]
    total = matrices[0]
    for m in matrices[1:]:
        total = connected_sum(total, m)
    if len(matrices) > 1:
        total = SeifertMatrix(total.psi, total.epsilon, "#".join(m.name for m in matrices))
    logger.debug(f"Resolved {spec!r} to {total.size}x{total.size} matrix {total.name}")
    return total


def _directory_files(matrix_dir: Optional[Path]) -> List[Path]:
    if matrix_dir is None or not Path(matrix_dir).is_dir():
        return []
    return sorted(Path(matrix_dir).glob("*.json"))


def list_matrices(matrix_dir: Optional[Path] = None) -> List[SeifertMatrix]:
    """Built-in matrices followed by the readable files of `matrix_dir`"""
    found = [builtin_matrix(name) for name in BUILTIN_MATRICES]
    for path in _directory_files(matrix_dir):
        try:
            found.append(load_matrix_file(path))
        except LibraryError as e:
            logger.warning(f"Skipping {path.name}: {e}")
    return found


def export_builtins(directory: Union[str, Path]) -> List[Path]:
    directory = Path(directory)
    written = [save_matrix_file(builtin_matrix(name), directory / f"{name}.json") for name in BUILTIN_MATRICES]
    logger.info(f"Exported {len(written)} matrices to {directory}")
    return written
