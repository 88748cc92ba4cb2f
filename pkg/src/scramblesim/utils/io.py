"""CSV, JSON and manifest writers for experiment outputs."""

import csv
import json
import subprocess
from pathlib import Path
from typing import Any, Dict, Iterable, Sequence, Union

import numpy as np

from scramblesim.config.defaults import CSV_FLOAT_FORMAT


def format_value(value: Any) -> str:
    """Format a CSV cell; floats keep 17 significant digits."""
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return CSV_FLOAT_FORMAT % float(value)
    return str(value)


def write_csv(
    path: Union[str, Path],
    header: Sequence[str],
    rows: Iterable[Sequence[Any]],
) -> Path:
    """Write rows to a CSV file with a header line."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(v) for v in row])

    return path


def _jsonable(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def write_json(path: Union[str, Path], data: Any) -> Path:
    """Write JSON with numpy-aware serialization."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    with open(path, "w") as f:
        json.dump(data, f, indent=2, default=_jsonable)

    return path


def code_version() -> str:
    """`git describe` of the working tree, or the package version."""
    from scramblesim import __version__

    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty", "--tags"],
            capture_output=True,
            text=True,
            timeout=5,
            cwd=Path(__file__).resolve().parent,
        )
    except (OSError, subprocess.SubprocessError):
        return __version__

    described = out.stdout.strip()
    return described if out.returncode == 0 and described else __version__


def manifest_path(output: Union[str, Path]) -> Path:
    """Sidecar manifest path for an output file."""
    output = Path(output)
    return output.with_name(output.name + ".manifest.json")


def write_manifest(output: Union[str, Path], manifest: Dict[str, Any]) -> Path:
    """Write the run manifest next to an output file."""
    data = dict(manifest)
    data.setdefault("code_version", code_version())
    return write_json(manifest_path(output), data)
