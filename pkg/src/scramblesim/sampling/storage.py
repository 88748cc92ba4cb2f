"""Sample batches on disk: one bitstring per line plus a JSON sidecar."""

import json
from pathlib import Path
from typing import Union

import numpy as np
import structlog

from scramblesim.core.result import SampleBatch
from scramblesim.mapping.configs import LogicalConfig

logger = structlog.get_logger(__name__)


def sidecar_path(path: Union[str, Path]) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".json")


def save_batch(batch: SampleBatch, path: Union[str, Path]) -> Path:
    """
    Write ``batch`` as newline-delimited logical bitstrings.

    The sidecar ``<path>.json`` holds {seed, M_s, L_tau, N, time, sampler}.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        for line in batch.strings():
            f.write(line + "\n")
    with open(sidecar_path(path), "w") as f:
        json.dump(batch.to_dict(), f, indent=2)
    logger.info("Batch saved", path=str(path), M_s=batch.M_s)
    return path


def load_batch(path: Union[str, Path]) -> SampleBatch:
    """
    Read a batch written by :func:`save_batch`.

    Raises:
        ValueError: If the file disagrees with its sidecar
    """
    path = Path(path)
    with open(sidecar_path(path)) as f:
        meta = json.load(f)

    with open(path) as f:
        lines = [line.strip() for line in f if line.strip()]

    if len(lines) != meta["M_s"]:
        raise ValueError(f"Expected {meta['M_s']} samples in {path}, found {len(lines)}")

    sites = np.zeros((len(lines), meta["N"]), dtype=np.int64)
    for i, line in enumerate(lines):
        config = LogicalConfig.from_string(line)
        if config.length != meta["L_tau"] or config.count != meta["N"]:
            raise ValueError(f"Sample {i} ({line}) does not match L_tau/N of {path}")
        sites[i] = config.sites

    return SampleBatch(
        sites=sites,
        L_tau=meta["L_tau"],
        seed=meta["seed"],
        state_time=meta["time"],
        sampler=meta.get("sampler", "chain_rule"),
    )
