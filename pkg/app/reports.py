import csv
from pathlib import Path
from typing import Iterable, Union

import numpy as np

from .entropy import to_bits
from .log import logger
from .modular import GaugeReport


def fmt(value: float) -> str:
    """12 significant digits, locale independent."""
    return f"{float(value):.12g}"


def fmt_list(values: Iterable[float]) -> str:
    return "[" + ", ".join(fmt(v) for v in values) + "]"


def fmt_entropy(nats: float, bits: bool = False) -> str:
    return f"{fmt(to_bits(nats))} bits" if bits else f"{fmt(nats)} nats"


def _prepare(path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def write_gram_csv(path: Union[str, Path], gram: np.ndarray) -> Path:
    """One row per Gram row, each entry written as a re,im pair of columns."""
    path = _prepare(path)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        for row in gram:
            cells = []
            for value in row:
                cells.extend([fmt(value.real), fmt(value.imag)])
            writer.writerow(cells)
    logger.info(f"Wrote Gram matrix to {path}")
    return path


def write_scan_csv(path: Union[str, Path], report: GaugeReport) -> Path:
    path = _prepare(path)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["sample", "entropy"])
        for index, value in enumerate(report.entropies):
            writer.writerow([index, fmt(value)])
    logger.info(f"Wrote {len(report.entropies)} scan samples to {path}")
    return path


def scan_summary(report: GaugeReport) -> str:
    return (
        f"baseline={fmt(report.baseline_entropy)} "
        f"min={fmt(report.min_entropy)} max={fmt(report.max_entropy)}"
    )
