"""File formats: edge lists in, CSV/JSON/PPM out.

Floats serialize with 17 significant digits so every CSV value round-trips
to the exact in-memory double. JSON files are written with sorted keys and
fixed separators, which makes repeated runs byte-identical.
"""

from __future__ import annotations

import hashlib
import json
import os
from typing import Iterable

import numpy as np

from .errors import InputError, ParseError
from .graph import Graph, canonical_link
from .surface import RobustnessSurface, SurfaceSummary


def load_edge_list(path: str | os.PathLike) -> Graph:
    """Parse a whitespace-separated "u v" edge-list file.

    Labels are arbitrary strings mapped to dense indices in first-seen
    order. Blank lines and lines starting with '#' are ignored. Self-loops,
    duplicate links (in either orientation) and malformed lines are
    rejected with their line number.
    """
    index_of: dict[str, int] = {}
    labels: list[str] = []
    links: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()

    def intern(label: str) -> int:
        idx = index_of.get(label)
        if idx is None:
            idx = len(labels)
            index_of[label] = idx
            labels.append(label)
        return idx

    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            if len(tokens) != 2:
                raise ParseError(
                    f"expected two whitespace-separated labels, got {len(tokens)}",
                    line_no,
                )
            u, v = tokens
            if u == v:
                raise ParseError(f"self-loop on {u!r}", line_no)
            link = canonical_link(intern(u), intern(v))
            if link in seen:
                raise ParseError(
                    f"duplicate link {u!r} -- {v!r}", line_no
                )
            seen.add(link)
            links.append(link)
    return Graph.from_links(len(labels), links, labels)


def format_float(x: float) -> str:
    """17-significant-digit decimal form; parses back to the same double."""
    return format(float(x), ".17g")


def write_matrix_csv(
    matrix: np.ndarray, percentages: Iterable[int], path: str | os.PathLike
) -> None:
    """One row per failure percentage, one column per configuration index."""
    matrix = np.asarray(matrix)
    header = "p," + ",".join(str(i + 1) for i in range(matrix.shape[1]))
    lines = [header]
    for p, row in zip(percentages, matrix, strict=True):
        lines.append(str(p) + "," + ",".join(format_float(x) for x in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_matrix_csv(path: str | os.PathLike) -> tuple[list[int], np.ndarray]:
    """Inverse of write_matrix_csv: (percentages, value matrix)."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [line.rstrip("\n") for line in fh if line.strip()]
    if not lines:
        raise ParseError("empty CSV file")
    percentages: list[int] = []
    rows: list[list[float]] = []
    for line_no, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        try:
            percentages.append(int(cells[0]))
            rows.append([float(c) for c in cells[1:]])
        except ValueError as exc:
            raise ParseError(str(exc), line_no) from exc
    return percentages, np.asarray(rows, dtype=np.float64)


def write_summary_csv(
    summary: SurfaceSummary,
    percentages: Iterable[int],
    path: str | os.PathLike,
) -> None:
    """Per-level mean/variance plus the running trapezoidal area.

    The last row's cumulative area equals the whole curve's
    area_under_mean.
    """
    percentages = list(percentages)
    mean = summary.mean_per_p
    lines = ["p,mean_r_star,variance_r_star,area_under_mean_cum"]
    area = 0.0
    for i, p in enumerate(percentages):
        if i > 0:
            step = percentages[i] - percentages[i - 1]
            area += 0.5 * (mean[i] + mean[i - 1]) * step
        lines.append(
            f"{p},{format_float(mean[i])},"
            f"{format_float(summary.variance_per_p[i])},{format_float(area)}"
        )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_json(payload: dict, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_json(path: str | os.PathLike) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def sha256_of_file(path: str | os.PathLike) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _ramp_pixel(value: float, upper: float) -> bytes:
    """Linear blue-to-red ramp over [0, upper]; values clamp to the range.

    t=0 maps to (0, 0, 255), t=1 to (255, 0, 0); components are rounded
    half-up, green stays 0.
    """
    t = 0.0 if upper <= 0.0 else min(max(value / upper, 0.0), 1.0)
    red = int(255.0 * t + 0.5)
    blue = int(255.0 * (1.0 - t) + 0.5)
    return bytes((red, 0, blue))


def emit_heatmap(surface: RobustnessSurface, path: str | os.PathLike) -> None:
    """Write the surface as a binary PPM (P6) image, one pixel per cell.

    x axis: configuration rank (best first), y axis: failure percentage
    with the first level at the top. Colors follow the blue-to-red ramp
    over the surface's color_scale.
    """
    omega = surface.omega
    if omega.size == 0:
        raise InputError("cannot render an empty surface")
    height, width = omega.shape
    _, upper = surface.color_scale
    with open(path, "wb") as fh:
        fh.write(f"P6\n{width} {height}\n255\n".encode("ascii"))
        for row in omega:
            fh.write(b"".join(_ramp_pixel(v, upper) for v in row))
