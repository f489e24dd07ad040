"""Result persistence: JSON-lines records, CSV summaries, run manifests,
and a dependency-free SVG writer for success curves.

Result files never contain wall-clock times, so reruns with the same
config and seed are byte-identical; timing lives only in the manifest.
"""

from __future__ import annotations

import hashlib
import json
import os


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def config_hash(config: dict) -> str:
    return hashlib.sha256(canonical_json(config).encode()).hexdigest()


def file_sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def write_json(obj, path):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_jsonl(records, path):
    with open(path, "w") as fh:
        for rec in records:
            fh.write(canonical_json(rec))
            fh.write("\n")


def write_csv(header, rows, path):
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_csv_cell(v) for v in row) + "\n")


def _csv_cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_manifest(out_dir, config: dict, seeds, outputs, wall_clock: float, budgets=None):
    """Atomically write the run manifest next to the outputs."""
    manifest = {
        "config_hash": config_hash(config),
        "config": config,
        "seeds": seeds,
        "outputs": {os.path.basename(p): file_sha256(p) for p in outputs},
        "wall_clock_s": wall_clock,
        "budgets": budgets or {},
        "version": _version(),
    }
    path = os.path.join(out_dir, "manifest.json")
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    os.replace(tmp, path)
    return path


def _version() -> str:
    from . import __version__

    return __version__


def success_curves_svg(curves: list, path, width: int = 640, height: int = 420):
    """Self-contained SVG of success probability vs log10(time).

    ``curves`` entries: {"label": str, "t": [...], "p": [...],
    "lo": [...], "hi": [...]} - confidence bands drawn as vertical ticks.
    """
    import math

    pad = 50
    xs = [t for c in curves for t in c["t"]]
    if not xs:
        raise ValueError("no data for SVG")
    lx = [math.log10(t) for t in xs]
    x0, x1 = min(lx), max(lx)
    if x1 == x0:
        x1 = x0 + 1

    def X(t):
        return pad + (math.log10(t) - x0) / (x1 - x0) * (width - 2 * pad)

    def Y(p):
        return height - pad - p * (height - 2 * pad)

    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{pad}" y1="{height-pad}" x2="{width-pad}" y2="{height-pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height-pad}" stroke="black"/>',
        f'<text x="{width//2}" y="{height-12}" text-anchor="middle" font-size="12">log10 time</text>',
        f'<text x="14" y="{height//2}" font-size="12" transform="rotate(-90 14 {height//2})" '
        f'text-anchor="middle">success probability</text>',
    ]
    thr = Y(2.0 / 3.0)
    parts.append(
        f'<line x1="{pad}" y1="{thr:.1f}" x2="{width-pad}" y2="{thr:.1f}" '
        'stroke="#999" stroke-dasharray="4,3"/>'
    )
    for ci, c in enumerate(curves):
        col = colors[ci % len(colors)]
        pts = " ".join(f"{X(t):.1f},{Y(p):.1f}" for t, p in zip(c["t"], c["p"]))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{col}" stroke-width="1.5"/>')
        for t, lo, hi in zip(c["t"], c.get("lo", ()), c.get("hi", ())):
            parts.append(
                f'<line x1="{X(t):.1f}" y1="{Y(lo):.1f}" x2="{X(t):.1f}" y2="{Y(hi):.1f}" '
                f'stroke="{col}" stroke-width="0.8"/>'
            )
        parts.append(
            f'<text x="{width-pad+4}" y="{pad + 14*ci}" font-size="11" fill="{col}">'
            f'{c["label"]}</text>'
        )
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts))
    return path
