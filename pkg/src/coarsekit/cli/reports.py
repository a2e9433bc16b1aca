"""Deterministic artifact writers.

All numeric output is pinned to six decimal places, keys are sorted, and
wall-clock timings never enter an artifact, so identical manifests and
seeds produce byte-identical files.
"""

import json
import os


def pin(value):
    """Round floats to six decimals, recursively, for artifact payloads."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, float):
        return round(value, 6)
    if isinstance(value, dict):
        return {str(k): pin(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [pin(v) for v in value]
    return value


def format_cell(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "%.6f" % value
    if value is None:
        return ""
    return str(value)


def ensure_outdir(path):
    os.makedirs(path, exist_ok=True)
    return path


def write_json(outdir, name, payload):
    path = os.path.join(ensure_outdir(outdir), name)
    text = json.dumps(pin(payload), sort_keys=True, indent=2,
                      separators=(",", ": "))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text + "\n")
    return path


def write_csv(outdir, name, header, rows):
    path = os.path.join(ensure_outdir(outdir), name)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_cell(cell) for cell in row))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def write_svg(outdir, name, points, width=480, height=480, radius=3):
    """A static scatter of labeled points, coordinates pinned to 6 decimals."""
    path = os.path.join(ensure_outdir(outdir), name)
    xs = [p[0] for p in points] or [0.0]
    ys = [p[1] for p in points] or [0.0]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    span_x = (x1 - x0) or 1.0
    span_y = (y1 - y0) or 1.0
    margin = 20.0

    def sx(x):
        return margin + (x - x0) / span_x * (width - 2 * margin)

    def sy(y):
        return height - margin - (y - y0) / span_y * (height - 2 * margin)

    parts = ['<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d">'
             % (width, height)]
    for point in points:
        x, y = point[0], point[1]
        label = point[2] if len(point) > 2 else ""
        parts.append('<circle cx="%.6f" cy="%.6f" r="%d"><title>%s</title>'
                     '</circle>' % (sx(x), sy(y), radius, label))
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts) + "\n")
    return path


class SuiteReport:
    """Outcome of one verification suite.

    ``payload`` carries the checked instances and any counterexamples so a
    failure can be replayed standalone; wall-clock stays out of the
    artifact dictionary.
    """

    def __init__(self, suite_id):
        self.suite_id = suite_id
        self.instances = 0
        self.passed = 0
        self.failed = 0
        self.inconclusive = 0
        self.counterexamples = []
        self.details = {}
        self.wall_clock = None

    def record(self, ok, payload=None):
        self.instances += 1
        if ok is None:
            self.inconclusive += 1
            if payload is not None:
                self.counterexamples.append(
                    {"kind": "inconclusive", "payload": payload})
        elif ok:
            self.passed += 1
        else:
            self.failed += 1
            if payload is not None:
                self.counterexamples.append(
                    {"kind": "failure", "payload": payload})

    @property
    def status(self):
        if self.failed:
            return "fail"
        if self.inconclusive:
            return "inconclusive"
        return "pass"

    def to_artifact(self):
        return {
            "suite": self.suite_id,
            "instances": self.instances,
            "passed": self.passed,
            "failed": self.failed,
            "inconclusive": self.inconclusive,
            "status": self.status,
            "counterexamples": self.counterexamples,
            "details": self.details,
        }
