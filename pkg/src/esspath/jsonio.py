"""Deterministic JSON output.

Dicts keep insertion order, floats are printed with 12 significant digits,
and nothing depends on hash order, so identical inputs yield byte-identical
output (a requirement for golden-file testing of the CLI).
"""

from __future__ import annotations

import json
import math
from typing import Any

from .endo import CheckReport
from .graphs import Graph
from .paths import PathVector, path_labels


def format_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    return f"{x:.12g}"


def render(obj: Any, indent: int = 0) -> str:
    pad = "  " * indent
    inner_pad = "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [render(x, indent + 1) for x in obj]
        return ("[\n" + ",\n".join(inner_pad + it for it in items)
                + "\n" + pad + "]")
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f"{json.dumps(str(k))}: {render(v, indent + 1)}"
            for k, v in obj.items()
        ]
        return ("{\n" + ",\n".join(inner_pad + it for it in items)
                + "\n" + pad + "}")
    raise TypeError(f"cannot render {type(obj).__name__} as JSON")


def path_vector_obj(g: Graph, vec: PathVector) -> dict:
    return {
        "terms": [
            {"path": path_labels(g, p), "coeff": c}
            for p, c in vec.sorted_terms()
        ]
    }


def report_obj(rep: CheckReport) -> dict:
    return rep.to_dict()
