"""Count reduced words for each supported type and report BFS cost."""
from __future__ import annotations

import argparse
import json
import resource
import time
from dataclasses import dataclass, field

from coxtetra.coxeter import rex_graph


@dataclass
class Config:
    types: list[str] = field(default_factory=lambda: ["A3", "B3", "C3", "H3", "F4"])
    output: str | None = None


def run(cfg: Config) -> list[dict]:
    rows = []
    for name in cfg.types:
        t0 = time.perf_counter()
        g = rex_graph(name)
        rows.append({
            "type": name,
            "vertices": g.vertex_count,
            "edges": g.edge_count,
            "seconds": round(time.perf_counter() - t0, 3),
            "peak_rss_mb": round(resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024, 1),
        })
        print(rows[-1])
    if cfg.output:
        with open(cfg.output, "w") as fh:
            json.dump(rows, fh, indent=2)
    return rows


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--types", nargs="+", default=Config().types)
    ap.add_argument("--output")
    a = ap.parse_args()
    run(Config(types=a.types, output=a.output))
