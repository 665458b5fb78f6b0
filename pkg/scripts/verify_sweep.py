"""Check each stored equation against the standard maps over growing domains."""
from __future__ import annotations

import argparse
import json
from dataclasses import dataclass, field

from coxtetra.reference import load_equation
from coxtetra.solutions import DomainSpec, verify_equation


@dataclass
class Config:
    equations: list[str] = field(default_factory=lambda: ["tetrahedron", "reflection_c3", "reflection_b3", "f4"])
    bounds: list[int] = field(default_factory=lambda: [1, 2, 3])
    samples: int = 100_000
    max_value: int = 6
    seed: int = 1


def run(cfg: Config) -> None:
    for name in cfg.equations:
        eq = load_equation(name)
        doms = [DomainSpec.exhaustive(b) for b in cfg.bounds]
        doms.append(DomainSpec.sampled(cfg.samples, cfg.max_value, seed=cfg.seed))
        for dom in doms:
            if dom.mode == "exhaustive" and dom.size(eq.ambient_length) > 5_000_000:
                print(f"{name:14s} {json.dumps(dom.describe(), sort_keys=True):60s} skipped (too large)")
                continue
            rep = verify_equation(eq, dom, equation_id=name)
            print(f"{name:14s} {json.dumps(dom.describe(), sort_keys=True):60s} states={rep.states_tested:>9d} "
                  f"failures={len(rep.failures)} {rep.elapsed:.2f}s")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=Config.samples)
    ap.add_argument("--max-value", type=int, default=Config.max_value)
    ap.add_argument("--seed", type=int, default=Config.seed)
    a = ap.parse_args()
    run(Config(samples=a.samples, max_value=a.max_value, seed=a.seed))
