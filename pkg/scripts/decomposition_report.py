"""Replay the 24-stage factorization and print a per-stage summary."""
from __future__ import annotations

import argparse
import json
from dataclasses import dataclass

from coxtetra.decomposition import load_proof_script, verify_theorem


@dataclass
class Config:
    semantic_states: int = 1000
    seed: int = 1
    max_value: int = 4
    json_out: bool = False


def run(cfg: Config) -> None:
    rep = verify_theorem(load_proof_script(), semantic_states=cfg.semantic_states,
                         seed=cfg.seed, max_value=cfg.max_value)
    if cfg.json_out:
        print(json.dumps(rep.to_json(), indent=2, sort_keys=True))
        return
    for i, w in enumerate(rep.windows):
        print(i, w)
    print(f"passed={rep.passed} stages={rep.stages_validated} C3={rep.c3_count} B3={rep.b3_count} "
          f"commutations={rep.commutation_steps_validated} ambiguous={rep.ambiguous_stages}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--semantic-states", type=int, default=Config.semantic_states)
    ap.add_argument("--seed", type=int, default=Config.seed)
    ap.add_argument("--json", action="store_true")
    a = ap.parse_args()
    run(Config(semantic_states=a.semantic_states, seed=a.seed, json_out=a.json))
