"""Regenerate the JSON fixtures in this folder: python fixtures/build.py"""

from pathlib import Path

import numpy as np

from sepcheck import io
from sepcheck.game import Game
from sepcheck.generators import ExpTerm, GeneratorSpec, Poly, generate, log_example_spec
from sepcheck.separability import decide

HERE = Path(__file__).resolve().parent


def fix_b() -> Game:
    """Two binary opponents, two focal actions, the single-switch 4-cycle."""
    ranks = np.zeros((2, 2, 2), dtype=np.int64)
    for (x, y), r in {(0, 0): [0, 1], (1, 0): [1, 0], (0, 1): [1, 0], (1, 1): [0, 1]}.items():
        ranks[:, x, y] = r
    return Game(((0, 1), (0, 1), (0, 1)), orders=ranks)


def fix_c() -> Game:
    return generate(
        GeneratorSpec("random_separable", (0, 1, 2), ((0, 1, 2), (0, 1)), seed=7, magnitude=4)
    )


def fix_d() -> Game:
    return generate(GeneratorSpec("linquad", (0, 1), ((0, 1), (0, 1)), b=1, weights=(1, 1)))


FIX_E_GRID = dict(focal_grid=("1/2", "1", "3/2"), grids=(("1/3", "2/3"),) * 3, weights=(1, 1, 1))


def fix_e() -> Game:
    """Log aggregate with b = 1."""
    return generate(
        GeneratorSpec("aggregate", f=Poly((0, 1, -1)), gamma=Poly((0, 1)), psi="log", **FIX_E_GRID)
    )


def fix_e_tilde() -> Game:
    """Its exponential counterpart -exp(s0) - exp(b - s0) * sum."""
    return generate(
        GeneratorSpec(
            "aggregate", f=ExpTerm(-1, 1, 0), gamma=ExpTerm(-1, -1, 1), psi="identity", **FIX_E_GRID
        )
    )


def main():
    games = {
        "fix_b": fix_b(),
        "fix_c": fix_c(),
        "fix_d": fix_d(),
        "fix_e": fix_e(),
        "fix_e_tilde": fix_e_tilde(),
        "log_example": generate(log_example_spec()),
    }
    for name, game in games.items():
        io.write_json(HERE / f"{name}.json", io.game_to_dict(game))
    io.write_json(HERE / "fix_b.cert.json", io.cert_to_dict(decide(games["fix_b"]).cert))


if __name__ == "__main__":
    main()
