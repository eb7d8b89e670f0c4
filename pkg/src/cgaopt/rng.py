from __future__ import annotations

from enum import IntEnum

import numpy as np


class Purpose(IntEnum):
    """Separates the random streams used by the different stages of a run"""

    initial_population = 0
    sweep = 1
    breeding = 2


def stream(
    seed: int, purpose: Purpose | int, generation: int = 0, index: int = 0
) -> np.random.Generator:
    """Random generator for one (seed, purpose, generation, index) cell

    Streams for different cells are statistically independent and do not
    depend on the order in which they are requested, so candidates can be
    generated and evaluated concurrently without changing a run.

    Parameters
    ----------
    seed : int
        Master seed of the run (any non-negative 64-bit integer)
    purpose : Purpose | int
        Which stage draws from the stream
    generation : int, optional
        Generation number, by default 0
    index : int, optional
        Coordinate or offspring index, by default 0

    Returns
    -------
    np.random.Generator
        A PCG64 generator
    """
    seq = np.random.SeedSequence(int(seed), spawn_key=(int(purpose), int(generation), int(index)))
    return np.random.Generator(np.random.PCG64(seq))
