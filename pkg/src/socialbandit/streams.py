"""Independent random streams per (run, agent, purpose).

Every consumer of randomness gets its own generator derived from the master
seed through a spawn key, so adding or removing agents never perturbs the
draws any other agent sees, and runs are independent of execution order or
parallelism.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ACTION, REWARD, POLICY, NOISE = range(4)


def substream(master_seed: int, run: int, agent: int, purpose: int) -> np.random.Generator:
    seq = np.random.SeedSequence(master_seed, spawn_key=(run, agent, purpose))
    return np.random.Generator(np.random.PCG64(seq))


@dataclass
class StreamBundle:
    """The generators one agent owns within one run."""

    action: np.random.Generator
    reward: np.random.Generator
    policy: np.random.Generator
    noise: np.random.Generator


def agent_streams(master_seed: int, run: int, agent: int) -> StreamBundle:
    return StreamBundle(
        action=substream(master_seed, run, agent, ACTION),
        reward=substream(master_seed, run, agent, REWARD),
        policy=substream(master_seed, run, agent, POLICY),
        noise=substream(master_seed, run, agent, NOISE),
    )
