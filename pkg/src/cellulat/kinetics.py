"""Concentration transfer law.

The rate law is a linear fractional transfer weighted by the inverse affinity
rank: delta = k * (1/rank) * drive * pool, where drive is 1.0 for an active
receptor (or raw signal) source and AAC/IIC for a protein source.  Transfers
are clamped to the available pool, so conservation holds by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .agents import ProteinAgent, ReceptorAgent


@dataclass
class KineticsParams:
    k_base: float = 0.1
    k_deact: float = 0.1

    def __post_init__(self):
        if not (0 < self.k_base <= 1):
            raise ValueError("k_base must be in (0, 1], got %r" % self.k_base)
        if not (0 < self.k_deact <= 1):
            raise ValueError("k_deact must be in (0, 1], got %r" % self.k_deact)


def source_drive(source):
    """Activity fraction of the transfer source."""
    if source is None:
        return 1.0
    if isinstance(source, ReceptorAgent):
        return 1.0 if source.as_state == 1 else 0.0
    if isinstance(source, ProteinAgent):
        return source.aac / source.iic if source.iic > 0 else 0.0
    return 1.0


def kinetics_update(source, target, rank, params, inhibit=False):
    """Transfer between the target's pools; returns the applied delta (nM).

    Activation moves IAC -> AAC at k_base; inhibition mirrors it, moving
    AAC -> IAC at k_deact.  `source` may be None for an external drive of 1.0.
    """
    if rank < 1:
        raise ValueError("rank must be >= 1, got %r" % rank)
    drive = source_drive(source)
    if inhibit:
        delta = params.k_deact * (1.0 / rank) * drive * target.aac
        return target.deactivate_amount(delta)
    delta = params.k_base * (1.0 / rank) * drive * target.iac
    return target.activate_amount(delta)
