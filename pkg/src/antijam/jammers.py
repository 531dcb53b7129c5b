"""Jamming strategies: six fixed parametric modes plus a DQN-driven jammer.

Fixed modes are pure functions of (hop, slot, user history, seed), so a
jammer replays identically for a given configuration. The DRL jammer wraps
the shared DQN core from `agents` with a block action space: it always jams
`block_channels` consecutive channels and is rewarded +1 whenever the user's
hop ends in NACK.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .env import EnvConfig, JamEmission

SWEEP = "sweep"
COMB = "comb"
SWITCH_COMB = "switch_comb"
DYNAMIC = "dynamic"
PARTIAL_BAND = "partial_band"
FOLLOWER = "follower"

FIXED_MODES = (SWEEP, COMB, SWITCH_COMB, DYNAMIC, PARTIAL_BAND, FOLLOWER)

_PARTIAL_BAND_STREAM = 0x7B4D


@dataclass(frozen=True)
class FixedJammerConfig:
    """Parameters for one fixed-mode jammer (only the active mode's fields matter)."""

    mode: str
    power_dbm: float = 50.0
    link: str = "fixed"
    sweep_rate_hz_per_s: float = 500e6
    comb_channels: tuple[int, ...] = (0, 3, 6)
    comb_pair: tuple[tuple[int, ...], tuple[int, ...]] = ((0, 2, 4), (5, 7, 9))
    switch_period_hops: int = 50
    mode_cycle: tuple[str, ...] = (SWEEP, COMB, PARTIAL_BAND)
    cycle_period_hops: int = 50
    band_start: int = 0
    band_width_channels: int = 3
    rehop_period_hops: int = 50
    delay_hops: int = 1

    def __post_init__(self):
        if self.mode not in FIXED_MODES:
            raise ValueError(f"FixedJammerConfig.mode must be one of {FIXED_MODES}, got {self.mode!r}")
        if self.sweep_rate_hz_per_s <= 0:
            raise ValueError("FixedJammerConfig.sweep_rate_hz_per_s must be > 0")
        for name in ("switch_period_hops", "cycle_period_hops", "rehop_period_hops", "delay_hops"):
            if getattr(self, name) < 1:
                raise ValueError(f"FixedJammerConfig.{name} must be >= 1")
        if self.band_width_channels < 1:
            raise ValueError("FixedJammerConfig.band_width_channels must be >= 1")


def fixed_action(
    env: EnvConfig,
    cfg: FixedJammerConfig,
    hop: int,
    slot: int,
    user_history: list[int],
    seed: int = 0,
) -> frozenset[int]:
    """Channel set jammed during `slot` of `hop` (both 0-based)."""
    mode = cfg.mode
    if mode == DYNAMIC:
        sub = cfg.mode_cycle[(hop // cfg.cycle_period_hops) % len(cfg.mode_cycle)]
        return fixed_action(env, _with_mode(cfg, sub), hop, slot, user_history, seed)

    if mode == SWEEP:
        k = hop * env.slots_per_hop + slot
        freq = (cfg.sweep_rate_hz_per_s * k * env.slot_duration_s) % env.bandwidth_hz
        return frozenset({int(freq // env.channel_bandwidth_hz)})

    if mode == COMB:
        _check_channels(env, cfg.comb_channels, "comb_channels")
        return frozenset(cfg.comb_channels)

    if mode == SWITCH_COMB:
        active = cfg.comb_pair[(hop // cfg.switch_period_hops) % 2]
        _check_channels(env, active, "comb_pair")
        return frozenset(active)

    if mode == PARTIAL_BAND:
        width = cfg.band_width_channels
        if width > env.channels:
            raise ValueError(f"band_width_channels {width} exceeds channel count {env.channels}")
        period = hop // cfg.rehop_period_hops
        if period == 0:
            start = cfg.band_start
            _check_channels(env, range(start, start + width), "band_start")
        else:
            rng = np.random.default_rng([seed, _PARTIAL_BAND_STREAM, period])
            start = int(rng.integers(0, env.channels - width + 1))
        return frozenset(range(start, start + width))

    # follower: echo the user's channel from delay_hops ago, nothing before that
    if len(user_history) < cfg.delay_hops:
        return frozenset()
    return frozenset({user_history[-cfg.delay_hops]})


def _with_mode(cfg: FixedJammerConfig, mode: str) -> FixedJammerConfig:
    if cfg.mode == mode:
        return cfg
    fields = {k: getattr(cfg, k) for k in cfg.__dataclass_fields__}
    fields["mode"] = mode
    return FixedJammerConfig(**fields)


def _check_channels(env: EnvConfig, channels, name: str) -> None:
    for ch in channels:
        if not 0 <= ch < env.channels:
            raise ValueError(f"FixedJammerConfig.{name} channel {ch} out of range [0, {env.channels})")


class FixedJammer:
    """Stateful wrapper producing one JamEmission per hop."""

    def __init__(self, env: EnvConfig, cfg: FixedJammerConfig, seed: int = 0):
        self.env = env
        self.cfg = cfg
        self.seed = seed
        # fail fast on statically known channel sets
        modes = cfg.mode_cycle if cfg.mode == DYNAMIC else (cfg.mode,)
        if COMB in modes:
            _check_channels(env, cfg.comb_channels, "comb_channels")
        if SWITCH_COMB in modes:
            for group in cfg.comb_pair:
                _check_channels(env, group, "comb_pair")
        if PARTIAL_BAND in modes:
            _check_channels(
                env, range(cfg.band_start, cfg.band_start + cfg.band_width_channels), "band_start"
            )

    def emission(self, hop: int, user_history: list[int], state=None) -> JamEmission:
        slots = tuple(
            fixed_action(self.env, self.cfg, hop, s, user_history, self.seed)
            for s in range(self.env.slots_per_hop)
        )
        return JamEmission(slot_channels=slots, power_dbm=self.cfg.power_dbm, link=self.cfg.link)

    def observe(self, outcome, hop: int) -> None:
        pass
