"""Time-slotted multi-channel spectrum environment.

The band is split into M non-overlapping channels. Every basic time slot,
received power on each channel is composed analytically from the user's
signal, any number of jamming emissions, and a flat noise floor (rectangular
spectral masks, so all band integrals collapse to per-channel sums). The
environment exposes three views of a slot/hop:

* spectrum vector  -- per-slot, N_F dB samples (channel power spread evenly
  over that channel's bins);
* spectrum waterfall -- the last N_T spectrum vectors, the agents' state;
* coarse spectrum  -- per-hop, M dB samples (slot-mean total power per
  channel), plus an interference-only variant used as the prediction label.

A hop is N_h consecutive slots with the user's channel held fixed. The hop
outcome carries per-slot SINR, the min-SINR user reward, ACK/NACK feedback
and the +/-1 jammer reward derived from it.

All randomness (block fading, nothing else) is keyed on (seed, link, slot),
so identical configs and action sequences replay bit-identically regardless
of call order.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

DETERMINISTIC = "deterministic"
RAYLEIGH = "rayleigh"


def dbm_to_mw(dbm: float) -> float:
    return 10.0 ** (dbm / 10.0)


def mw_to_db(mw):
    return 10.0 * np.log10(mw)


@dataclass(frozen=True)
class LinkGain:
    """Propagation model for one transmitter->receiver link.

    Deterministic mode gives the pure path-loss gain distance^(-exponent)
    every slot; rayleigh mode multiplies it by a unit-mean block-fading
    power coefficient redrawn once per slot.
    """

    distance_m: float = 1.0
    path_loss_exp: float = 2.0
    fading: str = DETERMINISTIC

    def __post_init__(self):
        if self.distance_m <= 0:
            raise ValueError(f"LinkGain.distance_m must be > 0, got {self.distance_m}")
        if self.fading not in (DETERMINISTIC, RAYLEIGH):
            raise ValueError(f"LinkGain.fading must be '{DETERMINISTIC}' or '{RAYLEIGH}', got {self.fading!r}")


def link_gain(link: LinkGain, slot: int, seed: int = 0, stream: int = 0) -> float:
    """Linear power gain of `link` during `slot`.

    The rayleigh draw is keyed on (seed, stream, slot): exponential with unit
    mean (squared Rayleigh amplitude), constant within the slot.
    """
    base = link.distance_m ** (-link.path_loss_exp)
    if link.fading == DETERMINISTIC:
        return base
    rng = np.random.default_rng([seed, stream, slot])
    return base * rng.exponential(1.0)


def _link_stream(name: str) -> int:
    return zlib.crc32(name.encode("utf-8"))


@dataclass(frozen=True)
class EnvConfig:
    """Static environment parameters.

    channels=M, bandwidth_hz=B, spectrum_bins=N_F per slot, history_slots=N_T
    waterfall rows, slots_per_hop=N_h. Channel bandwidth b=B/M is derived.
    `gains` maps link names (e.g. "user", "sweep", "drl") to LinkGain; links
    without an entry default to a unit-distance deterministic link.
    """

    channels: int = 10
    bandwidth_hz: float = 20e6
    spectrum_bins: int = 40
    history_slots: int = 40
    slots_per_hop: int = 10
    slot_duration_s: float = 1e-3
    sinr_threshold_db: float = 0.0
    user_power_dbm: float = 30.0
    noise_power_dbm: float = 0.0
    gains: Mapping[str, LinkGain] = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.channels < 2:
            raise ValueError(f"EnvConfig.channels must be >= 2, got {self.channels}")
        if self.spectrum_bins <= 0 or self.spectrum_bins % self.channels != 0:
            raise ValueError(
                f"EnvConfig.spectrum_bins must be a positive multiple of channels, "
                f"got {self.spectrum_bins} with channels={self.channels}"
            )
        if self.slots_per_hop < 1:
            raise ValueError(f"EnvConfig.slots_per_hop must be >= 1, got {self.slots_per_hop}")
        if self.history_slots < 1:
            raise ValueError(f"EnvConfig.history_slots must be >= 1, got {self.history_slots}")
        if self.bandwidth_hz <= 0:
            raise ValueError(f"EnvConfig.bandwidth_hz must be > 0, got {self.bandwidth_hz}")
        if self.slot_duration_s <= 0:
            raise ValueError(f"EnvConfig.slot_duration_s must be > 0, got {self.slot_duration_s}")

    @property
    def channel_bandwidth_hz(self) -> float:
        return self.bandwidth_hz / self.channels

    @property
    def bins_per_channel(self) -> int:
        return self.spectrum_bins // self.channels

    @property
    def hop_duration_s(self) -> float:
        return self.slots_per_hop * self.slot_duration_s

    @property
    def noise_floor_db(self) -> float:
        """dB value of a noise-only spectrum bin (the waterfall warm-up fill)."""
        return float(mw_to_db(dbm_to_mw(self.noise_power_dbm) / self.bins_per_channel))

    def gain_for(self, link_name: str) -> LinkGain:
        return self.gains.get(link_name, LinkGain())


@dataclass
class ChannelPowerMap:
    """Per-channel linear received power (mW) for one slot, split by source."""

    signal: np.ndarray
    jam: np.ndarray
    noise: np.ndarray

    def total(self) -> np.ndarray:
        return self.signal + self.jam + self.noise

    def interference(self) -> np.ndarray:
        return self.jam + self.noise


@dataclass(frozen=True)
class JamEmission:
    """One jammer's contribution to a hop.

    slot_channels has one channel set per slot of the hop; power is the
    transmit power applied to every listed channel; link names the entry in
    EnvConfig.gains used for propagation.
    """

    slot_channels: tuple[frozenset[int], ...]
    power_dbm: float
    link: str = "jammer"


@dataclass
class HopOutcome:
    """Everything produced by one hop of the Markov game."""

    sinr_per_slot_db: np.ndarray
    reward_db: float
    ack: bool
    jammer_reward: int
    coarse_db: np.ndarray
    coarse_interference_db: np.ndarray
    waterfall: np.ndarray


def compose_power(
    cfg: EnvConfig,
    user_channel: int | None,
    jam_entries: Iterable[tuple[int, float, str]],
    slot: int,
) -> ChannelPowerMap:
    """Compose the per-channel received power map for one slot.

    jam_entries is an iterable of (channel, power_dbm, link_name); distinct
    entries landing on the same channel add. The user contributes
    user_power through the "user" link on its channel, or nothing if
    user_channel is None.
    """
    m = cfg.channels
    signal = np.zeros(m)
    jam = np.zeros(m)
    noise = np.full(m, dbm_to_mw(cfg.noise_power_dbm))

    if user_channel is not None:
        if not 0 <= user_channel < m:
            raise ValueError(f"user channel {user_channel} out of range [0, {m})")
        gain = link_gain(cfg.gain_for("user"), slot, cfg.seed, _link_stream("user"))
        signal[user_channel] = dbm_to_mw(cfg.user_power_dbm) * gain

    for channel, power_dbm, link_name in jam_entries:
        if not 0 <= channel < m:
            raise ValueError(f"jam channel {channel} out of range [0, {m})")
        gain = link_gain(cfg.gain_for(link_name), slot, cfg.seed, _link_stream(link_name))
        jam[channel] += dbm_to_mw(power_dbm) * gain

    return ChannelPowerMap(signal=signal, jam=jam, noise=noise)


def sinr_db(pmap: ChannelPowerMap, user_channel: int) -> float:
    """Received SINR (dB) on the user's channel; the user must be transmitting."""
    s = pmap.signal[user_channel]
    if s <= 0:
        raise ValueError(f"no signal power on channel {user_channel}; SINR undefined")
    return float(mw_to_db(s / (pmap.jam[user_channel] + pmap.noise[user_channel])))


def spectrum_vector(cfg: EnvConfig, pmap: ChannelPowerMap) -> np.ndarray:
    """Per-slot spectrum sample vector (N_F dB values).

    Each channel's total linear power is spread uniformly over its
    N_F/M bins; every bin is then converted to dB.
    """
    per_bin = pmap.total() / cfg.bins_per_channel
    return np.asarray(mw_to_db(np.repeat(per_bin, cfg.bins_per_channel)))


def coarse_spectrum(slot_maps: Sequence[ChannelPowerMap], slots_per_hop: int) -> np.ndarray:
    """Per-hop coarse spectrum: dB of the slot-mean total power per channel."""
    if len(slot_maps) != slots_per_hop:
        raise ValueError(f"expected {slots_per_hop} slot maps, got {len(slot_maps)}")
    mean_mw = np.mean([p.total() for p in slot_maps], axis=0)
    return np.asarray(mw_to_db(mean_mw))


class SpectrumEnv:
    """Deterministic hop-stepped environment instance.

    Owns the global slot counter and the rolling spectrum waterfall. One
    instance per trial; never shared across threads.
    """

    def __init__(self, cfg: EnvConfig):
        self.cfg = cfg
        self._slot = 0
        self._waterfall = np.full((cfg.history_slots, cfg.spectrum_bins), cfg.noise_floor_db)

    def reset(self) -> np.ndarray:
        self._slot = 0
        self._waterfall.fill(self.cfg.noise_floor_db)
        return self.waterfall()

    def waterfall(self) -> np.ndarray:
        """Copy of the current state (oldest row first, newest last)."""
        return self._waterfall.copy()

    @property
    def slot(self) -> int:
        return self._slot

    @property
    def hop(self) -> int:
        return self._slot // self.cfg.slots_per_hop

    def step_hop(self, user_channel: int, emissions: Sequence[JamEmission]) -> HopOutcome:
        """Run one hop: N_h slots at a fixed user channel against `emissions`."""
        cfg = self.cfg
        n_h = cfg.slots_per_hop
        if not 0 <= user_channel < cfg.channels:
            raise ValueError(f"user channel {user_channel} out of range [0, {cfg.channels})")
        for e in emissions:
            if len(e.slot_channels) != n_h:
                raise ValueError(
                    f"emission via link {e.link!r} has {len(e.slot_channels)} slot entries, expected {n_h}"
                )

        maps = []
        vectors = np.empty((n_h, cfg.spectrum_bins))
        sinrs = np.empty(n_h)
        for s in range(n_h):
            entries = [
                (ch, e.power_dbm, e.link) for e in emissions for ch in sorted(e.slot_channels[s])
            ]
            pmap = compose_power(cfg, user_channel, entries, self._slot)
            maps.append(pmap)
            vectors[s] = spectrum_vector(cfg, pmap)
            sinrs[s] = sinr_db(pmap, user_channel)
            self._slot += 1

        keep = cfg.history_slots - n_h
        if keep > 0:
            self._waterfall[:keep] = self._waterfall[n_h:]
            self._waterfall[keep:] = vectors
        else:
            self._waterfall[:] = vectors[-cfg.history_slots:]

        ack = bool(np.all(sinrs >= cfg.sinr_threshold_db))
        coarse = coarse_spectrum(maps, n_h)
        coarse_intf = np.asarray(mw_to_db(np.mean([p.interference() for p in maps], axis=0)))
        return HopOutcome(
            sinr_per_slot_db=sinrs,
            reward_db=float(sinrs.min()),
            ack=ack,
            jammer_reward=-1 if ack else 1,
            coarse_db=coarse,
            coarse_interference_db=coarse_intf,
            waterfall=self.waterfall(),
        )
