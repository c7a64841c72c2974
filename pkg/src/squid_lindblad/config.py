"""Flat ``key = value`` run configuration.

Lines starting with ``#`` and blank lines are ignored. Every key may be
overridden from the environment as ``SQUIDLINDBLAD_<KEY>`` (upper case).
"""

from __future__ import annotations

import enum
import logging
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

from squid_lindblad import configkeys as keys
from squid_lindblad.errors import ConfigError
from squid_lindblad.hamiltonian import SinTermCoefficient
from squid_lindblad.params import (
    CODATA,
    BathParams,
    DerivedScales,
    SquidParams,
    derive_scales,
)

log = logging.getLogger(__name__)

REFERENCE_CAPACITANCE = 5e-15
REFERENCE_INDUCTANCE = 3e-10
REFERENCE_JOSEPHSON_ENERGY = 9.99e-22
DEFAULT_GAMMA_RATIO = 1e-3
DEFAULT_BASIS_SIZE = 40
DEFAULT_FLUX_POINTS = 101


class GeneratorFamily(enum.Enum):
    LINDBLAD = "lindblad"
    CALDEIRA_LEGGETT = "caldeira_leggett"


@dataclass(frozen=True)
class SimConfig:
    basis_size: int = DEFAULT_BASIS_SIZE
    generators: GeneratorFamily = GeneratorFamily.LINDBLAD
    renormalize: bool = False
    include_squeeze: bool = True
    sin_term: SinTermCoefficient = SinTermCoefficient.DERIVED
    # None means zeta = 1 - xi at every cutoff
    zeta: float | None = None
    optimize_zeta: bool = False
    gap_threshold: float = 1e-8


@dataclass
class RunConfig:
    squid: SquidParams
    bath: BathParams
    cutoff_ratios: list[float]
    flux_grid: np.ndarray
    sim: SimConfig = field(default_factory=SimConfig)
    # rad/s, one sweep per rate; empty means bath.damping_rate alone
    damping_rates: list[float] = field(default_factory=list)
    output_csv: Path | None = None
    output_json: Path | None = None
    cache_dir: Path | None = None
    use_cache: bool = False
    workers: int = 0
    values: dict[str, str] = field(default_factory=dict)
    source: Path | None = None

    @property
    def scales(self) -> DerivedScales:
        return derive_scales(self.squid, self.bath)

    @property
    def gamma_ratios(self) -> list[float]:
        omega0 = self.scales.omega0
        return [g / omega0 for g in self.damping_rates or [self.bath.damping_rate]]

    def scales_at(
        self, cutoff_ratio: float, gamma_ratio: float = None
    ) -> DerivedScales:
        xi = 0.0 if math.isinf(cutoff_ratio) else 1.0 / cutoff_ratio
        scales = self.scales.with_cutoff(xi)
        if gamma_ratio is not None:
            scales = scales.with_gamma(gamma_ratio)
        return scales

    def physics_values(self) -> dict[str, str]:
        return {
            k: v
            for k, v in sorted(self.values.items())
            if k not in keys.NON_PHYSICS_KEYS
        }


def parse_lines(text: str) -> dict[str, tuple[str, int]]:
    entries: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", line=lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError("missing key", line=lineno)
        if key not in keys.ALL_KEYS:
            raise ConfigError("unknown key", key=key, line=lineno)
        if key in entries:
            raise ConfigError(
                f"duplicate key (first set on line {entries[key][1]})",
                key=key,
                line=lineno,
            )
        entries[key] = (value, lineno)
    return entries


def apply_environment(
    entries: dict[str, tuple[str, int]], environ: Mapping[str, str]
) -> dict[str, tuple[str, int]]:
    merged = dict(entries)
    for key in keys.ALL_KEYS:
        env_key = keys.ENV_PREFIX + key.upper()
        if env_key in environ:
            log.info("%s overridden from environment", key)
            merged[key] = (environ[env_key], None)
    return merged


class _Reader:
    def __init__(self, entries: dict[str, tuple[str, int]]) -> None:
        self.entries = entries

    def has(self, key: str) -> bool:
        return key in self.entries

    def raw(self, key: str, default: str = None) -> str:
        if key not in self.entries:
            return default
        return self.entries[key][0]

    def _convert(self, key: str, convert, default):
        if key not in self.entries:
            return default
        value, line = self.entries[key]
        try:
            return convert(value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid value {value!r} ({exc})", key=key, line=line)

    def get_float(self, key: str, default: float = None) -> float:
        return self._convert(key, float, default)

    def get_int(self, key: str, default: int = None) -> int:
        return self._convert(key, int, default)

    def get_bool(self, key: str, default: bool = None) -> bool:
        def to_bool(text: str) -> bool:
            match text.strip().lower():
                case "1" | "true" | "yes" | "on":
                    return True
                case "0" | "false" | "no" | "off":
                    return False
            raise ValueError("expected a boolean")

        return self._convert(key, to_bool, default)

    def get_floats(self, key: str, default: list[float] = None) -> list[float]:
        return self._convert(
            key, lambda t: [float(x) for x in t.split(",") if x.strip()], default
        )

    def get_enum(self, key: str, cls: type[enum.Enum], default):
        return self._convert(key, lambda t: cls(t.strip().lower()), default)

    def line(self, key: str) -> int:
        return self.entries.get(key, (None, None))[1]


def _flux_grid(r: _Reader) -> np.ndarray:
    if r.has(keys.FLUX_FRACTION) or r.has(keys.FLUX_WB):
        if r.has(keys.FLUX_FRACTION) and r.has(keys.FLUX_WB):
            raise ConfigError(
                f"set only one of {keys.FLUX_FRACTION} and {keys.FLUX_WB}",
                key=keys.FLUX_WB,
                line=r.line(keys.FLUX_WB),
            )
        if r.has(keys.FLUX_WB):
            return np.array([r.get_float(keys.FLUX_WB) / CODATA.flux_quantum])
        return np.array([r.get_float(keys.FLUX_FRACTION)])

    start = r.get_float(keys.FLUX_START, 0.0)
    stop = r.get_float(keys.FLUX_STOP, 1.0)
    points = r.get_int(keys.FLUX_POINTS, DEFAULT_FLUX_POINTS)
    if points < 1:
        raise ConfigError(
            "flux grid must not be empty",
            key=keys.FLUX_POINTS,
            line=r.line(keys.FLUX_POINTS),
        )
    return np.linspace(start, stop, points)


def _damping_rates(r: _Reader, omega0: float) -> list[float]:
    given = [k for k in keys.GAMMA_KEYS if r.has(k)]
    if len(given) > 1:
        raise ConfigError(
            "damping rate set more than once: " + ", ".join(given),
            key=given[1],
            line=r.line(given[1]),
        )
    match given:
        case [keys.GAMMA]:
            return [r.get_float(keys.GAMMA)]
        case [keys.GAMMA_RATIO]:
            ratios = r.get_floats(keys.GAMMA_RATIO)
            if not ratios:
                raise ConfigError(
                    "no damping rate given",
                    key=keys.GAMMA_RATIO,
                    line=r.line(keys.GAMMA_RATIO),
                )
            return [g * omega0 for g in ratios]
        case [keys.QUALITY_FACTOR]:
            # Q_c = 2 pi omega_c / gamma with the cavity taken at omega0
            q = r.get_float(keys.QUALITY_FACTOR)
            if not q > 0:
                raise ConfigError(
                    "quality factor must be positive",
                    key=keys.QUALITY_FACTOR,
                    line=r.line(keys.QUALITY_FACTOR),
                )
            return [2 * math.pi * omega0 / q]
    return [DEFAULT_GAMMA_RATIO * omega0]


def _zeta(r: _Reader) -> float | None:
    text = r.raw(keys.ZETA, "auto").strip().lower()
    if text == "auto":
        return None
    return r.get_float(keys.ZETA)


def build_run_config(
    entries: dict[str, tuple[str, int]], source: Path = None
) -> RunConfig:
    r = _Reader(entries)
    for key in keys.CONFIG_KEYS[keys.MANDATORY]:
        if not r.has(key):
            raise ConfigError("mandatory key missing", key=key)

    C = r.get_float(keys.CAPACITANCE)
    L = r.get_float(keys.INDUCTANCE)
    EJ = r.get_float(keys.JOSEPHSON_ENERGY)
    for key, value in (
        (keys.CAPACITANCE, C),
        (keys.INDUCTANCE, L),
        (keys.JOSEPHSON_ENERGY, EJ),
    ):
        if not value > 0:
            raise ConfigError("must be positive", key=key, line=r.line(key))
    omega0 = 1.0 / math.sqrt(L * C)

    flux_grid = _flux_grid(r)
    cutoffs = r.get_floats(keys.CUTOFF_RATIO, [math.inf])
    if not cutoffs:
        raise ConfigError(
            "no cutoff given", key=keys.CUTOFF_RATIO, line=r.line(keys.CUTOFF_RATIO)
        )
    for c in cutoffs:
        if not c > 0:
            raise ConfigError(
                "cutoff must be positive",
                key=keys.CUTOFF_RATIO,
                line=r.line(keys.CUTOFF_RATIO),
            )

    squid = SquidParams.from_flux_fraction(C, L, EJ, float(flux_grid[0]))
    damping_rates = _damping_rates(r, omega0)
    bath = BathParams(
        damping_rate=damping_rates[0],
        cutoff_frequency=cutoffs[0] * omega0,
        temperature=r.get_float(keys.TEMPERATURE, 0.0),
    )

    sim = SimConfig(
        basis_size=r.get_int(keys.BASIS_SIZE, DEFAULT_BASIS_SIZE),
        generators=r.get_enum(
            keys.GENERATORS, GeneratorFamily, GeneratorFamily.LINDBLAD
        ),
        renormalize=r.get_bool(keys.RENORMALIZE, False),
        include_squeeze=r.get_bool(keys.INCLUDE_SQUEEZE, True),
        sin_term=r.get_enum(
            keys.SIN_TERM, SinTermCoefficient, SinTermCoefficient.DERIVED
        ),
        zeta=_zeta(r),
        optimize_zeta=r.get_bool(keys.OPTIMIZE_ZETA, False),
        gap_threshold=r.get_float(keys.GAP_THRESHOLD, 1e-8),
    )

    def path(key: str) -> Path | None:
        text = r.raw(key)
        return Path(text) if text else None

    return RunConfig(
        squid=squid,
        bath=bath,
        cutoff_ratios=cutoffs,
        flux_grid=flux_grid,
        sim=sim,
        damping_rates=damping_rates,
        output_csv=path(keys.OUTPUT_CSV),
        output_json=path(keys.OUTPUT_JSON),
        cache_dir=path(keys.CACHE_DIR),
        use_cache=r.get_bool(keys.USE_CACHE, False),
        workers=r.get_int(keys.WORKERS, 0),
        values={k: v for k, (v, _) in entries.items()},
        source=source,
    )


def loads_config(text: str, environ: Mapping[str, str] = None) -> RunConfig:
    entries = parse_lines(text)
    if environ is not None:
        entries = apply_environment(entries, environ)
    return build_run_config(entries)


def load_config(path: str | Path, environ: Mapping[str, str] = None) -> RunConfig:
    path = Path(path)
    environ = os.environ if environ is None else environ
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}")
    entries = apply_environment(parse_lines(text), environ)
    config = build_run_config(entries, source=path)
    log.info(
        "loaded %s: %d flux points, cutoffs %s, N = %d",
        path,
        len(config.flux_grid),
        config.cutoff_ratios,
        config.sim.basis_size,
    )
    return config
