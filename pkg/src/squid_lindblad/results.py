"""Sweep result persistence: CSV rows, a JSON bundle and a content-hash cache.

CSV output is byte-reproducible for a given configuration and package
version. The JSON bundle carries a provenance timestamp taken from
``SOURCE_DATE_EPOCH`` when set, else from the wall clock, so uncached
JSON output is byte-identical across runs only with that variable set.
"""

from __future__ import annotations

import json
import logging
import os
import time
from dataclasses import dataclass, field
from pathlib import Path

import pandas as pd

from squid_lindblad import __version__
from squid_lindblad.config import RunConfig
from squid_lindblad.observables import CSV_COLUMNS, SweepRecord
from squid_lindblad.util import content_hash

log = logging.getLogger(__name__)

CSV_FLOAT_FORMAT = "%.16e"


def provenance_timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    seconds = int(epoch) if epoch else int(time.time())
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(seconds))


def config_hash(config: RunConfig) -> str:
    return content_hash({"config": config.physics_values(), "version": __version__})


@dataclass
class ResultBundle:
    config: dict[str, str]
    config_hash: str
    records: list[SweepRecord]
    provenance: dict = field(default_factory=dict)

    @classmethod
    def from_run(cls, config: RunConfig, records: list[SweepRecord]) -> ResultBundle:
        provenance = {
            "version": __version__,
            "timestamp": provenance_timestamp(),
            "N": config.sim.basis_size,
            "generators": config.sim.generators.value,
            "failed_points": sum(r.error is not None for r in records),
        }
        return cls(
            config=config.physics_values(),
            config_hash=config_hash(config),
            records=records,
            provenance=provenance,
        )

    def to_json(self) -> str:
        payload = {
            "config": self.config,
            "config_hash": self.config_hash,
            "provenance": self.provenance,
            "records": [r.as_dict() for r in self.records],
        }
        return json.dumps(payload, sort_keys=True, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str) -> ResultBundle:
        data = json.loads(text)
        return cls(
            config=data["config"],
            config_hash=data["config_hash"],
            records=[SweepRecord.from_dict(r) for r in data["records"]],
            provenance=data.get("provenance", {}),
        )

    def frame(self) -> pd.DataFrame:
        return records_frame(self.records)


def records_frame(records: list[SweepRecord]) -> pd.DataFrame:
    return pd.DataFrame([r.as_row() for r in records], columns=CSV_COLUMNS)


def write_csv(records: list[SweepRecord], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    records_frame(records).to_csv(
        path,
        index=False,
        float_format=CSV_FLOAT_FORMAT,
        na_rep="nan",
        lineterminator="\n",
    )
    log.info("%d rows written to %s", len(records), path)
    return path


def write_json(bundle: ResultBundle, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(bundle.to_json(), encoding="utf-8")
    log.info("result bundle written to %s", path)
    return path


def read_results(path: str | Path) -> pd.DataFrame:
    """Sweep rows from a CSV file or a JSON bundle."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        bundle = ResultBundle.from_json(path.read_text(encoding="utf-8"))
        frame = pd.DataFrame([r.as_dict() for r in bundle.records])
    else:
        frame = pd.read_csv(path)
    return frame


class ResultCache:
    def __init__(self, directory: str | Path) -> None:
        self.directory = Path(directory)

    def path_for(self, config: RunConfig) -> Path:
        return self.directory / f"{config_hash(config)}.json"

    def load(self, config: RunConfig) -> ResultBundle | None:
        path = self.path_for(config)
        if not path.is_file():
            return None
        try:
            bundle = ResultBundle.from_json(path.read_text(encoding="utf-8"))
        except (ValueError, KeyError, TypeError) as exc:
            log.warning("ignoring unreadable cache entry %s: %s", path, exc)
            return None
        log.info("cache hit: %s", path)
        return bundle

    def store(self, bundle: ResultBundle) -> Path:
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self.directory / f"{bundle.config_hash}.json"
        path.write_text(bundle.to_json(), encoding="utf-8")
        log.debug("cached %d records in %s", len(bundle.records), path)
        return path
