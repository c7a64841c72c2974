import logging
import math

import numpy as np
import pytest

from squid_lindblad.config import (
    REFERENCE_CAPACITANCE,
    REFERENCE_INDUCTANCE,
    REFERENCE_JOSEPHSON_ENERGY,
)
from squid_lindblad.params import BathParams, DerivedScales, SquidParams, derive_scales


@pytest.fixture
def reference_squid():
    return SquidParams.from_flux_fraction(
        REFERENCE_CAPACITANCE, REFERENCE_INDUCTANCE, REFERENCE_JOSEPHSON_ENERGY, 0.0
    )


@pytest.fixture
def reference_omega0():
    return 1.0 / math.sqrt(REFERENCE_CAPACITANCE * REFERENCE_INDUCTANCE)


@pytest.fixture
def reference_bath(reference_omega0):
    return BathParams(
        damping_rate=1e-3 * reference_omega0, cutoff_frequency=10 * reference_omega0
    )


@pytest.fixture
def reference_scales(reference_squid, reference_bath) -> DerivedScales:
    return derive_scales(reference_squid, reference_bath)


@pytest.fixture
def oscillator_scales() -> DerivedScales:
    # no Josephson term: a damped harmonic oscillator
    return DerivedScales.dimensionless(nu_ratio=0.0, phase_scale=1.0)


@pytest.fixture
def shallow_scales() -> DerivedScales:
    # a weak cosine keeps small bases converged
    return DerivedScales.dimensionless(nu_ratio=0.5, phase_scale=0.8, xi=0.1)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def write_config(tmp_path):
    def write(text: str, name: str = "run.cfg"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return write


@pytest.fixture
def small_config_text(tmp_path):
    return "\n".join(
        [
            f"capacitance_F = {REFERENCE_CAPACITANCE}",
            f"inductance_H = {REFERENCE_INDUCTANCE}",
            f"josephson_energy_J = {REFERENCE_JOSEPHSON_ENERGY}",
            "gamma_over_omega0 = 0.05",
            "cutoff_over_omega0 = inf, 10",
            "flux_start = 0.0",
            "flux_stop = 1.0",
            "flux_points = 5",
            "basis_size = 8",
            "gap_threshold = 1e-12",
            f"cache_dir = {tmp_path / 'cache'}",
            "",
        ]
    )


@pytest.fixture
def logger(tmp_path):
    class NoTraceFilter(logging.Filter):
        def filter(self, record):
            return not record.getMessage().startswith("trace:")

    logger = logging.getLogger("squid_lindblad.tests")
    logger.setLevel(logging.DEBUG)

    logger.addFilter(NoTraceFilter())

    logging.basicConfig(
        datefmt="%d/%m/%Y %I:%M:%S",
        format="%(asctime)s.%(msecs)03d  %(name)-12s %(levelname)-8s %(message)s",
        filename=tmp_path / "squid_lindblad.log",
        encoding="utf-8",
        level=logging.DEBUG,
        filemode="w",
    )

    return logger
