## Run configuration keys

MANDATORY = "mandatory"
OPTIONAL = "optional"

ENV_PREFIX = "SQUIDLINDBLAD_"

## Circuit

# mandatory
CAPACITANCE = "capacitance_F"
INDUCTANCE = "inductance_H"
JOSEPHSON_ENERGY = "josephson_energy_J"

# optional
FLUX_FRACTION = "flux_fraction"
FLUX_WB = "flux_Wb"
FLUX_START = "flux_start"
FLUX_STOP = "flux_stop"
FLUX_POINTS = "flux_points"


## Bath

# exactly one of these sets the damping rate
GAMMA = "gamma_rad_s"
GAMMA_RATIO = "gamma_over_omega0"
QUALITY_FACTOR = "quality_factor"

CUTOFF_RATIO = "cutoff_over_omega0"
TEMPERATURE = "temperature_K"


## Simulation

BASIS_SIZE = "basis_size"
GENERATORS = "generators"
RENORMALIZE = "renormalize"
INCLUDE_SQUEEZE = "include_squeeze"
SIN_TERM = "sin_term_coefficient"
ZETA = "zeta"
OPTIMIZE_ZETA = "optimize_zeta"
GAP_THRESHOLD = "gap_threshold"


## Output

OUTPUT_CSV = "output_csv"
OUTPUT_JSON = "output_json"
CACHE_DIR = "cache_dir"
USE_CACHE = "use_cache"
WORKERS = "workers"


## Key Dictionaries

CONFIG_KEYS = {
    MANDATORY: [CAPACITANCE, INDUCTANCE, JOSEPHSON_ENERGY],
    OPTIONAL: [
        FLUX_FRACTION,
        FLUX_WB,
        FLUX_START,
        FLUX_STOP,
        FLUX_POINTS,
        GAMMA,
        GAMMA_RATIO,
        QUALITY_FACTOR,
        CUTOFF_RATIO,
        TEMPERATURE,
        BASIS_SIZE,
        GENERATORS,
        RENORMALIZE,
        INCLUDE_SQUEEZE,
        SIN_TERM,
        ZETA,
        OPTIMIZE_ZETA,
        GAP_THRESHOLD,
        OUTPUT_CSV,
        OUTPUT_JSON,
        CACHE_DIR,
        USE_CACHE,
        WORKERS,
    ],
}

GAMMA_KEYS = (GAMMA, GAMMA_RATIO, QUALITY_FACTOR)

# keys that do not change any computed number
NON_PHYSICS_KEYS = (OUTPUT_CSV, OUTPUT_JSON, CACHE_DIR, USE_CACHE, WORKERS)

ALL_KEYS = CONFIG_KEYS[MANDATORY] + CONFIG_KEYS[OPTIONAL]
