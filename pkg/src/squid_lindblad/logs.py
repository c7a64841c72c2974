import logging
from pathlib import Path

import mlzlog

LOG_FORMAT = "%(asctime)s.%(msecs)03d  %(name)-12s %(levelname)-8s %(message)s"
LOG_DATEFMT = "%d/%m/%Y %I:%M:%S"

# records tagged like this come from inner solver loops
TRACE_PREFIX = "trace:"


class NoSolverTraceFilter(logging.Filter):
    def filter(self, record):
        return not record.getMessage().startswith(TRACE_PREFIX)


def setup_logging(
    verbose: bool = False, log_file: str | Path = None, trace: bool = False
) -> logging.Logger:
    logger = logging.getLogger("squid_lindblad")
    logger.setLevel(logging.DEBUG if verbose or log_file else logging.INFO)
    logger.propagate = False

    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()

    console = mlzlog.ColoredConsoleHandler()
    console.setLevel(logging.DEBUG if verbose else logging.INFO)
    logger.addHandler(console)

    if log_file is not None:
        file_handler = logging.FileHandler(log_file, mode="w", encoding="utf-8")
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=LOG_DATEFMT))
        file_handler.setLevel(logging.DEBUG)
        if not trace:
            file_handler.addFilter(NoSolverTraceFilter())
        logger.addHandler(file_handler)

    return logger
