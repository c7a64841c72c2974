class SquidLindbladError(Exception):
    pass


class ParameterDomainError(SquidLindbladError, ValueError):
    def __init__(self, field: str, message: str) -> None:
        self.field = field
        super().__init__(f"{field}: {message}")


class BasisSizeError(SquidLindbladError, ValueError):
    def __init__(self, N: int) -> None:
        self.N = N
        super().__init__(f"basis size must be at least 2, got {N}")


class DimensionMismatchError(SquidLindbladError, ValueError):
    def __init__(self, *shapes) -> None:
        self.shapes = shapes
        super().__init__("operator dimensions differ: " + ", ".join(map(str, shapes)))


class NotHermitianError(SquidLindbladError, ValueError):
    def __init__(self, asymmetry: float) -> None:
        self.asymmetry = asymmetry
        super().__init__(f"operator is not Hermitian (max |A - A^H| = {asymmetry:.3e})")


class RenormalizationError(SquidLindbladError, ValueError):
    def __init__(self, lam: float) -> None:
        self.lam = lam
        super().__init__(
            f"renormalization exceeds bare inductance (lambda = {lam:.6g} >= 1)"
        )


class UnsupportedOrderError(SquidLindbladError, ValueError):
    def __init__(self, order: int, supported) -> None:
        self.order = order
        super().__init__(f"order {order} not supported, expected one of {supported}")


class DegenerateSplitError(SquidLindbladError, ValueError):
    def __init__(self, zeta: float) -> None:
        self.zeta = zeta
        super().__init__(
            f"zeta = {zeta} leaves one Lindblad operator degenerate, need 0 < zeta < 1"
        )


class NonUniqueSteadyStateError(SquidLindbladError):
    def __init__(self, gap: float, threshold: float) -> None:
        self.gap = gap
        self.threshold = threshold
        super().__init__(
            f"steady state not unique: spectral gap {gap:.3e} below {threshold:.1e}"
        )


class StepSizeError(SquidLindbladError, ValueError):
    def __init__(self, dt: float, norm: float) -> None:
        self.dt = dt
        self.norm = norm
        super().__init__(
            f"time step {dt:.3e} too large for generator norm {norm:.3e} "
            f"(dt * |G| = {dt * norm:.3e}, must stay below 0.1)"
        )


class ConfigError(SquidLindbladError):
    def __init__(self, message: str, key: str = None, line: int = None) -> None:
        self.key = key
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key '{key}'")
        prefix = " ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class MissingColumnsError(SquidLindbladError):
    def __init__(self, missing) -> None:
        self.missing = list(missing)
        super().__init__("results are missing columns: " + ", ".join(self.missing))
