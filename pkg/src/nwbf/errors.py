"""Exception hierarchy shared by all modules."""


class NWBFError(Exception):
    pass


class UsageError(NWBFError, ValueError):
    """Operands that do not belong together (e.g. different fields or grids)."""


class DomainError(NWBFError, ValueError):
    """Input outside the mathematical domain of an operation."""


class RangeError(NWBFError, ValueError):
    """Result not representable in the configured digit window or grid."""


class ConfigError(NWBFError):
    """Invalid run configuration; carries every violation found."""

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))
