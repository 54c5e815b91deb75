"""Exception types shared across the package."""


class StructuralError(ValueError):
    """Malformed input object: bad partition, out-of-range cut, shape mismatch..."""


class CertificateInvalid(ValueError):
    """A merge certificate does not replay on its instance."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class SolverTimeout(RuntimeError):
    """Search budget exhausted; carries the best certified upper bound found and
    the largest proven lower bound (every smaller threshold was refuted)."""

    def __init__(self, message, best_width=None, best_certificate=None, lower_bound=None):
        super().__init__(message)
        self.best_width = best_width
        self.best_certificate = best_certificate
        self.lower_bound = lower_bound


class RefusalError(ValueError):
    """Instance outside the range an exhaustive routine accepts."""


class OracleError(RuntimeError):
    """A group oracle violated the group axioms on a sampled triple."""


class ConstructionAbort(RuntimeError):
    """The short-cycle repair needed more deletions than allowed."""

    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = stats


class ScheduleError(ValueError):
    """An n-schedule cannot produce the required girth increments."""


class BudgetExceeded(RuntimeError):
    """A path enumeration or labelling search would exceed its budget."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class LayoutViolation(ValueError):
    """A queue layout class contains a nested pair or, if strict, a shared endpoint."""

    def __init__(self, message, kind, first, second, queue):
        super().__init__(message)
        self.kind = kind
        self.first = first
        self.second = second
        self.queue = queue
