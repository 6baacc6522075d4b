"""Exception hierarchy shared by the optimizer library.

Everything raised on purpose by ``optimizer`` derives from ``OptimizerError``.
The concrete classes also derive from the closest builtin so callers that only
know about ``ValueError`` / ``LookupError`` keep working.
"""


class OptimizerError(Exception):
    """Base class for library errors."""


class InvalidConfigError(OptimizerError, ValueError):
    """A run parameter or request cannot be satisfied."""


class InvalidSpaceError(InvalidConfigError):
    """Bounds are malformed or have zero width."""


class ShapeError(OptimizerError, ValueError):
    """Vector lengths or dimensionalities disagree."""


class DomainError(OptimizerError, ValueError):
    """Non-finite input or objective value."""

    def __init__(self, message, *, generation=None, individual=None):
        self.message = message
        self.generation = generation
        self.individual = individual
        if generation is not None or individual is not None:
            message = f"{message} (generation={generation}, individual={individual})"
        super().__init__(message)

    def __reduce__(self):
        # Keyword-only context has to survive the trip back from worker processes.
        return (_rebuild_domain_error, (self.message, self.generation, self.individual))


class BenchmarkNotFound(OptimizerError, LookupError):
    def __init__(self, benchmark_id, valid_ids):
        self.benchmark_id = benchmark_id
        self.valid_ids = list(valid_ids)
        super().__init__(
            f"Unknown benchmark '{benchmark_id}'. Valid ids: {', '.join(self.valid_ids)}"
        )

    def __str__(self):
        # LookupError would otherwise repr() the message.
        return self.args[0]

    def __reduce__(self):
        return (BenchmarkNotFound, (self.benchmark_id, self.valid_ids))


class StateError(OptimizerError, RuntimeError):
    """An object was used before it was ready (e.g. fitness not evaluated)."""


class UndefinedMetricError(OptimizerError, ArithmeticError):
    """A diagnostic is mathematically undefined for the given input."""


class DegenerateSampleError(OptimizerError, ArithmeticError):
    """Both samples are constant with different means; t is unbounded."""


def _rebuild_domain_error(message, generation, individual):
    return DomainError(message, generation=generation, individual=individual)
