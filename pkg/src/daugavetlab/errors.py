"""Error types shared across the package."""


class InvariantViolation(RuntimeError):
    """An internal cross-check failed: two independent routes disagreed.

    Raised when a value and its oracle drift apart beyond tolerance.  The
    command-line runner maps this to exit code 2; it always indicates a bug
    or a broken installation, never a mathematical verdict.
    """
