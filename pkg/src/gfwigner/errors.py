class CapabilityError(RuntimeError):
    """Requested size exceeds what a routine is built to handle."""


class CheckFailure(AssertionError):
    """A verification routine found a counterexample."""
