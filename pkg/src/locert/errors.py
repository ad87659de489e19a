class CapacityError(RuntimeError):
    """An exact procedure would exceed its configured size or budget cap.

    ``progress`` carries whatever partial state the caller can use to resume
    or report (for searches, the last completed prefix and counters).
    """

    def __init__(self, message, progress=None):
        super().__init__(message)
        self.progress = progress or {}


class PreconditionError(ValueError):
    """A prover or attack was called on an input outside its contract."""
