import os


class UsageError(ValueError):
    """Invalid arguments: wrong dimension, modulus mismatch, out-of-range index."""


class CapacityError(RuntimeError):
    """A computation would exceed the configured state budget."""


DEFAULT_STATE_BUDGET = 10**7


def state_budget() -> int:
    raw = os.environ.get("UNITRI_BUDGET_STATES")
    if raw is None:
        return DEFAULT_STATE_BUDGET
    try:
        value = int(raw)
    except ValueError as exc:
        raise UsageError(f"UNITRI_BUDGET_STATES must be an integer, got {raw!r}") from exc
    if value <= 0:
        raise UsageError("UNITRI_BUDGET_STATES must be positive")
    return value


def check_budget(size: int, what: str = "states", budget: int | None = None) -> None:
    limit = state_budget() if budget is None else budget
    if size > limit:
        raise CapacityError(
            f"{what}: {size} exceeds budget of {limit} (set UNITRI_BUDGET_STATES to override)"
        )
