"""Enumeration size guards for brute-force components.

Every exhaustive routine in the package checks its input size against a
default limit before enumerating.  Setting the environment variable
``INTERDICT_SIZE_GUARD`` to an integer raises all limits to at least that
value (it never lowers them).
"""

import os

ENV_VAR = "INTERDICT_SIZE_GUARD"


class SizeGuardError(Exception):
    """Raised when an input is too large for an exhaustive routine."""


def check_size(what: str, actual: int, default_limit: int) -> None:
    limit = default_limit
    raw = os.environ.get(ENV_VAR)
    if raw is not None:
        try:
            limit = max(limit, int(raw))
        except ValueError:
            pass
    if actual > limit:
        raise SizeGuardError(
            f"{what}: size {actual} exceeds enumeration guard {limit} "
            f"(set {ENV_VAR} to raise it)"
        )
