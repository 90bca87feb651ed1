"""Search caps shared by the exhaustive routines.

``PIVOTLAB_MAX_N`` in the environment overrides every default cap; an explicit
``max_n=`` argument overrides both.
"""

import os

from .errors import GroundSetTooLarge

ENV_VAR = "PIVOTLAB_MAX_N"

ENUMERATION = 20      # principal-set / delta-matroid enumeration
WIDTH = 12            # exact rank-width / branch-width DP
LINKED = 8            # linked decomposition search
MINOR_SEARCH = 8      # minor embedding, containment, delta-matroid minors
EQUIVALENCE = 10      # fundamental-matrix equivalence search
GAP = 16              # linking min/max sweeps
MATROID = 16          # explicit matroid rank tables


def resolve(default: int, max_n: int | None = None) -> int:
    if max_n is not None:
        return int(max_n)
    env = os.environ.get(ENV_VAR)
    if env:
        return int(env)
    return default


def check(n: int, default: int, max_n: int | None = None, what: str = "ground set",
          error=GroundSetTooLarge) -> None:
    cap = resolve(default, max_n)
    if n > cap:
        raise error(f"{what} has {n} elements; cap is {cap} (set max_n or {ENV_VAR})")
