"""Default tolerances and size guards."""
from __future__ import annotations

import os
from dataclasses import dataclass

HERM_TOL = 1e-12
EIG_TOL = 1e-10
PSD_TOL = 1e-8
ORACLE_TOL = 1e-9
ZERO_TOL = 1e-10
CHAR_TOL = 1e-12

DEFAULT_MAX_DIM = 4096
ENUM_CAP = 10**7
ORDER_CAP = 40320

MAX_DIM_ENV = "TENSORWORD_MAXDIM"


def resolve_max_dim(max_dim: int | None = None) -> int:
    """Explicit value wins, then ``$TENSORWORD_MAXDIM``, then the default."""
    if max_dim is not None:
        return int(max_dim)
    env = os.environ.get(MAX_DIM_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"{MAX_DIM_ENV} must be an integer, got {env!r}") from None
    return DEFAULT_MAX_DIM


@dataclass(frozen=True)
class Tolerances:
    psd: float = PSD_TOL
    oracle: float = ORACLE_TOL
    zero: float = ZERO_TOL
