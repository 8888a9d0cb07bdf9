import math
from collections.abc import Callable

from scipy import special


CATALAN = 0.91596559417721901505
ZETA_2 = math.pi**2 / 6.0
ACCELERATION_TERMS = 40


def _alternating_sum(term: Callable[[int], float], n: int = ACCELERATION_TERMS) -> float:
    """
    Sum (-1)^k a_k for k >= 0 with Cohen-Villegas-Zagier acceleration.

    The error decays like (3 + sqrt 8)^(-n) for totally monotone a_k.
    """
    d = (3.0 + math.sqrt(8.0)) ** n
    d = (d + 1.0 / d) / 2.0
    b = -1.0
    c = -d
    total = 0.0
    for k in range(n):
        c = b - c
        total += c * term(k)
        b = (k + n) * (k - n) * b / ((k + 0.5) * (k + 1.0))
    return total / d


def zeta(s: float) -> float:
    """Riemann zeta for real s > 1."""
    if not s > 1:
        raise ValueError(f"zeta(s) is evaluated for s > 1, got {s}")
    return float(special.zeta(s))


def dirichlet_beta(s: float) -> float:
    """
    Dirichlet beta: sum (-1)^k / (2k + 1)^s, s > 0.

    scipy has no beta; its Hurwitz form diverges termwise at s = 1, so the
    series is summed directly.
    """
    if not s > 0:
        raise ValueError(f"beta(s) needs s > 0, got {s}")
    return _alternating_sum(lambda k: (2.0 * k + 1.0) ** (-s))
