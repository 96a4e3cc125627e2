"""Sample-size formulas shared by SSA and D-SSA.

All binomial-coefficient terms are handled as ``ln C(n, k)``; ``C(n, k)``
itself is never formed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

ONE_MINUS_INV_E = 1.0 - 1.0 / math.e


@dataclass(frozen=True)
class EpsilonSplit:
    eps1: float
    eps2: float
    eps3: float

    def validate(self, eps: float) -> "EpsilonSplit":
        if not (self.eps1 > 0 and 0 < self.eps2 < 1 and 0 < self.eps3 < 1):
            raise ValueError(f"static split needs eps1 > 0 and eps2, eps3 in (0, 1): {self}")
        if not check_epsilon_constraint(self, eps):
            raise ValueError(f"split {self} violates the combined error bound for eps={eps}")
        return self


@dataclass(frozen=True)
class Caps:
    """Sample cap ``n_max``, iteration cap ``i_max`` and thresholds ``lam``, ``lam1``."""

    n_max: float
    i_max: int
    lam: float
    lam1: float


def _check_eps_delta(eps, delta):
    if not (eps > 0 and math.isfinite(eps)):
        raise ValueError(f"eps must be positive, got {eps}")
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")


def upsilon_ln(eps: float, ln_inv_delta: float) -> float:
    """(2 + 2 eps / 3) * ln(1/delta) / eps^2 with ln(1/delta) given directly."""
    return (2.0 + 2.0 * eps / 3.0) * ln_inv_delta / (eps * eps)


def upsilon(eps: float, delta: float) -> float:
    _check_eps_delta(eps, delta)
    return upsilon_ln(eps, -math.log(delta))


def ln_choose(n: int, k: int) -> float:
    if not 0 <= k <= n:
        raise ValueError(f"ln_choose needs 0 <= k <= n, got n={n}, k={k}")
    k = min(k, n - k)
    if k == 0:
        return 0.0
    if k <= 4096:
        return math.fsum(math.log((n - i) / (k - i)) for i in range(k))
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def _n_max(n, k, eps, delta):
    ln_inv = math.log(6.0 / delta) + ln_choose(n, k)
    return 8.0 * ONE_MINUS_INV_E / (2.0 + 2.0 * eps / 3.0) * upsilon_ln(eps, ln_inv) * n / k


def caps_for(n: int, k: int, eps: float, delta: float) -> Caps:
    """Caps for a graph of ``n`` nodes and budget ``k``.

    ``lam1`` is the D-SSA threshold 1 + (1 + eps) * lam; SSA's threshold
    depends on the epsilon split, see :func:`ssa_lambda1`.
    """
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    _check_eps_delta(eps, delta)
    if eps >= 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    n_max = _n_max(n, k, eps, delta)
    i_max = max(1, math.ceil(math.log2(2.0 * n_max / upsilon(eps, delta / 3.0))))
    lam = upsilon(eps, delta / (3.0 * i_max))
    return Caps(n_max=n_max, i_max=i_max, lam=lam, lam1=1.0 + (1.0 + eps) * lam)


def ssa_lambda1(split: EpsilonSplit, delta: float, i_max: int) -> float:
    return (1 + split.eps1) * (1 + split.eps2) * upsilon(split.eps3, delta / (3.0 * i_max))


def estimate_threshold(eps: float, delta: float) -> float:
    """Success count 1 + (1 + eps) * Upsilon(eps, delta) that stops Estimate-Inf."""
    return 1.0 + (1.0 + eps) * upsilon(eps, delta)


def verify_cap(pool_size: int, split: EpsilonSplit) -> int:
    """T_max = 2 |R| (1 + eps2)/(1 - eps2) * eps3^2 / eps2^2, rounded up."""
    e2, e3 = split.eps2, split.eps3
    return math.ceil(2 * pool_size * (1 + e2) / (1 - e2) * (e3 * e3) / (e2 * e2))


def default_epsilon_split(eps: float) -> EpsilonSplit:
    if not 0 < eps < ONE_MINUS_INV_E:
        raise ValueError(f"default split needs 0 < eps < 1 - 1/e, got {eps}")
    e2 = eps / (2.0 * ONE_MINUS_INV_E)
    e1 = (1.0 + eps / (2.0 * (ONE_MINUS_INV_E - eps))) / (1.0 + e2) - 1.0
    return EpsilonSplit(e1, e2, e2)


def combined_error(split: EpsilonSplit) -> float:
    e1, e2, e3 = split.eps1, split.eps2, split.eps3
    return ONE_MINUS_INV_E * (e1 + e2 + e1 * e2 + e3) / ((1 + e1) * (1 + e2))


def check_epsilon_constraint(split: EpsilonSplit, eps: float) -> bool:
    return combined_error(split) <= eps + 1e-12


# reference thresholds of earlier RIS methods, for benchmark comparisons ----

def tim_threshold(n: int, k: int, eps: float, delta: float, opt: float) -> float:
    """(8 + 2 eps) n (ln(2/delta) + ln C(n,k)) / (eps^2 OPT_k)."""
    return (8 + 2 * eps) * n * (math.log(2 / delta) + ln_choose(n, k)) / (eps * eps * opt)


def imm_threshold(n: int, k: int, eps: float, delta: float, opt: float) -> float:
    """2 n ((1 - 1/e) alpha + beta)^2 / (eps^2 OPT_k)."""
    alpha = math.sqrt(math.log(2 / delta))
    beta = math.sqrt(ONE_MINUS_INV_E * (math.log(2 / delta) + ln_choose(n, k)))
    return 2 * n * (ONE_MINUS_INV_E * alpha + beta) ** 2 / (eps * eps * opt)


def imm_threshold_simplified(n: int, k: int, eps: float, delta: float, opt: float) -> float:
    """4 (1 - 1/e) n (2 ln(2/delta) + ln C(n,k)) / (eps^2 OPT_k)."""
    return 4 * ONE_MINUS_INV_E * n * (2 * math.log(2 / delta) + ln_choose(n, k)) / (eps * eps * opt)


def imm_threshold_upper(n: int, k: int, eps: float, delta: float) -> float:
    """OPT-free bound 8 (1 - 1/e) (ln(2/delta) + ln C(n,k)) / eps^2 * n / k."""
    return 8 * ONE_MINUS_INV_E * (math.log(2 / delta) + ln_choose(n, k)) / (eps * eps) * n / k
