"""Strength parameters of the cut-matching game and of its certified output."""
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional, Union
import logging

from ..config.config import SolverConfig
from ..utils.dyadic import ceil_fraction, ceil_log2, ceil_mul_log2
from .errors import InvalidArgumentError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StrengthParams:
    """(s, delta, gamma) strength together with the game constants that produced it."""
    s: int
    delta: Fraction
    gamma: Fraction
    kappa: Fraction
    psi: Fraction
    alpha: Fraction
    l_max: int

    @classmethod
    def plain(cls, s: int, delta: Union[int, Fraction], gamma: Union[int, Fraction]) -> "StrengthParams":
        """Parameters for certification only; the game constants are left neutral."""
        gamma = Fraction(gamma)
        return cls(s=s, delta=Fraction(delta), gamma=gamma, kappa=gamma,
                   psi=Fraction(1), alpha=Fraction(1), l_max=0)

    @property
    def alpha_delta(self) -> Fraction:
        return self.alpha * self.delta

    def achieved(self) -> "StrengthParams":
        """Parameters a trimmed cluster is certified at: s_out = ceil(max(2/kappa + s, 3s)), gamma_out = kappa."""
        s_out = ceil_fraction(max(2 / self.kappa + self.s, Fraction(3 * self.s)))
        return replace(self, s=s_out, gamma=self.kappa)


def derive_params(n: int, terminal_count: int, delta: Union[int, Fraction],
                  config: Optional[SolverConfig] = None) -> StrengthParams:
    """Concrete constants for one cut game on ``n`` vertices and ``terminal_count`` terminals."""
    config = config or SolverConfig()
    if terminal_count < 2:
        raise InvalidArgumentError("parameters are only defined for at least two terminals")
    if delta <= 0:
        raise InvalidArgumentError("delta must be positive")
    psi = Fraction(config.psi)
    l_max = ceil_mul_log2(config.c_l, terminal_count) + 2
    alpha = Fraction(l_max) / psi
    log_n = max(ceil_log2(max(n, 2)), 1)
    s = max(1, ceil_fraction(config.c_s * alpha * alpha * log_n * log_n))
    gamma = Fraction(1, config.gamma_divisor) / (alpha * s)
    kappa = min(gamma / (2 * s), gamma / 6)
    params = StrengthParams(s=s, delta=Fraction(delta), gamma=gamma, kappa=kappa,
                            psi=psi, alpha=alpha, l_max=l_max)
    logger.debug(f"Derived parameters for n={n}, |T|={terminal_count}: L_max={l_max}, s={s}")
    return params


def unbalanced_threshold(achieved: StrengthParams) -> int:
    """k = ceil(2 s^2 / gamma) for certified output parameters."""
    return ceil_fraction(Fraction(2 * achieved.s * achieved.s) / achieved.gamma)
