"""
params.py — Parâmetros físicos, estados do qubit e configuração do integrador.

Convenção de base: índice 0 = |g⟩, índice 1 = |e⟩. A matriz densidade é
    [[ρ_gg, ρ_ge],
     [ρ_eg, ρ_ee]]
e QubitState.coherence guarda ρ_ge.

Todos os tipos são imutáveis e se validam na construção.
"""

import math
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from core.config import ABS_TOL, REL_TOL, TOL_ESTADO
from core.erros import ConfiguracaoInvalida


def _finito(campo: str, valor: float) -> float:
    try:
        valor = float(valor)
    except (TypeError, ValueError):
        raise ConfiguracaoInvalida(campo, f"valor não numérico: {valor!r}") from None
    if not math.isfinite(valor):
        raise ConfiguracaoInvalida(campo, f"valor não finito: {valor}")
    return valor


@dataclass(frozen=True)
class PhysParams:
    gamma_total: float = 1.0
    kappa: float = 1.0
    delta0: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "gamma_total", _finito("gamma", self.gamma_total))
        object.__setattr__(self, "kappa", _finito("kappa", self.kappa))
        object.__setattr__(self, "delta0", _finito("delta0", self.delta0))
        if self.gamma_total <= 0:
            raise ConfiguracaoInvalida("gamma", f"Γ deve ser > 0 (recebido {self.gamma_total})")
        if not 0.0 <= self.kappa <= 1.0:
            raise ConfiguracaoInvalida("kappa", f"κ deve estar em [0, 1] (recebido {self.kappa})")

    @property
    def gamma1(self) -> float:
        """Γ₁ = κΓ, canal que carrega o fóton."""
        return self.kappa * self.gamma_total

    @property
    def gamma2(self) -> float:
        return (1.0 - self.kappa) * self.gamma_total

    def com(self, **alteracoes) -> "PhysParams":
        return replace(self, **alteracoes)


@dataclass(frozen=True)
class QubitState:
    pe: float
    coherence: complex = 0j

    def __post_init__(self):
        pe = _finito("pe0", self.pe)
        coh = complex(self.coherence)
        if not (math.isfinite(coh.real) and math.isfinite(coh.imag)):
            raise ConfiguracaoInvalida("coherence", f"coerência não finita: {coh}")
        if not -TOL_ESTADO <= pe <= 1.0 + TOL_ESTADO:
            raise ConfiguracaoInvalida("pe0", f"P_e deve estar em [0, 1] (recebido {pe})")
        if abs(coh) ** 2 > pe * (1.0 - pe) + TOL_ESTADO:
            raise ConfiguracaoInvalida(
                "coherence",
                f"|ρ_ge|² = {abs(coh) ** 2:.6g} excede P_e(1−P_e) = {pe * (1 - pe):.6g}",
            )
        object.__setattr__(self, "pe", pe)
        object.__setattr__(self, "coherence", coh)

    @classmethod
    def ground(cls) -> "QubitState":
        return cls(0.0, 0j)

    @classmethod
    def excited(cls) -> "QubitState":
        return cls(1.0, 0j)

    @classmethod
    def aleatorio(cls, rng: np.random.Generator) -> "QubitState":
        """Estado uniforme na bola de Bloch."""
        direcao = rng.normal(size=3)
        direcao /= np.linalg.norm(direcao)
        x, y, z = direcao * rng.uniform() ** (1.0 / 3.0)
        # encolhe levemente para ficar longe da fronteira numérica
        x, y, z = 0.999 * x, 0.999 * y, 0.999 * z
        return cls((1.0 + z) / 2.0, complex(x, -y) / 2.0)

    def to_matrix(self) -> np.ndarray:
        return np.array(
            [[1.0 - self.pe, self.coherence],
             [np.conj(self.coherence), self.pe]],
            dtype=complex,
        )

    @classmethod
    def from_matrix(cls, rho: np.ndarray) -> "QubitState":
        rho = np.asarray(rho, dtype=complex)
        return cls(float(rho[1, 1].real), complex(rho[0, 1]))


def trace_distance(rho_a, rho_b) -> float:
    """½‖ρa − ρb‖₁ pelos autovalores da diferença hermitiana."""
    if isinstance(rho_a, QubitState):
        rho_a = rho_a.to_matrix()
    if isinstance(rho_b, QubitState):
        rho_b = rho_b.to_matrix()
    diferenca = np.asarray(rho_a, dtype=complex) - np.asarray(rho_b, dtype=complex)
    diferenca = 0.5 * (diferenca + diferenca.conj().T)
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(diferenca))))


@dataclass(frozen=True)
class SolverConfig:
    rel_tol: float = REL_TOL
    abs_tol: float = ABS_TOL
    max_step: float = math.inf

    def __post_init__(self):
        for campo in ("rel_tol", "abs_tol", "max_step"):
            valor = float(getattr(self, campo))
            if math.isnan(valor) or valor <= 0:
                raise ConfiguracaoInvalida(campo, f"deve ser > 0 (recebido {valor})")
            object.__setattr__(self, campo, valor)
        if not math.isfinite(self.rel_tol) or not math.isfinite(self.abs_tol):
            raise ConfiguracaoInvalida("rel_tol", "tolerâncias devem ser finitas")
