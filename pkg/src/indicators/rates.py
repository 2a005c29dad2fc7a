"""
rates.py — Taxas do gerador local no tempo, covariante de fase.

    γ₊ = 2(ȦB − AḂ)/B          bombeamento
    γ₋ = −2Ḃ/B − γ₊            amortecimento
    γ_z = ½Ḃ/B − Re(Ċ/C)        defasagem pura
    ω   = −Im(Ċ/C)             frequência, na convenção −i(ω/2)[ρ, σz] do gerador livre

Perto de B = 0 ou C = 0 as taxas divergem; a amostra recebe status SB/SC e os
valores IEEE calculados ficam no registro, mas nunca entram em integrais nem
veredictos.

Taxas de relaxação:
    γ_L = γ₊ + γ₋        γ_T = (γ₊ + γ₋)/2 + 2γ_z        γ_total = 2(γ₊ + γ₋ + 2γ_z)
    Γ_L(t), Γ_T(t) = integrais acumuladas (Simpson composto)
    e^{−Γ_L/2} = B,  e^{−Γ_T/2} = |C|
"""

import logging
import sys
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np
import pandas as pd
from scipy.integrate import cumulative_simpson, cumulative_trapezoid

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from core.config import EPS_SINGULAR
from core.erros import IntervaloSingular
from engine.dynmap import CoefficientTrajectory, MapCoefficients

log = logging.getLogger(__name__)


class Status(str, Enum):
    REGULAR = "R"
    NEAR_SINGULAR_B = "SB"
    NEAR_SINGULAR_C = "SC"


@dataclass(frozen=True)
class GeneratorRates:
    gamma_plus: float
    gamma_minus: float
    gamma_z: float
    omega: float
    status: Status = Status.REGULAR

    @property
    def regular(self) -> bool:
        return self.status is Status.REGULAR


@dataclass(frozen=True)
class RelaxationRates:
    gamma_longitudinal: float
    gamma_transversal: float
    gamma_total: float
    big_gamma_l: float = 0.0
    big_gamma_t: float = 0.0

    @property
    def g1(self) -> float:
        return self.gamma_transversal

    @property
    def g2(self) -> float:
        return self.gamma_transversal

    @property
    def g3(self) -> float:
        return self.gamma_longitudinal


@dataclass(frozen=True, eq=False)
class RatesTrajectory:
    t: np.ndarray
    gamma_plus: np.ndarray
    gamma_minus: np.ndarray
    gamma_z: np.ndarray
    omega: np.ndarray
    status: np.ndarray          # códigos "R", "SB", "SC"

    def __len__(self) -> int:
        return self.t.size

    def __getitem__(self, i: int) -> GeneratorRates:
        return GeneratorRates(float(self.gamma_plus[i]), float(self.gamma_minus[i]),
                              float(self.gamma_z[i]), float(self.omega[i]), Status(self.status[i]))

    @property
    def regular(self) -> np.ndarray:
        return self.status == Status.REGULAR.value

    def to_frame(self, mascarar: bool = True) -> pd.DataFrame:
        """Amostras não regulares saem com taxas vazias (NaN) quando mascarar=True."""
        df = pd.DataFrame({
            "t": self.t,
            "gamma_plus": self.gamma_plus,
            "gamma_minus": self.gamma_minus,
            "gamma_z": self.gamma_z,
            "omega": self.omega,
            "status": self.status,
        })
        if mascarar:
            df.loc[~self.regular, ["gamma_plus", "gamma_minus", "gamma_z", "omega"]] = np.nan
        return df


@dataclass(frozen=True, eq=False)
class RelaxationTrajectory:
    t: np.ndarray
    gamma_longitudinal: np.ndarray
    gamma_transversal: np.ndarray
    gamma_total: np.ndarray
    big_gamma_l: np.ndarray
    big_gamma_t: np.ndarray

    def __len__(self) -> int:
        return self.t.size

    def __getitem__(self, i: int) -> RelaxationRates:
        return RelaxationRates(
            float(self.gamma_longitudinal[i]), float(self.gamma_transversal[i]),
            float(self.gamma_total[i]), float(self.big_gamma_l[i]), float(self.big_gamma_t[i]),
        )


# ── Taxas pontuais ────────────────────────────────────────────────────────────

def rates_from_arrays(a, b, c, da, db, dc, eps_sing: float, b0: float = 1.0):
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        razao_b = db / b
        razao_c = dc / c
        gp = 2.0 * (da * b - a * db) / b
        gm = -2.0 * razao_b - gp
        gz = 0.5 * razao_b - np.real(razao_c)
        om = -np.imag(razao_c)
    status = np.where(
        np.abs(b) < eps_sing * max(1.0, abs(b0)), Status.NEAR_SINGULAR_B.value,
        np.where(np.abs(c) < eps_sing, Status.NEAR_SINGULAR_C.value, Status.REGULAR.value),
    )
    return gp, gm, gz, om, status


def compute_rates(coeffs: MapCoefficients, eps_sing: float = EPS_SINGULAR) -> GeneratorRates:
    gp, gm, gz, om, status = rates_from_arrays(
        np.float64(coeffs.a), np.float64(coeffs.b), np.complex128(coeffs.c),
        np.float64(coeffs.da), np.float64(coeffs.db), np.complex128(coeffs.dc), eps_sing,
    )
    return GeneratorRates(float(gp), float(gm), float(gz), float(om), Status(str(status)))


def compute_rates_trajectory(traj: CoefficientTrajectory, eps_sing: float = EPS_SINGULAR) -> RatesTrajectory:
    gp, gm, gz, om, status = rates_from_arrays(traj.a, traj.b, traj.c, traj.da, traj.db, traj.dc,
                                    eps_sing, b0=float(traj.b[0]))
    n_sing = int(np.sum(status != Status.REGULAR.value))
    if n_sing:
        log.warning(f"{n_sing} amostra(s) perto de singularidade mascaradas")
    return RatesTrajectory(traj.t, gp, gm, gz, om, status)


def witness_sums(rates) -> tuple:
    """(γ₊+γ₋, γ₊+γ₋+2γ_z, γ₊+γ₋+4γ_z): BLP e critério geométrico dependem destas."""
    soma = rates.gamma_plus + rates.gamma_minus
    return soma, soma + 2.0 * rates.gamma_z, soma + 4.0 * rates.gamma_z


# ── Relaxação ─────────────────────────────────────────────────────────────────

def relaxation_from_rates(rates) -> RelaxationRates | RelaxationTrajectory:
    """γ_L, γ_T e γ_total pontuais, sem integrais acumuladas."""
    gl = rates.gamma_plus + rates.gamma_minus
    gt = 0.5 * gl + 2.0 * rates.gamma_z
    gtot = 2.0 * (gl + 2.0 * rates.gamma_z)
    if isinstance(rates, GeneratorRates):
        return RelaxationRates(gl, gt, gtot)
    zeros = np.zeros_like(rates.t)
    return RelaxationTrajectory(rates.t, gl, gt, gtot, zeros, zeros.copy())


def accumulate_relaxation(rates: RatesTrajectory, grid=None) -> RelaxationTrajectory:
    """Γ_L(t), Γ_T(t) por Simpson composto; recusa intervalos com amostras singulares."""
    t = np.asarray(rates.t if grid is None else grid, dtype=float)
    if t.size != len(rates):
        raise ValueError("grade e trajetória de taxas com tamanhos diferentes")
    irregulares = np.flatnonzero(~rates.regular)
    if irregulares.size:
        raise IntervaloSingular(float(t[irregulares[0]]))

    base = relaxation_from_rates(rates)
    if t.size >= 3:
        big_l = cumulative_simpson(base.gamma_longitudinal, x=t, initial=0.0)
        big_t = cumulative_simpson(base.gamma_transversal, x=t, initial=0.0)
    else:
        # dois pontos: Simpson não se aplica
        big_l = cumulative_trapezoid(base.gamma_longitudinal, x=t, initial=0.0)
        big_t = cumulative_trapezoid(base.gamma_transversal, x=t, initial=0.0)
    return RelaxationTrajectory(t, base.gamma_longitudinal, base.gamma_transversal,
                                base.gamma_total, big_l, big_t)


def trecho_regular(rates: RatesTrajectory, t_fim: float | None = None) -> RatesTrajectory:
    """Prefixo da trajetória até a primeira amostra não regular (ou até t_fim)."""
    corte = len(rates)
    irregulares = np.flatnonzero(~rates.regular)
    if irregulares.size:
        corte = int(irregulares[0])
    if t_fim is not None:
        corte = min(corte, int(np.searchsorted(rates.t, t_fim, side="right")))
    fatia = slice(0, corte)
    return RatesTrajectory(rates.t[fatia], rates.gamma_plus[fatia], rates.gamma_minus[fatia],
                           rates.gamma_z[fatia], rates.omega[fatia], rates.status[fatia])


def semigroup_bound_check(rates, tol: float = 1e-10):
    """(γ_T ≤ γ_total/2, γ_L ≤ γ_total/2), ambas necessárias para CP-divisibilidade."""
    metade = 0.5 * rates.gamma_total
    return rates.gamma_transversal <= metade + tol, rates.gamma_longitudinal <= metade + tol
