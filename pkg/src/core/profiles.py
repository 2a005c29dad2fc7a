"""
profiles.py — Envelopes temporais ξ(t) do fóton e seus construtores.

Variantes:
    ZeroProfile         ξ ≡ 0 (sem fóton, semigrupo)
    ExponentialProfile  √(αΓ)·e^{−αΓt/2}, t ≥ 0
    OptimalPulse        √(Γ/(e^{ΓT}−1))·e^{Γt/2} em [0, T], zero depois
    SampledProfile      interpolação linear por partes, zero fora da grade

Todas valem zero para t < 0. Os perfis não são renormalizados: profile_norm
é a auditoria oferecida ao usuário.

Gramática usada pelo CLI:
    zero | exp:ALPHA | optimal:T | sampled:CAMINHO
"""

import logging
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np
from scipy.integrate import quad

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from core.config import QUAD_LIMITE_SUBINTERVALOS, QUAD_TOL
from core.erros import ConfiguracaoInvalida, FalhaQuadratura
from core.params import PhysParams

log = logging.getLogger(__name__)


# ── Variantes ─────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class ZeroProfile:
    variant = "zero"
    real = True

    def avaliar(self, t: np.ndarray) -> np.ndarray:
        return np.zeros(np.shape(t), dtype=complex)

    def descontinuidades(self) -> tuple[float, ...]:
        return ()

    def rotulo(self) -> str:
        return "zero"


@dataclass(frozen=True)
class ExponentialProfile:
    alpha: float
    gamma_total: float = 1.0
    variant = "exponential"
    real = True

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise ConfiguracaoInvalida("alpha", f"α deve ser > 0 (recebido {self.alpha})")
        if not (math.isfinite(self.gamma_total) and self.gamma_total > 0):
            raise ConfiguracaoInvalida("gamma", f"Γ deve ser > 0 (recebido {self.gamma_total})")

    @property
    def gamma_p(self) -> float:
        return self.alpha * self.gamma_total

    def avaliar(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        gp = self.gamma_p
        # t negativo vira 0 dentro do exp para não estourar
        valor = math.sqrt(gp) * np.exp(-0.5 * gp * np.maximum(t, 0.0))
        return np.where(t >= 0, valor, 0.0).astype(complex)

    def descontinuidades(self) -> tuple[float, ...]:
        return ()

    def rotulo(self) -> str:
        return f"exp:{self.alpha:g}"


@dataclass(frozen=True)
class OptimalPulse:
    horizon: float
    gamma_total: float = 1.0
    variant = "optimal"
    real = True

    def __post_init__(self):
        if not (math.isfinite(self.horizon) and self.horizon > 0):
            raise ConfiguracaoInvalida("t_target", f"horizonte deve ser > 0 (recebido {self.horizon})")
        if not (math.isfinite(self.gamma_total) and self.gamma_total > 0):
            raise ConfiguracaoInvalida("gamma", f"Γ deve ser > 0 (recebido {self.gamma_total})")

    @property
    def amplitude(self) -> float:
        """ξ(0) = √(Γ/(e^{ΓT}−1))."""
        return math.sqrt(self.gamma_total / math.expm1(self.gamma_total * self.horizon))

    def avaliar(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        dentro = (t >= 0) & (t <= self.horizon)
        tc = np.clip(t, 0.0, self.horizon)
        valor = self.amplitude * np.exp(0.5 * self.gamma_total * tc)
        return np.where(dentro, valor, 0.0).astype(complex)

    def descontinuidades(self) -> tuple[float, ...]:
        return (self.horizon,)

    def rotulo(self) -> str:
        return f"optimal:{self.horizon:g}"


@dataclass(frozen=True, eq=False)
class SampledProfile:
    times: np.ndarray
    values: np.ndarray
    origem: str = ""
    variant = "sampled"

    def __post_init__(self):
        times = np.array(self.times, dtype=float)
        values = np.array(self.values, dtype=complex)
        if times.ndim != 1 or times.size < 2:
            raise ConfiguracaoInvalida("profile", "perfil amostrado precisa de ao menos 2 tempos")
        if values.shape != times.shape:
            raise ConfiguracaoInvalida("profile", "tempos e amplitudes com tamanhos diferentes")
        if not (np.all(np.isfinite(times)) and np.all(np.isfinite(values))):
            raise ConfiguracaoInvalida("profile", "perfil amostrado contém valores não finitos")
        if np.any(np.diff(times) <= 0):
            raise ConfiguracaoInvalida("profile", "tempos do perfil devem ser estritamente crescentes")
        times.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    @property
    def real(self) -> bool:
        return bool(np.all(self.values.imag == 0))

    @property
    def passo_minimo(self) -> float:
        return float(np.min(np.diff(self.times)))

    def avaliar(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        re = np.interp(t, self.times, self.values.real, left=0.0, right=0.0)
        im = np.interp(t, self.times, self.values.imag, left=0.0, right=0.0)
        return np.where(t >= 0, re + 1j * im, 0.0)

    def descontinuidades(self) -> tuple[float, ...]:
        return (float(self.times[0]), float(self.times[-1]))

    def rotulo(self) -> str:
        return f"sampled:{self.origem}" if self.origem else "sampled"


PhotonProfile = Union[ZeroProfile, ExponentialProfile, OptimalPulse, SampledProfile]


# ── Operações ─────────────────────────────────────────────────────────────────

def profile_eval(profile: PhotonProfile, t):
    """ξ(t). Escalar entra, complex sai; array entra, array sai."""
    valor = profile.avaliar(t)
    if np.ndim(t) == 0:
        return complex(valor)
    return valor


def profile_norm(profile: PhotonProfile, t_max: float, tol: float = QUAD_TOL) -> float:
    """∫₀^{t_max}|ξ|² dt por quadratura adaptativa com erro absoluto ≤ tol."""
    if t_max <= 0:
        return 0.0
    pontos = [p for p in profile.descontinuidades() if 0.0 < p < t_max]
    if isinstance(profile, SampledProfile):
        nos = profile.times[(profile.times > 0) & (profile.times < t_max)]
        pontos = sorted(set(pontos) | set(nos.tolist()))
    limite = max(QUAD_LIMITE_SUBINTERVALOS, 2 * len(pontos) + 50)

    def integrando(s: float) -> float:
        return abs(profile_eval(profile, s)) ** 2

    valor, erro, *_ = quad(
        integrando, 0.0, t_max,
        epsabs=0.5 * tol, epsrel=0.0,
        points=pontos or None, limit=limite, full_output=1,
    )
    if erro > tol:
        raise FalhaQuadratura(erro, tol, "profile_norm")
    return float(valor)


def make_optimal_pulse(t_target: float, params: PhysParams) -> OptimalPulse:
    """Pulso que maximiza P_e(t_target) partindo de |g⟩."""
    if not t_target > 0:
        raise ConfiguracaoInvalida("t_target", f"deve ser > 0 (recebido {t_target})")
    return OptimalPulse(horizon=float(t_target), gamma_total=params.gamma_total)


def optimal_population(t: float, params: PhysParams) -> float:
    """Teto κ(1 − e^{−Γt}) de P_e(t) para qualquer perfil normalizado."""
    return params.kappa * -math.expm1(-params.gamma_total * t)


# ── Gramática do CLI ──────────────────────────────────────────────────────────

def parse_profile_spec(spec: str, params: PhysParams) -> PhotonProfile:
    """Converte 'zero', 'exp:ALPHA', 'optimal:T' ou 'sampled:CAMINHO' em perfil."""
    spec = (spec or "").strip()
    tipo, _, argumento = spec.partition(":")
    tipo = tipo.lower()

    if tipo == "zero" and not argumento:
        return ZeroProfile()
    if tipo in ("exp", "optimal"):
        try:
            valor = float(argumento)
        except ValueError:
            raise ConfiguracaoInvalida("profile", f"número inválido em '{spec}'") from None
        if tipo == "exp":
            return ExponentialProfile(alpha=valor, gamma_total=params.gamma_total)
        return make_optimal_pulse(valor, params)
    if tipo == "sampled" and argumento:
        from utils.io import ler_perfil_amostrado
        tempos, valores = ler_perfil_amostrado(Path(argumento))
        return SampledProfile(tempos, valores, origem=argumento)

    raise ConfiguracaoInvalida(
        "profile", f"especificação '{spec}' inválida; use zero, exp:ALPHA, optimal:T ou sampled:CAMINHO"
    )


def auditar_normalizacao(profile: PhotonProfile, t_max: float, tol: float = 1e-3) -> float:
    """Registra WARNING quando a norma até t_max se afasta de 1 (zero é aceito)."""
    if isinstance(profile, ZeroProfile):
        return 0.0
    fim = t_max
    if isinstance(profile, SampledProfile):
        fim = max(t_max, float(profile.times[-1]))
    norma = profile_norm(profile, fim, tol=1e-8)
    if abs(norma - 1.0) > tol:
        log.warning(f"Perfil {profile.rotulo()} com ∫|ξ|² = {norma:.6f} em [0, {fim:g}] (esperado 1)")
    return norma
