"""
integrador.py — Integração adaptativa compartilhada por hierarchy e dynmap.

Estado complexo é visto como vetor real (view float64) para o solve_ivp.
A integração é quebrada nas descontinuidades do perfil (fim do pulso ótimo,
bordas da grade amostrada); perfis amostrados limitam o passo a metade do
menor espaçamento da grade.
"""

import logging
import math
import sys
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from core.config import METODO_INTEGRADOR
from core.erros import ConfiguracaoInvalida, FalhaIntegracao
from core.params import SolverConfig
from core.profiles import PhotonProfile, SampledProfile

log = logging.getLogger(__name__)


def validar_grade(grid) -> np.ndarray:
    grade = np.asarray(grid, dtype=float)
    if grade.ndim != 1 or grade.size == 0:
        raise ConfiguracaoInvalida("grid", "grade deve ser um vetor não vazio")
    if not np.all(np.isfinite(grade)):
        raise ConfiguracaoInvalida("grid", "grade contém valores não finitos")
    if grade[0] != 0.0:
        raise ConfiguracaoInvalida("grid", f"grade deve começar em 0 (começa em {grade[0]})")
    if np.any(np.diff(grade) <= 0):
        raise ConfiguracaoInvalida("grid", "grade deve ser estritamente crescente")
    return grade


def grade_uniforme(t_max: float, n_pontos: int) -> np.ndarray:
    if not (math.isfinite(t_max) and t_max > 0):
        raise ConfiguracaoInvalida("t_max", f"deve ser > 0 (recebido {t_max})")
    if int(n_pontos) < 2:
        raise ConfiguracaoInvalida("points", f"deve ser ≥ 2 (recebido {n_pontos})")
    return np.linspace(0.0, float(t_max), int(n_pontos))


def passo_maximo(profile: PhotonProfile, cfg: SolverConfig) -> float:
    if isinstance(profile, SampledProfile):
        return min(cfg.max_step, 0.5 * profile.passo_minimo)
    return cfg.max_step


def para_real(z: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(z, dtype=complex).reshape(-1).view(np.float64)


def para_complexo(y: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(y, dtype=float).view(np.complex128)


def integrar(rhs: Callable[[float, np.ndarray], np.ndarray], z0: np.ndarray, grid,
             profile: PhotonProfile, cfg: SolverConfig) -> np.ndarray:
    """
    Integra dz/dt = rhs(t, z) (z complexo, 1-D) e devolve z em cada ponto da grade.

    Retorna array (len(grid), len(z0)) complexo.
    """
    grade = validar_grade(grid)
    z0 = np.asarray(z0, dtype=complex).reshape(-1)
    saida = np.empty((grade.size, z0.size), dtype=complex)
    saida[0] = z0
    if grade.size == 1:
        return saida

    t_fim = float(grade[-1])
    cortes = sorted({0.0, t_fim} | {c for c in profile.descontinuidades() if 0.0 < c < t_fim})
    h_max = passo_maximo(profile, cfg)

    def f(t, y):
        return para_real(rhs(t, para_complexo(y)))

    y = para_real(z0)
    n_passos = 0
    for a, b in zip(cortes[:-1], cortes[1:]):
        pontos = grade[(grade >= a) & (grade <= b)]
        t_eval = np.union1d(pontos, [b])
        sol = solve_ivp(
            f, (a, b), y,
            method=METODO_INTEGRADOR,
            t_eval=t_eval,
            rtol=cfg.rel_tol,
            atol=cfg.abs_tol,
            max_step=h_max,
        )
        if not sol.success:
            t_falha = float(sol.t[-1]) if sol.t.size else a
            raise FalhaIntegracao(t_falha, sol.message)
        n_passos += sol.nfev
        if pontos.size:
            idx = np.searchsorted(grade, pontos)
            cols = np.searchsorted(t_eval, pontos)
            saida[idx] = np.stack([para_complexo(sol.y[:, c]) for c in cols])
        y = np.ascontiguousarray(sol.y[:, -1])

    log.debug(f"Integração até t={t_fim:g}: {len(cortes) - 1} trecho(s), {n_passos} avaliações do RHS")
    return saida


def avancar(rhs: Callable[[float, np.ndarray], np.ndarray], z: np.ndarray, t0: float, t1: float,
            profile: PhotonProfile, cfg: SolverConfig) -> np.ndarray:
    """Estado em t1 partindo de z em t0 (usado no refinamento de zeros)."""
    z = np.asarray(z, dtype=complex).reshape(-1)
    if t1 == t0:
        return z.copy()
    sol = solve_ivp(
        lambda t, y: para_real(rhs(t, para_complexo(y))),
        (t0, t1), para_real(z),
        method=METODO_INTEGRADOR,
        rtol=cfg.rel_tol,
        atol=cfg.abs_tol,
        max_step=passo_maximo(profile, cfg),
    )
    if not sol.success:
        raise FalhaIntegracao(float(sol.t[-1]) if sol.t.size else t0, sol.message)
    return para_complexo(sol.y[:, -1]).copy()
