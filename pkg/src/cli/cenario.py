"""
cenario.py — Configuração de uma execução: padrões < arquivo --config < flags.

O arquivo de cenário tem linhas CHAVE=VALOR (lido com python-dotenv); as
chaves são os nomes longos das flags, com '-' ou '_':

    kappa=1
    profile=exp:9.5
    t_max=10
    points=1001

Chave desconhecida ou valor inválido levanta ConfiguracaoInvalida com o nome
do campo.
"""

import logging
import math
import shlex
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from dotenv import dotenv_values

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from core.config import ABS_TOL, EPS_SINGULAR, N_PONTOS_PADRAO, REL_TOL, T_MAX_PADRAO, TOL_WITNESS
from core.erros import ConfiguracaoInvalida
from core.params import PhysParams, QubitState, SolverConfig
from core.profiles import PhotonProfile, parse_profile_spec
from engine.integrador import grade_uniforme

log = logging.getLogger(__name__)

SAIDAS_VALIDAS = ("trajectory", "coefficients", "rates", "witnesses")

# chave → (conversor, padrão)
CHAVES = {
    "gamma"    : (float, 1.0),
    "kappa"    : (float, 1.0),
    "delta0"   : (float, 0.0),
    "profile"  : (str,   "exp:1"),
    "t_max"    : (float, T_MAX_PADRAO),
    "points"   : (int,   N_PONTOS_PADRAO),
    "rel_tol"  : (float, REL_TOL),
    "abs_tol"  : (float, ABS_TOL),
    "max_step" : (float, math.inf),
    "pe0"      : (float, 0.0),
    "re_coh0"  : (float, 0.0),
    "im_coh0"  : (float, 0.0),
    "eps_sing" : (float, EPS_SINGULAR),
    "tol"      : (float, TOL_WITNESS),
    "outputs"  : (str,   ",".join(SAIDAS_VALIDAS)),
}


def _converter(chave: str, valor):
    conversor, _ = CHAVES[chave]
    if isinstance(valor, str):
        valor = valor.strip()
    try:
        return conversor(valor)
    except (TypeError, ValueError):
        raise ConfiguracaoInvalida(chave, f"valor inválido: {valor!r}") from None


def _saidas(texto: str) -> tuple[str, ...]:
    pedidas = tuple(s.strip() for s in texto.split(",") if s.strip())
    invalidas = [s for s in pedidas if s not in SAIDAS_VALIDAS]
    if invalidas or not pedidas:
        raise ConfiguracaoInvalida("outputs", f"saídas inválidas {invalidas}; use {', '.join(SAIDAS_VALIDAS)}")
    # ordem canônica, sem repetição
    return tuple(s for s in SAIDAS_VALIDAS if s in pedidas)


def _fmt(valor: float) -> str:
    return repr(float(valor))


@dataclass(frozen=True)
class ScenarioConfig:
    params: PhysParams
    profile: str
    initial: tuple[float, float, float]
    grid: tuple[float, int]
    solver: SolverConfig
    outputs: tuple[str, ...] = SAIDAS_VALIDAS
    eps_sing: float = EPS_SINGULAR
    tol: float = TOL_WITNESS

    def __post_init__(self):
        self.estado_inicial()
        t_max, n_pontos = self.grid
        grade_uniforme(t_max, n_pontos)
        for campo in ("eps_sing", "tol"):
            valor = getattr(self, campo)
            if not (math.isfinite(valor) and valor > 0):
                raise ConfiguracaoInvalida(campo, f"deve ser > 0 (recebido {valor})")

    def estado_inicial(self) -> QubitState:
        pe0, re_c, im_c = self.initial
        return QubitState(pe0, complex(re_c, im_c))

    def grade(self) -> np.ndarray:
        return grade_uniforme(*self.grid)

    def perfil(self) -> PhotonProfile:
        return parse_profile_spec(self.profile, self.params)

    # ── Reprodutibilidade ─────────────────────────────────────────────────────

    def argv(self, comando: list[str]) -> list[str]:
        """Linha de comando canônica que reproduz esta execução (sem --out/--config)."""
        p, s = self.params, self.solver
        pe0, re_c, im_c = self.initial
        t_max, n_pontos = self.grid
        return [
            *comando,
            "--gamma", _fmt(p.gamma_total), "--kappa", _fmt(p.kappa), "--delta0", _fmt(p.delta0),
            "--profile", self.profile,
            "--t-max", _fmt(t_max), "--points", str(n_pontos),
            "--rel-tol", _fmt(s.rel_tol), "--abs-tol", _fmt(s.abs_tol), "--max-step", _fmt(s.max_step),
            "--pe0", _fmt(pe0), "--re-coh0", _fmt(re_c), "--im-coh0", _fmt(im_c),
            "--eps-sing", _fmt(self.eps_sing), "--tol", _fmt(self.tol),
            "--outputs", ",".join(self.outputs),
        ]

    def cabecalho(self, comando: list[str]) -> dict:
        p, s = self.params, self.solver
        pe0, re_c, im_c = self.initial
        t_max, n_pontos = self.grid
        return {
            "comando": " ".join(comando),
            "params": f"gamma={p.gamma_total!r} kappa={p.kappa!r} delta0={p.delta0!r}",
            "profile": self.profile,
            "initial": f"pe0={pe0!r} re_coh0={re_c!r} im_coh0={im_c!r}",
            "grid": f"t_max={t_max!r} points={n_pontos}",
            "solver": f"rel_tol={s.rel_tol!r} abs_tol={s.abs_tol!r} max_step={s.max_step!r} "
                      f"eps_sing={self.eps_sing!r} tol={self.tol!r}",
            "argv": shlex.join(self.argv(comando)),
        }


# ── Montagem em camadas ───────────────────────────────────────────────────────

def ler_arquivo_cenario(caminho: Path) -> dict:
    if not caminho.exists():
        raise ConfiguracaoInvalida("config", f"arquivo não encontrado: {caminho}")
    valores = {}
    for chave, valor in dotenv_values(caminho).items():
        normal = chave.strip().lower().replace("-", "_")
        if normal not in CHAVES:
            raise ConfiguracaoInvalida(normal, f"chave desconhecida em {caminho.name}")
        if valor is None:
            raise ConfiguracaoInvalida(normal, f"chave sem valor em {caminho.name}")
        valores[normal] = _converter(normal, valor)
    log.debug(f"Cenário {caminho.name}: {sorted(valores)}")
    return valores


def montar_cenario(flags: dict, arquivo: Path | None = None) -> ScenarioConfig:
    """flags: chave → valor, com None para flag ausente."""
    valores = {chave: padrao for chave, (_, padrao) in CHAVES.items()}
    if arquivo is not None:
        valores.update(ler_arquivo_cenario(Path(arquivo)))
    for chave, valor in flags.items():
        if chave in CHAVES and valor is not None:
            valores[chave] = _converter(chave, valor)

    return ScenarioConfig(
        params=PhysParams(valores["gamma"], valores["kappa"], valores["delta0"]),
        profile=valores["profile"],
        initial=(valores["pe0"], valores["re_coh0"], valores["im_coh0"]),
        grid=(valores["t_max"], valores["points"]),
        solver=SolverConfig(valores["rel_tol"], valores["abs_tol"], valores["max_step"]),
        outputs=_saidas(valores["outputs"]),
        eps_sing=valores["eps_sing"],
        tol=valores["tol"],
    )
