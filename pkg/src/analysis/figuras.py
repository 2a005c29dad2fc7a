"""
figuras.py — Dados das figuras do catálogo (Γ = 1, κ = 1), sem renderização.

Cada figura vira um CSV rotulado em data/outputs/figuras/<nome>.csv:
    mapa          t, A, B, reC, imC, absC, pe         (P_e com pe0 do catálogo)
    modulo        t, A, B, absC
    taxas         t, gamma_plus, gamma_minus, gamma_z, status
    taxas_desloc  t, gamma_plus, gamma_minus, gamma_z, omega, status
    somas         t, gp_gm, gp_gm_2gz, gp_gm_4gz, status

Amostras perto de B = 0 ou C = 0 saem vazias, com o status ao lado.

Rodar individualmente:
    python src/analysis/figuras.py              # todas
    python src/analysis/figuras.py fig4-left
"""

import logging
import sys
from pathlib import Path

import numpy as np
import pandas as pd

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from cli.cenario import ScenarioConfig, montar_cenario
from core.config import FIGURAS, N_PONTOS_FIGURA, T_MAX_FIGURA
from core.erros import ConfiguracaoInvalida
from engine.dynmap import solve_coefficients
from indicators.rates import compute_rates_trajectory, witness_sums
from utils.io import salvar_csv
from utils.paths import FIGURAS as DIR_FIGURAS

log = logging.getLogger(__name__)

TAXAS = ["gamma_plus", "gamma_minus", "gamma_z"]


def cenario_figura(nome: str, t_max: float | None = None, pontos: int | None = None) -> ScenarioConfig:
    if nome not in FIGURAS:
        raise ConfiguracaoInvalida("figure", f"'{nome}' desconhecida; válidas: {', '.join(FIGURAS)}")
    fig = FIGURAS[nome]
    return montar_cenario({
        "gamma": 1.0,
        "kappa": 1.0,
        "delta0": fig["delta0"],
        "profile": f"exp:{fig['alpha']!r}",
        "pe0": fig.get("pe0", 0.0),
        "t_max": t_max if t_max is not None else T_MAX_FIGURA,
        "points": pontos if pontos is not None else N_PONTOS_FIGURA,
        "outputs": "coefficients,rates",
    })


def dados_figura(nome: str, t_max: float | None = None, pontos: int | None = None) -> pd.DataFrame:
    cenario = cenario_figura(nome, t_max, pontos)
    tipo = FIGURAS[nome]["tipo"]
    coef = solve_coefficients(cenario.params, cenario.perfil(), cenario.grade(), cenario.solver)

    if tipo == "mapa":
        pe0 = cenario.initial[0]
        return pd.DataFrame({
            "t": coef.t, "A": coef.a, "B": coef.b,
            "reC": coef.c.real, "imC": coef.c.imag, "absC": np.abs(coef.c),
            "pe": coef.a + coef.b * pe0,
        })
    if tipo == "modulo":
        return pd.DataFrame({"t": coef.t, "A": coef.a, "B": coef.b, "absC": np.abs(coef.c)})

    taxas = compute_rates_trajectory(coef, cenario.eps_sing)
    df = taxas.to_frame(mascarar=True)
    if tipo == "taxas":
        return df[["t", *TAXAS, "status"]]
    if tipo == "taxas_desloc":
        return df[["t", *TAXAS, "omega", "status"]]

    soma, soma2, soma4 = witness_sums(taxas)
    somas = pd.DataFrame({"t": taxas.t, "gp_gm": soma, "gp_gm_2gz": soma2, "gp_gm_4gz": soma4,
                          "status": taxas.status})
    somas.loc[~taxas.regular, ["gp_gm", "gp_gm_2gz", "gp_gm_4gz"]] = np.nan
    return somas


def gerar_figura(nome: str, destino: Path | None = None, t_max: float | None = None,
                 pontos: int | None = None) -> Path:
    df = dados_figura(nome, t_max, pontos)
    cenario = cenario_figura(nome, t_max, pontos)
    caminho = (destino or DIR_FIGURAS) / f"{nome}.csv"
    salvar_csv(df, caminho, cenario.cabecalho(["figure", nome]))
    return caminho


if __name__ == "__main__":
    logging.basicConfig(level=logging.INFO, format="%(asctime)s [%(levelname)s] %(message)s", datefmt="%H:%M:%S")
    nomes = sys.argv[1:] or list(FIGURAS)
    for nome in nomes:
        gerar_figura(nome)
