"""
varredura.py — Varredura de parâmetros em uma ou duas chaves.

    --vary CHAVE=INICIO:FIM:N      (N pontos igualmente espaçados, extremos inclusos)

CHAVE é qualquer chave numérica do cenário (kappa, delta0, gamma, pe0, ...)
ou 'alpha', que troca o perfil por exp:ALPHA. Os pontos são independentes e
rodam em paralelo num pool de processos (--workers); cada processo devolve
só o quadro do ponto e o resumo, e a escrita dos arquivos fica no processo
principal, na ordem dos pontos.

Saída em --out:
    ponto_000.csv, ponto_001.csv, ...   coeficientes + taxas de cada ponto
    indice.json                         valores de cada ponto e veredictos
"""

import argparse
import itertools
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np
import pandas as pd

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from cli.cenario import CHAVES, ScenarioConfig, montar_cenario
from core.erros import ConfiguracaoInvalida
from utils.io import salvar_csv, salvar_json

log = logging.getLogger(__name__)

SAIDAS_PONTO = ("coefficients", "rates", "witnesses")
CHAVES_VARIAVEIS = {"alpha"} | {k for k, (conv, _) in CHAVES.items() if conv is not str}


def interpretar_vary(texto: str) -> tuple[str, np.ndarray]:
    chave, sep, faixa = texto.partition("=")
    chave = chave.strip().lower().replace("-", "_")
    if not sep or chave not in CHAVES_VARIAVEIS:
        raise ConfiguracaoInvalida("vary", f"'{texto}': chave deve ser uma de {sorted(CHAVES_VARIAVEIS)}")
    partes = faixa.split(":")
    if len(partes) != 3:
        raise ConfiguracaoInvalida("vary", f"'{texto}': use CHAVE=INICIO:FIM:N")
    try:
        inicio, fim, n = float(partes[0]), float(partes[1]), int(partes[2])
    except ValueError:
        raise ConfiguracaoInvalida("vary", f"'{texto}': números inválidos") from None
    if n < 1:
        raise ConfiguracaoInvalida("vary", f"'{texto}': N deve ser ≥ 1")
    return chave, np.linspace(inicio, fim, n)


def cenario_do_ponto(args: argparse.Namespace, valores: dict[str, float]) -> ScenarioConfig:
    flags = dict(vars(args))
    for chave, valor in valores.items():
        if chave == "alpha":
            flags["profile"] = f"exp:{valor!r}"
        elif CHAVES[chave][0] is int:
            flags[chave] = int(round(valor))
        else:
            flags[chave] = valor
    flags["outputs"] = ",".join(SAIDAS_PONTO)
    return montar_cenario(flags, args.config)


def _resumo(relatorio, coef) -> dict:
    return {
        "cp_divisible": relatorio.cp_divisible.verdict,
        "p_divisible": relatorio.p_divisible.verdict,
        "blp": relatorio.blp.verdict,
        "geometric": relatorio.geometric.verdict,
        "eternal_nm": relatorio.eternal_nm.verdict,
        "singular_times": [s.as_dict() for s in relatorio.singular_times],
        "min_B": float(np.min(coef.b)),
        "min_abs_C": float(np.min(np.abs(coef.c))),
    }


def _rodar_ponto(cenario: ScenarioConfig) -> tuple[pd.DataFrame, dict]:
    """Roda um ponto num processo filho e devolve (quadro, resumo), ambos serializáveis."""
    from cli.commands import executar_cenario, quadro_coeficientes, quadro_taxas

    res = executar_cenario(cenario)
    quadro = quadro_coeficientes(res.coeficientes, cenario, oraculo=False)
    quadro = quadro.join(quadro_taxas(res.taxas).drop(columns=["t"]))
    return quadro, _resumo(res.relatorio, res.coeficientes)


def executar_varredura(args: argparse.Namespace, base: ScenarioConfig, destino: Path) -> int:
    if not 1 <= len(args.vary) <= 2:
        raise ConfiguracaoInvalida("vary", "informe uma ou duas chaves --vary")
    eixos = [interpretar_vary(v) for v in args.vary]
    if len({c for c, _ in eixos}) != len(eixos):
        raise ConfiguracaoInvalida("vary", "chaves repetidas")
    if args.workers is not None and args.workers < 1:
        raise ConfiguracaoInvalida("workers", f"deve ser ≥ 1 (recebido {args.workers})")

    nomes = [c for c, _ in eixos]
    pontos = [dict(zip(nomes, (float(v) for v in combinacao)))
              for combinacao in itertools.product(*(valores for _, valores in eixos))]
    # valida tudo antes de gastar CPU
    cenarios = [cenario_do_ponto(args, valores) for valores in pontos]

    print("\n" + "═" * 55)
    print(f"  VARREDURA  [{' × '.join(f'{c}({len(v)})' for c, v in eixos)} = {len(pontos)} pontos]")
    print("═" * 55)

    inicio = time.time()
    indice = []
    with ProcessPoolExecutor(max_workers=args.workers) as pool:
        resultados = pool.map(_rodar_ponto, cenarios)
        for i, (valores, cenario, (quadro, resumo)) in enumerate(zip(pontos, cenarios, resultados)):
            arquivo = f"ponto_{i:03d}.csv"
            salvar_csv(quadro, destino / arquivo, cenario.cabecalho(["sweep"]), verbose=False)
            indice.append({"indice": i, "arquivo": arquivo, "valores": valores, **resumo})
            log.info(f"Ponto {i + 1}/{len(pontos)} {valores}: BLP={resumo['blp']}")

    cabecalho = replace(base, outputs=SAIDAS_PONTO).cabecalho(["sweep", *(f"--vary={v}" for v in args.vary)])
    salvar_json({"cabecalho": cabecalho, "eixos": {c: v.tolist() for c, v in eixos}, "pontos": indice},
                destino / "indice.json")
    print(f"  [OK] {len(pontos)} pontos em {time.time() - inicio:.1f}s -> {destino}")
    return 0
