"""
io.py — Leitura e escrita de CSV/JSON com cabeçalho reprodutível.

Todo CSV emitido começa com exatamente 8 linhas de comentário '#':
    # QubitFoton v1.0.0
    # comando: ...
    # params: ...
    # profile: ...
    # initial: ...
    # grid: ...
    # solver: ...
    # argv: ...        ← linha suficiente para re-executar o comando
Números saem com 12 dígitos significativos; campos ausentes (taxas
singulares) saem vazios.
"""

import json
import shlex
import sys
from pathlib import Path

import numpy as np
import pandas as pd

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from core.config import DIGITOS_SAIDA, LINHAS_CABECALHO, NOME_PROJETO, VERSION
from core.erros import ConfiguracaoInvalida

CHAVES_CABECALHO = ("comando", "params", "profile", "initial", "grid", "solver", "argv")


def montar_cabecalho(campos: dict) -> list[str]:
    linhas = [f"# {NOME_PROJETO} {VERSION}"]
    for chave in CHAVES_CABECALHO:
        linhas.append(f"# {chave}: {campos.get(chave, '-')}")
    assert len(linhas) == LINHAS_CABECALHO
    return linhas


def salvar_csv(df: pd.DataFrame, caminho: Path, cabecalho: dict | None = None,
               verbose: bool = True) -> None:
    caminho.parent.mkdir(parents=True, exist_ok=True)
    corpo = df.to_csv(
        index=False,
        float_format=f"%.{DIGITOS_SAIDA}g",
        na_rep="",
        lineterminator="\n",
    )
    with open(caminho, "w", encoding="utf-8", newline="") as f:
        if cabecalho is not None:
            f.write("\n".join(montar_cabecalho(cabecalho)) + "\n")
        f.write(corpo)
    if verbose:
        print(f"  ✅ Salvo: {caminho.name} ({len(df)} linhas)")


def ler_csv(caminho: Path, **kwargs) -> pd.DataFrame:
    return pd.read_csv(caminho, comment="#", encoding="utf-8", **kwargs)


def ler_cabecalho(caminho: Path) -> dict:
    """Devolve os campos do cabeçalho; 'argv' já vem separado em lista."""
    campos = {}
    with open(caminho, encoding="utf-8") as f:
        for _ in range(LINHAS_CABECALHO):
            linha = f.readline().rstrip("\n")
            if not linha.startswith("#"):
                break
            chave, sep, valor = linha[1:].strip().partition(": ")
            if sep:
                campos[chave] = valor
    if "argv" in campos:
        campos["argv"] = shlex.split(campos["argv"])
    return campos


def salvar_json(dados: dict, caminho: Path | None, verbose: bool = True) -> str:
    texto = json.dumps(dados, indent=2, ensure_ascii=False) + "\n"
    if caminho is None:
        return texto
    caminho.parent.mkdir(parents=True, exist_ok=True)
    with open(caminho, "w", encoding="utf-8", newline="") as f:
        f.write(texto)
    if verbose:
        print(f"  ✅ Salvo: {caminho.name}")
    return texto


def ler_perfil_amostrado(caminho: Path) -> tuple[np.ndarray, np.ndarray]:
    """CSV de duas ou três colunas t,re[,im] (linha de título opcional)."""
    if not caminho.exists():
        raise ConfiguracaoInvalida("profile", f"arquivo de perfil não encontrado: {caminho}")
    bruto = pd.read_csv(caminho, header=None, comment="#", skipinitialspace=True)
    numerico = bruto.apply(pd.to_numeric, errors="coerce")
    if len(numerico) and numerico.iloc[0].isna().all():
        numerico = numerico.iloc[1:]
    if numerico.shape[1] not in (2, 3):
        raise ConfiguracaoInvalida("profile", f"{caminho.name}: esperado t,re[,im] (achei {numerico.shape[1]} colunas)")
    if numerico.isna().any().any():
        raise ConfiguracaoInvalida("profile", f"{caminho.name}: valores não numéricos")
    tempos = numerico.iloc[:, 0].to_numpy(dtype=float)
    valores = numerico.iloc[:, 1].to_numpy(dtype=float).astype(complex)
    if numerico.shape[1] == 3:
        valores = valores + 1j * numerico.iloc[:, 2].to_numpy(dtype=float)
    if np.any(np.diff(tempos) <= 0):
        raise ConfiguracaoInvalida("profile", f"{caminho.name}: tempos devem ser estritamente crescentes")
    return tempos, valores
