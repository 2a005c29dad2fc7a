"""
commands.py — Subcomandos do CLI do QubitFoton.

Uso:
    python pipeline.py simulate --profile exp:1 --kappa 1 --pe0 0.5 --t-max 10 --points 1001
    python pipeline.py coefficients --profile exp:9.5 --oracle
    python pipeline.py rates --profile exp:1.5 --delta0 3
    python pipeline.py witness --profile exp:9.5            # JSON no stdout
    python pipeline.py sweep --vary alpha=1:10:10 --vary delta0=0:3:4
    python pipeline.py figure fig4-left
    python pipeline.py optimal-pulse --target 2
    python pipeline.py validate quick

Arquivos (em --out, padrão data/outputs/):
    trajetoria.csv    — t, pe, re_coh, im_coh (hierarquia)
    coeficientes.csv  — t, A, B, C, derivadas, det de Bloch
    taxas.csv         — γ₊, γ₋, γ_z, ω, status, relaxação
    testemunhas.json  — relatório de divisibilidade / BLP / geométrico
    pulso_otimo.csv   — ξ(t) do pulso ótimo amostrado

Códigos de saída: 0 ok · 1 validação falhou · 2 configuração inválida ·
3 falha de integração ou quadratura.
"""

import argparse
import logging
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np
import pandas as pd

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from cli.cenario import ScenarioConfig, montar_cenario
from core.config import NOME_PROJETO, VERSION
from core.erros import ConfiguracaoInvalida, FalhaIntegracao, FalhaQuadratura, IntervaloSingular
from core.params import QubitState
from core.profiles import ExponentialProfile, auditar_normalizacao, make_optimal_pulse, optimal_population
from engine.dynmap import CoefficientTrajectory, find_singularities, solve_coefficients
from engine.hierarchy import HierarchyTrajectory, solve_hierarchy
from indicators.rates import (
    RatesTrajectory, accumulate_relaxation, compute_rates_trajectory,
    relaxation_from_rates, trecho_regular,
)
from indicators.witnesses import (
    WitnessReport, blp_directly_from_coeffs, evaluate_witnesses, geometric_from_determinant,
)
from oracles.exact_exp import ExpParams, exp_coefficient_trajectory, exp_rates_trajectory
from utils.io import salvar_csv, salvar_json
from utils.paths import OUTPUTS

log = logging.getLogger(__name__)

ARQUIVOS = {
    "trajectory"  : "trajetoria.csv",
    "coefficients": "coeficientes.csv",
    "rates"       : "taxas.csv",
    "witnesses"   : "testemunhas.json",
}


# ── Cálculo de um cenário ─────────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class Resultado:
    cenario: ScenarioConfig
    trajetoria: HierarchyTrajectory | None
    coeficientes: CoefficientTrajectory | None
    taxas: RatesTrajectory | None
    relatorio: WitnessReport | None


def relatorio_testemunhas(coef: CoefficientTrajectory, taxas: RatesTrajectory, tol: float) -> WitnessReport:
    relatorio = evaluate_witnesses(taxas, tol, singular_times=find_singularities(coef))
    return replace(
        relatorio,
        blp_direct=blp_directly_from_coeffs(coef, tol),
        geometric_direct=geometric_from_determinant(coef, tol),
    )


def executar_cenario(cenario: ScenarioConfig, saidas: tuple[str, ...] | None = None) -> Resultado:
    saidas = saidas or cenario.outputs
    perfil = cenario.perfil()
    grade = cenario.grade()
    auditar_normalizacao(perfil, float(grade[-1]))

    trajetoria = coef = taxas = relatorio = None
    if "trajectory" in saidas:
        trajetoria = solve_hierarchy(cenario.estado_inicial(), cenario.params, perfil, grade, cenario.solver)
    if {"coefficients", "rates", "witnesses"} & set(saidas):
        coef = solve_coefficients(cenario.params, perfil, grade, cenario.solver)
        taxas = compute_rates_trajectory(coef, cenario.eps_sing)
    if "witnesses" in saidas:
        relatorio = relatorio_testemunhas(coef, taxas, cenario.tol)
    return Resultado(cenario, trajetoria, coef, taxas, relatorio)


# ── Quadros de saída ──────────────────────────────────────────────────────────

def quadro_taxas(taxas: RatesTrajectory) -> pd.DataFrame:
    """Taxas mascaradas + relaxação; Γ_L e Γ_T só até a primeira amostra não regular."""
    df = taxas.to_frame(mascarar=True)
    relax = relaxation_from_rates(taxas)
    df["gamma_L"] = relax.gamma_longitudinal
    df["gamma_T"] = relax.gamma_transversal
    df["gamma_tot"] = relax.gamma_total
    df.loc[~taxas.regular, ["gamma_L", "gamma_T", "gamma_tot"]] = np.nan

    big_l = np.full(len(taxas), np.nan)
    big_t = np.full(len(taxas), np.nan)
    prefixo = trecho_regular(taxas)
    if len(prefixo) >= 2:
        acumulado = accumulate_relaxation(prefixo)
        big_l[:len(prefixo)] = acumulado.big_gamma_l
        big_t[:len(prefixo)] = acumulado.big_gamma_t
    df["Gamma_L"] = big_l
    df["Gamma_T"] = big_t
    return df


def _parametros_exatos(cenario: ScenarioConfig) -> ExpParams:
    perfil = cenario.perfil()
    if not isinstance(perfil, ExponentialProfile):
        raise ConfiguracaoInvalida("oracle", "formas fechadas só existem para perfis exp:ALPHA")
    return ExpParams(cenario.params, perfil.alpha)


def quadro_coeficientes(coef: CoefficientTrajectory, cenario: ScenarioConfig, oraculo: bool) -> pd.DataFrame:
    df = coef.to_frame()
    if oraculo:
        exato = exp_coefficient_trajectory(coef.t, _parametros_exatos(cenario))
        df["A_exato"] = exato.a
        df["B_exato"] = exato.b
        df["reC_exato"] = exato.c.real
        df["imC_exato"] = exato.c.imag
        erro = max(np.max(np.abs(exato.a - coef.a)), np.max(np.abs(exato.b - coef.b)),
                   np.max(np.abs(exato.c - coef.c)))
        log.info(f"Oráculo fechado: max |Δ| = {erro:.3g}")
    return df


def quadro_taxas_com_oraculo(taxas: RatesTrajectory, cenario: ScenarioConfig, oraculo: bool) -> pd.DataFrame:
    df = quadro_taxas(taxas)
    if oraculo:
        exato = exp_rates_trajectory(taxas.t, _parametros_exatos(cenario), cenario.eps_sing)
        mascara = ~exato.regular
        for nome, valores in (("gamma_plus_exato", exato.gamma_plus),
                              ("gamma_minus_exato", exato.gamma_minus),
                              ("gamma_z_exato", exato.gamma_z)):
            coluna = np.array(valores, dtype=float)
            coluna[mascara] = np.nan
            df[nome] = coluna
    return df


def gravar_resultado(res: Resultado, destino: Path, comando: list[str], oraculo: bool = False,
                     prefixo: str = "") -> list[Path]:
    cenario = res.cenario
    cabecalho = cenario.cabecalho(comando)
    escritos = []
    if res.trajetoria is not None:
        caminho = destino / f"{prefixo}{ARQUIVOS['trajectory']}"
        salvar_csv(res.trajetoria.to_frame(), caminho, cabecalho)
        escritos.append(caminho)
    if res.coeficientes is not None and "coefficients" in cenario.outputs:
        caminho = destino / f"{prefixo}{ARQUIVOS['coefficients']}"
        salvar_csv(quadro_coeficientes(res.coeficientes, cenario, oraculo), caminho, cabecalho)
        escritos.append(caminho)
    if res.taxas is not None and "rates" in cenario.outputs:
        caminho = destino / f"{prefixo}{ARQUIVOS['rates']}"
        salvar_csv(quadro_taxas_com_oraculo(res.taxas, cenario, oraculo), caminho, cabecalho)
        escritos.append(caminho)
    if res.relatorio is not None:
        caminho = destino / f"{prefixo}{ARQUIVOS['witnesses']}"
        salvar_json({"cabecalho": cabecalho, **res.relatorio.as_dict()}, caminho)
        escritos.append(caminho)
    return escritos


# ── Subcomandos ───────────────────────────────────────────────────────────────

def _cenario(args: argparse.Namespace, saidas: str | None = None) -> ScenarioConfig:
    flags = dict(vars(args))
    if saidas is not None:
        flags["outputs"] = saidas
    return montar_cenario(flags, args.config)


def _destino(args: argparse.Namespace) -> Path:
    return Path(args.out) if args.out else OUTPUTS


def _banner(titulo: str) -> None:
    print("\n" + "═" * 55)
    print(f"  {titulo}")
    print("═" * 55)


def cmd_simulate(args: argparse.Namespace) -> int:
    cenario = _cenario(args)
    _banner(f"SIMULAÇÃO  [{cenario.profile}]")
    res = executar_cenario(cenario)
    gravar_resultado(res, _destino(args), ["simulate"])
    return 0


def cmd_coefficients(args: argparse.Namespace) -> int:
    cenario = _cenario(args, saidas="coefficients")
    _banner(f"COEFICIENTES  [{cenario.profile}]")
    res = executar_cenario(cenario)
    comando = ["coefficients", "--oracle"] if args.oracle else ["coefficients"]
    gravar_resultado(res, _destino(args), comando, oraculo=args.oracle)
    return 0


def cmd_rates(args: argparse.Namespace) -> int:
    cenario = _cenario(args, saidas="rates")
    _banner(f"TAXAS  [{cenario.profile}]")
    res = executar_cenario(cenario)
    comando = ["rates", "--oracle"] if args.oracle else ["rates"]
    gravar_resultado(res, _destino(args), comando, oraculo=args.oracle)
    return 0


def cmd_witness(args: argparse.Namespace) -> int:
    cenario = _cenario(args, saidas="witnesses")
    res = executar_cenario(cenario)
    dados = {"cabecalho": cenario.cabecalho(["witness"]), **res.relatorio.as_dict()}
    if args.out:
        salvar_json(dados, Path(args.out) / ARQUIVOS["witnesses"])
    else:
        sys.stdout.write(salvar_json(dados, None))
    return 0


def cmd_optimal_pulse(args: argparse.Namespace) -> int:
    cenario = _cenario(args, saidas="trajectory")
    if args.target is None:
        raise ConfiguracaoInvalida("target", "informe --target T")
    pulso = make_optimal_pulse(args.target, cenario.params)
    grade = cenario.grade()
    _banner(f"PULSO ÓTIMO  [T = {args.target:g}]")

    xi = pulso.avaliar(grade)
    df = pd.DataFrame({"t": grade, "re_xi": xi.real, "im_xi": xi.imag})
    cenario_pulso = replace(cenario, profile=f"optimal:{args.target!r}")
    salvar_csv(df, _destino(args) / "pulso_otimo.csv",
               cenario_pulso.cabecalho(["optimal-pulse", "--target", repr(args.target)]))

    horizonte = np.array([0.0, args.target])
    traj = solve_hierarchy(QubitState.ground(), cenario.params, pulso, horizonte, cenario.solver)
    atingido = float(traj.pe[-1])
    teto = optimal_population(args.target, cenario.params)
    print(f"  P_e(T) = {atingido:.10f}   teto κ(1−e^(−ΓT)) = {teto:.10f}   |Δ| = {abs(atingido - teto):.2e}")
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    from cli.varredura import executar_varredura
    return executar_varredura(args, _cenario(args), _destino(args))


# flags que o catálogo fixa por figura; em figure só valem --t-max, --points e --out
FLAGS_FIXAS_NA_FIGURA = ("gamma", "kappa", "delta0", "profile", "pe0", "re_coh0", "im_coh0",
                         "rel_tol", "abs_tol", "max_step", "eps_sing", "tol", "outputs", "config")


def cmd_figure(args: argparse.Namespace) -> int:
    from analysis.figuras import gerar_figura
    ignoradas = [f"--{nome.replace('_', '-')}" for nome in FLAGS_FIXAS_NA_FIGURA if getattr(args, nome) is not None]
    if ignoradas:
        raise ConfiguracaoInvalida(
            "figure", f"{', '.join(ignoradas)} não se aplica(m); o catálogo fixa a física de cada figura")
    gerar_figura(args.nome, Path(args.out) if args.out else None, args.t_max, args.points)
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    from analysis.validacao import rodar_validacao
    return rodar_validacao(args.nivel, mutacao=args.mutacao)


# ── Parser ────────────────────────────────────────────────────────────────────

def _flags_comuns() -> argparse.ArgumentParser:
    """Flags globais; todas com padrão None para não sobrepor o arquivo --config."""
    comum = argparse.ArgumentParser(add_help=False)
    fisica = comum.add_argument_group("física")
    fisica.add_argument("--gamma", type=float, help="Γ, taxa total de decaimento")
    fisica.add_argument("--kappa", type=float, help="κ = Γ₁/Γ")
    fisica.add_argument("--delta0", type=float, help="dessintonia Δ₀")
    fisica.add_argument("--profile", help="zero | exp:ALPHA | optimal:T | sampled:CAMINHO")
    fisica.add_argument("--pe0", type=float, help="P_e(0)")
    fisica.add_argument("--re-coh0", type=float, help="Re ρ_ge(0)")
    fisica.add_argument("--im-coh0", type=float, help="Im ρ_ge(0)")

    numerica = comum.add_argument_group("numérica")
    numerica.add_argument("--t-max", type=float, help="fim da grade (padrão 15/Γ)")
    numerica.add_argument("--points", type=int, help="pontos da grade (padrão 1501)")
    numerica.add_argument("--rel-tol", type=float)
    numerica.add_argument("--abs-tol", type=float)
    numerica.add_argument("--max-step", type=float)
    numerica.add_argument("--eps-sing", type=float, help="limiar de singularidade das taxas")
    numerica.add_argument("--tol", type=float, help="tolerância das testemunhas")

    saida = comum.add_argument_group("saída")
    saida.add_argument("--out", help="diretório de saída")
    saida.add_argument("--outputs", help="trajectory,coefficients,rates,witnesses")
    saida.add_argument("--config", type=Path, help="arquivo CHAVE=VALOR com o cenário")
    volume = saida.add_mutually_exclusive_group()
    volume.add_argument("--verbose", "-v", action="store_true")
    volume.add_argument("--quiet", "-q", action="store_true")
    return comum


def construir_parser() -> argparse.ArgumentParser:
    comum = _flags_comuns()
    parser = argparse.ArgumentParser(
        prog="pipeline.py",
        description=f"{NOME_PROJETO} {VERSION} — qubit excitado por um fóton único",
    )
    sub = parser.add_subparsers(dest="comando", required=True)

    p = sub.add_parser("simulate", parents=[comum], help="hierarquia + mapa + taxas + testemunhas")
    p.set_defaults(func=cmd_simulate)

    for nome, func in (("coefficients", cmd_coefficients), ("rates", cmd_rates)):
        p = sub.add_parser(nome, parents=[comum])
        p.add_argument("--oracle", action="store_true", help="colunas das formas fechadas (perfil exp)")
        p.set_defaults(func=func)

    p = sub.add_parser("witness", parents=[comum], help="relatório JSON de não-Markovianidade")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("sweep", parents=[comum], help="varredura em um ou dois parâmetros")
    p.add_argument("--vary", action="append", default=[], metavar="CHAVE=INI:FIM:N")
    p.add_argument("--workers", type=int, default=None, help="processos (padrão: núcleos da máquina)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("figure", parents=[comum], help="CSV de uma figura do catálogo")
    p.add_argument("nome")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("optimal-pulse", parents=[comum], help="pulso que maximiza P_e(T)")
    p.add_argument("--target", type=float, help="instante T do máximo")
    p.set_defaults(func=cmd_optimal_pulse)

    p = sub.add_parser("validate", parents=[comum], help="oráculos e proposições")
    p.add_argument("nivel", nargs="?", choices=["quick", "full"], default="quick")
    p.add_argument("--mutacao", action="store_true", help="perturba Γ₁ → 0.99κΓ; as checagens devem falhar")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = construir_parser().parse_args(argv)
    nivel = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=nivel, format="%(asctime)s [%(levelname)s] %(message)s", datefmt="%H:%M:%S")

    try:
        return args.func(args)
    except ConfiguracaoInvalida as e:
        print(f"[ERRO] configuração inválida: {e}", file=sys.stderr)
        return 2
    except FalhaIntegracao as e:
        print(f"[ERRO] {e}", file=sys.stderr)
        return 3
    except (FalhaQuadratura, IntervaloSingular) as e:
        print(f"[ERRO] {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
