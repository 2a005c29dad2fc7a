"""
validacao.py — Autovalidação: oráculos independentes e proposições.

Checagens (cada uma imprime [OK] ou [FALHA] com o pior desvio encontrado):
    triangulo      formas fechadas × EDO aumentada × quadratura adaptativa (com erro estimado)
    choi           menor autovalor do Choi ≥ −1e-9 na mesma grade
    ida_volta      e^{−Γ_L/2} = B e e^{−Γ_T/2} = |C| fora das singularidades
    eterno         pontos ressonantes invertíveis: eternamente não-Markoviano
    mapa_hier      Λ_t aplicado ao estado inicial × hierarquia (distância traço)
    max_exc        máximo 4κ/e² em t = 2/Γ e nenhum valor acima na varredura
    pulso_otimo    P_e(T) = κ(1 − e^{−ΓT}) e supera o perfil exponencial
    limiar_b       zero de B aparece logo abaixo de α = 8κ + 1
    perfis_reais   perfis reais não negativos invertíveis: sinais das taxas, BLP
    dicotomia      α = 1.5: BLP viola em Δ₀ = 3.0 (γ₊+γ₋ < 0) e vale em Δ₀ = 6.5
    semigrupo      ξ ≡ 0: taxas constantes, testemunhas triviais
    assintotico    taxas ressonantes perto dos limites, inclusive α = 4κ−1 e α = 8κ+1

quick usa grades reduzidas; full usa as grades completas. Com --mutacao as
checagens que passam pela hierarquia rodam com Γ₁ → 0.99κΓ e devem falhar.

Rodar individualmente:
    python src/analysis/validacao.py quick
    python src/analysis/validacao.py full
    python src/analysis/validacao.py quick --mutacao
"""

import argparse
import itertools
import logging
import math
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from core.params import PhysParams, QubitState, trace_distance
from core.profiles import (
    ExponentialProfile, PhotonProfile, SampledProfile, ZeroProfile,
    make_optimal_pulse, optimal_population,
)
from engine.dynmap import (
    CoefficientTrajectory, apply_map, choi_min_eig, coefficients_by_quadrature,
    find_singularities, solve_coefficients,
)
from engine.hierarchy import I11, solve_hierarchy
from engine.integrador import grade_uniforme
from indicators.rates import (
    RatesTrajectory, accumulate_relaxation, compute_rates_trajectory, trecho_regular, witness_sums,
)
from indicators.witnesses import evaluate_witnesses
from oracles.exact_exp import (
    ExpParams, exp_asymptotic_rates, exp_coefficient_trajectory, exp_coefficients, exp_population_ground,
    exp_rates_resonant, exp_rates_trajectory, first_b_zero, max_excitation, refine_resonant_max,
    search_max_excitation,
)

log = logging.getLogger(__name__)

ESCALA_MUTACAO = 0.99

# ── Grades por nível ──────────────────────────────────────────────────────────
NIVEIS = {
    "quick": {
        "kappas": (1.0,), "alphas": (0.5, 1.0, 9.5), "deltas": (0.0, 1.5),
        "t_max": 5.0, "pontos": 101,
        "n_estados": 5, "conjuntos_hier": 2,
        "kappas_max": (1.0,), "busca_alphas": np.linspace(0.5, 2.0, 4), "busca_deltas": (0.0, 1.0), "busca_nt": 201,
        "horizontes": (1.0, 2.0), "kappas_pulso": (1.0,), "alphas_pulso": np.geomspace(0.2, 10.0, 5),
        "perfis_reais": 4, "t_max_reais": 5.0, "pontos_reais": 501,
    },
    "full": {
        "kappas": (0.25, 0.5, 1.0), "alphas": (0.5, 1.0, 1.5, 9.5), "deltas": (0.0, 1.5, 3.0),
        "t_max": 15.0, "pontos": 1501,
        "n_estados": 100, "conjuntos_hier": 6,
        "kappas_max": (0.25, 0.5, 1.0), "busca_alphas": np.linspace(0.25, 4.0, 16),
        "busca_deltas": (0.0, 0.5, 1.0, 2.0), "busca_nt": 401,
        "horizontes": (0.5, 1.0, 2.0, 4.0), "kappas_pulso": (0.5, 1.0), "alphas_pulso": np.geomspace(0.1, 20.0, 20),
        "perfis_reais": 10, "t_max_reais": 15.0, "pontos_reais": 1501,
    },
}

CONJUNTOS_HIERARQUIA = [
    (PhysParams(1.0, 1.0, 0.0), ExponentialProfile(1.0)),
    (PhysParams(1.0, 0.5, 1.5), ExponentialProfile(1.5)),
    (PhysParams(1.0, 1.0, 0.0), ExponentialProfile(9.5)),
    (PhysParams(1.0, 0.25, 0.0), make_optimal_pulse(2.0, PhysParams(1.0, 0.25, 0.0))),
    (PhysParams(1.0, 1.0, 1.0), ZeroProfile()),
    (PhysParams(1.0, 0.5, 3.0), ExponentialProfile(0.5)),
]


@dataclass(frozen=True)
class Checagem:
    nome: str
    ok: bool
    detalhe: str
    segundos: float = 0.0


@dataclass(eq=False)
class PontoTriangulo:
    kappa: float
    alpha: float
    delta0: float
    ode: CoefficientTrajectory
    taxas: RatesTrajectory
    singularidades: list


# ── Perfis de teste ───────────────────────────────────────────────────────────

def perfil_amostrado_aleatorio(rng: np.random.Generator, t_fim: float = 2.0, n: int = 41) -> SampledProfile:
    """Amplitudes uniformes ≥ 0 em n nós de [0, t_fim], normalizadas na interpolação linear."""
    tempos = np.linspace(0.0, t_fim, n)
    valores = rng.uniform(0.0, 1.0, n)
    a, b, h = valores[:-1], valores[1:], np.diff(tempos)
    norma = float(np.sum(h * (a * a + a * b + b * b) / 3.0))
    return SampledProfile(tempos, valores / math.sqrt(norma), origem="aleatorio")


def perfis_reais(n: int, rng: np.random.Generator) -> list[tuple[str, PhysParams, PhotonProfile]]:
    """Perfis reais não negativos com mapa invertível (Δ₀ = 0)."""
    g = 1.0
    todos = [
        ("exp:9.5 κ=1", PhysParams(g, 1.0), ExponentialProfile(9.5)),
        ("optimal:0.5 κ=0.25", PhysParams(g, 0.25), make_optimal_pulse(0.5, PhysParams(g, 0.25))),
        ("aleatorio#0 κ=0.04", PhysParams(g, 0.04), perfil_amostrado_aleatorio(rng)),
        ("exp:3.5 κ=0.25", PhysParams(g, 0.25), ExponentialProfile(3.5)),
        ("exp:12 κ=1", PhysParams(g, 1.0), ExponentialProfile(12.0)),
        ("exp:20 κ=1", PhysParams(g, 1.0), ExponentialProfile(20.0)),
        ("optimal:1 κ=0.25", PhysParams(g, 0.25), make_optimal_pulse(1.0, PhysParams(g, 0.25))),
        ("optimal:0.5 κ=0.5", PhysParams(g, 0.5), make_optimal_pulse(0.5, PhysParams(g, 0.5))),
        ("aleatorio#1 κ=0.04", PhysParams(g, 0.04), perfil_amostrado_aleatorio(rng)),
        ("aleatorio#2 κ=0.04", PhysParams(g, 0.04), perfil_amostrado_aleatorio(rng)),
    ]
    return todos[:n]


# ── Checagens ─────────────────────────────────────────────────────────────────

def montar_triangulo(cfg: dict) -> tuple[list[PontoTriangulo], float, float]:
    """Roda os três caminhos em cada ponto; devolve (pontos, pior desvio, maior erro estimado da quadratura)."""
    grade = grade_uniforme(cfg["t_max"], cfg["pontos"])
    pontos, pior, erro_quad = [], 0.0, 0.0
    for kappa, alpha, delta0 in itertools.product(cfg["kappas"], cfg["alphas"], cfg["deltas"]):
        params = PhysParams(1.0, kappa, delta0)
        perfil = ExponentialProfile(alpha)
        ode = solve_coefficients(params, perfil, grade)
        fechada = exp_coefficient_trajectory(grade, ExpParams(params, alpha))
        quadratura = coefficients_by_quadrature(params, perfil, grade)
        erro_quad = max(erro_quad, quadratura.erro_quadratura)
        for x, y in ((fechada, ode), (fechada, quadratura), (ode, quadratura)):
            desvio = max(np.max(np.abs(x.a - y.a)), np.max(np.abs(x.b - y.b)), np.max(np.abs(x.c - y.c)))
            pior = max(pior, float(desvio))
        pontos.append(PontoTriangulo(kappa, alpha, delta0, ode, compute_rates_trajectory(ode),
                                     find_singularities(ode)))
    return pontos, pior, erro_quad


def checar_choi(pontos: list[PontoTriangulo]) -> tuple[bool, str]:
    menor = min(choi_min_eig(p.ode[i]) for p in pontos for i in range(len(p.ode)))
    return menor >= -1e-9, f"min autovalor do Choi = {menor:.3e}"


def checar_ida_volta(pontos: list[PontoTriangulo], margem: float = 0.5, passo: float = 0.005) -> tuple[bool, str]:
    """Reintegra cada ponto com passo ≤ passo antes de acumular Γ_L e Γ_T."""
    pior, usados = 0.0, 0
    for p in pontos:
        t_fim = float(p.ode.t[-1])
        if p.singularidades:
            t_fim = min(t_fim, p.singularidades[0].t - margem)
        if t_fim < 3 * passo:
            continue
        grade = np.linspace(0.0, t_fim, int(math.ceil(t_fim / passo)) + 1)
        coef = solve_coefficients(PhysParams(1.0, p.kappa, p.delta0), ExponentialProfile(p.alpha), grade)
        taxas = trecho_regular(compute_rates_trajectory(coef))
        if len(taxas) < 3:
            continue
        relax = accumulate_relaxation(taxas)
        n = len(taxas)
        pior = max(pior,
                   float(np.max(np.abs(np.exp(-0.5 * relax.big_gamma_l) - coef.b[:n]))),
                   float(np.max(np.abs(np.exp(-0.5 * relax.big_gamma_t) - np.abs(coef.c[:n])))))
        usados += 1
    return usados > 0 and pior <= 1e-6, f"{usados} ponto(s), max desvio {pior:.2e}"


def checar_eterno(pontos: list[PontoTriangulo]) -> tuple[bool, str]:
    alvos = [p for p in pontos if p.delta0 == 0.0 and p.alpha >= 8 * p.kappa + 1]
    falhas = []
    for p in alvos:
        rel = evaluate_witnesses(p.taxas)
        depois = p.taxas.regular & (p.taxas.t > 1e-3)
        menor = float(np.min(np.minimum(np.minimum(p.taxas.gamma_plus, p.taxas.gamma_minus),
                                        p.taxas.gamma_z)[depois]))
        if not (rel.eternal_nm.verdict and not rel.cp_divisible.verdict and menor < -1e-4):
            falhas.append(f"κ={p.kappa} α={p.alpha}")
    return bool(alvos) and not falhas, f"{len(alvos)} ponto(s) invertível(is); falhas: {falhas or 'nenhuma'}"


def checar_mapa_hierarquia(cfg: dict, escala: float = 1.0) -> tuple[bool, str]:
    rng = np.random.default_rng(20240611)
    grade = grade_uniforme(cfg["t_max"], cfg["pontos"])
    pior = 0.0
    for params, perfil in CONJUNTOS_HIERARQUIA[:cfg["conjuntos_hier"]]:
        coef = solve_coefficients(params, perfil, grade)
        for _ in range(cfg["n_estados"]):
            rho0 = QubitState.aleatorio(rng)
            traj = solve_hierarchy(rho0, params, perfil, grade, escala_gamma1=escala)
            for i in range(len(grade)):
                d = trace_distance(traj.blocos[i, I11], apply_map(coef[i], rho0))
                pior = max(pior, d)
    return pior <= 1e-6, f"max distância traço {pior:.2e}"


def checar_max_excitacao(cfg: dict) -> tuple[bool, str]:
    problemas = []
    for kappa in cfg["kappas_max"]:
        p_max, t_star, *_ = max_excitation(kappa, 1.0)
        p_num, t_num = refine_resonant_max(kappa, 1.0)
        if abs(p_num - p_max) > 1e-6 or abs(t_num - t_star) > 1e-3:
            problemas.append(f"κ={kappa}: P={p_num:.8f} t={t_num:.5f}")
        melhor, *_ = search_max_excitation(kappa, 1.0, cfg["busca_alphas"], cfg["busca_deltas"],
                                           n_t=cfg["busca_nt"])
        if melhor > p_max + 1e-5:
            problemas.append(f"κ={kappa}: varredura achou {melhor:.8f} > {p_max:.8f}")
    # o ponto (α, Δ₀) = (1, 0) da varredura deve bater com a função maximizada
    ref = exp_population_ground(2.0, 1.0, 0.0, PhysParams(1.0, 1.0))
    if abs(ref - 4.0 * math.exp(-2.0)) > 1e-9:
        problemas.append(f"P_e(2) = {ref:.10f}")
    return not problemas, "; ".join(problemas) or "4κ/e² em t = 2/Γ"


def checar_pulso_otimo(cfg: dict, escala: float = 1.0) -> tuple[bool, str]:
    problemas, pior = [], 0.0
    for kappa, horizonte in itertools.product(cfg["kappas_pulso"], cfg["horizontes"]):
        params = PhysParams(1.0, kappa)
        pulso = make_optimal_pulse(horizonte, params)
        traj = solve_hierarchy(QubitState.ground(), params, pulso, np.array([0.0, horizonte]),
                               escala_gamma1=escala)
        atingido = float(traj.pe[-1])
        desvio = abs(atingido - optimal_population(horizonte, params))
        pior = max(pior, desvio)
        if desvio > 1e-5:
            problemas.append(f"κ={kappa} T={horizonte}: |Δ|={desvio:.2e}")
        rivais = [exp_population_ground(horizonte, a, 0.0, params) for a in cfg["alphas_pulso"]]
        if not atingido > max(rivais):
            problemas.append(f"κ={kappa} T={horizonte}: exponencial alcança {max(rivais):.8f}")
    return not problemas, "; ".join(problemas) or f"max |Δ| {pior:.2e}"


def checar_limiar_b() -> tuple[bool, str]:
    problemas = []
    for kappa, acima, abaixo in ((1.0, 9.0, 8.9), (0.5, 5.0, 4.9)):
        base = PhysParams(1.0, kappa)
        zero, minimo = first_b_zero(ExpParams(base, acima))
        if zero is not None or not minimo > 0:
            problemas.append(f"κ={kappa} α={acima}: B se anula (min {minimo:.3e})")
        p = ExpParams(base, abaixo)
        zero, _ = first_b_zero(p)
        if zero is None:
            problemas.append(f"κ={kappa} α={abaixo}: sem zero de B")
        else:
            residuo = abs(exp_coefficients(zero, p).b)
            if residuo >= 1e-10:
                problemas.append(f"κ={kappa} α={abaixo}: resíduo {residuo:.2e}")
    return not problemas, "; ".join(problemas) or "limiares 9 e 5 confirmados"


def checar_perfis_reais(cfg: dict) -> tuple[bool, str]:
    rng = np.random.default_rng(7)
    grade = grade_uniforme(cfg["t_max_reais"], cfg["pontos_reais"])
    problemas = []
    for rotulo, params, perfil in perfis_reais(cfg["perfis_reais"], rng):
        coef = solve_coefficients(params, perfil, grade)
        if find_singularities(coef) or np.min(coef.b) <= 0:
            problemas.append(f"{rotulo}: mapa não invertível")
            continue
        taxas = compute_rates_trajectory(coef)
        r = taxas.regular
        g = params.gamma_total
        d_abs_c = np.real(coef.dc * np.conj(coef.c)) / np.abs(coef.c)
        falhou = (
            np.any(taxas.gamma_plus[r] < -1e-9)
            or np.any(taxas.gamma_minus[r] < 2 * g - 1e-9)
            or np.any(taxas.gamma_z[r] > 1e-9)
            or np.any(coef.c.real[r] <= 0)
            or np.any(d_abs_c[r] > 1e-9)
            or not evaluate_witnesses(taxas).blp.verdict
        )
        if falhou:
            problemas.append(rotulo)
    return not problemas, f"falhas: {problemas}" if problemas else f"{cfg['perfis_reais']} perfis"


def checar_dicotomia() -> tuple[bool, str]:
    """α = 1.5, κ = 1: BLP violado em Δ₀ = 3 (por γ₊+γ₋, pois γ₊+γ₋+4γ_z fica positivo) e válido em Δ₀ = 6.5."""
    grade = grade_uniforme(10.0, 1001)
    veredictos, menores, menores4 = {}, {}, {}
    for delta0 in (3.0, 6.5):
        coef = solve_coefficients(PhysParams(1.0, 1.0, delta0), ExponentialProfile(1.5), grade)
        taxas = compute_rates_trajectory(coef)
        veredictos[delta0] = evaluate_witnesses(taxas).blp.verdict
        soma, _, soma4 = witness_sums(taxas)
        menores[delta0] = float(np.min(soma[taxas.regular]))
        menores4[delta0] = float(np.min(soma4[taxas.regular]))
    ok = (not veredictos[3.0]) and menores[3.0] < -1e-3 and veredictos[6.5]
    return ok, (f"Δ₀=3.0: BLP={veredictos[3.0]} min(γ₊+γ₋)={menores[3.0]:.3e} "
                f"min(γ₊+γ₋+4γ_z)={menores4[3.0]:.3e}; Δ₀=6.5: BLP={veredictos[6.5]}")


def checar_semigrupo() -> tuple[bool, str]:
    params = PhysParams(1.0, 1.0, 0.7)
    coef = solve_coefficients(params, ZeroProfile(), grade_uniforme(15.0, 1501))
    taxas = compute_rates_trajectory(coef)
    desvio = max(np.max(np.abs(taxas.gamma_plus)), np.max(np.abs(taxas.gamma_minus - 2.0)),
                 np.max(np.abs(taxas.gamma_z)), np.max(np.abs(taxas.omega - params.delta0)))
    rel = evaluate_witnesses(taxas)
    triviais = all(v.verdict for v in (rel.cp_divisible, rel.p_divisible, rel.blp, rel.geometric))
    ok = desvio <= 1e-10 and triviais and not rel.eternal_nm.verdict
    return ok, f"max desvio {desvio:.2e}, eterno={rel.eternal_nm.verdict}"


def checar_assintotico() -> tuple[bool, str]:
    # α ∈ {0.5, 1.5} em Γt = 30 pelas formas fatoradas; os casos degenerados
    # (α = 4κ−1 e α = 8κ+1) na última amostra regular com Γt ≥ 8
    pior = 0.0
    for alpha, kappa in itertools.product((0.5, 1.5), (0.25, 0.5, 1.0)):
        taxa = exp_rates_resonant(30.0, ExpParams(PhysParams(1.0, kappa), alpha))
        limite = exp_asymptotic_rates(alpha, 1.0, kappa)
        pior = max(pior, abs(taxa.gamma_plus - limite[0]), abs(taxa.gamma_minus - limite[1]),
                   abs(taxa.gamma_z - limite[2]))
    grade = grade_uniforme(30.0, 301)
    for alpha, kappa in ((2.5, 1.0), (3.0, 1.0), (3.0, 0.25)):
        taxas = exp_rates_trajectory(grade, ExpParams(PhysParams(1.0, kappa), alpha))
        candidatos = np.flatnonzero(taxas.regular & (grade >= 8.0))
        if candidatos.size == 0:
            return False, f"α={alpha}, κ={kappa}: nenhuma amostra regular com Γt ≥ 8"
        i = int(candidatos[-1])
        limite = exp_asymptotic_rates(alpha, 1.0, kappa)
        pior = max(pior, abs(taxas.gamma_plus[i] - limite[0]), abs(taxas.gamma_minus[i] - limite[1]),
                   abs(taxas.gamma_z[i] - limite[2]))
    return pior <= 1e-3, f"max desvio {pior:.2e}"


# ── Execução ──────────────────────────────────────────────────────────────────

def _cronometrar(nome: str, f: Callable[[], tuple[bool, str]]) -> Checagem:
    inicio = time.time()
    try:
        ok, detalhe = f()
    except Exception as e:  # noqa: BLE001
        log.exception(f"Checagem {nome} levantou exceção")
        ok, detalhe = False, f"{type(e).__name__}: {e}"
    return Checagem(nome, bool(ok), detalhe, time.time() - inicio)


def executar_checagens(nivel: str, mutacao: bool = False) -> list[Checagem]:
    cfg = NIVEIS[nivel]
    if mutacao:
        return [
            _cronometrar("mapa_hier", lambda: checar_mapa_hierarquia(cfg, ESCALA_MUTACAO)),
            _cronometrar("pulso_otimo", lambda: checar_pulso_otimo(cfg, ESCALA_MUTACAO)),
        ]

    checagens = []
    montado: dict[str, list[PontoTriangulo]] = {}

    def triangulo() -> tuple[bool, str]:
        pontos, pior, erro_quad = montar_triangulo(cfg)
        montado["pontos"] = pontos
        return pior <= 1e-7, f"{len(pontos)} pontos, max desvio {pior:.2e}, erro de quadratura ≤ {erro_quad:.1e}"

    checagens.append(_cronometrar("triangulo", triangulo))
    if "pontos" in montado:
        pontos = montado["pontos"]
        checagens.append(_cronometrar("choi", lambda: checar_choi(pontos)))
        checagens.append(_cronometrar("ida_volta", lambda: checar_ida_volta(pontos)))
        checagens.append(_cronometrar("eterno", lambda: checar_eterno(pontos)))
    else:
        checagens += [Checagem(nome, False, "sem pontos do triângulo") for nome in ("choi", "ida_volta", "eterno")]
    checagens.append(_cronometrar("mapa_hier", lambda: checar_mapa_hierarquia(cfg)))
    checagens.append(_cronometrar("max_exc", lambda: checar_max_excitacao(cfg)))
    checagens.append(_cronometrar("pulso_otimo", lambda: checar_pulso_otimo(cfg)))
    checagens.append(_cronometrar("limiar_b", checar_limiar_b))
    checagens.append(_cronometrar("perfis_reais", lambda: checar_perfis_reais(cfg)))
    checagens.append(_cronometrar("dicotomia", checar_dicotomia))
    checagens.append(_cronometrar("semigrupo", checar_semigrupo))
    checagens.append(_cronometrar("assintotico", checar_assintotico))
    return checagens


def rodar_validacao(nivel: str = "quick", mutacao: bool = False) -> int:
    """0 se tudo passou (ou, com mutação, se todas as checagens detectaram a perturbação)."""
    print("\n" + "═" * 55)
    titulo = f"VALIDAÇÃO  [{nivel.upper()}]" + ("  | MUTAÇÃO Γ₁ → 0.99κΓ" if mutacao else "")
    print(f"  {titulo}")
    print("═" * 55)

    checagens = executar_checagens(nivel, mutacao)
    for c in checagens:
        marca = "[OK]   " if c.ok else "[FALHA]"
        print(f"  {marca} {c.nome:<13} {c.detalhe}  ({c.segundos:.1f}s)")

    n_ok = sum(c.ok for c in checagens)
    if mutacao:
        detectadas = len(checagens) - n_ok
        print(f"\n  Mutação detectada por {detectadas}/{len(checagens)} checagem(ns)")
        return 0 if detectadas == len(checagens) else 1
    print(f"\n  {n_ok}/{len(checagens)} checagens passaram")
    return 0 if n_ok == len(checagens) else 1


if __name__ == "__main__":
    logging.basicConfig(level=logging.WARNING, format="%(asctime)s [%(levelname)s] %(message)s", datefmt="%H:%M:%S")
    parser = argparse.ArgumentParser(description="Autovalidação do QubitFoton")
    parser.add_argument("nivel", nargs="?", choices=list(NIVEIS), default="quick")
    parser.add_argument("--mutacao", action="store_true")
    args = parser.parse_args()
    sys.exit(rodar_validacao(args.nivel, args.mutacao))
