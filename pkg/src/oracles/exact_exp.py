"""
exact_exp.py — Oráculo fechado para o perfil exponencial ξ = √(αΓ)e^{−αΓt/2}.

Cada coeficiente é uma soma de termos c·x^n·e^{λx}, com x = Γt. Derivadas
são exatas sobre os termos; razões (taxas) fatoram o expoente dominante
antes de somar, o que evita estouro para αΓt grande.

Ramos de exp_coefficients:
    Δ₀ ≠ 0                   formas gerais (fora de ressonância)
    Δ₀ = 0                   formas ressonantes
    Δ₀ = 0, |α−1| < limiar   formas ressonantes em ε = α − 1 com exprel, sem
                             denominadores (α − 1); em ε = 0 são as de α = 1

Em t = 0 todos os ramos devolvem exatamente (A, B, C) = (0, 1, 1).

Rodar individualmente:
    python src/oracles/exact_exp.py
"""

import logging
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.optimize import bisect, minimize_scalar
from scipy.special import exprel

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from core.config import EPS_SINGULAR, LIMIAR_RAMO_ALFA
from core.erros import ConfiguracaoInvalida
from core.params import PhysParams
from engine.dynmap import CoefficientTrajectory, MapCoefficients
from indicators.rates import GeneratorRates, RatesTrajectory, Status, rates_from_arrays

log = logging.getLogger(__name__)

# termo = (coeficiente, potência de x, expoente em x)
Termo = tuple[complex, int, complex]


@dataclass(frozen=True)
class ExpParams:
    base: PhysParams
    alpha: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise ConfiguracaoInvalida("alpha", f"α deve ser > 0 (recebido {self.alpha})")

    @property
    def ressonante(self) -> bool:
        return self.base.delta0 == 0.0


# ── Álgebra de somas exponenciais ─────────────────────────────────────────────

def _avaliar(termos: list[Termo], x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    total = np.zeros(x.shape, dtype=complex)
    for c, n, lam in termos:
        total = total + c * x ** n * np.exp(lam * x)
    return total


def _derivar(termos: list[Termo]) -> list[Termo]:
    saida = []
    for c, n, lam in termos:
        if n:
            saida.append((c * n, n - 1, lam))
        if lam != 0:
            saida.append((c * lam, n, lam))
    return saida


def _conjugar(termos: list[Termo]) -> list[Termo]:
    return [(np.conj(c), n, np.conj(lam)) for c, n, lam in termos]


def _parte_real(termos: list[Termo]) -> list[Termo]:
    return [(0.5 * c, n, lam) for c, n, lam in termos + _conjugar(termos)]


def _escalar(termos: list[Termo], k: complex) -> list[Termo]:
    return [(k * c, n, lam) for c, n, lam in termos]


def _juntar(termos: list[Termo]) -> list[Termo]:
    """Soma coeficientes de termos com mesmo (n, λ) e descarta os nulos."""
    soma: dict[tuple[int, complex], complex] = {}
    for c, n, lam in termos:
        chave = (n, complex(lam))
        soma[chave] = soma.get(chave, 0.0) + c
    return [(c, n, lam) for (n, lam), c in soma.items() if c != 0]


def _produto(t1: list[Termo], t2: list[Termo]) -> list[Termo]:
    return [(c1 * c2, n1 + n2, l1 + l2) for c1, n1, l1 in t1 for c2, n2, l2 in t2]


def _razao(num: list[Termo], den: list[Termo], x: np.ndarray) -> np.ndarray:
    """Σnum/Σden com o maior Re λ fatorado dos dois lados."""
    desloc = max(float(np.real(lam)) for _, _, lam in num + den)
    num_d = [(c, n, lam - desloc) for c, n, lam in num]
    den_d = [(c, n, lam - desloc) for c, n, lam in den]
    with np.errstate(divide="ignore", invalid="ignore"):
        return _avaliar(num_d, x) / _avaliar(den_d, x)


# ── Termos dos coeficientes ──────────────────────────────────────────────────

def _termos_fora_ressonancia(alpha: float, d: float):
    """
    Partes de A, B, C proporcionais a κ, e o expoente livre de C; d = Δ₀/Γ.

    Singular só em α = 1, d = 0.
    """
    p = -1j * d + 0.5 * (1 - alpha)
    q = 1j * d - 0.5 * (1 + alpha)
    r = -1j * d - 0.5 * (1 + alpha)
    u = 1j * d + 0.5 * (1 - alpha)

    k = alpha / abs(p) ** 2
    lam_a = -1j * d - 0.5 * (alpha + 1)
    termos_a = [(k, 0, -alpha), (k, 0, -1.0), (-k, 0, lam_a), (-k, 0, np.conj(lam_a))]

    interno_b = _escalar([
        (1.0, 0, -1.0),
        (-1.0, 0, -(1.0 + alpha)),
        (-alpha / u, 0, q),
        (alpha / u, 0, -1.0),
    ], 1.0 / r)
    termos_b = _escalar(_parte_real(interno_b), -4.0)

    lam1 = -1j * d - 0.5
    lam2 = -1j * d - (0.5 + alpha)
    lam3 = -(1.0 + 0.5 * alpha)
    termos_c = _escalar([
        (1.0, 0, lam1),
        (-1.0, 0, lam2),
        (-alpha / q, 0, lam3),
        (alpha / q, 0, lam1),
    ], -2.0 / p)
    return termos_a, termos_b, termos_c, lam1


def _termos_ressonantes(alpha: float):
    """Δ₀ = 0, α ≠ 1: B = e^{−x} + κ(β₁e^{−(1+α)x/2} + β₂e^{−x} + β₃e^{−(1+α)x})."""
    a = alpha
    k = 4.0 * a / (1.0 - a) ** 2
    termos_a = [(k, 0, -1.0), (-2.0 * k, 0, -0.5 * (1 + a)), (k, 0, -a)]
    termos_b = [
        (16.0 * a / (a * a - 1.0), 0, -0.5 * (1 + a)),
        (-8.0 / (a - 1.0), 0, -1.0),
        (-8.0 / (a + 1.0), 0, -(1.0 + a)),
    ]
    den = a * a - 1.0
    termos_c = [
        ((1 - a) * 4.0 / den, 0, -0.5),
        (-4.0 * (1 + a) / den, 0, -(0.5 + a)),
        (8.0 * a / den, 0, -(1.0 + 0.5 * a)),
    ]
    return termos_a, termos_b, termos_c, -0.5


def _coeficientes_ramo(x: np.ndarray, partes, gamma: float, kappa: float):
    """A = κ·a', B = e^{−x} + κ·b', C = e^{λ₁x} + κ·c'; derivadas em t."""
    pa, pb, pc, lam1 = partes
    ta = _escalar(pa, kappa)
    tb = _juntar([(1.0, 0, -1.0)] + _escalar(pb, kappa))
    tc = _juntar([(1.0, 0, lam1)] + _escalar(pc, kappa))
    a = _avaliar(ta, x).real
    b = _avaliar(tb, x).real
    c = _avaliar(tc, x)
    da = gamma * _avaliar(_derivar(ta), x).real
    db = gamma * _avaliar(_derivar(tb), x).real
    dc = gamma * _avaliar(_derivar(tc), x)
    return a, b, c, da, db, dc


def _ressonante_perto_de_1(x: np.ndarray, alpha: float, kappa: float, gamma: float):
    """
    Δ₀ = 0 com |α − 1| pequeno, sem denominadores (α − 1).

    Com ε = α − 1, u = e^{−εx/2} e w = (1 − u)/ε = (x/2)·exprel(−εx/2):
        A = 4ακ e^{−x} w²
        B = e^{−x} + 8κ/(α+1) [e^{−x}(2u − 1 − 2w) − e^{−2x}u²]
        C = e^{−x/2} + 4κ/(α+1) [−e^{−x/2} + e^{−3x/2}(2uw + 2u − u²)]
    Em ε = 0 coincide com as formas de α = 1; em x = 0 dá (0, 1, 1) sem resíduo.
    """
    eps = alpha - 1.0
    x = np.asarray(x, dtype=float)
    u = np.exp(-0.5 * eps * x)
    w = 0.5 * x * exprel(-0.5 * eps * x)
    e1, e_meio = np.exp(-x), np.exp(-0.5 * x)
    e_3meios = e_meio * e1
    kb = 8.0 * kappa / (alpha + 1.0)
    kc = 4.0 * kappa / (alpha + 1.0)
    p = 2.0 * u * w + 2.0 * u - u * u
    dp = alpha * u * u - eps * u * (w + 1.0)          # dp/dx, usando dw/dx = u/2

    a = 4.0 * alpha * kappa * e1 * w * w
    b = e1 + kb * (e1 * (2.0 * u - 1.0 - 2.0 * w) - e1 * e1 * u * u)
    c = e_meio + kc * (-e_meio + e_3meios * p)
    da = 4.0 * alpha * kappa * e1 * w * (u - w)
    db = -e1 + kb * (e1 * (1.0 + 2.0 * w - 2.0 * u - alpha * u) + (alpha + 1.0) * e1 * e1 * u * u)
    dc = -0.5 * e_meio + kc * (0.5 * e_meio + e_3meios * (dp - 1.5 * p))
    return a, b, c.astype(complex), gamma * da, gamma * db, gamma * dc.astype(complex)


def _perto_de_1(p: ExpParams) -> bool:
    return p.ressonante and abs(p.alpha - 1.0) < LIMIAR_RAMO_ALFA


def _coeficientes(t, p: ExpParams):
    g, kappa = p.base.gamma_total, p.base.kappa
    x = g * np.asarray(t, dtype=float)
    if _perto_de_1(p):
        a, b, c, da, db, dc = _ressonante_perto_de_1(x, p.alpha, kappa, g)
    elif p.ressonante:
        a, b, c, da, db, dc = _coeficientes_ramo(x, _termos_ressonantes(p.alpha), g, kappa)
    else:
        a, b, c, da, db, dc = _coeficientes_ramo(x, _termos_fora_ressonancia(p.alpha, p.base.delta0 / g), g, kappa)
    # identidade exata em t = 0
    origem = x == 0.0
    return np.where(origem, 0.0, a), np.where(origem, 1.0, b), np.where(origem, 1.0 + 0j, c), da, db, dc

# ── Operações públicas ────────────────────────────────────────────────────────

def exp_coefficients(t: float, p: ExpParams) -> MapCoefficients:
    if t < 0:
        raise ConfiguracaoInvalida("t", f"tempo deve ser ≥ 0 (recebido {t})")
    a, b, c, da, db, dc = _coeficientes(t, p)
    return MapCoefficients(float(a), float(b), complex(c), float(da), float(db), complex(dc), float(t))


def exp_coefficient_trajectory(grid, p: ExpParams) -> CoefficientTrajectory:
    grade = np.asarray(grid, dtype=float)
    a, b, c, da, db, dc = _coeficientes(grade, p)
    return CoefficientTrajectory(
        grade, a, b, c, da, db, dc,
        c_real=p.ressonante,
        avaliador=lambda t: exp_coefficients(float(t), p),
    )


def exp_population_ground(t: float, alpha: float, delta0: float, params: PhysParams) -> float:
    """P_e(t) partindo de |g⟩, isto é, A(t)."""
    return exp_coefficients(t, ExpParams(params.com(delta0=delta0), alpha)).a


# ── Taxas ressonantes fechadas ────────────────────────────────────────────────

def _taxas_ressonantes(x: np.ndarray, alpha: float, kappa: float, gamma: float):
    a, k = alpha, kappa
    if alpha == 1.0:
        num_p = [(8 * k * k, 2, 0.0), (16 * k * k, 1, 0.0), (8 * k * k, 2, 1.0), (-4 * k * (4 * k + 1), 1, 1.0)]
        den_p = [(4 * k, 0, 1.0), (4 * k, 1, 2.0), (-(4 * k + 1), 0, 2.0)]
        gp = gamma * _razao(num_p, den_p, x).real
        num_m = [(8 * k, 0, 0.0), (4 * k, 1, 1.0), (-(8 * k + 1), 0, 1.0)]
        den_m = [(4 * k, 0, 0.0), (4 * k, 1, 1.0), (-(4 * k + 1), 0, 1.0)]
        gm = -gp + 2 * gamma * _razao(num_m, den_m, x).real
        num_z = [(4 * k, 1, 0.0)]
        den_z = [(2 * k, 0, 0.0), (2 * k, 1, 0.0), (1 - 2 * k, 0, 1.0)]
        gz = -0.25 * (gp + gm) + 0.5 * gamma * (_razao(num_z, den_z, x).real + 1.0)
        return gp, gm, gz

    seno = [(0.5, 0, -0.5), (-0.5, 0, -0.5 * a)]
    n_mais = [(a * a - 8 * k - 1, 0, 0.5 * a), (8 * k, 0, -0.5 * a), (8 * a * k, 0, 0.5), (-8 * a * k, 0, -0.5)]
    d_b = [(8 * k * (1 - a), 0, 0.0), (16 * a * k, 0, 0.5 * (a + 1)), ((a + 1) * (a - 8 * k - 1), 0, a)]
    gp = gamma * 16 * a * k / (a - 1) * _razao(_produto(seno, n_mais), d_b, x).real
    n_menos = [(8 * k * (1 - a), 0, 0.0), (8 * a * k, 0, 0.5 * (a + 1)), (a - 8 * k - 1, 0, a)]
    gm = -gp + 2 * (a + 1) * gamma * _razao(n_menos, d_b, x).real
    n_c = [(-8 * a * (a + 2) * k, 0, 0.5 * a), (4 * (a + 1) * (2 * a + 1) * k, 0, 0.5),
           (-(a - 1) * (a - 4 * k + 1), 0, a + 0.5)]
    d_c = [(16 * a * k, 0, 0.5 * a), (-8 * (a + 1) * k, 0, 0.5),
           (2 * (a - 1) * (a - 4 * k + 1), 0, a + 0.5)]
    gz = -0.25 * (gp + gm) - gamma * _razao(n_c, d_c, x).real
    return gp, gm, gz


def _rates_arrays(t, p: ExpParams, eps_sing: float):
    if not p.ressonante:
        raise ConfiguracaoInvalida("delta0", "taxas fechadas só existem para Δ₀ = 0")
    g, k = p.base.gamma_total, p.base.kappa
    x = g * np.asarray(t, dtype=float)
    a, b, c, da, db, dc = _coeficientes(t, p)
    gp, gm, gz, _, status = rates_from_arrays(a, b, c, da, db, dc, eps_sing)
    # dentro da janela, fora de α = 1, ficam as taxas dos coeficientes
    if p.alpha == 1.0 or not _perto_de_1(p):
        gp, gm, gz = _taxas_ressonantes(x, p.alpha, k, g)
    return gp, gm, gz, np.zeros_like(gp), status


def exp_rates_resonant(t: float, p: ExpParams, eps_sing: float = EPS_SINGULAR) -> GeneratorRates:
    gp, gm, gz, om, status = _rates_arrays(float(t), p, eps_sing)
    return GeneratorRates(float(gp), float(gm), float(gz), 0.0, Status(str(status)))


def exp_rates_trajectory(grid, p: ExpParams, eps_sing: float = EPS_SINGULAR) -> RatesTrajectory:
    grade = np.asarray(grid, dtype=float)
    gp, gm, gz, om, status = _rates_arrays(grade, p, eps_sing)
    return RatesTrajectory(grade, gp, gm, gz, om, status)


def exp_asymptotic_rates(alpha: float, gamma: float, kappa: float) -> tuple[float, float, float]:
    """
    Limites t → ∞ de (γ₊, γ₋, γ_z) no caso ressonante.

    Saem dos modos mais lentos de B e C: com −Ḃ/B → bΓ e −Re(Ċ/C) → cΓ,
    o limite é (0, 2bΓ, (c − b/2)Γ). Em geral b = min(1, (1+α)/2) e c = 1/2,
    mas o modo e^{−Γt} de B some em α = 8κ + 1 e o modo e^{−Γt/2} de C some
    em α = 4κ − 1.
    """
    if not 0.0 <= kappa <= 1.0:
        raise ConfiguracaoInvalida("kappa", f"κ deve estar em [0, 1] (recebido {kappa})")
    b = 1.0 if alpha >= 1.0 else 0.5 * (1.0 + alpha)
    if math.isclose(alpha, 8.0 * kappa + 1.0, rel_tol=1e-12):
        b = 0.5 * (1.0 + alpha)
    c = 0.5
    if math.isclose(alpha, 4.0 * kappa - 1.0, rel_tol=1e-12):
        c = min(0.5 + alpha, 1.0 + 0.5 * alpha)
    return 0.0, 2.0 * b * gamma, (c - 0.5 * b) * gamma


# ── Proposições ──────────────────────────────────────────────────────────────

def invertibility_threshold(kappa: float) -> float:
    """α mínimo para mapa invertível no caso ressonante: 8κ + 1."""
    if not 0.0 <= kappa <= 1.0:
        raise ConfiguracaoInvalida("kappa", f"κ deve estar em [0, 1] (recebido {kappa})")
    return 8.0 * kappa + 1.0


def max_excitation(kappa: float, gamma: float) -> tuple[float, float, float, float]:
    """(P_max, t*, α*, Δ₀*) = (4κ/e², 2/Γ, 1, 0)."""
    if not 0.0 <= kappa <= 1.0:
        raise ConfiguracaoInvalida("kappa", f"κ deve estar em [0, 1] (recebido {kappa})")
    if not gamma > 0:
        raise ConfiguracaoInvalida("gamma", f"Γ deve ser > 0 (recebido {gamma})")
    return 4.0 * kappa * math.exp(-2.0), 2.0 / gamma, 1.0, 0.0


def refine_resonant_max(kappa: float, gamma: float) -> tuple[float, float]:
    """Máximo de A(t) em α = 1, Δ₀ = 0 por busca limitada em t."""
    p = ExpParams(PhysParams(gamma, kappa, 0.0), 1.0)
    res = minimize_scalar(lambda t: -exp_coefficients(t, p).a, bounds=(0.0, 10.0 / gamma),
                          method="bounded", options={"xatol": 1e-10})
    return -float(res.fun), float(res.x)


def search_max_excitation(kappa: float, gamma: float, alphas, deltas, t_max: float = 10.0,
                          n_t: int = 401) -> tuple[float, float, float, float]:
    """Varredura grossa de A(t) em (α, Δ₀, t); devolve (P, α, Δ₀, t) do maior valor."""
    grade = np.linspace(0.0, t_max / gamma, n_t)
    melhor = (-1.0, math.nan, math.nan, math.nan)
    for alpha in alphas:
        for delta0 in deltas:
            traj = exp_coefficient_trajectory(grade, ExpParams(PhysParams(gamma, kappa, delta0), alpha))
            i = int(np.argmax(traj.a))
            if traj.a[i] > melhor[0]:
                melhor = (float(traj.a[i]), float(alpha), float(delta0), float(grade[i]))
    return melhor


def first_b_zero(p: ExpParams, t_max: float = 50.0, n: int = 20001) -> tuple[float | None, float]:
    """(primeiro zero de B refinado por bissecção ou None, min B na grade)."""
    grade = np.linspace(0.0, t_max, n)
    b = _coeficientes(grade, p)[1]
    trocas = np.flatnonzero(b[:-1] * b[1:] < 0)
    if trocas.size == 0:
        return None, float(np.min(b))
    i = int(trocas[0])
    zero = bisect(lambda t: exp_coefficients(t, p).b, grade[i], grade[i + 1], xtol=1e-14, maxiter=200)
    return float(zero), float(np.min(b))


if __name__ == "__main__":
    logging.basicConfig(level=logging.INFO, format="%(asctime)s [%(levelname)s] %(message)s", datefmt="%H:%M:%S")
    print("\n  Limiar de invertibilidade e excitação máxima")
    for kappa in (0.25, 0.5, 1.0):
        p_max, t_star, *_ = max_excitation(kappa, 1.0)
        print(f"  κ={kappa:<5} α ≥ {invertibility_threshold(kappa):.1f}   P_max={p_max:.6f} em t={t_star:g}")
