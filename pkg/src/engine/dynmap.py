"""
dynmap.py — Mapa dinâmico Λ_t do qubit: coeficientes A(t), B(t), C(t).

    P_e(t) = A(t) + B(t)·P_e(0)        ρ_ge(t) = C(t)·ρ_ge(0)

As integrais aninhadas de B e C viram variáveis de estado de uma única EDO
aumentada, fechada sob derivação:

    J' = ξ e^{(−iΔ₀+Γ/2)t}          K' = ξ e^{(−iΔ₀−Γ/2)t}
    M' = ξ* e^{(iΔ₀+Γ/2)t} K        N' = ξ* e^{(iΔ₀−Γ/2)t} J

    A = κΓ e^{−Γt}|J|²
    B = e^{−Γt}(1 − 4κΓ Re M)
    C = e^{(−iΔ₀−Γ/2)t}(1 − 2κΓ N)

As derivadas Ȧ, Ḃ, Ċ saem da regra do produto, nunca de diferenças finitas.
coefficients_by_quadrature é o caminho independente (quad_vec adaptativo)
usado como oráculo.
"""

import logging
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np
import pandas as pd
from scipy.integrate import quad_vec
from scipy.optimize import bisect, minimize_scalar

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from core.config import (
    EPS_SINGULAR, LIMIAR_MINIMO_C, QUAD_EPSREL, QUAD_ERRO_FATAL, QUAD_LIMITE_SUBINTERVALOS, TOL_BISSECAO,
)
from core.erros import FalhaQuadratura
from core.params import PhysParams, QubitState, SolverConfig
from core.profiles import PhotonProfile
from engine.integrador import avancar, integrar, validar_grade

log = logging.getLogger(__name__)


# ── Tipos ─────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class AuxIntegrals:
    j: complex
    k: complex
    m: complex
    n: complex


@dataclass(frozen=True)
class MapCoefficients:
    a: float
    b: float
    c: complex
    da: float = 0.0
    db: float = 0.0
    dc: complex = 0j
    t: float = 0.0

    @classmethod
    def identidade(cls) -> "MapCoefficients":
        return cls(0.0, 1.0, 1 + 0j)


@dataclass(frozen=True)
class Singularity:
    t: float
    which: str          # "B" ou "C"

    def as_dict(self) -> dict:
        return {"t": self.t, "which": self.which}


@dataclass(frozen=True, eq=False)
class CoefficientTrajectory:
    t: np.ndarray
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    da: np.ndarray
    db: np.ndarray
    dc: np.ndarray
    aux: np.ndarray | None = None                                  # (n, 4): J, K, M, N
    c_real: bool = False                                           # C real por construção
    avaliador: Callable[[float], MapCoefficients] | None = None    # valor contínuo em t
    erro_quadratura: float = 0.0                                   # estimativa, só no caminho por quadratura

    def __len__(self) -> int:
        return self.t.size

    def __getitem__(self, i: int) -> MapCoefficients:
        return MapCoefficients(
            float(self.a[i]), float(self.b[i]), complex(self.c[i]),
            float(self.da[i]), float(self.db[i]), complex(self.dc[i]), float(self.t[i]),
        )

    def integrais(self, i: int) -> AuxIntegrals:
        if self.aux is None:
            raise ValueError("trajetória sem integrais auxiliares")
        return AuxIntegrals(*(complex(v) for v in self.aux[i]))

    @property
    def det_bloch(self) -> np.ndarray:
        return self.b * np.abs(self.c) ** 2

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "t": self.t,
            "A": self.a, "B": self.b,
            "reC": self.c.real, "imC": self.c.imag,
            "dA": self.da, "dB": self.db,
            "re_dC": self.dc.real, "im_dC": self.dc.imag,
            "detBloch": self.det_bloch,
        })


# ── Montagem a partir de (J, K, M, N) ────────────────────────────────────────

def _montar(t, aux: np.ndarray, xi, params: PhysParams):
    """Arrays (a, b, c, da, db, dc) pelas fórmulas fechadas e regra do produto."""
    g, d0, kg = params.gamma_total, params.delta0, params.kappa * params.gamma_total
    t = np.asarray(t, dtype=float)
    xi = np.asarray(xi, dtype=complex)
    j, k, m, n = (aux[..., i] for i in range(4))
    decai = np.exp(-g * t)
    lam1 = -1j * d0 - 0.5 * g
    fase = np.exp(lam1 * t)                        # e^{(−iΔ₀−Γ/2)t}

    a = kg * decai * np.abs(j) ** 2
    b = decai * (1.0 - 4.0 * kg * m.real)
    c = fase * (1.0 - 2.0 * kg * n)
    da = -g * a + 2.0 * kg * np.real(xi * fase * np.conj(j))
    db = -g * b - 4.0 * kg * np.real(np.conj(xi) * np.conj(fase) * k)
    dc = lam1 * c - 2.0 * kg * decai * np.conj(xi) * j
    return a, b, c, da, db, dc


def _rhs_aux(profile: PhotonProfile, params: PhysParams):
    g, d0 = params.gamma_total, params.delta0

    def rhs(t, z):
        xi = complex(profile.avaliar(t))
        xic = xi.conjugate()
        j, k = z[0], z[1]
        return np.array([
            xi * np.exp((-1j * d0 + 0.5 * g) * t),
            xi * np.exp((-1j * d0 - 0.5 * g) * t),
            xic * np.exp((1j * d0 + 0.5 * g) * t) * k,
            xic * np.exp((1j * d0 - 0.5 * g) * t) * j,
        ])

    return rhs


def _c_real(params: PhysParams, profile: PhotonProfile) -> bool:
    return params.delta0 == 0.0 and bool(profile.real)


# ── Operações ─────────────────────────────────────────────────────────────────

def solve_coefficients(params: PhysParams, profile: PhotonProfile, grid,
                       cfg: SolverConfig | None = None) -> CoefficientTrajectory:
    """Integra (J, K, M, N) e monta A, B, C com derivadas em cada ponto da grade."""
    cfg = cfg or SolverConfig()
    grade = validar_grade(grid)
    rhs = _rhs_aux(profile, params)
    aux = integrar(rhs, np.zeros(4, dtype=complex), grade, profile, cfg)
    xi = profile.avaliar(grade)
    a, b, c, da, db, dc = _montar(grade, aux, xi, params)

    def avaliador(t: float) -> MapCoefficients:
        i = max(0, int(np.searchsorted(grade, t, side="right")) - 1)
        z = avancar(rhs, aux[i], float(grade[i]), float(t), profile, cfg)
        vals = _montar(t, z, profile.avaliar(t), params)
        return MapCoefficients(*(complex(v) if np.iscomplexobj(v) else float(v) for v in vals), t=float(t))

    log.debug(f"Coeficientes: {len(grade)} pontos, min B = {np.min(b):.4g}, min |C| = {np.min(np.abs(c)):.4g}")
    return CoefficientTrajectory(grade, a, b, c, da, db, dc, aux=aux,
                                 c_real=_c_real(params, profile), avaliador=avaliador)


def _integral_unitaria(f: Callable[[float], np.ndarray], tol: float, onde: str) -> tuple[np.ndarray, float]:
    """
    ∫₀¹ f(u) du para f vetorial complexa, adaptativo em u; devolve (valor, erro estimado).

    A meta é max(tol, QUAD_EPSREL·|valor|). Erro acima da meta só é registrado;
    aborta com FalhaQuadratura quando passa de QUAD_ERRO_FATAL·max(1, |valor|).
    """
    def f_real(u):
        z = f(u)
        return np.concatenate([z.real, z.imag])

    res, erro = quad_vec(f_real, 0.0, 1.0, epsabs=tol, epsrel=QUAD_EPSREL, norm="max",
                         limit=QUAD_LIMITE_SUBINTERVALOS)
    escala = max(1.0, float(np.max(np.abs(res))) if res.size else 0.0)
    if erro > QUAD_ERRO_FATAL * escala:
        raise FalhaQuadratura(float(erro), QUAD_ERRO_FATAL * escala, onde)
    if erro > max(tol, QUAD_EPSREL * escala):
        log.debug(f"Quadratura ({onde}) parou com erro estimado {erro:.2e}")
    n = res.size // 2
    return res[:n] + 1j * res[n:], float(erro)


def coefficients_by_quadrature(params: PhysParams, profile: PhotonProfile, grid,
                               tol: float = 1e-12) -> CoefficientTrajectory:
    """
    Mesmos coeficientes por quadratura direta das integrais simples e duplas.

    Cada intervalo [t_{i−1}, t_i] da grade contribui um incremento; todos os
    intervalos são integrados juntos como um vetor (s = a_i + v·h_i). O maior
    erro estimado, já multiplicado pelo passo, sai em erro_quadratura.
    """
    grade = validar_grade(grid)
    g, d0 = params.gamma_total, params.delta0
    ini, h = grade[:-1], np.diff(grade)
    erros = [0.0]

    def f_j(s):
        return profile.avaliar(s) * np.exp((-1j * d0 + 0.5 * g) * s)

    def f_k(s):
        return profile.avaliar(s) * np.exp((-1j * d0 - 0.5 * g) * s)

    def f_m(s):
        return np.conj(profile.avaliar(s)) * np.exp((1j * d0 + 0.5 * g) * s)

    def f_n(s):
        return np.conj(profile.avaliar(s)) * np.exp((1j * d0 - 0.5 * g) * s)

    def integrar_unitaria(f, onde):
        valor, erro = _integral_unitaria(f, tol, onde)
        erros.append(erro * float(np.max(h)))
        return valor

    def incremento(f):
        return h * integrar_unitaria(lambda v: f(ini + v * h), "incremento simples")

    def acumular(incr):
        return np.concatenate([[0j], np.cumsum(incr)])

    j = acumular(incremento(f_j))
    k = acumular(incremento(f_k))

    def incremento_duplo(f_fora, f_dentro, ancora):
        # ∫_{a}^{a+h} f_fora(s)[ancora + ∫_{a}^{s} f_dentro] ds
        def externo(v):
            s = ini + v * h
            interno = integrar_unitaria(lambda u: f_dentro(ini + u * v * h), "integral interna")
            return f_fora(s) * (ancora + v * h * interno)
        return h * integrar_unitaria(externo, "integral dupla")

    m = acumular(incremento_duplo(f_m, f_k, k[:-1]))
    n = acumular(incremento_duplo(f_n, f_j, j[:-1]))

    aux = np.stack([j, k, m, n], axis=1)
    a, b, c, da, db, dc = _montar(grade, aux, profile.avaliar(grade), params)
    log.debug(f"Quadratura: {len(grade)} pontos, maior erro estimado {max(erros):.2e}")
    return CoefficientTrajectory(grade, a, b, c, da, db, dc, aux=aux, c_real=_c_real(params, profile),
                                 erro_quadratura=max(erros))


def apply_map(coeffs: MapCoefficients, rho0: QubitState) -> QubitState:
    return QubitState(coeffs.a + coeffs.b * rho0.pe, coeffs.c * rho0.coherence)


def excited_population(coeffs: MapCoefficients, pe0: float) -> float:
    return coeffs.a + coeffs.b * pe0


def map_eigenvalues(coeffs: MapCoefficients) -> tuple[float, complex, complex]:
    """Autovalores não triviais de Λ_t: B, C, C*."""
    return coeffs.b, coeffs.c, complex(np.conj(coeffs.c))


def choi_matrix(coeffs: MapCoefficients) -> np.ndarray:
    """Σ_ij |i⟩⟨j| ⊗ Λ(|i⟩⟨j|) na base (g, e)."""
    a, b, c = coeffs.a, coeffs.b, coeffs.c
    imagens = {
        (0, 0): np.array([[1 - a, 0], [0, a]], dtype=complex),
        (1, 1): np.array([[1 - a - b, 0], [0, a + b]], dtype=complex),
        (0, 1): np.array([[0, c], [0, 0]], dtype=complex),
        (1, 0): np.array([[0, 0], [np.conj(c), 0]], dtype=complex),
    }
    choi = np.zeros((4, 4), dtype=complex)
    for (i, j), imagem in imagens.items():
        unidade = np.zeros((2, 2), dtype=complex)
        unidade[i, j] = 1.0
        choi += np.kron(unidade, imagem)
    return choi


def choi_min_eig(coeffs: MapCoefficients) -> float:
    """Menor autovalor do Choi; o mapa é CP sse ≥ 0."""
    return float(np.min(np.linalg.eigvalsh(choi_matrix(coeffs))))


def bloch_determinant(coeffs: MapCoefficients) -> float:
    return float(coeffs.b * abs(coeffs.c) ** 2)


# ── Singularidades ────────────────────────────────────────────────────────────

def _valor_continuo(traj: CoefficientTrajectory, campo: str):
    if traj.avaliador is not None:
        return lambda t: getattr(traj.avaliador(t), campo)
    log.debug("Trajetória sem avaliador contínuo; refinando sobre interpolação linear")
    dados = getattr(traj, campo)
    return lambda t: complex(np.interp(t, traj.t, dados.real) + 1j * np.interp(t, traj.t, np.imag(dados)))


def _zeros_por_sinal(traj: CoefficientTrajectory, valores: np.ndarray, f, rotulo: str) -> list[Singularity]:
    achados = []
    for i in range(len(traj) - 1):
        v0, v1 = valores[i], valores[i + 1]
        if v0 == 0.0:
            achados.append(Singularity(float(traj.t[i]), rotulo))
        elif v0 * v1 < 0:
            t0 = bisect(f, traj.t[i], traj.t[i + 1], xtol=1e-14, maxiter=200)
            residuo = abs(f(t0))
            if residuo >= TOL_BISSECAO:
                log.warning(f"Zero de {rotulo} em t≈{t0:.10g} com resíduo {residuo:.2e}")
            achados.append(Singularity(float(t0), rotulo))
    if valores[-1] == 0.0:
        achados.append(Singularity(float(traj.t[-1]), rotulo))
    return achados


def find_singularities(traj: CoefficientTrajectory) -> list[Singularity]:
    """Zeros de B (troca de sinal) e de C (troca de sinal de Re C ou mínimo de |C|)."""
    b_cont = _valor_continuo(traj, "b")
    achados = _zeros_por_sinal(traj, traj.b, lambda t: float(np.real(b_cont(t))), "B")

    c_cont = _valor_continuo(traj, "c")
    if traj.c_real:
        achados += _zeros_por_sinal(traj, traj.c.real, lambda t: float(np.real(c_cont(t))), "C")
    else:
        modulo = np.abs(traj.c)
        for i in range(1, len(traj) - 1):
            if modulo[i] <= modulo[i - 1] and modulo[i] <= modulo[i + 1] and modulo[i] < LIMIAR_MINIMO_C:
                res = minimize_scalar(
                    lambda t: abs(c_cont(t)) ** 2,
                    bounds=(traj.t[i - 1], traj.t[i + 1]),
                    method="bounded",
                    options={"xatol": 1e-14},
                )
                if math.sqrt(max(res.fun, 0.0)) < EPS_SINGULAR:
                    achados.append(Singularity(float(res.x), "C"))

    achados.sort(key=lambda s: s.t)
    if achados:
        log.info(f"{len(achados)} singularidade(s): " + ", ".join(f"{s.which}@{s.t:.6g}" for s in achados))
    return achados
