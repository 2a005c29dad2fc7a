"""
hierarchy.py — Hierarquia de quatro equações mestras acopladas pelo fóton.

    ϱ̇¹¹ = Lϱ¹¹ + √Γ₁ ξ*[σ₋, ϱ¹⁰] − √Γ₁ ξ [σ₊, ϱ⁰¹]
    ϱ̇¹⁰ = Lϱ¹⁰ − √Γ₁ ξ [σ₊, ϱ⁰⁰]
    ϱ̇⁰¹ = Lϱ⁰¹ + √Γ₁ ξ*[σ₋, ϱ⁰⁰]
    ϱ̇⁰⁰ = Lϱ⁰⁰

    L(ϱ) = −i(Δ₀/2)[ϱ, σ_z] − (Γ/2){σ₊σ₋, ϱ} + Γ σ₋ ϱ σ₊,   Γ₁ = κΓ

Só ϱ¹¹ é o estado do qubit; os outros três blocos são auxiliares. As quatro
matrizes 2×2 viram um estado real de 32 componentes; ϱ¹⁰ é integrado
explicitamente e a relação ϱ¹⁰ = (ϱ⁰¹)† fica como verificação em tempo de
execução.

O oráculo analytic_offdiagonal avalia ϱ⁰¹ e ϱ⁰⁰ em forma fechada (integrais
E, F, G por quadratura adaptativa).

Rodar individualmente:
    python src/engine/hierarchy.py
"""

import logging
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd
from scipy.integrate import quad

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from core.config import QUAD_LIMITE_SUBINTERVALOS, QUAD_TOL
from core.erros import FalhaQuadratura
from core.params import PhysParams, QubitState, SolverConfig
from core.profiles import PhotonProfile, SampledProfile, ZeroProfile, profile_eval
from engine.integrador import integrar, validar_grade

log = logging.getLogger(__name__)

# ── Operadores (base g=0, e=1) ───────────────────────────────────────────────
SIGMA_MENOS = np.array([[0, 1], [0, 0]], dtype=complex)   # |g⟩⟨e|
SIGMA_MAIS  = np.array([[0, 0], [1, 0]], dtype=complex)   # |e⟩⟨g|
SIGMA_Z     = np.array([[-1, 0], [0, 1]], dtype=complex)
PROJ_E      = SIGMA_MAIS @ SIGMA_MENOS                     # |e⟩⟨e|

# ordem dos blocos no vetor de estado
I11, I10, I01, I00 = range(4)


def comutador(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def gerador_livre(x: np.ndarray, params: PhysParams) -> np.ndarray:
    """L aplicado a uma matriz ou pilha (..., 2, 2)."""
    g = params.gamma_total
    return (
        -0.5j * params.delta0 * comutador(x, SIGMA_Z)
        - 0.5 * g * (PROJ_E @ x + x @ PROJ_E)
        + g * SIGMA_MENOS @ x @ SIGMA_MAIS
    )


def sigma_xi(xi: complex) -> tuple[np.ndarray, np.ndarray]:
    """Par hermitiano σ^ξ_x = ξ*σ₋ + ξσ₊, σ^ξ_y = i(ξ*σ₋ − ξσ₊)."""
    sx = np.conj(xi) * SIGMA_MENOS + xi * SIGMA_MAIS
    sy = 1j * (np.conj(xi) * SIGMA_MENOS - xi * SIGMA_MAIS)
    return sx, sy


# ── Tipos ─────────────────────────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class HierarchyState:
    rho11: np.ndarray
    rho10: np.ndarray
    rho01: np.ndarray
    rho00: np.ndarray

    @classmethod
    def inicial(cls, rho0: QubitState) -> "HierarchyState":
        rho = rho0.to_matrix()
        zero = np.zeros((2, 2), dtype=complex)
        return cls(rho.copy(), zero.copy(), zero.copy(), rho.copy())

    @classmethod
    def de_blocos(cls, blocos: np.ndarray) -> "HierarchyState":
        blocos = np.asarray(blocos, dtype=complex).reshape(4, 2, 2)
        return cls(*(blocos[i].copy() for i in range(4)))

    def blocos(self) -> np.ndarray:
        return np.stack([self.rho11, self.rho10, self.rho01, self.rho00])

    @property
    def sistema(self) -> QubitState:
        return QubitState.from_matrix(self.rho11)


@dataclass(frozen=True, eq=False)
class AuxiliarySolution:
    e_fn: complex
    f_fn: complex
    g_fn: complex


@dataclass(frozen=True, eq=False)
class HierarchyTrajectory:
    t: np.ndarray
    blocos: np.ndarray          # (n, 4, 2, 2)

    def __len__(self) -> int:
        return self.t.size

    def estado(self, i: int) -> HierarchyState:
        return HierarchyState.de_blocos(self.blocos[i])

    @property
    def pe(self) -> np.ndarray:
        return self.blocos[:, I11, 1, 1].real

    @property
    def coherence(self) -> np.ndarray:
        return self.blocos[:, I11, 0, 1]

    def estados(self) -> list[QubitState]:
        return [QubitState.from_matrix(self.blocos[i, I11]) for i in range(len(self))]

    def to_frame(self) -> pd.DataFrame:
        coh = self.coherence
        return pd.DataFrame({"t": self.t, "pe": self.pe, "re_coh": coh.real, "im_coh": coh.imag})

    def desvio_traco(self) -> float:
        """max |tr ϱ¹¹ − 1|, |tr ϱ⁰⁰ − 1| na trajetória."""
        tr11 = np.trace(self.blocos[:, I11], axis1=1, axis2=2)
        tr00 = np.trace(self.blocos[:, I00], axis1=1, axis2=2)
        return float(max(np.max(np.abs(tr11 - 1)), np.max(np.abs(tr00 - 1))))

    def desvio_adjunto(self) -> float:
        """max ‖ϱ¹⁰ − (ϱ⁰¹)†‖ na trajetória."""
        dif = self.blocos[:, I10] - np.conj(np.swapaxes(self.blocos[:, I01], 1, 2))
        return float(np.max(np.abs(dif)))

    def menor_autovalor(self) -> float:
        rho = self.blocos[:, I11]
        rho = 0.5 * (rho + np.conj(np.swapaxes(rho, 1, 2)))
        return float(np.min(np.linalg.eigvalsh(rho)))


# ── Lado direito ──────────────────────────────────────────────────────────────

def _derivada_blocos(blocos: np.ndarray, xi: complex, params: PhysParams,
                     escala_gamma1: float = 1.0) -> np.ndarray:
    r11, r10, r01, r00 = blocos
    g1 = math.sqrt(escala_gamma1 * params.gamma1)
    xic = np.conj(xi)
    d = gerador_livre(blocos, params)
    d[I11] += g1 * (xic * comutador(SIGMA_MENOS, r10) - xi * comutador(SIGMA_MAIS, r01))
    d[I10] -= g1 * xi * comutador(SIGMA_MAIS, r00)
    d[I01] += g1 * xic * comutador(SIGMA_MENOS, r00)
    return d


def hierarchy_rhs(state: HierarchyState, t: float, params: PhysParams,
                  profile: PhotonProfile, escala_gamma1: float = 1.0) -> HierarchyState:
    """
    Derivada temporal dos quatro blocos.

    escala_gamma1 multiplica Γ₁ dentro do acoplamento; o valor 1 é a física.
    Existe só para o teste de mutação do validador.
    """
    xi = profile_eval(profile, t)
    return HierarchyState.de_blocos(_derivada_blocos(state.blocos(), xi, params, escala_gamma1))


def hermitian_blocks(state: HierarchyState) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(ϱ¹, ϱ², ϱ³, ϱ⁴) = (ϱ¹¹, ϱ⁰¹+ϱ¹⁰, −i(ϱ⁰¹−ϱ¹⁰), ϱ⁰⁰), todos hermitianos."""
    return (
        state.rho11,
        state.rho01 + state.rho10,
        -1j * (state.rho01 - state.rho10),
        state.rho00,
    )


def hermitian_rhs(blocos: tuple, t: float, params: PhysParams,
                  profile: PhotonProfile) -> tuple[np.ndarray, ...]:
    """Mesma hierarquia escrita sobre os blocos hermitianos, com σ^ξ_x e σ^ξ_y."""
    r1, r2, r3, r4 = blocos
    sx, sy = sigma_xi(profile_eval(profile, t))
    g1 = math.sqrt(params.gamma1)
    return (
        gerador_livre(r1, params) - 0.5j * g1 * (comutador(sy, r2) + comutador(sx, r3)),
        gerador_livre(r2, params) - 1j * g1 * comutador(sy, r4),
        gerador_livre(r3, params) - 1j * g1 * comutador(sx, r4),
        gerador_livre(r4, params),
    )


# ── Solução numérica ──────────────────────────────────────────────────────────

def _semigrupo_livre(rho0: QubitState, params: PhysParams, grade: np.ndarray) -> np.ndarray:
    """ξ ≡ 0: ϱ¹¹ = ϱ⁰⁰ = e^{Lt}ρ(0) exato e ϱ¹⁰ = ϱ⁰¹ = 0."""
    g = params.gamma_total
    pe = rho0.pe * np.exp(-g * grade)
    coh = rho0.coherence * np.exp((-1j * params.delta0 - 0.5 * g) * grade)
    rho = np.empty((grade.size, 2, 2), dtype=complex)
    rho[:, 0, 0] = 1.0 - pe
    rho[:, 1, 1] = pe
    rho[:, 0, 1] = coh
    rho[:, 1, 0] = np.conj(coh)
    blocos = np.zeros((grade.size, 4, 2, 2), dtype=complex)
    blocos[:, I11] = rho
    blocos[:, I00] = rho
    return blocos


def solve_hierarchy(rho0: QubitState, params: PhysParams, profile: PhotonProfile,
                    grid, cfg: SolverConfig | None = None,
                    escala_gamma1: float = 1.0) -> HierarchyTrajectory:
    """
    Integra a hierarquia a partir de ϱ¹¹ = ϱ⁰⁰ = ρ(0), ϱ⁰¹ = ϱ¹⁰ = 0.

    A trajetória guarda os quatro blocos; .estados() devolve ϱ¹¹ como QubitState.
    """
    cfg = cfg or SolverConfig()
    grade = validar_grade(grid)
    if isinstance(profile, ZeroProfile):
        log.debug("Perfil nulo: semigrupo livre em forma fechada")
        return HierarchyTrajectory(grade, _semigrupo_livre(rho0, params, grade))
    z0 = HierarchyState.inicial(rho0).blocos().reshape(-1)

    def rhs(t, z):
        xi = profile_eval(profile, t)
        return _derivada_blocos(z.reshape(4, 2, 2), xi, params, escala_gamma1).reshape(-1)

    z = integrar(rhs, z0, grade, profile, cfg)
    trajetoria = HierarchyTrajectory(grade, z.reshape(-1, 4, 2, 2))

    desvio = trajetoria.desvio_adjunto()
    if desvio > 10 * max(cfg.abs_tol, cfg.rel_tol):
        log.warning(f"ϱ¹⁰ difere de (ϱ⁰¹)† por {desvio:.3g}")
    log.debug(f"Hierarquia: {len(grade)} pontos, desvio de traço {trajetoria.desvio_traco():.2e}")
    return trajetoria


# ── Oráculo fechado para ϱ⁰¹ e ϱ⁰⁰ ───────────────────────────────────────────

def _quad_complexa(f, a: float, b: float, tol: float, pontos: list[float], onde: str) -> complex:
    resultado = 0j
    limite = max(QUAD_LIMITE_SUBINTERVALOS, 2 * len(pontos) + 50)
    for parte, unidade in ((np.real, 1.0), (np.imag, 1j)):
        valor, erro, *_ = quad(
            lambda s: float(parte(f(s))), a, b,
            epsabs=0.5 * tol, epsrel=0.0,
            points=pontos or None, limit=limite, full_output=1,
        )
        if erro > tol:
            raise FalhaQuadratura(erro, tol, onde)
        resultado += unidade * valor
    return resultado


def _pontos_quebra(profile: PhotonProfile, t: float) -> list[float]:
    pontos = {p for p in profile.descontinuidades() if 0.0 < p < t}
    if isinstance(profile, SampledProfile):
        pontos |= {float(s) for s in profile.times if 0.0 < s < t}
    return sorted(pontos)


def auxiliary_solution(t: float, params: PhysParams, profile: PhotonProfile,
                       quad_tol: float = QUAD_TOL) -> AuxiliarySolution:
    """E(t), F(t), G(t) por quadratura adaptativa das integrais que os definem."""
    if t <= 0:
        return AuxiliarySolution(0j, 0j, 0j)
    g, d0 = params.gamma_total, params.delta0
    raiz = math.sqrt(params.gamma1)
    pontos = _pontos_quebra(profile, t)

    def xic(s):
        return np.conj(profile_eval(profile, s))

    # fatores e^{...(s−t)} ficam dentro do integrando para não estourar
    i_e = _quad_complexa(lambda s: xic(s) * np.exp((1j * d0 + 0.5 * g) * s - g * t), 0.0, t, quad_tol, pontos, "E(t)")
    i_f = _quad_complexa(lambda s: xic(s) * np.exp((1j * d0 - 0.5 * g) * s + (-1j * d0 - 0.5 * g) * t), 0.0, t, quad_tol, pontos, "F(t)")
    i_g = _quad_complexa(lambda s: xic(s) * np.exp((1j * d0 + 0.5 * g) * (s - t)), 0.0, t, quad_tol, pontos, "G(t)")
    return AuxiliarySolution(raiz * i_e, 2.0 * raiz * i_f, -raiz * i_g)


def analytic_offdiagonal(t: float, rho0: QubitState, params: PhysParams,
                         profile: PhotonProfile,
                         quad_tol: float = QUAD_TOL) -> tuple[np.ndarray, np.ndarray]:
    """(ϱ⁰¹(t), ϱ⁰⁰(t)) em forma fechada; oráculo dos blocos internos do integrador."""
    g, d0 = params.gamma_total, params.delta0
    pe, rho_ge = rho0.pe, rho0.coherence
    rho_eg = np.conj(rho_ge)
    aux = auxiliary_solution(t, params, profile, quad_tol)

    decai = math.exp(-g * t)
    rho00 = np.array(
        [[1.0 - pe * decai, rho_ge * np.exp((-1j * d0 - 0.5 * g) * t)],
         [rho_eg * np.exp((1j * d0 - 0.5 * g) * t), pe * decai]],
        dtype=complex,
    )
    rho01 = np.array(
        [[aux.e_fn * rho_eg, aux.f_fn * pe + aux.g_fn],
         [0.0, -aux.e_fn * rho_eg]],
        dtype=complex,
    )
    return rho01, rho00


if __name__ == "__main__":
    logging.basicConfig(level=logging.INFO, format="%(asctime)s [%(levelname)s] %(message)s", datefmt="%H:%M:%S")
    from core.profiles import ExponentialProfile
    p = PhysParams(1.0, 1.0, 0.0)
    traj = solve_hierarchy(QubitState.ground(), p, ExponentialProfile(1.0), np.linspace(0, 2, 21))
    print(f"  P_e(2) = {traj.pe[-1]:.6f}  (esperado 4/e² = {4 * math.exp(-2):.6f})")
