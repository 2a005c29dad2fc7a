"""
tests/test_hierarchy.py
Testa a hierarquia de quatro blocos: lado direito, integração e o oráculo
fechado de ϱ⁰¹ e ϱ⁰⁰.

Rodar:
    pytest tests/test_hierarchy.py -v
"""

import math
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.strategies import floats

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from core.params import PhysParams, QubitState
from core.profiles import ExponentialProfile, OptimalPulse, ZeroProfile, optimal_population
from engine.hierarchy import (
    I00, I01, I10, I11, HierarchyState, analytic_offdiagonal, hermitian_blocks,
    hermitian_rhs, hierarchy_rhs, solve_hierarchy,
)


def _estado_generico(rng: np.random.Generator) -> HierarchyState:
    """Quatro blocos com a estrutura que a hierarquia preserva."""
    rho11 = QubitState.aleatorio(rng).to_matrix()
    rho00 = QubitState.aleatorio(rng).to_matrix()
    rho01 = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    rho01 -= np.trace(rho01) / 2 * np.eye(2)
    return HierarchyState(rho11, rho01.conj().T, rho01, rho00)


# ══════════════════════════════════════════════════════════════════════════════
# LADO DIREITO
# ══════════════════════════════════════════════════════════════════════════════

class TestLadoDireito:

    @settings(max_examples=40, deadline=None)
    @given(floats(min_value=0, max_value=5), floats(min_value=0, max_value=1),
           floats(min_value=-3, max_value=3))
    def test_preserva_traco(self, t, kappa, delta0):
        """tr ϱ̇¹¹ = tr ϱ̇⁰⁰ = 0 para qualquer estado e instante."""
        estado = _estado_generico(np.random.default_rng(7))
        d = hierarchy_rhs(estado, t, PhysParams(1.3, kappa, delta0), ExponentialProfile(2.0, 1.3))
        assert abs(np.trace(d.rho11)) < 1e-12
        assert abs(np.trace(d.rho00)) < 1e-12

    @settings(max_examples=40, deadline=None)
    @given(floats(min_value=0, max_value=4), floats(min_value=-2, max_value=2))
    def test_forma_hermitiana_equivalente(self, t, delta0):
        """hermitian_rhs(hermitian_blocks(s)) = hermitian_blocks(hierarchy_rhs(s))."""
        params = PhysParams(1.0, 0.7, delta0)
        perfil = ExponentialProfile(1.5)
        estado = _estado_generico(np.random.default_rng(11))
        direto = hermitian_blocks(hierarchy_rhs(estado, t, params, perfil))
        via_hermitiana = hermitian_rhs(hermitian_blocks(estado), t, params, perfil)
        for a, b in zip(direto, via_hermitiana):
            np.testing.assert_allclose(a, b, atol=1e-12)

    def test_blocos_hermitianos_sao_hermitianos(self, rng):
        """Os quatro blocos combinados são hermitianos quando ϱ¹⁰ = (ϱ⁰¹)†."""
        for bloco in hermitian_blocks(_estado_generico(rng)):
            np.testing.assert_allclose(bloco, bloco.conj().T, atol=1e-14)

    def test_sem_foton_blocos_desacoplam(self, params_padrao):
        """Com ξ ≡ 0 cada bloco evolui só por L."""
        estado = HierarchyState.inicial(QubitState(0.4, 0.2))
        d = hierarchy_rhs(estado, 0.5, params_padrao, ZeroProfile())
        np.testing.assert_allclose(d.rho10, 0.0)
        np.testing.assert_allclose(d.rho01, 0.0)
        np.testing.assert_allclose(d.rho11, d.rho00)

    def test_estado_inicial(self):
        """ϱ¹¹ = ϱ⁰⁰ = ρ(0), blocos cruzados nulos."""
        s = QubitState(0.3, 0.1j)
        blocos = HierarchyState.inicial(s).blocos()
        np.testing.assert_allclose(blocos[I11], s.to_matrix())
        np.testing.assert_allclose(blocos[I00], s.to_matrix())
        assert not blocos[I10].any() and not blocos[I01].any()


# ══════════════════════════════════════════════════════════════════════════════
# INTEGRAÇÃO
# ══════════════════════════════════════════════════════════════════════════════

class TestSolveHierarchy:

    def test_sem_foton_decaimento_exponencial(self, grade_curta):
        """ξ ≡ 0: P_e = P_e(0)e^{−Γt}, ρ_ge = ρ_ge(0)e^{(−iΔ₀−Γ/2)t}."""
        params = PhysParams(1.5, 1.0, 0.8)
        s0 = QubitState(0.6, 0.2 + 0.1j)
        traj = solve_hierarchy(s0, params, ZeroProfile(), grade_curta)
        np.testing.assert_allclose(traj.pe, 0.6 * np.exp(-1.5 * grade_curta), atol=1e-11)
        esperado = s0.coherence * np.exp((-0.8j - 0.75) * grade_curta)
        np.testing.assert_allclose(traj.coherence, esperado, atol=1e-11)

    def test_fundamental_excitado_por_exponencial(self, params_padrao):
        """α = 1, κ = 1 a partir de |g⟩: P_e(t) = t²e^{−t}."""
        grade = np.linspace(0, 4, 41)
        traj = solve_hierarchy(QubitState.ground(), params_padrao, ExponentialProfile(1.0), grade)
        np.testing.assert_allclose(traj.pe, grade**2 * np.exp(-grade), atol=1e-8)

    def test_traco_e_adjunto_preservados(self, params_padrao, grade_curta):
        """tr ϱ¹¹ = tr ϱ⁰⁰ = 1 e ϱ¹⁰ = (ϱ⁰¹)† ao longo da trajetória."""
        traj = solve_hierarchy(QubitState(0.5, 0.3), params_padrao, ExponentialProfile(2.0), grade_curta)
        assert traj.desvio_traco() < 1e-8
        assert traj.desvio_adjunto() < 1e-8
        assert traj.menor_autovalor() > -1e-8

    def test_pulso_otimo_atinge_teto(self):
        """Partindo de |g⟩, o pulso ótimo atinge κ(1 − e^{−ΓT}) em T."""
        params = PhysParams(1.0, 0.5, 0.0)
        T = 1.0
        traj = solve_hierarchy(QubitState.ground(), params, OptimalPulse(T), np.linspace(0, 2, 21))
        i = int(np.argmin(np.abs(traj.t - T)))
        assert traj.pe[i] == pytest.approx(optimal_population(T, params), abs=1e-8)
        # depois do pulso só há decaimento
        assert traj.pe[-1] == pytest.approx(traj.pe[i] * math.exp(-1.0), abs=1e-8)

    @pytest.mark.parametrize("alpha", [0.5, 1.5, 9.5])
    def test_limite_de_tempo_longo(self, params_padrao, alpha):
        """Em Γt = 30 a população excitada e a coerência já sumiram (< 10⁻⁵)."""
        traj = solve_hierarchy(QubitState(0.5, 0.4), params_padrao, ExponentialProfile(alpha),
                               np.linspace(0, 30, 61))
        assert abs(traj.pe[-1]) < 1e-5
        assert abs(traj.coherence[-1]) < 1e-5

    def test_gamma1_perturbado_muda_resultado(self, params_padrao):
        """escala_gamma1 ≠ 1 altera P_e de forma detectável."""
        grade = np.linspace(0, 2, 21)
        base = solve_hierarchy(QubitState.ground(), params_padrao, ExponentialProfile(1.0), grade)
        mut = solve_hierarchy(QubitState.ground(), params_padrao, ExponentialProfile(1.0), grade,
                              escala_gamma1=0.99)
        assert np.max(np.abs(base.pe - mut.pe)) > 1e-3

    def test_quadro_de_saida(self, params_padrao):
        """to_frame tem t, pe, re_coh, im_coh."""
        traj = solve_hierarchy(QubitState.excited(), params_padrao, ZeroProfile(), np.linspace(0, 1, 5))
        df = traj.to_frame()
        assert list(df.columns) == ["t", "pe", "re_coh", "im_coh"]
        assert len(df) == 5
        assert len(traj.estados()) == 5
        assert traj.estado(3).sistema.pe == pytest.approx(traj.pe[3])


# ══════════════════════════════════════════════════════════════════════════════
# ORÁCULO FECHADO
# ══════════════════════════════════════════════════════════════════════════════

class TestOraculoForaDiagonal:

    @pytest.mark.parametrize("delta0, perfil", [
        (0.0, ExponentialProfile(1.0)),
        (1.2, ExponentialProfile(3.0)),
        (0.5, OptimalPulse(1.5)),
    ])
    def test_concorda_com_integrador(self, delta0, perfil):
        """ϱ⁰¹ e ϱ⁰⁰ do integrador batem com a forma fechada."""
        params = PhysParams(1.0, 0.8, delta0)
        s0 = QubitState(0.35, 0.2 - 0.25j)
        grade = np.linspace(0, 3, 31)
        traj = solve_hierarchy(s0, params, perfil, grade)
        for i in (5, 17, 30):
            rho01, rho00 = analytic_offdiagonal(grade[i], s0, params, perfil)
            np.testing.assert_allclose(traj.blocos[i, I01], rho01, atol=1e-7)
            np.testing.assert_allclose(traj.blocos[i, I00], rho00, atol=1e-8)

    def test_em_t_zero(self, params_padrao):
        """ϱ⁰¹(0) = 0 e ϱ⁰⁰(0) = ρ(0)."""
        s0 = QubitState(0.5, 0.1)
        rho01, rho00 = analytic_offdiagonal(0.0, s0, params_padrao, ExponentialProfile(1.0))
        np.testing.assert_allclose(rho01, 0.0)
        np.testing.assert_allclose(rho00, s0.to_matrix())
