"""
tests/test_exact_exp.py
Testa o oráculo fechado do perfil exponencial: coeficientes, taxas
ressonantes, limiar de invertibilidade e excitação máxima.

Rodar:
    pytest tests/test_exact_exp.py -v
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

from core.erros import ConfiguracaoInvalida
from core.params import PhysParams
from core.profiles import ExponentialProfile
from engine.dynmap import solve_coefficients
from oracles.exact_exp import (
    ExpParams, exp_asymptotic_rates, exp_coefficient_trajectory, exp_coefficients,
    exp_population_ground, exp_rates_resonant, exp_rates_trajectory, first_b_zero,
    invertibility_threshold, max_excitation, refine_resonant_max, search_max_excitation,
)


def _p(alpha: float, kappa: float = 1.0, delta0: float = 0.0, gamma: float = 1.0) -> ExpParams:
    return ExpParams(PhysParams(gamma, kappa, delta0), alpha)


# ══════════════════════════════════════════════════════════════════════════════
# COEFICIENTES
# ══════════════════════════════════════════════════════════════════════════════

class TestCoeficientesFechados:

    def test_populacao_alfa_2(self):
        """A(α=2, Γt=1) = 8(e^{−1} − 2e^{−3/2} + e^{−2}) ≈ 0.455635."""
        esperado = 8 * (math.exp(-1) - 2 * math.exp(-1.5) + math.exp(-2))
        assert exp_coefficients(1.0, _p(2.0)).a == pytest.approx(esperado, abs=1e-12)
        assert esperado == pytest.approx(0.455635, abs=1e-6)

    def test_alfa_1(self):
        """α = 1: A = x²e^{−x}, B = e^{−x}(5 − 4x) − 4e^{−2x} com κ = 1."""
        x = 0.7
        coef = exp_coefficients(x, _p(1.0))
        assert coef.a == pytest.approx(x * x * math.exp(-x), abs=1e-12)
        assert coef.b == pytest.approx(math.exp(-x) * (5 - 4 * x) - 4 * math.exp(-2 * x), abs=1e-12)

    def test_identidade_em_zero(self):
        """Todos os ramos partem exatamente da identidade (0, 1, 1)."""
        for p in (_p(2.0), _p(1.0), _p(1.5, delta0=3.0), _p(1.0 + 5e-5), _p(1.000100001), _p(0.995, 0.3)):
            coef = exp_coefficients(0.0, p)
            assert coef.a == 0.0
            assert coef.b == 1.0
            assert coef.c == 1.0

    @pytest.mark.parametrize("borda", [0.99, 1.01])
    def test_continuidade_na_janela_de_alfa_1(self, borda):
        """As formas em ε = α − 1 encaixam nas formas gerais nas bordas da janela."""
        t = np.linspace(0, 15, 61)
        dentro = exp_coefficient_trajectory(t, _p(borda + math.copysign(1e-11, 1.0 - borda)))
        fora = exp_coefficient_trajectory(t, _p(borda - math.copysign(1e-11, 1.0 - borda)))
        for campo in ("a", "b", "c", "da", "db", "dc"):
            np.testing.assert_allclose(getattr(dentro, campo), getattr(fora, campo), atol=1e-8)

    @pytest.mark.parametrize("alpha", [1.0 + 5e-5, 1.000100001, 0.99991, 1.009])
    def test_janela_contra_edo(self, alpha):
        """Perto de α = 1 o oráculo bate com a EDO aumentada em [0, 15] (1501 pontos)."""
        params = PhysParams(1.0, 1.0, 0.0)
        grade = np.linspace(0, 15, 1501)
        exato = exp_coefficient_trajectory(grade, ExpParams(params, alpha))
        edo = solve_coefficients(params, ExponentialProfile(alpha), grade)
        for campo in ("a", "b", "c"):
            assert np.max(np.abs(getattr(exato, campo) - getattr(edo, campo))) < 1e-7

    def test_janela_tende_ao_ramo_exato(self):
        """α = 1 ± 10⁻⁶ fica colado ao ramo α = 1."""
        t = np.linspace(0, 6, 25)
        exato = exp_coefficient_trajectory(t, _p(1.0))
        perto = exp_coefficient_trajectory(t, _p(1.0 - 1e-6))
        np.testing.assert_allclose(perto.b, exato.b, atol=5e-5)

    def test_ressonancia_como_limite(self):
        """Forma fora de ressonância com Δ₀ → 0 converge para a ressonante."""
        t = np.linspace(0, 5, 11)
        res = exp_coefficient_trajectory(t, _p(2.5))
        quase = exp_coefficient_trajectory(t, _p(2.5, delta0=1e-7))
        np.testing.assert_allclose(quase.b, res.b, atol=1e-6)
        np.testing.assert_allclose(quase.a, res.a, atol=1e-6)

    def test_populacao_partindo_do_fundamental(self):
        """exp_population_ground é A(t)."""
        assert exp_population_ground(2.0, 1.0, 0.0, PhysParams()) == pytest.approx(4 * math.exp(-2))

    @settings(max_examples=40, deadline=None)
    @given(floats(min_value=0.05, max_value=12), floats(min_value=0, max_value=1),
           floats(min_value=0, max_value=8))
    def test_populacao_limitada(self, alpha, kappa, t):
        """0 ≤ A ≤ 4κ/e² e 0 ≤ A + B ≤ 1 para qualquer α."""
        coef = exp_coefficients(t, _p(alpha, kappa))
        assert -1e-6 <= coef.a <= 4 * kappa * math.exp(-2) + 1e-6
        assert -1e-6 <= coef.a + coef.b <= 1 + 1e-6

    def test_tempo_negativo(self):
        """t < 0 é recusado."""
        with pytest.raises(ConfiguracaoInvalida):
            exp_coefficients(-1.0, _p(2.0))

    def test_alfa_invalido(self):
        """α ≤ 0 é recusado com campo alpha."""
        with pytest.raises(ConfiguracaoInvalida) as erro:
            _p(0.0)
        assert erro.value.campo == "alpha"


# ══════════════════════════════════════════════════════════════════════════════
# TAXAS RESSONANTES
# ══════════════════════════════════════════════════════════════════════════════

class TestTaxasFechadas:

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0, 9.5])
    def test_em_t_zero(self, alpha):
        """γ₊(0) = 0, γ₋(0) = 2Γ, γ_z(0) = 0."""
        r = exp_rates_resonant(0.0, _p(alpha, gamma=1.5))
        assert r.gamma_plus == pytest.approx(0.0, abs=1e-12)
        assert r.gamma_minus == pytest.approx(3.0, abs=1e-12)
        assert r.gamma_z == pytest.approx(0.0, abs=1e-12)
        assert r.omega == 0.0

    @pytest.mark.parametrize("alpha", [1.5, 2.5, 9.5])
    def test_concordam_com_coeficientes(self, alpha):
        """Fórmulas fatoradas = fórmulas gerais aplicadas aos coeficientes fechados."""
        t = np.linspace(0.1, 3, 30)
        taxas = exp_rates_trajectory(t, _p(alpha, 0.05))
        coef = exp_coefficient_trajectory(t, _p(alpha, 0.05))
        gp = 2 * (coef.da * coef.b - coef.a * coef.db) / coef.b
        gm = -2 * coef.db / coef.b - gp
        gz = 0.5 * coef.db / coef.b - np.real(coef.dc / coef.c)
        np.testing.assert_allclose(taxas.gamma_plus, gp, atol=1e-8)
        np.testing.assert_allclose(taxas.gamma_minus, gm, atol=1e-8)
        np.testing.assert_allclose(taxas.gamma_z, gz, atol=1e-8)

    @pytest.mark.parametrize("alpha, kappa, gm_lim, gz_lim", [
        (0.5, 1.0, 1.5, 0.125),
        (2.5, 1.0, 2.0, 0.0),
        (3.0, 1.0, 2.0, 2.0),      # α = 4κ − 1: o modo lento de C some
        (3.0, 0.25, 4.0, -0.5),    # α = 8κ + 1: o modo lento de B some
    ])
    def test_limites_assintoticos(self, alpha, kappa, gm_lim, gz_lim):
        """Na última amostra regular com Γt ≥ 8 as taxas já estão nos limites."""
        assert exp_asymptotic_rates(alpha, 1.0, kappa) == pytest.approx((0.0, gm_lim, gz_lim))
        grade = np.linspace(0, 30, 301)
        taxas = exp_rates_trajectory(grade, _p(alpha, kappa))
        regulares = np.flatnonzero(taxas.regular & (grade >= 8.0))
        assert regulares.size > 0
        i = regulares[-1]
        assert taxas.gamma_plus[i] == pytest.approx(0.0, abs=1e-3)
        assert taxas.gamma_minus[i] == pytest.approx(gm_lim, abs=1e-3)
        assert taxas.gamma_z[i] == pytest.approx(gz_lim, abs=1e-3)

    def test_limites_escalam_com_gamma(self):
        """Os limites são proporcionais a Γ e κ fora de [0, 1] é recusado."""
        assert exp_asymptotic_rates(0.5, 2.0, 1.0) == pytest.approx((0.0, 3.0, 0.25))
        with pytest.raises(ConfiguracaoInvalida):
            exp_asymptotic_rates(2.0, 1.0, 1.5)

    def test_fora_de_ressonancia_recusado(self):
        """Δ₀ ≠ 0 não tem taxas fechadas."""
        with pytest.raises(ConfiguracaoInvalida) as erro:
            exp_rates_resonant(1.0, _p(1.5, delta0=3.0))
        assert erro.value.campo == "delta0"

    def test_status_propagado(self):
        """Amostra em cima do zero de B sai marcada."""
        zero, _ = first_b_zero(_p(1.0), t_max=3.0, n=3001)
        r = exp_rates_resonant(zero, _p(1.0))
        assert r.status.value == "SB"


# ══════════════════════════════════════════════════════════════════════════════
# PROPOSIÇÕES
# ══════════════════════════════════════════════════════════════════════════════

class TestProposicoes:

    @pytest.mark.parametrize("kappa, esperado", [(0.0, 1.0), (0.5, 5.0), (1.0, 9.0)])
    def test_limiar(self, kappa, esperado):
        """α ≥ 8κ + 1."""
        assert invertibility_threshold(kappa) == esperado

    def test_limiar_kappa_invalido(self):
        with pytest.raises(ConfiguracaoInvalida):
            invertibility_threshold(1.5)

    @pytest.mark.parametrize("kappa, alpha_ok, alpha_ruim", [(1.0, 9.0, 8.9), (0.5, 5.0, 4.9)])
    def test_limiar_separa_invertibilidade(self, kappa, alpha_ok, alpha_ruim):
        """No limiar B > 0 sempre; logo abaixo B cruza zero."""
        zero, minimo = first_b_zero(_p(alpha_ok, kappa))
        assert zero is None and minimo > 0
        zero, _ = first_b_zero(_p(alpha_ruim, kappa))
        assert zero is not None
        assert abs(exp_coefficients(zero, _p(alpha_ruim, kappa)).b) < 1e-10

    def test_zero_abaixo_do_limiar_kappa_1(self):
        """κ = 1, α = 8.9: B se anula perto de Γt = 1.26."""
        zero, _ = first_b_zero(_p(8.9))
        assert zero == pytest.approx(1.26, abs=2e-2)

    @pytest.mark.parametrize("kappa", [0.25, 0.5, 1.0])
    def test_excitacao_maxima(self, kappa):
        """P_max = 4κ/e² em t = 2/Γ, α = 1, Δ₀ = 0."""
        p_max, t_star, alpha, delta0 = max_excitation(kappa, 2.0)
        assert p_max == pytest.approx(4 * kappa * math.exp(-2))
        assert (t_star, alpha, delta0) == (1.0, 1.0, 0.0)
        refinado, t_ref = refine_resonant_max(kappa, 2.0)
        assert refinado == pytest.approx(p_max, abs=1e-9)
        assert t_ref == pytest.approx(1.0, abs=1e-4)

    def test_varredura_nao_supera_o_maximo(self):
        """Nenhum (α, Δ₀, t) da varredura grossa passa de 4κ/e²."""
        p, alpha, delta0, t = search_max_excitation(1.0, 1.0, np.linspace(0.2, 4, 20), np.linspace(-2, 2, 9))
        assert p <= 4 * math.exp(-2) + 1e-9
        assert alpha == pytest.approx(1.0, abs=0.2)
        assert delta0 == 0.0
