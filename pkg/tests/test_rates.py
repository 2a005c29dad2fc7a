"""
tests/test_rates.py
Testa as taxas do gerador (γ₊, γ₋, γ_z, ω), o status de regularidade e as
taxas de relaxação acumuladas.

Rodar:
    pytest tests/test_rates.py -v
"""

import math
import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from core.erros import IntervaloSingular
from core.params import PhysParams
from core.profiles import ExponentialProfile, ZeroProfile
from engine.dynmap import MapCoefficients, solve_coefficients
from indicators.rates import (
    GeneratorRates, RatesTrajectory, Status, accumulate_relaxation, compute_rates,
    compute_rates_trajectory, relaxation_from_rates, semigroup_bound_check, trecho_regular,
    witness_sums,
)
from oracles.exact_exp import ExpParams, exp_rates_trajectory


def _trajetoria_sintetica(status: list[str]) -> RatesTrajectory:
    n = len(status)
    t = np.linspace(0.0, 1.0, n)
    return RatesTrajectory(t, np.zeros(n), np.full(n, 2.0), np.zeros(n), np.zeros(n), np.array(status))


# ══════════════════════════════════════════════════════════════════════════════
# TAXAS PONTUAIS
# ══════════════════════════════════════════════════════════════════════════════

class TestTaxasPontuais:

    @pytest.mark.parametrize("gamma, delta0", [(1.0, 0.0), (2.0, 0.7), (0.5, -1.3)])
    def test_semigrupo_sem_foton(self, gamma, delta0):
        """ξ ≡ 0: (γ₊, γ₋, γ_z, ω) = (0, 2Γ, 0, Δ₀) em toda a grade."""
        params = PhysParams(gamma, 1.0, delta0)
        coef = solve_coefficients(params, ZeroProfile(), np.linspace(0, 4, 41))
        taxas = compute_rates_trajectory(coef)
        np.testing.assert_allclose(taxas.gamma_plus, 0.0, atol=1e-10)
        np.testing.assert_allclose(taxas.gamma_minus, 2.0 * gamma, atol=1e-10)
        np.testing.assert_allclose(taxas.gamma_z, 0.0, atol=1e-10)
        np.testing.assert_allclose(taxas.omega, delta0, atol=1e-10)
        assert taxas.regular.all()

    def test_formulas_em_um_ponto(self):
        """γ₊ = 2(ȦB − AḂ)/B, γ₋ = −2Ḃ/B − γ₊, γ_z = ½Ḃ/B − Re(Ċ/C), ω = −Im(Ċ/C)."""
        coef = MapCoefficients(a=0.2, b=0.5, c=0.4 + 0.3j, da=0.1, db=-0.3, dc=-0.2 + 0.1j)
        r = compute_rates(coef)
        razao_c = (-0.2 + 0.1j) / (0.4 + 0.3j)
        assert r.gamma_plus == pytest.approx(2 * (0.1 * 0.5 - 0.2 * -0.3) / 0.5)
        assert r.gamma_minus == pytest.approx(-2 * (-0.3 / 0.5) - r.gamma_plus)
        assert r.gamma_z == pytest.approx(0.5 * (-0.3 / 0.5) - razao_c.real)
        assert r.omega == pytest.approx(-razao_c.imag)
        assert r.regular

    def test_status_perto_de_b_nulo(self):
        """|B| < eps_sing marca SB."""
        coef = MapCoefficients(a=0.3, b=1e-12, c=0.5, da=0.1, db=-1.0, dc=-0.1)
        assert compute_rates(coef, eps_sing=1e-9).status is Status.NEAR_SINGULAR_B

    def test_status_perto_de_c_nulo(self):
        """|C| < eps_sing (com B regular) marca SC."""
        coef = MapCoefficients(a=0.3, b=0.4, c=1e-12, da=0.1, db=-0.2, dc=-0.5)
        r = compute_rates(coef, eps_sing=1e-9)
        assert r.status is Status.NEAR_SINGULAR_C
        assert not r.regular

    def test_concorda_com_forma_fechada(self, params_padrao):
        """Taxas pela EDO batem com as fórmulas fechadas ressonantes (α = 9.5)."""
        grade = np.linspace(0, 5, 201)
        coef = solve_coefficients(params_padrao, ExponentialProfile(9.5), grade)
        numerico = compute_rates_trajectory(coef)
        exato = exp_rates_trajectory(grade, ExpParams(params_padrao, 9.5))
        np.testing.assert_allclose(numerico.gamma_plus, exato.gamma_plus, atol=1e-5)
        np.testing.assert_allclose(numerico.gamma_minus, exato.gamma_minus, atol=1e-5)
        np.testing.assert_allclose(numerico.gamma_z, exato.gamma_z, atol=1e-5)

    def test_mascara_no_quadro(self):
        """to_frame(mascarar=True) apaga as taxas das amostras não regulares."""
        df = _trajetoria_sintetica(["R", "SB", "R", "SC"]).to_frame(mascarar=True)
        assert df["gamma_minus"].isna().tolist() == [False, True, False, True]
        assert df["status"].tolist() == ["R", "SB", "R", "SC"]
        cru = _trajetoria_sintetica(["R", "SB", "R", "SC"]).to_frame(mascarar=False)
        assert not cru["gamma_minus"].isna().any()

    def test_somas_das_testemunhas(self):
        """(γ₊+γ₋, γ₊+γ₋+2γ_z, γ₊+γ₋+4γ_z)."""
        soma, soma2, soma4 = witness_sums(GeneratorRates(1.0, 2.0, -0.5, 0.0))
        assert (soma, soma2, soma4) == (3.0, 2.0, 1.0)


# ══════════════════════════════════════════════════════════════════════════════
# RELAXAÇÃO
# ══════════════════════════════════════════════════════════════════════════════

class TestRelaxacao:

    def test_taxas_pontuais(self):
        """γ_L = γ₊+γ₋, γ_T = γ_L/2 + 2γ_z, γ_total = 2(γ_L + 2γ_z)."""
        r = relaxation_from_rates(GeneratorRates(0.5, 1.5, 0.25, 0.0))
        assert r.gamma_longitudinal == pytest.approx(2.0)
        assert r.gamma_transversal == pytest.approx(1.5)
        assert r.gamma_total == pytest.approx(5.0)
        assert (r.g1, r.g2, r.g3) == (r.gamma_transversal, r.gamma_transversal, r.gamma_longitudinal)

    def test_ida_e_volta_com_coeficientes(self):
        """e^{−Γ_L/2} = B e e^{−Γ_T/2} = |C| num mapa invertível."""
        params = PhysParams(1.0, 0.25, 0.0)
        grade = np.linspace(0, 5, 1001)
        coef = solve_coefficients(params, ExponentialProfile(3.5), grade)
        relax = accumulate_relaxation(compute_rates_trajectory(coef))
        np.testing.assert_allclose(np.exp(-0.5 * relax.big_gamma_l), coef.b, atol=1e-6)
        np.testing.assert_allclose(np.exp(-0.5 * relax.big_gamma_t), np.abs(coef.c), atol=1e-6)

    def test_ida_e_volta_dessintonizado(self):
        """Mesma identidade com Δ₀ ≠ 0 (C complexo)."""
        params = PhysParams(1.0, 0.1, 1.0)
        grade = np.linspace(0, 4, 801)
        coef = solve_coefficients(params, ExponentialProfile(4.0), grade)
        relax = accumulate_relaxation(compute_rates_trajectory(coef))
        np.testing.assert_allclose(np.exp(-0.5 * relax.big_gamma_t), np.abs(coef.c), atol=1e-6)

    def test_dois_pontos_usa_trapezio(self):
        """Com dois pontos a integral acumulada ainda existe."""
        taxas = _trajetoria_sintetica(["R", "R"])
        relax = accumulate_relaxation(taxas)
        assert relax.big_gamma_l[0] == 0.0
        assert relax.big_gamma_l[1] == pytest.approx(2.0)

    def test_recusa_amostra_singular(self):
        """Acumular sobre amostra SB levanta IntervaloSingular com o tempo dela."""
        taxas = _trajetoria_sintetica(["R", "R", "SB", "R", "R"])
        with pytest.raises(IntervaloSingular) as erro:
            accumulate_relaxation(taxas)
        assert erro.value.tempo == pytest.approx(0.5)

    def test_trecho_regular(self):
        """Prefixo até a primeira amostra não regular."""
        taxas = _trajetoria_sintetica(["R", "R", "R", "SC", "R"])
        prefixo = trecho_regular(taxas)
        assert len(prefixo) == 3
        assert len(trecho_regular(taxas, t_fim=0.3)) == 2
        accumulate_relaxation(prefixo)

    def test_limite_de_semigrupo(self):
        """γ_T ≤ γ_total/2 ⇔ γ_L ≥ 0; γ_L ≤ γ_total/2 ⇔ γ_z ≥ 0."""
        ok_t, ok_l = semigroup_bound_check(relaxation_from_rates(GeneratorRates(0.0, 2.0, 0.0, 0.0)))
        assert ok_t and ok_l
        ok_t, ok_l = semigroup_bound_check(relaxation_from_rates(GeneratorRates(-3.0, 1.0, 0.1, 0.0)))
        assert not ok_t and ok_l
        ok_t, ok_l = semigroup_bound_check(relaxation_from_rates(GeneratorRates(0.0, 2.0, -0.2, 0.0)))
        assert ok_t and not ok_l

    def test_limite_de_semigrupo_vetorial(self):
        """Aceita trajetórias e devolve máscaras."""
        relax = relaxation_from_rates(_trajetoria_sintetica(["R"] * 4))
        ok_t, ok_l = semigroup_bound_check(relax)
        assert ok_t.shape == (4,) and ok_t.all() and ok_l.all()
        assert math.isclose(float(relax.gamma_total[0]), 4.0)

    def test_limite_de_semigrupo_violado_dessintonizado(self):
        """α = 1.5, κ = 1, Δ₀ = 3: γ_L < 0 em algum trecho, logo γ_T > γ_total/2."""
        coef = solve_coefficients(PhysParams(1.0, 1.0, 3.0), ExponentialProfile(1.5), np.linspace(0, 10, 1001))
        taxas = compute_rates_trajectory(coef)
        ok_t, _ = semigroup_bound_check(relaxation_from_rates(taxas))
        assert not ok_t[taxas.regular].all()
        assert np.min(witness_sums(taxas)[0][taxas.regular]) < -1e-3
