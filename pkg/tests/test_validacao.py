"""
tests/test_validacao.py
Testa as checagens de autovalidação em grades mínimas e a mutação Γ₁ → 0.99κΓ.

Rodar:
    pytest tests/test_validacao.py -v
"""

import math
import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

import analysis.validacao as validacao
from analysis.validacao import (
    ESCALA_MUTACAO, checar_assintotico, checar_choi, checar_dicotomia, checar_ida_volta, checar_limiar_b,
    checar_mapa_hierarquia, checar_perfis_reais, checar_pulso_otimo, checar_semigrupo, executar_checagens,
    montar_triangulo, NIVEIS,
    perfil_amostrado_aleatorio,
)
from core.erros import FalhaQuadratura
from core.profiles import profile_norm

CFG_MINIMA = {
    "kappas": (1.0,), "alphas": (1.0, 9.5), "deltas": (0.0,),
    "t_max": 3.0, "pontos": 31,
    "n_estados": 2, "conjuntos_hier": 1,
    "horizontes": (1.0,), "kappas_pulso": (1.0,), "alphas_pulso": np.array([0.5, 1.0, 2.0, 5.0]),
}


# ══════════════════════════════════════════════════════════════════════════════
# CHECAGENS
# ══════════════════════════════════════════════════════════════════════════════

class TestChecagens:

    def test_triangulo_choi_e_ida_volta(self):
        """Três caminhos concordam; Choi positivo; Γ_L e Γ_T reproduzem B e |C|."""
        pontos, pior, erro_quad = montar_triangulo(CFG_MINIMA)
        assert len(pontos) == 2
        assert pior <= 1e-7
        assert 0.0 <= erro_quad < 1e-8
        assert checar_choi(pontos)[0]
        ok, detalhe = checar_ida_volta(pontos)
        assert ok, detalhe

    def test_triangulo_grade_completa_alfa_meio(self):
        """α = 0.5, Δ₀ = 0 na grade completa (Γt ≤ 15, 1501 pontos) fecha sem FalhaQuadratura."""
        cfg = {"kappas": (0.25, 0.5, 1.0), "alphas": (0.5,), "deltas": (0.0,), "t_max": 15.0, "pontos": 1501}
        pontos, pior, erro_quad = montar_triangulo(cfg)
        assert len(pontos) == 3
        assert pior <= 1e-7
        assert math.isfinite(erro_quad)

    def test_falha_do_triangulo_nao_esconde_as_demais(self, monkeypatch):
        """Exceção no triângulo vira falha registrada e as outras checagens ainda rodam."""
        def explode(cfg):
            raise FalhaQuadratura(1e-3, 1e-8, "integral interna")

        monkeypatch.setattr(validacao, "montar_triangulo", explode)
        for nome in ("checar_mapa_hierarquia", "checar_max_excitacao", "checar_pulso_otimo",
                     "checar_perfis_reais"):
            monkeypatch.setattr(validacao, nome, lambda cfg: (True, "ok"))
        for nome in ("checar_limiar_b", "checar_dicotomia", "checar_semigrupo", "checar_assintotico"):
            monkeypatch.setattr(validacao, nome, lambda: (True, "ok"))
        checagens = executar_checagens("quick")
        assert len(checagens) == 12
        por_nome = {c.nome: c for c in checagens}
        assert not por_nome["triangulo"].ok
        assert "FalhaQuadratura" in por_nome["triangulo"].detalhe
        assert not any(por_nome[n].ok for n in ("choi", "ida_volta", "eterno"))
        assert all(por_nome[n].ok for n in ("mapa_hier", "max_exc", "limiar_b", "assintotico"))

    def test_dicotomia(self):
        """Em Δ₀ = 3 o BLP cai por γ₊+γ₋ < 0; em Δ₀ = 6.5 vale."""
        ok, detalhe = checar_dicotomia()
        assert ok, detalhe
        assert "min(γ₊+γ₋)=-" in detalhe

    def test_limiar(self):
        ok, detalhe = checar_limiar_b()
        assert ok, detalhe

    def test_semigrupo(self):
        ok, detalhe = checar_semigrupo()
        assert ok, detalhe

    def test_assintotico(self):
        ok, detalhe = checar_assintotico()
        assert ok, detalhe

    def test_perfis_reais(self):
        """Perfis reais com mapa invertível passam nas checagens de sinal do nível quick."""
        ok, detalhe = checar_perfis_reais(NIVEIS["quick"])
        assert ok, detalhe

    def test_perfil_aleatorio_normalizado(self, rng):
        """A norma da interpolação linear é 1 e as amplitudes são ≥ 0."""
        perfil = perfil_amostrado_aleatorio(rng)
        assert np.all(perfil.values.real >= 0)
        assert profile_norm(perfil, 2.0) == pytest.approx(1.0, abs=1e-8)
        assert perfil.real


# ══════════════════════════════════════════════════════════════════════════════
# MUTAÇÃO
# ══════════════════════════════════════════════════════════════════════════════

class TestMutacao:

    def test_pulso_otimo_sem_mutacao(self):
        ok, detalhe = checar_pulso_otimo(CFG_MINIMA)
        assert ok, detalhe

    def test_pulso_otimo_detecta_mutacao(self):
        """Γ₁ = 0.99κΓ tira P_e(T) do teto κ(1 − e^{−ΓT})."""
        ok, _ = checar_pulso_otimo(CFG_MINIMA, ESCALA_MUTACAO)
        assert not ok

    def test_mapa_hierarquia(self):
        ok, detalhe = checar_mapa_hierarquia(CFG_MINIMA)
        assert ok, detalhe
        ok, _ = checar_mapa_hierarquia(CFG_MINIMA, ESCALA_MUTACAO)
        assert not ok

    def test_escala(self):
        assert math.isclose(ESCALA_MUTACAO, 0.99)
