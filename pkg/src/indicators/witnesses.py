"""
witnesses.py — Critérios de divisibilidade e não-Markovianidade sobre as taxas.

Por amostra regular (tol absoluta):
    CP  : γ₊ ≥ −tol, γ₋ ≥ −tol, γ_z ≥ −tol
    P   : γ₊ ≥ −tol, γ₋ ≥ −tol, √(γ₊⁺γ₋⁺) + 2γ_z ≥ −tol
    BLP : γ₊+γ₋ ≥ −tol, γ₊+γ₋+4γ_z ≥ −tol
    GEO : γ₊+γ₋+2γ_z ≥ −tol

Cada critério mais fraco só falha numa amostra se os mais fortes também
falham, de modo que o relatório respeita CP ⇒ P ⇒ BLP ⇒ GEO.
Amostras não regulares ficam fora dos veredictos e são listadas à parte.
"""

import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from core.config import T_BURN, TOL_SINAL_PRODUTO, TOL_WITNESS
from engine.dynmap import CoefficientTrajectory, Singularity
from indicators.rates import RatesTrajectory, witness_sums

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Verdict:
    verdict: bool
    violations: list[tuple[float, float]] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"verdict": self.verdict, "violations": [[a, b] for a, b in self.violations]}


@dataclass(frozen=True)
class WitnessReport:
    cp_divisible: Verdict
    p_divisible: Verdict
    blp: Verdict
    geometric: Verdict
    eternal_nm: Verdict
    sign_product_ok: Verdict
    singular_times: list[Singularity] = field(default_factory=list)
    non_regular: list[tuple[float, float]] = field(default_factory=list)
    blp_direct: Verdict | None = None
    geometric_direct: Verdict | None = None

    @property
    def caveat_non_invertible(self) -> bool:
        """Sobre mapas não invertíveis os veredictos valem só por trecho regular."""
        return bool(self.singular_times or self.non_regular)

    def as_dict(self) -> dict:
        dados = {
            "cp_divisible": self.cp_divisible.as_dict(),
            "p_divisible": self.p_divisible.as_dict(),
            "blp": self.blp.as_dict(),
            "geometric": self.geometric.as_dict(),
            "eternal_nm": self.eternal_nm.as_dict(),
            "sign_product_ok": self.sign_product_ok.as_dict(),
            "singular_times": [s.as_dict() for s in self.singular_times],
            "non_regular": [[a, b] for a, b in self.non_regular],
            "caveat_non_invertible": self.caveat_non_invertible,
        }
        if self.blp_direct is not None:
            dados["blp_direct"] = self.blp_direct.as_dict()
        if self.geometric_direct is not None:
            dados["geometric_direct"] = self.geometric_direct.as_dict()
        return dados


def intervalos(t: np.ndarray, mascara: np.ndarray) -> list[tuple[float, float]]:
    """Corridas máximas de amostras marcadas, como [t_inicio, t_fim]."""
    mascara = np.asarray(mascara, dtype=bool)
    if not mascara.any():
        return []
    borda = np.diff(np.concatenate([[0], mascara.astype(np.int8), [0]]))
    inicios = np.flatnonzero(borda == 1)
    fins = np.flatnonzero(borda == -1) - 1
    return [(float(t[i]), float(t[j])) for i, j in zip(inicios, fins)]


def _veredicto(t: np.ndarray, falhas: np.ndarray) -> Verdict:
    return Verdict(not bool(falhas.any()), intervalos(t, falhas))


def evaluate_witnesses(rates: RatesTrajectory, tol: float = TOL_WITNESS,
                       singular_times: list[Singularity] | None = None,
                       t_burn: float = T_BURN) -> WitnessReport:
    """
    Veredictos por amostra regular e não-Markovianidade eterna.

    Eterna é a forma relaxada: depois de t_burn alguma taxa fica abaixo de −tol
    e nenhuma amostra regular tem as três taxas acima de +tol. Amostras com a
    menor taxa em [−tol, tol] não contam contra, pois γ₊ e γ_z tendem a zero
    e caem dentro da tolerância em tempos longos. As violações reportadas são
    os trechos com as três taxas positivas.
    """
    reg = rates.regular
    gp, gm, gz = rates.gamma_plus, rates.gamma_minus, rates.gamma_z
    with np.errstate(invalid="ignore"):
        soma, soma2, soma4 = witness_sums(rates)
        falha_cp = reg & ~((gp >= -tol) & (gm >= -tol) & (gz >= -tol))
        raiz = np.sqrt(np.maximum(gp, 0.0) * np.maximum(gm, 0.0))
        falha_p = reg & ~((gp >= -tol) & (gm >= -tol) & (raiz + 2.0 * gz >= -tol))
        falha_blp = reg & ~((soma >= -tol) & (soma4 >= -tol))
        falha_geo = reg & ~(soma2 >= -tol)

        falha_p &= falha_cp
        falha_blp &= falha_p
        falha_geo &= falha_blp

        depois = reg & (rates.t > t_burn)
        menor = np.minimum(np.minimum(gp, gm), gz)
        alguma_negativa = depois & (menor < -tol)
        todas_positivas = depois & (menor > tol)
        produto = reg & (gp * gz > TOL_SINAL_PRODUTO)

    eterno = bool(alguma_negativa.any()) and not bool(todas_positivas.any())
    relatorio = WitnessReport(
        cp_divisible=_veredicto(rates.t, falha_cp),
        p_divisible=_veredicto(rates.t, falha_p),
        blp=_veredicto(rates.t, falha_blp),
        geometric=_veredicto(rates.t, falha_geo),
        eternal_nm=Verdict(eterno, intervalos(rates.t, todas_positivas)),
        sign_product_ok=_veredicto(rates.t, produto),
        singular_times=list(singular_times or []),
        non_regular=intervalos(rates.t, ~reg),
    )
    log.info(
        f"CP={relatorio.cp_divisible.verdict} P={relatorio.p_divisible.verdict} "
        f"BLP={relatorio.blp.verdict} GEO={relatorio.geometric.verdict} eterno={eterno}"
    )
    return relatorio


def blp_directly_from_coeffs(traj: CoefficientTrajectory, tol: float = TOL_WITNESS) -> Verdict:
    """
    BLP sem dividir por B nem C: Ḃ·B ≤ (tol/2)·B² e Re(Ċ·C̄) ≤ (tol/4)·|C|².

    Equivale a γ₊+γ₋ ≥ −tol e γ₊+γ₋+4γ_z ≥ −tol onde B, C ≠ 0, e continua
    definido através dos tempos singulares.
    """
    falha_b = traj.db * traj.b > 0.5 * tol * traj.b ** 2
    falha_c = np.real(traj.dc * np.conj(traj.c)) > 0.25 * tol * np.abs(traj.c) ** 2
    return _veredicto(traj.t, falha_b | falha_c)


def geometric_from_determinant(traj: CoefficientTrajectory, tol: float = TOL_WITNESS) -> Verdict:
    """
    Decrescimento monótono de |det| = |B|C|²|, sem divisão.

    d/dt ln|det| = Ḃ/B + 2Re(Ċ/C) = −(γ₊+γ₋+2γ_z); falha quando > tol.
    """
    det = traj.det_bloch
    ddet = traj.db * np.abs(traj.c) ** 2 + 2.0 * traj.b * np.real(traj.dc * np.conj(traj.c))
    return _veredicto(traj.t, ddet * det > tol * det ** 2)
