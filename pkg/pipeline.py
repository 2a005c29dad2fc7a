"""
pipeline.py — Ponto de entrada do QubitFoton.

Uso:
    python pipeline.py simulate --profile exp:1 --kappa 1 --pe0 0.5 --t-max 10 --points 1001
    python pipeline.py witness --profile exp:9.5
    python pipeline.py figure fig3-right
    python pipeline.py sweep --vary alpha=1:10:10
    python pipeline.py validate quick
    python pipeline.py --help

Comandos:
    simulate       — hierarquia + coeficientes + taxas + testemunhas
    coefficients   — A(t), B(t), C(t) e derivadas (--oracle: formas fechadas)
    rates          — γ₊, γ₋, γ_z, ω e relaxação (--oracle: formas fechadas)
    witness        — relatório JSON de divisibilidade e não-Markovianidade
    sweep          — varredura em uma ou duas chaves (--vary)
    figure         — CSV de uma figura do catálogo
    optimal-pulse  — pulso que maximiza P_e(T)
    validate       — oráculos e proposições (quick | full)
"""

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent
sys.path.insert(0, str(ROOT / "src"))

from cli.commands import main

if __name__ == "__main__":
    sys.exit(main())
