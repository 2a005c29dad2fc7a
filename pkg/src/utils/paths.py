from pathlib import Path

# diretórios criados sob demanda por utils.io
ROOT    = Path(__file__).resolve().parent.parent.parent
OUTPUTS = ROOT / "data" / "outputs"
FIGURAS = OUTPUTS / "figuras"
