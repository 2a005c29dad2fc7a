"""
erros.py — Família de exceções do QubitFoton.

Códigos de saída do CLI:
    ConfiguracaoInvalida        → 2
    FalhaIntegracao/Quadratura  → 3

Todas atravessam o pool de processos da varredura: __reduce__ refaz a
exceção a partir dos mesmos argumentos do construtor.
"""


class ErroDinamica(Exception):
    """Base de todos os erros do projeto."""

    _argumentos: tuple = ()

    def __reduce__(self):
        return type(self), self._argumentos or self.args


class ConfiguracaoInvalida(ErroDinamica, ValueError):
    def __init__(self, campo: str, mensagem: str):
        self.campo = campo
        self._argumentos = (campo, mensagem)
        super().__init__(f"{campo}: {mensagem}")


class FalhaIntegracao(ErroDinamica, RuntimeError):
    def __init__(self, tempo: float, mensagem: str):
        self.tempo = tempo
        self._argumentos = (tempo, mensagem)
        super().__init__(f"integrador parou em t={tempo:.6g}: {mensagem}")


class FalhaQuadratura(ErroDinamica, RuntimeError):
    def __init__(self, erro_estimado: float, tolerancia: float, onde: str = ""):
        self.erro_estimado = erro_estimado
        self.tolerancia = tolerancia
        self._argumentos = (erro_estimado, tolerancia, onde)
        local = f" ({onde})" if onde else ""
        super().__init__(
            f"quadratura não convergiu{local}: erro estimado {erro_estimado:.3g} > tol {tolerancia:.3g}"
        )


class IntervaloSingular(ErroDinamica, ValueError):
    """Acúmulo de taxas pedido sobre amostras não regulares."""

    def __init__(self, tempo: float):
        self.tempo = tempo
        self._argumentos = (tempo,)
        super().__init__(f"amostra não regular em t={tempo:.6g}; restrinja o intervalo")
