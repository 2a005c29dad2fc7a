# Constantes numéricas e catálogo de figuras; não importa módulos do projeto
# Versão: 1.0 | Atualizado: Outubro/2026

NOME_PROJETO = "QubitFoton"
VERSION = "v1.0.0"

# ── Integrador (Dormand–Prince 8(5,3) do scipy) ──────────────────────────────
METODO_INTEGRADOR = "DOP853"
REL_TOL = 1e-9
ABS_TOL = 1e-11

# ── Quadratura adaptativa ─────────────────────────────────────────────────────
QUAD_TOL = 1e-10
QUAD_LIMITE_SUBINTERVALOS = 200
QUAD_EPSREL = 1e-11       # piso relativo; abaixo disto só sobra arredondamento
QUAD_ERRO_FATAL = 1e-8    # erro estimado, relativo a max(1, |integral|), que aborta

# ── Singularidades e taxas ────────────────────────────────────────────────────
# B relativo a max(1, |B(0)|); C absoluto, pois |C(0)| = 1
EPS_SINGULAR = 1e-9
LIMIAR_MINIMO_C = 1e-6    # mínimos locais de |C| abaixo disto são refinados
TOL_BISSECAO = 1e-10      # resíduo exigido no zero refinado

# ── Testemunhas ───────────────────────────────────────────────────────────────
TOL_WITNESS = 1e-8
T_BURN = 1e-3             # em unidades de 1/Γ; exclui a borda t = 0
TOL_SINAL_PRODUTO = 1e-9

# ── Perfil exponencial fechado ────────────────────────────────────────────────
# |α−1| abaixo disto: formas ressonantes escritas em ε = α−1, sem cancelamento
LIMIAR_RAMO_ALFA = 1e-2

# ── Grade e saída ─────────────────────────────────────────────────────────────
T_MAX_PADRAO = 15.0
N_PONTOS_PADRAO = 1501
DIGITOS_SAIDA = 12
LINHAS_CABECALHO = 8

# Tolerância de positividade ao construir estados a partir de dados numéricos
TOL_ESTADO = 1e-8

# ── Catálogo de figuras (Γ = 1, κ = 1) ───────────────────────────────────────
# tipo: "mapa" → A, B, C, P_e | "modulo" → A, B, |C| | "taxas" | "taxas_desloc" | "somas"
FIGURAS = {
    "fig2-left"  : {"tipo": "mapa",         "alpha": 9.5, "delta0": 0.0, "pe0": 0.5},
    "fig2-right" : {"tipo": "mapa",         "alpha": 1.0, "delta0": 0.0, "pe0": 0.5},
    "fig3-left"  : {"tipo": "taxas",        "alpha": 9.5, "delta0": 0.0},
    "fig3-right" : {"tipo": "taxas",        "alpha": 1.0, "delta0": 0.0},
    "multi-0"    : {"tipo": "modulo",       "alpha": 1.5, "delta0": 0.0},
    "multi-1.5"  : {"tipo": "modulo",       "alpha": 1.5, "delta0": 1.5},
    "multi-2.5"  : {"tipo": "modulo",       "alpha": 1.5, "delta0": 2.5},
    "fig4-left"  : {"tipo": "taxas_desloc", "alpha": 1.5, "delta0": 3.0},
    "fig4-right" : {"tipo": "taxas_desloc", "alpha": 1.5, "delta0": 6.5},
    "fig5-left"  : {"tipo": "somas",        "alpha": 1.5, "delta0": 3.0},
    "fig5-right" : {"tipo": "somas",        "alpha": 1.5, "delta0": 6.5},
}
T_MAX_FIGURA = 10.0
N_PONTOS_FIGURA = 1001

assert set(FIGURAS) == {
    "fig2-left", "fig2-right", "fig3-left", "fig3-right", "multi-0", "multi-1.5",
    "multi-2.5", "fig4-left", "fig4-right", "fig5-left", "fig5-right",
}, "Catálogo de figuras incompleto"
