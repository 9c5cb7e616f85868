"""Integer codes shared by the kernel backends."""

SCHEME_ROE = 0
SCHEME_VAN_LEER = 1
SCHEME_AUSM_PLUS = 2
SCHEME_SLAU = 3
SCHEME_TV = 4
SCHEME_SLAU_HYBRID = 5
SCHEME_TV_HYBRID = 6

SCHEME_IDS = {
    "roe": SCHEME_ROE,
    "van_leer": SCHEME_VAN_LEER,
    "ausm_plus": SCHEME_AUSM_PLUS,
    "slau": SCHEME_SLAU,
    "tv": SCHEME_TV,
    "slau_hybrid": SCHEME_SLAU_HYBRID,
    "tv_hybrid": SCHEME_TV_HYBRID,
}

HYBRID_BASE = {SCHEME_SLAU_HYBRID: SCHEME_SLAU, SCHEME_TV_HYBRID: SCHEME_TV}
