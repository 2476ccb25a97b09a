"""qiw: WRT invariants of E6, E7, E8 and D_K, Eichler integrals and polyhedral q-series."""

__version__ = "0.1.0"
