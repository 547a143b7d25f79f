"""Character varieties of twisted Hopf link groups in SU(2), SU(3), U(2) and SL(2,C)."""

__version__ = "0.1.0"
