"""hardylab - numerical checks of multipolar Hardy inequalities on space forms."""

__version__ = '0.1.0'
