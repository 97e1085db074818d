"""Semi-algebraic refutations of linear systems over prime fields."""

__version__ = "0.1.0"
