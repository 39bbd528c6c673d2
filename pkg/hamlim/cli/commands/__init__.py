# hamlim/cli/commands/__init__.py
from . import bounds, demos, evolution, make, norms

__all__ = ["bounds", "demos", "evolution", "make", "norms"]
