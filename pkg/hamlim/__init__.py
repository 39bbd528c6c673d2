"""hamlim: norm hierarchy, hard instances and star-forest simulation for dense Hamiltonians."""

__version__ = "0.1.0"
