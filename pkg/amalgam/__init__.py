# amalgam/__init__.py
# Exact embedding oracle and periodic-grid numerics for Wiener amalgam spaces

__version__ = "1.0.0"
