# amalgam/core/__init__.py
# Core package initialization
