# occnet/__init__.py
# Marks this directory as a Python package.

__version__ = "0.1.0"
