# occnet/corpus_parser/__init__.py
# Marks this directory as a Python package.
