# occnet/text_similarity/__init__.py
# Marks this directory as a Python package.
