# occnet/job_classifier/__init__.py
# Marks this directory as a Python package.
