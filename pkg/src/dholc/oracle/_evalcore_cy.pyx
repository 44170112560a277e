# cython: language_level=3
# Compiled twin of the evaluation kernel: same source, built as an
# extension module. Keep _evalcore.py the single source of truth.

include "_evalcore.py"

BACKEND = "cython"
