"""Code-docstring consistency scorer.

Trains a small bidirectional encoder with a linear head over the
start-token representation, then serves scores over newline-delimited
JSON on stdin/stdout.
"""

__version__ = "0.1.0"
