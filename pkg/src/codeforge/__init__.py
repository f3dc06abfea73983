"""codeforge: multi-language code/docstring dataset pipeline."""

__version__ = "0.1.0"
