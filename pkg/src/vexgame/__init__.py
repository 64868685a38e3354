"""Limit-order games on continuous price paths and the variation exponent.

Modules: ``pathgen`` (paths and their text format), ``game`` (hit scanning
and capital), ``strategy`` (beta-binomial betting), ``analysis``
(summaries, predictions, roughness), ``forcing`` (multi-scale accounts) and
``cli``.
"""
from . import analysis, forcing, game, pathgen, strategy

__version__ = "0.1.0"

__all__ = ["analysis", "forcing", "game", "pathgen", "strategy", "__version__"]
