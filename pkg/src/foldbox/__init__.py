"""foldbox: a Petri-net engine whose run histories are morphisms in a
free symmetric monoidal category, with state-space analysis, a wire
codec, integer nets, executable folds, a CLI, and a stepping service.
"""

__version__ = "0.1.0"
