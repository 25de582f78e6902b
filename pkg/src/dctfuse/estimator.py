"""Scikit-learn style front end for the fusion pipeline.

The fuser is a stateless transformer: ``fit`` only validates parameters,
``transform`` maps a stack of registered source images to the fused
image.  Inheriting the sklearn base classes buys ``get_params`` /
``set_params``, cloning and pipeline compatibility.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from . import measures
from .fusion import FusionOptions, fuse, fuse_multi


class DctFusion(TransformerMixin, BaseEstimator):
    """Multi-focus image fusion by per-block DCT focus comparison.

    Parameters
    ----------
    measure : "ampmax", "variance", "sf" or "acmax"
        Block focus measure used to pick the winning source.
    consistency_verification : bool
        Majority-filter the decision map before selecting blocks.
    majority_radius : int
        Neighborhood radius of the majority filter (1 means 3x3 blocks).
    arithmetic : "float" or "fixed"
        Reference float path or the Q(1,10,24) hardware path.
    ac_threshold : float
        Magnitude threshold of the "acmax" measure.
    """

    def __init__(self, measure="ampmax", consistency_verification=False,
                 majority_radius=1, arithmetic="float",
                 ac_threshold=measures.DEFAULT_AC_THRESHOLD):
        self.measure = measure
        self.consistency_verification = consistency_verification
        self.majority_radius = majority_radius
        self.arithmetic = arithmetic
        self.ac_threshold = ac_threshold

    def _options(self) -> FusionOptions:
        return FusionOptions(measure=self.measure,
                             consistency_verification=self.consistency_verification,
                             majority_radius=self.majority_radius,
                             arithmetic=self.arithmetic,
                             ac_threshold=self.ac_threshold)

    def fit(self, X=None, y=None):
        """Stateless; validates the parameters and returns self."""
        self._options()
        return self

    def transform(self, X) -> np.ndarray:
        """Fuse a stack of source images.

        ``X`` is a sequence (or array) of two or more equally sized
        grayscale images; the result is the fused uint8 image.
        """
        stack = [np.asarray(im) for im in X]
        fused, _ = fuse_multi(stack, self._options())
        return fused

    def fuse_pair(self, a, b):
        """Two-source fusion returning ``(fused, decision_map, report)``."""
        return fuse(a, b, self._options())
