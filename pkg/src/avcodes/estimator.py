"""scikit-learn style wrapper around the list decoder.

``fit`` runs the preparation step (it needs no data); ``predict`` maps each row
of received words to the closest codeword in its decoded list.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .avcode import code_new
from .gf import parse_field
from .listdec import decode, max_radius, plan
from .zbounds import BoundMethod


class ListDecoder(BaseEstimator):
    """List decoder for ``E(M, S)``.

    Parameters
    ----------
    field : str
        ``"p,e"``.
    sets : list
        One entry per coordinate, either a list of field elements or ``"full"``.
    family : str or dict
        Monomial family spec, e.g. ``"total:1"``.
    r : int
        Multiplicity.
    E : int or None
        Error count to plan for; ``None`` means the largest decodable one.
    method : str
        Zero-count bound used by the preparation step.
    cap : int or None
        List-size limit for root finding.
    """

    def __init__(self, field="5,1", sets=("full", "full"), family="total:1", r=2, E=None, method="recursive", cap=None):
        self.field = field
        self.sets = sets
        self.family = family
        self.r = r
        self.E = E
        self.method = method
        self.cap = cap

    def fit(self, X=None, y=None):
        """Build the code and the decoder plan.  ``X`` and ``y`` are ignored."""
        method = BoundMethod.parse(self.method)
        self.code_ = code_new(parse_field(self.field), list(self.sets), self.family)
        self.max_radius_ = max_radius(self.r, self.code_.shape, self.code_.family, method)
        E = self.max_radius_ if self.E is None else self.E
        self.plan_ = plan(self.r, E, self.code_.shape, self.code_.family, method)
        self.n_features_in_ = self.code_.n
        return self

    def _rows(self, X):
        check_is_fitted(self, "plan_")
        X = check_array(X, dtype=np.int64, ensure_2d=True)
        if X.shape[1] != self.code_.n:
            raise ValueError(f"X has {X.shape[1]} columns, the code has length {self.code_.n}")
        return X

    def decode_lists(self, X):
        """Full decoder output for every row."""
        return [decode(self.code_, self.plan_, row, self.cap) for row in self._rows(X)]

    def predict(self, X):
        """Closest listed codeword per row; rows with an empty list are all ``-1``."""
        out = np.full(self._rows(X).shape, -1, dtype=np.int64)
        for k, res in enumerate(self.decode_lists(X)):
            if len(res):
                out[k] = res.words[0].codeword
        return out

    def score(self, X, y):
        """Fraction of rows whose list contains the matching row of ``y``."""
        y = check_array(y, dtype=np.int64)
        lists = self.decode_lists(X)
        return float(np.mean([res.contains(cw) for res, cw in zip(lists, y)]))
