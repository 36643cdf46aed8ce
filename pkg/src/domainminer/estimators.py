"""scikit-learn style wrappers around summarization and mining.

``fit`` takes an access-control matrix (``n x n`` for one right or
``n x k x n``); ``predict`` answers ``(u, a, v)`` queries with the learnt
policy; ``transform`` returns the completed boolean matrix.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .dte import mine_dte
from .solve import mine
from .summary import summarize
from .validation import check_matrix, check_triples


class _PolicyMixin(TransformerMixin):
    def predict(self, T):
        """Grant decisions for an array of ``(u, a, v)`` triples."""
        check_is_fitted(self, "instantiation_")
        n, k = self.instantiation_.shape[0], self.instantiation_.shape[1]
        T = check_triples(T, n, k)
        return self.instantiation_[T[:, 0], T[:, 1], T[:, 2]]

    def transform(self, X):
        """Completed matrix for ``X``, which must agree with the fitted matrix where specified."""
        check_is_fitted(self, "instantiation_")
        psm = check_matrix(X)
        if psm.cells.shape != self.instantiation_.shape:
            raise ValueError(f"expected shape {self.instantiation_.shape}, got {psm.cells.shape}")
        known = psm.cells != -1
        if (psm.cells[known] != self.instantiation_[known]).any():
            raise ValueError("X disagrees with the fitted policy on specified cells")
        out = self.instantiation_.copy()
        return out[:, 0, :] if np.asarray(X).ndim == 2 and not hasattr(X, "cells") else out


class DomainSummarizer(_PolicyMixin, BaseEstimator):
    """Minimal domain policy of a complete matrix.

    Attributes after ``fit``: ``labels_`` (domain of every entity),
    ``summary_`` (domain x right x domain grants), ``n_domains_``,
    ``policy_`` and ``instantiation_``.
    """

    def __init__(self, n_jobs=1):
        self.n_jobs = n_jobs

    def fit(self, X, y=None):
        g = check_matrix(X, allow_stars=False).to_digraph()
        policy, _ = summarize(g, n_jobs=self.n_jobs)
        self.policy_ = policy
        self.labels_ = np.asarray(policy.assignment)
        self.summary_ = policy.summary.adj.copy()
        self.n_domains_ = policy.n_domains
        self.instantiation_ = g.adj.copy()
        return self


class DomainPolicyMiner(_PolicyMixin, BaseEstimator):
    """Fewest-domain policy consistent with a partially specified matrix.

    Parameters mirror :func:`domainminer.solve.mine`.  Adds ``objective_``
    (unoccupied class slots at the optimum) to the summarizer's attributes.
    """

    def __init__(self, encoding="BE+NF+MD+LI", m=None, solver="builtin", timeout=None):
        self.encoding = encoding
        self.m = m
        self.solver = solver
        self.timeout = timeout

    def fit(self, X, y=None):
        psm = check_matrix(X)
        res = mine(psm, encoding=self.encoding, m=self.m, timeout=self.timeout, solver=self.solver)
        self.policy_ = res.policy
        self.labels_ = np.asarray(res.policy.assignment)
        self.summary_ = res.policy.summary.adj.copy()
        self.n_domains_ = res.n_domains
        self.objective_ = res.objective
        self.instantiation_ = res.instantiation.adj.copy()
        return self


class DtePolicyMiner(_PolicyMixin, BaseEstimator):
    """Optimal domain and type enforcement policy of a complete matrix.

    Attributes after ``fit``: ``domains_`` and ``types_`` (per-entity
    labels), ``table_``, ``n_domains_``, ``n_types_`` and ``policy_``.
    """

    def fit(self, X, y=None):
        g = check_matrix(X, allow_stars=False).to_digraph()
        policy = mine_dte(g)
        self.policy_ = policy
        self.domains_ = np.asarray(policy.delta)
        self.types_ = np.asarray(policy.tau)
        self.table_ = policy.tbl.copy()
        self.n_domains_ = policy.domain_count
        self.n_types_ = policy.type_count
        self.instantiation_ = g.adj.copy()
        return self
