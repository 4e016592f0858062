from itertools import combinations

import pytest

from kneserlab import full_family, kneser_hypergraph


@pytest.fixture
def petersen():
    """KG_{5,2}: the Petersen graph (10 vertices, 15 edges)."""
    return kneser_hypergraph(full_family(5, 2), 2)


@pytest.fixture
def kg62():
    return kneser_hypergraph(full_family(6, 2), 2)


def brute_disjoint_edges(fam, r):
    """Oracle: all r-subsets of vertex indices with pairwise disjoint sets,
    found by filtering itertools.combinations (lex order)."""
    out = []
    for idxs in combinations(range(len(fam)), r):
        masks = [fam[i].mask for i in idxs]
        union = 0
        ok = True
        for m in masks:
            if m & union:
                ok = False
                break
            union |= m
        if ok:
            out.append(idxs)
    return out
