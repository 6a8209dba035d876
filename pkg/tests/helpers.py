from fractions import Fraction

from hypothesis import strategies as st

from rendezvous_k3.algebra import PathVector


def rational_vectors(k, lo=-50, hi=50, max_den=12):
    n = 3 ** k
    return st.lists(
        st.fractions(min_value=lo, max_value=hi, max_denominator=max_den),
        min_size=n, max_size=n,
    ).map(PathVector.from_values)


def random_rational_vector(rng, k, lo=-30, hi=30, max_den=7):
    n = 3 ** k
    nums = rng.integers(lo, hi + 1, size=n)
    dens = rng.integers(1, max_den + 1, size=n)
    return PathVector.from_values([Fraction(int(a), int(b)) for a, b in zip(nums, dens)])


def random_simplex(rng, k, high=20, sparsity=0.0):
    """Random exact strategy: integer weights over their sum."""
    n = 3 ** k
    w = rng.integers(0, high + 1, size=n)
    if sparsity:
        w = w * (rng.random(n) >= sparsity)
    if w.sum() == 0:
        w[rng.integers(n)] = 1
    s = int(w.sum())
    return PathVector.from_values([Fraction(int(v), s) for v in w])
