import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from serre_lab.errors import LevelTooLarge, OddLevel
from serre_lab.gl2 import (
    SubgroupModN, all_td_pairs, class_table, commutator_subgroup, conjugacy_classes, det,
    descriptor_of, epsilon_char, g_td_set, gl2_elements, gl2_generators, gl2_order,
    identity, inverse, mul, power, real_characters, represents_pair, sl2,
    subgroup_closure, td_pairs, trace, verify_descriptor,
)


def brute_order(N):
    return sum(1 for m in product(range(N), repeat=4) if __import__("math").gcd(
        (m[0] * m[3] - m[1] * m[2]) % N, N) == 1)


@pytest.mark.parametrize("N", [2, 3, 4, 5, 6, 8])
def test_gl2_order(N):
    assert gl2_order(N) == brute_order(N) == len(gl2_elements(N))


def test_gl2_order_24():
    assert gl2_order(24) == 73728


def test_enumeration_bound():
    with pytest.raises(LevelTooLarge):
        gl2_elements(25)


@pytest.mark.parametrize("N,count", [(2, 3), (3, 8), (4, 14), (5, 24), (6, 24), (8, 60),
                                     (9, 78), (12, 112)])
def test_class_counts(N, count):
    T = class_table(N)
    assert len(T) == count
    assert sum(c.size for c in T.classes) == gl2_order(N)


@pytest.mark.parametrize("N", range(2, 13))
def test_descriptors_reconstruct_classes(N):
    T = class_table(N)
    assert all(verify_descriptor(c) for c in T.classes)
    assert len({c.descriptor for c in T.classes}) == len(T)


@settings(max_examples=60)
@given(st.sampled_from([3, 4, 5, 6, 8, 9, 12]), st.data())
def test_descriptor_is_conjugation_invariant(N, data):
    G = gl2_elements(N)
    g = data.draw(st.sampled_from(G))
    h = data.draw(st.sampled_from(G))
    conj = mul(mul(h, g, N), inverse(h, N), N)
    assert descriptor_of(g, N) == descriptor_of(conj, N)
    assert class_table(N).class_of(g) == class_table(N).class_of(conj)


def test_closure_examples():
    assert subgroup_closure([], 3).elements == frozenset({identity(3)})
    assert len(subgroup_closure([(1, 1, 0, 1), (0, 1, 1, 0)], 2).elements) == 6
    assert subgroup_closure(gl2_generators(12), 12).order == gl2_order(12)


@settings(max_examples=40)
@given(st.sampled_from([3, 4, 5, 6]), st.data())
def test_lagrange(N, data):
    gens = data.draw(st.lists(st.sampled_from(gl2_elements(N)), max_size=2))
    assert gl2_order(N) % subgroup_closure(gens, N).order == 0


@pytest.mark.parametrize("N,order", [(3, 24), (4, 24), (5, 120), (8, 192), (9, 648)])
def test_commutator_subgroup(N, order):
    C = commutator_subgroup(N)
    assert C.order == order
    S = sl2(N).elements
    want = S if N % 2 else frozenset(g for g in S if epsilon_char(g, N) == 1)
    assert C.elements == want


def test_epsilon_requires_even_level():
    with pytest.raises(OddLevel):
        epsilon_char(identity(3), 3)


@pytest.mark.parametrize("N", [2, 4, 6, 8, 12])
def test_epsilon_is_a_character(N):
    rng = random.Random(N)
    G = gl2_elements(N)
    for _ in range(200):
        a, b = rng.choice(G), rng.choice(G)
        assert epsilon_char(mul(a, b, N), N) == epsilon_char(a, N) * epsilon_char(b, N)


def test_represents_pair_examples():
    I3 = SubgroupModN(3, frozenset({identity(3)}))
    assert represents_pair(I3, 2, 1)
    assert not represents_pair(I3, 0, 1)
    assert not represents_pair(sl2(3), 1, 2)


@pytest.mark.parametrize("N", [2, 3, 4, 5, 6])
def test_td_partition(N):
    sizes = sum(len(g_td_set(N, t, d)) for t, d in all_td_pairs(N))
    assert sizes == gl2_order(N)
    assert len(g_td_set(2, 0, 1)) == 4 and len(g_td_set(2, 1, 1)) == 2


@pytest.mark.parametrize("N", [3, 5, 7])
def test_scalar_td_splits_in_two(N):
    T = class_table(N)
    for lam in range(1, N):
        cls = {T.class_of(g) for g in g_td_set(N, 2 * lam % N, lam * lam % N)}
        assert len(cls) == 2
        assert T.class_of((lam, 0, 0, lam)) in cls and T.class_of((lam, 1, 0, lam)) in cls


@pytest.mark.parametrize("p", [2, 3])
def test_lifting_congruence(p):
    n = 3
    N = p**n
    base = (1, p ** (n - 2), 0, 1)
    want = (1, p ** (n - 1), 0, 1)
    for A in product(range(p), repeat=4):
        g = tuple((b + p ** (n - 1) * a) % N for b, a in zip(base, A))
        assert power(g, p, N) == want


def test_power_identities():
    X3 = [(0, 1, 2, 0), (0, 2, 1, 0), (1, 1, 1, 2), (1, 2, 2, 2), (2, 1, 1, 1), (2, 2, 2, 1)]
    for X in X3:
        hits = 0
        for Y in product(range(3), repeat=4):
            g = tuple(x + 3 * y for x, y in zip(X, Y))
            if trace(g, 9) != 3 or det(g, 9) != 1:
                continue
            hits += 1
            assert power(g, 4, 9) == tuple((i + 3 * x) % 9 for i, x in zip(identity(9), X))
        assert hits
    for X in [(0, 1, 1, 0), (1, 1, 0, 1), (1, 0, 1, 1)]:
        hits = 0
        for Y in product(range(2), repeat=4):
            g = tuple(x + 2 * y for x, y in zip(X, Y))
            if trace(g, 4) != 2 or det(g, 4) != 3:
                continue
            hits += 1
            assert power(g, 2, 4) == tuple((i + 2 * x) % 4 for i, x in zip(identity(4), X))
        assert hits


@pytest.mark.parametrize("W", [4, 8])
def test_index_two_kernels_miss_a_pair(W):
    G = gl2_elements(W)
    full = all_td_pairs(W)
    chars = real_characters(W)[1:]
    assert chars
    for chi in chars:
        K = SubgroupModN(W, frozenset(g for g in G if chi(g) == 1))
        assert K.index == 2
        assert td_pairs(K) != full


@pytest.mark.parametrize("p", [2, 3])
def test_td_surjective_mod_p_subgroups_are_full(p):
    N = p * p
    G = gl2_elements(N)
    full_pairs = all_td_pairs(N)
    rng = random.Random(100 + p)
    tested = 0
    for _ in range(500):
        gens = [rng.choice(G) for _ in range(rng.randint(1, 2))]
        H = subgroup_closure(gens, N)
        mod_p = {tuple(x % p for x in g) for g in H.elements}
        if len(mod_p) == gl2_order(p) and td_pairs(H) == full_pairs:
            tested += 1
            assert H.order == gl2_order(N)
    assert tested > 0
