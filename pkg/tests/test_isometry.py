"""Group actions, canonical keys, orbit sizes, and the oracle cross-check."""

import math
import random
from itertools import permutations

import numpy as np
import pytest

from cnotcayley import gf2
from cnotcayley.gf2 import (
    BitMatrix,
    Permutation,
    Transvection,
    all_transvections,
    apply_transvection,
    identity,
    random_invertible,
    transpose_inverse,
    transvection_matrix,
)
from cnotcayley.isometry import (
    IsometrySpec,
    act,
    canonicalize,
    canonicalize_batch,
    canonicalize_reference,
    successor_orbits,
)

SYM = IsometrySpec.SYM
SYM_TI = IsometrySpec.SYM_TI


def enumerate_group(n):
    """All invertible packed matrices by exhaustive filtering; independent
    of every exploration code path.  Tractable for n <= 4."""
    out = []
    for bits in range(1 << (n * n)):
        if gf2._rank_bits(bits, n) == n:
            out.append(bits)
    return out


def all_perms(n):
    return [Permutation(n, tuple(x + 1 for x in p))
            for p in permutations(range(n))]


def random_perm(n, rng):
    images = list(range(1, n + 1))
    rng.shuffle(images)
    return Permutation(n, tuple(images))


# ---------------------------------------------------------------------------
# the action
# ---------------------------------------------------------------------------


def test_act_identity_axiom():
    rng = random.Random(1)
    for _ in range(20):
        m = random_invertible(4, rng)
        assert act(Permutation.identity(4), 1, m) == m


def test_act_on_generator():
    sigma = gf2.parse_perm("(1 2)", 3)
    assert act(sigma, 1, transvection_matrix(Transvection(1, 2), 3)) == \
        transvection_matrix(Transvection(2, 1), 3)


def test_act_sign_validation():
    with pytest.raises(ValueError):
        act(Permutation.identity(3), 0, identity(3))


def test_act_composition_order_immaterial():
    rng = random.Random(2)
    for _ in range(30):
        m = random_invertible(5, rng)
        sigma = random_perm(5, rng)
        assert act(sigma, -1, m) == \
            gf2.conjugate_by_perm(sigma, transpose_inverse(m)) == \
            transpose_inverse(gf2.conjugate_by_perm(sigma, m))


def test_generators_preserved_by_every_isometry():
    rng = random.Random(3)
    for n in (3, 4, 5):
        gens = {transvection_matrix(t, n).bits for t in all_transvections(n)}
        for _ in range(10):
            sigma = random_perm(n, rng)
            for xi in (1, -1):
                image = {act(sigma, xi, BitMatrix(n, b)).bits for b in gens}
                assert image == gens


# ---------------------------------------------------------------------------
# canonical keys
# ---------------------------------------------------------------------------


def test_canonicalize_identity():
    for n in range(1, 7):
        for spec in (SYM, SYM_TI):
            info = canonicalize(identity(n), spec)
            assert info.key == identity(n)
            assert info.orbit_size == 1


def test_transvections_share_one_orbit():
    infos = {canonicalize(transvection_matrix(t, 3), SYM)
             for t in all_transvections(3)}
    assert len({i.key for i in infos}) == 1
    assert all(i.orbit_size == 6 for i in infos)


def test_distance_two_sphere_n3():
    # all 24 distance-2 elements fall into 5 orbits
    gens = [transvection_matrix(t, 3) for t in all_transvections(3)]
    ball1 = {identity(3).bits} | {g.bits for g in gens}
    sphere2 = set()
    for a in gens:
        for b in gens:
            bits = gf2.multiply(a, b).bits
            if bits not in ball1:
                sphere2.add(bits)
    assert len(sphere2) == 24
    by_key = {}
    for b in sphere2:
        info = canonicalize(BitMatrix(3, b), SYM)
        by_key[info.key.bits] = info.orbit_size
    assert len(by_key) == 5
    assert sum(by_key.values()) == 24


def test_canonical_idempotence():
    rng = random.Random(4)
    for n in (2, 3, 4, 5):
        for spec in (SYM, SYM_TI):
            for _ in range(20):
                info = canonicalize(random_invertible(n, rng), spec)
                again = canonicalize(info.key, spec)
                assert again.key == info.key
                assert again.orbit_size == info.orbit_size


def test_canonical_invariant_on_orbit():
    rng = random.Random(5)
    for _ in range(40):
        m = random_invertible(5, rng)
        sigma = random_perm(5, rng)
        for spec, signs in ((SYM, (1,)), (SYM_TI, (1, -1))):
            base = canonicalize(m, spec)
            for xi in signs:
                other = canonicalize(act(sigma, xi, m), spec)
                assert other.key == base.key
                assert other.orbit_size == base.orbit_size


def test_orbit_partition_of_full_group_n3():
    elements = enumerate_group(3)
    assert len(elements) == 168
    by_key = {}
    for bits in elements:
        info = canonicalize(BitMatrix(3, bits), SYM)
        by_key[info.key.bits] = info.orbit_size
    assert len(by_key) == 33
    assert sum(by_key.values()) == 168


def test_orbit_stabilizer_product():
    rng = random.Random(6)
    for n in range(1, 7):
        for spec in (SYM, SYM_TI):
            order = spec.group_order(n)
            for _ in range(6):
                m = random_invertible(n, rng)
                images = set()
                fixing = 0
                for sigma in all_perms(n):
                    for xi in ((1,) if spec is SYM else (1, -1)):
                        img = act(sigma, xi, m).bits
                        images.add(img)
                        if img == m.bits:
                            fixing += 1
                assert len(images) * fixing == order
                info = canonicalize(m, spec)
                assert info.orbit_size == len(images)
                assert info.key.bits == min(images)


def test_orbit_size_divides_group_order():
    rng = random.Random(7)
    for n in (3, 4, 5, 6):
        for spec in (SYM, SYM_TI):
            order = spec.group_order(n)
            for _ in range(15):
                info = canonicalize(random_invertible(n, rng), spec)
                assert order % info.orbit_size == 0
                assert info.orbit_size <= 2 * math.factorial(n)


def test_full_isometry_orbit_is_kappa_times_sym_orbit():
    rng = random.Random(8)
    for n in (3, 4, 5):
        for _ in range(25):
            m = random_invertible(n, rng)
            s = canonicalize(m, SYM).orbit_size
            f = canonicalize(m, SYM_TI).orbit_size
            kappa = f // s
            assert f == s * kappa and kappa in (1, 2)
            ti = transpose_inverse(m)
            sym_image_contains_ti = any(
                gf2.conjugate_by_perm(sigma, m) == ti for sigma in all_perms(n))
            assert kappa == (1 if sym_image_contains_ti else 2)


def test_fast_path_matches_reference_oracle():
    rng = random.Random(9)
    for n in range(1, 7):
        for spec in (SYM, SYM_TI):
            for _ in range(25):
                m = random_invertible(n, rng)
                fast = canonicalize(m, spec)
                ref = canonicalize_reference(m, spec)
                assert fast.key == ref.key
                assert fast.orbit_size == ref.orbit_size


def test_fast_path_matches_oracle_large_orders():
    # n=8 exercises the split-plane kernel; the oracle costs ~1 s per
    # matrix there, so samples are few
    rng = random.Random(10)
    for n, spec, count in ((7, SYM, 4), (8, SYM, 3), (8, SYM_TI, 2)):
        for _ in range(count):
            m = random_invertible(n, rng)
            fast = canonicalize(m, spec)
            ref = canonicalize_reference(m, spec)
            assert fast.key == ref.key
            assert fast.orbit_size == ref.orbit_size


def test_batch_matches_scalar():
    rng = random.Random(10)
    for n in (2, 5, 8):
        keys = np.array([random_invertible(n, rng).bits for _ in range(64)],
                        dtype=np.uint64)
        for spec in (SYM, SYM_TI):
            canon, sizes = canonicalize_batch(keys, n, spec)
            for idx in range(keys.size):
                info = canonicalize(BitMatrix(n, int(keys[idx])), spec)
                assert info.key.bits == int(canon[idx])
                assert info.orbit_size == int(sizes[idx])


def test_order_zero_canonicalize():
    info = canonicalize(BitMatrix(0, 0), SYM)
    assert info.key.n == 0 and info.orbit_size == 1


def test_order_two_groups_coincide():
    # at n=2 the transpose-inverse map equals conjugation by the swap,
    # so adding it changes neither keys nor orbit sizes
    for bits in enumerate_group(2):
        m = BitMatrix(2, bits)
        assert canonicalize(m, SYM) == canonicalize(m, SYM_TI)
        assert transpose_inverse(m) == \
            gf2.conjugate_by_perm(gf2.parse_perm("(1 2)", 2), m)


# ---------------------------------------------------------------------------
# successor orbits
# ---------------------------------------------------------------------------


def test_successors_of_identity():
    infos = successor_orbits(identity(3), SYM)
    assert len(infos) == 1
    assert infos[0].orbit_size == 6


def test_successor_count_bound():
    rng = random.Random(11)
    for _ in range(10):
        key = canonicalize(random_invertible(4, rng), SYM).key
        assert len(successor_orbits(key, SYM)) <= 4 * 3


def test_successor_orbit_sets_agree_across_orbit():
    # same-orbit inputs yield the same successor key sets
    rng = random.Random(12)
    for _ in range(15):
        m = random_invertible(4, rng)
        sigma = random_perm(4, rng)
        g2 = act(sigma, 1, m)
        keys1 = {canonicalize(apply_transvection(t, m), SYM).key.bits
                 for t in all_transvections(4)}
        keys2 = {canonicalize(apply_transvection(t, g2), SYM).key.bits
                 for t in all_transvections(4)}
        assert keys1 == keys2


def test_successor_requires_canonical_input():
    # T[3,1] packs above T[1,2], the minimum of the transvection orbit
    m = transvection_matrix(Transvection(3, 1), 3)
    assert canonicalize(m, SYM).key != m
    with pytest.raises(ValueError):
        successor_orbits(m, SYM)
