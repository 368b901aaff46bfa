import random
from math import factorial, prod

import numpy as np
import pytest

from permuperc.faces import (
    FaceChain,
    contains,
    face_neighbors,
    faces_intersect,
    full_face,
    members,
    project,
    refine,
    split_level,
)
from permuperc.perm import all_permutations, neighbors, unrank
from permuperc.verify import check_projection


def F(*blocks):
    return FaceChain.from_blocks(blocks)


def test_full_face():
    f = full_face(2)
    assert f.blocks == (frozenset({1, 2, 3}),)
    assert f.dim == 2
    assert len(list(members(full_face(3)))) == 24
    assert all(contains(full_face(3), pi) for pi in all_permutations(3))


def test_invalid_chains():
    with pytest.raises(ValueError):
        F({1, 2}, {2, 3})
    with pytest.raises(ValueError):
        F({1}, {3})
    with pytest.raises(ValueError):
        F({1, 2}, set(), {3})


def test_contains_examples():
    f = F({1, 2}, {3})
    assert contains(f, (2, 1, 3))
    assert not contains(f, (3, 1, 2))
    assert contains(F({1}, {2, 3}, {4}), (1, 2, 3, 4))
    with pytest.raises(ValueError):
        contains(f, (1, 2, 3, 4))


def test_face_neighbors():
    assert face_neighbors(F({1, 2}, {3}), (1, 2, 3)) == [(1, (2, 1, 3))]
    pi = (2, 4, 1, 3)
    assert face_neighbors(full_face(3), pi) == neighbors(pi)
    with pytest.raises(ValueError):
        face_neighbors(F({1, 2}, {3}), (3, 1, 2))


def test_two_by_two_is_four_cycle():
    f = F({1, 2}, {3, 4})
    vs = list(members(f))
    assert len(vs) == 4
    for x in vs:
        assert len(face_neighbors(f, x)) == 2


def test_split_level():
    assert all(split_level(full_face(3), v) for v in (1, 2, 3))
    f = F({1, 2}, {3, 4})
    assert not split_level(f, 2)
    assert split_level(f, 1) and split_level(f, 3)


def test_refine_examples():
    assert refine(full_face(2), (1, 2, 3), 1) == F({1}, {2, 3})
    assert refine(full_face(2), (3, 1, 2), 1) == F({2}, {1, 3})
    with pytest.raises(ValueError):
        refine(F({1, 2}, {3, 4}), (1, 2, 3, 4), 2)


def test_refine_consistency():
    f = full_face(3)
    for v in (1, 2, 3):
        for pi in all_permutations(3):
            child = refine(f, pi, v)
            assert contains(child, pi)
            assert child.dim == f.dim - 1
            for sigma in all_permutations(3):
                same = {i for i, a in enumerate(pi) if a <= v} == {i for i, a in enumerate(sigma) if a <= v}
                assert contains(child, sigma) == same


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_every_face_is_product_of_permutahedra(n):
    """Induced subgraph: d-regular with prod (|B|)! vertices, for random chains."""
    rng = random.Random(n)
    for _ in range(30):
        positions = list(range(1, n + 2))
        rng.shuffle(positions)
        cuts = sorted(rng.sample(range(1, n + 1), rng.randint(0, n)))
        blocks = [positions[a:b] for a, b in zip([0] + cuts, cuts + [n + 1])]
        f = F(*blocks)
        vs = set(members(f))
        assert len(vs) == prod(factorial(len(b)) for b in blocks) == f.size()
        for x in vs:
            inside = [y for _, y in neighbors(x) if y in vs]
            assert len(inside) == f.dim
            assert sorted(y for _, y in face_neighbors(f, x)) == sorted(inside)
        assert f.factor_dims == tuple(len(b) - 1 for b in blocks if len(b) >= 2)


def test_project_singleton():
    f = full_face(3)
    assert project(f, [(1, 2, 3, 4)]) == {(1, 2, 3, 4): f}


def test_project_pair():
    out = project(full_face(2), [(1, 2, 3), (2, 1, 3)])
    assert out[(1, 2, 3)] == F({1}, {2, 3})
    assert out[(2, 1, 3)] == F({2}, {1, 3})
    assert not faces_intersect(*out.values())


def test_project_errors():
    with pytest.raises(ValueError):
        project(F({1, 2}, {3}), [(3, 1, 2)])
    with pytest.raises(ValueError):
        project(full_face(2), [(1, 2, 3), (1, 2, 3)])


def test_faces_intersect_matches_members():
    rng = random.Random(7)
    n = 3
    for _ in range(300):
        xs = {unrank(n, rng.randrange(24)) for _ in range(rng.randint(1, 4))}
        faces = list(project(full_face(n), xs).values())
        g = refine(full_face(n), unrank(n, rng.randrange(24)), rng.randint(1, n))
        for f in faces:
            assert faces_intersect(f, g) == bool(set(members(f)) & set(members(g)))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_projection_exhaustive_small(n):
    ok, detail = check_projection(n, 1000, 5, seed=n, explicit=True)
    assert ok, detail


@pytest.mark.parametrize("n", [5, 6, 7, 8])
def test_projection_random_large(n):
    ok, detail = check_projection(n, 2500, 5, seed=100 + n, explicit=False)
    assert ok, detail


def test_json_roundtrip():
    f = F({2}, {1, 3}, {4})
    assert FaceChain.from_json(f.to_json()) == f
