import pytest

from fixtures import (
    E_A,
    E_A_E_B,
    E_A_STAB,
    E_A_STAB_E_B,
    E_B,
    E_B_E_B,
    LOOP,
    LOOP_FLAT,
    LOOP_STAB,
)
from maxplus_bigo.oracle import check_path_element
from maxplus_bigo.semigroups import (
    BOT,
    Element,
    Flatten,
    NotPathIdempotentError,
    Product,
    ResourceLimitError,
    Stabilise,
    asymptotic_closure,
    elem_mul,
    flatten,
    format_derivation,
    generators,
    is_path_idempotent,
    paths_closure,
    replay,
    size_bound,
    stabilise,
)
from maxplus_bigo.semiring import INF, ONE


@pytest.fixture
def gens(running):
    A, B = running
    g = generators(A, B)
    return {d.letter: (e, d) for e, d in g}


def el(M, x=ONE):
    return Element(0, x, 0, M)


def test_generators_of_running_example(gens):
    assert set(gens) == {"a", "b"}
    assert gens["a"][0] == el(E_A)
    assert gens["b"][0] == el(E_B)


def test_products(gens):
    ea, eb = gens["a"][0], gens["b"][0]
    assert elem_mul(ea, ea) == ea
    assert elem_mul(ea, eb) == el(E_A_E_B)
    assert elem_mul(eb, eb) == el(E_B_E_B)


def test_stabilisation_and_flattening(gens):
    ea, eb = gens["a"][0], gens["b"][0]
    sa = stabilise(ea)
    assert sa == el(E_A_STAB, INF)
    assert elem_mul(sa, eb) == el(E_A_STAB_E_B, INF)
    loop = elem_mul(elem_mul(sa, eb), elem_mul(sa, eb))
    assert loop == el(LOOP, INF)
    assert is_path_idempotent(loop)
    assert not is_path_idempotent(elem_mul(sa, eb))
    assert stabilise(loop) == el(LOOP_STAB, INF)
    assert flatten(loop) == el(LOOP_FLAT, INF)
    with pytest.raises(NotPathIdempotentError):
        stabilise(elem_mul(sa, eb))


def test_closure_sizes(running):
    A, B = running
    g = generators(A, B)
    P = paths_closure(g)
    S = asymptotic_closure(g)
    assert len(g) == 2
    # one state in A, so BOT never appears
    assert BOT not in P
    assert len(P) == 13
    assert len(S) == 69
    assert all(e in S for e in P)
    assert len(P) <= size_bound(A, B)


def test_reference_elements_in_closure(running):
    A, B = running
    S = asymptotic_closure(generators(A, B))
    for M, x in [(E_A_E_B, ONE), (E_B_E_B, ONE), (E_A_STAB, INF), (E_A_STAB_E_B, INF),
                 (LOOP, INF), (LOOP_STAB, INF), (LOOP_FLAT, INF)]:
        assert el(M, x) in S


def test_every_derivation_replays(running):
    A, B = running
    S = asymptotic_closure(generators(A, B))
    for e in S:
        assert replay(S.derivation(e), A, B) == e


def test_path_elements_are_images_of_words(running):
    A, B = running
    P = paths_closure(generators(A, B))
    for e in P:
        w = check_path_element(e, A, B, max_len=len(P) + 1)
        assert w is not None
    assert check_path_element(el(E_A_E_B), A, B) == ("a", "b")


def test_derivation_formatting(gens):
    da, db = gens["a"][1], gens["b"][1]
    d = Flatten(Product(Product(Product(da, db), Stabilise(da)), db))
    assert format_derivation(d) == "(e_a e_b e_a^# e_b)^b"
    assert d.flatten_count() == 1
    assert d.depth() == 5


def test_bot_from_mismatched_states():
    e = Element(0, ONE, 1, ((ONE,),))
    f = Element(0, ONE, 0, ((ONE,),))
    assert elem_mul(e, e) is BOT
    assert elem_mul(elem_mul(e, e), f) is BOT
    P = paths_closure([(e, None), (f, None)])
    assert BOT in P


def test_cap(running):
    A, B = running
    with pytest.raises(ResourceLimitError) as err:
        asymptotic_closure(generators(A, B), cap=10)
    assert err.value.cap == 10
