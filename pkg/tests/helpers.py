"""Shared test fixtures: groups used across the test modules."""

from itertools import product as iproduct

from soclecoh.fingroup import from_cayley_table


def mixer32():
    """Order-32 fixture with a genuinely nontrivial socle chain.

    Extension of H = (Z/2)^3 by the Klein group: s1 conjugates by
    e1 <-> e3, s2 by e1 -> e3, e2 -> e1+e2+e3, e3 -> e1; s1^2 = 1,
    s2^2 = (0,1,1), and s2 s1 = s1 s2 (0,1,0).  Found by exhaustive
    search; its descending step is all of H and socle ranks are [2, 3].
    """
    a1 = {(1, 0, 0): (0, 0, 1), (0, 1, 0): (0, 1, 0), (0, 0, 1): (1, 0, 0)}
    a2 = {(1, 0, 0): (0, 0, 1), (0, 1, 0): (1, 1, 1), (0, 0, 1): (1, 0, 0)}
    u1 = (0, 0, 0)
    u2 = (0, 1, 1)
    v = (0, 1, 0)

    def h_add(x, y):
        return tuple((a + b) % 2 for a, b in zip(x, y))

    def apply_aut(a, h):
        out = (0, 0, 0)
        for c, img in zip(h, [a[(1, 0, 0)], a[(0, 1, 0)], a[(0, 0, 1)]]):
            if c:
                out = h_add(out, img)
        return out

    def append_h(state, h):
        k, e1, e2 = state
        moved = apply_aut(a2, h) if e2 else h
        moved = apply_aut(a1, moved) if e1 else moved
        return (h_add(k, moved), e1, e2)

    def append_s2(state):
        k, e1, e2 = state
        if e2 == 0:
            return (k, e1, 1)
        bump = apply_aut(a1, u2) if e1 else u2
        return (h_add(k, bump), e1, 0)

    def append_s1(state):
        k, e1, e2 = state
        if e2 == 0:
            return (k, (e1 + 1) % 2, 0) if e1 == 0 else (h_add(k, u1), 0, 0)
        state = append_s1((k, e1, 0))
        state = append_s2(state)
        return append_h(state, v)

    def mul(x, y):
        state = x
        state = append_h(state, y[0])
        if y[1]:
            state = append_s1(state)
        if y[2]:
            state = append_s2(state)
        return state

    elems = [(h, e1, e2) for h in iproduct(range(2), repeat=3) for e1 in (0, 1) for e2 in (0, 1)]
    index = {e: i for i, e in enumerate(elems)}
    table = [[index[mul(x, y)] for y in elems] for x in elems]
    gens = [index[((0, 0, 0), 1, 0)], index[((0, 0, 0), 0, 1)]]
    return from_cayley_table(table, gens, ell=2)
