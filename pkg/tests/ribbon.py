"""Combinatorial Goldman bracket on a one-vertex ribbon graph.

Independent of the geometry: intersection points of two cyclic words are
linked pairs of maximal common segments, read off the cyclic order of
half-edges at the vertex, which the boundary word fixes.  Agrees with the
geometric engine up to one global orientation sign.
"""

from loopalg.words import canonical_class, free_reduce, inverse_word


def half_edge_order(boundary):
    # the boundary walk turns from h(c_i^-1) to h(c_{i+1}), consecutive half-edges
    n = len(boundary)
    nxt = {-boundary[i]: boundary[(i + 1) % n] for i in range(n)}
    order = [boundary[0]]
    while len(order) < len(nxt):
        order.append(nxt[order[-1]])
    return {h: k for k, h in enumerate(order)}, len(order)


def _before(pos, n, e0, f, g):
    """+1 if f comes before g going around from e0."""
    return 1 if (pos[f] - pos[e0]) % n < (pos[g] - pos[e0]) % n else -1


def ribbon_bracket(V, W, boundary=(1, 2, -1, -2)):
    pos, n = half_edge_order(boundary)
    out = {}

    def add(word, s):
        c = canonical_class(free_reduce(word))
        out[c] = out.get(c, 0) + s

    nv = len(V)
    for U, rev in ((W, False), (inverse_word(W), True)):
        nu = len(U)
        for i in range(nv):
            for j in range(nu):
                pV, pU = V[i - 1], U[j - 1]
                if pV == pU:
                    continue
                m = 0
                while m < nv * nu and V[(i + m) % nv] == U[(j + m) % nu]:
                    m += 1
                if m >= nv * nu:
                    continue  # parallel strands of a shared geodesic
                qV, qU = V[(i + m) % nv], U[(j + m) % nu]
                Vb, Ub = V[i:] + V[:i], U[j:] + U[:j]
                if m == 0:
                    if rev:
                        continue
                    hs = (-pV, qV, -pU, qU)
                    if len(set(hs)) < 4:
                        continue
                    a = _before(pos, n, qV, -pU, -pV)
                    b = _before(pos, n, qV, qU, -pV)
                    if a != b:
                        add(Vb + Ub, b)
                else:
                    st = _before(pos, n, V[i], -pV, -pU)
                    en = _before(pos, n, -V[(i + m - 1) % nv], qV, qU)
                    if st == en:
                        if rev:
                            add(Vb + inverse_word(Ub), -en)
                        else:
                            add(Vb + Ub, en)
    return {c: v for c, v in out.items() if v}
