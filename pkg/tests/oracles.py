"""Brute-force reference implementations that share no code with ``qci``.

Everything here works on plain Python ints and tuples and is meant to be
slow and obviously right.
"""

import itertools


def word_normal_form(q, a, p, word):
    """Reduce a generator word to ``coef * x_1^{e_1} ... x_c^{e_c}``.

    Sorting is done by single adjacent swaps: ``x_i x_j -> q_ij x_j x_i``
    whenever ``i > j``.  Returns ``(coef, e)``, ``coef == 0`` when the word
    vanishes.
    """
    w = list(word)
    coef = 1
    changed = True
    while changed:
        changed = False
        for k in range(len(w) - 1):
            i, j = w[k], w[k + 1]
            if i > j:
                coef = coef * int(q[i][j]) % p
                w[k], w[k + 1] = j, i
                changed = True
    e = [0] * len(a)
    for g in w:
        e[g] += 1
    if any(e[i] >= a[i] for i in range(len(a))):
        return 0, None
    return coef, tuple(e)


def monomial_word(e):
    return [i for i, k in enumerate(e) for _ in range(k)]


def monomial_product(q, a, p, e, f):
    return word_normal_form(q, a, p, monomial_word(e) + monomial_word(f))


def basis(a):
    return list(itertools.product(*(range(x) for x in a)))


def brute_order(x, p):
    y, n = x % p, 1
    while y != 1:
        y = y * x % p
        n += 1
    return n


def all_vectors(p, n):
    return itertools.product(range(p), repeat=n)


def brute_kernel(mat, p):
    """All vectors ``v`` with ``mat v = 0`` by enumeration."""
    rows = [list(r) for r in mat]
    ncols = len(rows[0]) if rows else 0
    out = []
    for v in all_vectors(p, ncols):
        if all(sum(r[k] * v[k] for k in range(ncols)) % p == 0 for r in rows):
            out.append(v)
    return out


def brute_rank(mat, p):
    """``log_p`` of the image size, by enumerating every input vector."""
    rows = [list(r) for r in mat]
    ncols = len(rows[0]) if rows else 0
    image = set()
    for v in all_vectors(p, ncols):
        image.add(tuple(sum(r[k] * v[k] for k in range(ncols)) % p for r in rows))
    size, r = len(image), 0
    while size > 1:
        size //= p
        r += 1
    return r


def elem_mul(q, a, p, u, v):
    """Product of elements stored as ``{exponent tuple: coef}``."""
    out = {}
    for e, x in u.items():
        for f, y in v.items():
            c, g = monomial_product(q, a, p, e, f)
            if c:
                out[g] = (out.get(g, 0) + x * y * c) % p
    return {g: c for g, c in out.items() if c}


def nakayama_gamma(q, a, p):
    c = len(a)
    out = []
    for w in range(c):
        g = 1
        for i in range(c):
            g = g * pow(int(q[i][w]), a[i] - 1, p) % p
        out.append(g)
    return out


def socle_coefficient(u, a):
    return u.get(tuple(x - 1 for x in a), 0)


def nakayama_identity_holds(q, a, p, gamma):
    """``phi(lam x) == phi(nu(x) lam)`` for every pair of basis monomials."""
    for lam in basis(a):
        for x in basis(a):
            g = 1
            for w, k in enumerate(x):
                g = g * pow(gamma[w], k, p) % p
            lhs = socle_coefficient(elem_mul(q, a, p, {lam: 1}, {x: 1}), a)
            rhs = socle_coefficient(elem_mul(q, a, p, {x: g}, {lam: 1}), a)
            if lhs != rhs:
                return False
    return True


def exterior_ext_kk(n):
    """dim Ext^n(k, k) over the exterior algebra on two generators: the
    polynomial ring in two variables has n + 1 monomials of degree n."""
    return sum(1 for i in range(n + 1))
