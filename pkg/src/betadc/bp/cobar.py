"""The cosimplicial object D^n = A_Q^{(x)(n+1)} and its subcomplex Sigma.

Copies are numbered 0..n; generator v_i in copy c is named "v{i}_{c}".
Sigma^n is spanned by tensors with a 1 in some position 1..n; reducing modulo
Sigma^n drops every monomial with an empty copy among 1..n.
"""

from functools import lru_cache

from ..algebra.poly import BITS, Alphabet, GradedPolynomial
from .hazewinkel import gen_degree


@lru_cache(maxsize=None)
def cobar_alphabet(p, copies, nmax=2):
    names, degs = [], []
    for c in range(copies):
        for i in range(1, nmax + 1):
            names.append(f"v{i}_{c}")
            degs.append(gen_degree(p, i))
    return Alphabet(names, degs, tag=f"D(p={p},copies={copies})")


def _copy_exponents(A, key, nmax):
    exps = A.unpack(key)
    return [exps[c * nmax:(c + 1) * nmax] for c in range(len(exps) // nmax)]


def _pack(A, blocks):
    return A.pack([e for block in blocks for e in block])


def coface(x, i, n, nmax=2):
    """partial^i: D^n -> D^{n+1}, inserting 1 as copy i (i = 0..n+1)."""
    p = _prime_of(x.alphabet)
    B = cobar_alphabet(p, n + 2, nmax)
    zero = (0,) * nmax
    out = {}
    for k, c in x.terms.items():
        blocks = _copy_exponents(x.alphabet, k, nmax)
        blocks.insert(i, zero)
        out[_pack(B, blocks)] = c
    return GradedPolynomial(B, out)


def codegeneracy(x, i, n, nmax=2):
    """sigma^i: D^n -> D^{n-1}, multiplying copies i and i+1."""
    p = _prime_of(x.alphabet)
    B = cobar_alphabet(p, n, nmax)
    out = {}
    for k, c in x.terms.items():
        blocks = _copy_exponents(x.alphabet, k, nmax)
        merged = tuple(a + b for a, b in zip(blocks[i], blocks[i + 1]))
        blocks[i:i + 2] = [merged]
        kk = _pack(B, blocks)
        out[kk] = out.get(kk, 0) + c
    return GradedPolynomial(B, out)


def differential(x, n, nmax=2):
    """d = sum_i (-1)^i partial^i: D^n -> D^{n+1}."""
    total = None
    for i in range(n + 2):
        term = coface(x, i, n, nmax)
        if i % 2:
            term = -term
        total = term if total is None else total + term
    return total


def sigma_reduce(x, n, nmax=2):
    """Image of x in D^n / Sigma^n."""
    mask = (1 << (BITS * nmax)) - 1

    def keep(k):
        return all((k >> (BITS * nmax * c)) & mask for c in range(1, n + 1))

    return x.filter(keep)


def quotient_differential(x, n, nmax=2):
    """d on D^n / Sigma^n: [a_0 (x) ... (x) a_n] -> [1 (x) a_0 (x) ... (x) a_n]."""
    return sigma_reduce(coface(x, 0, n, nmax), n + 1, nmax)


def contracting_homotopy(x, n, nmax=2):
    """H: a_0 (x) ... (x) a_n -> tau(a_0) a_1 (x) ... (x) a_n, tau the augmentation."""
    p = _prime_of(x.alphabet)
    B = cobar_alphabet(p, n, nmax)
    out = {}
    zero = (0,) * nmax
    for k, c in x.terms.items():
        blocks = _copy_exponents(x.alphabet, k, nmax)
        if tuple(blocks[0]) == zero:
            out[_pack(B, blocks[1:])] = c
    return GradedPolynomial(B, out)


def _prime_of(A):
    tag = A.tag
    return int(tag[tag.index("p=") + 2:tag.index(",")])
