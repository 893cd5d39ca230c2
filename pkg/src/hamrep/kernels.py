"""Rewrite kernels: PBW reordering and Weyl-algebra normal ordering."""


class RewriteLimit(RuntimeError):
    """Raised when a reordering needs more distinct rewrite steps than allowed."""


class Rewriter:
    """Memoized PBW reordering for one algebra.

    ``table[(a, b)]`` with a > b holds the terms of [X_a, X_b] as (k, coeff)
    pairs, so X_a X_b = X_b X_a + [X_a, X_b].
    """

    def __init__(self, dim, table, limit=10**6):
        self.dim = dim
        self.table = table
        self.limit = limit
        self._memo = {}
        self.steps = 0

    def mul_gen(self, w, g):
        """Normal form of (sorted word w) * X_g as {word: coeff}."""
        if not w or w[-1] <= g:
            return {w + (g,): 1}
        key = (w, g)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        self.steps += 1
        if self.steps > self.limit:
            raise RewriteLimit(f"more than {self.limit} rewrite steps")
        x = w[-1]
        head = w[:-1]
        out = {}
        # head * X_x * X_g = head * X_g * X_x + head * [X_x, X_g]
        for u, c in self.mul_gen(head, g).items():
            for v, d in self.mul_gen(u, x).items():
                out[v] = out.get(v, 0) + c * d
        for k, ck in self.table.get((x, g), ()):
            for v, d in self.mul_gen(head, k).items():
                out[v] = out.get(v, 0) + ck * d
        out = {v: c for v, c in out.items() if c != 0}
        self._memo[key] = out
        return out

    def multiply(self, wa, wb):
        cur = {wa: 1}
        for g in wb:
            nxt = {}
            for u, c in cur.items():
                for v, d in self.mul_gen(u, g).items():
                    nxt[v] = nxt.get(v, 0) + c * d
            cur = {v: c for v, c in nxt.items() if c != 0}
        return cur


def make_rewriter(dim, table, limit=10**6):
    return Rewriter(dim, table, limit)


def weyl_normal(terms_a, terms_b, nvars):
    """Product of two Weyl-algebra polynomials in normal order x^a d^b.

    Keys are (xexp, dexp) tuples of length nvars; uses
    d^b x^c = sum_k C(b,k) C(c,k) k! x^(c-k) d^(b-k) per variable.
    """
    from math import comb, factorial

    out = {}
    for (xa, da), ca in terms_a.items():
        for (xb, db), cb in terms_b.items():
            # per-variable expansion, then outer product over variables
            partial = [((), (), ca * cb)]
            for i in range(nvars):
                b, c = da[i], xb[i]
                nxt = []
                for k in range(min(b, c) + 1):
                    w = comb(b, k) * comb(c, k) * factorial(k)
                    for px, pd, pc in partial:
                        nxt.append((px + (xa[i] + c - k,), pd + (b - k + db[i],), pc * w))
                partial = nxt
            for px, pd, pc in partial:
                key = (px, pd)
                out[key] = out.get(key, 0) + pc
    return {k: v for k, v in out.items() if v != 0}
