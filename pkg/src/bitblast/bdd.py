"""Reduced ordered BDDs with a hash-consed unique table.

Nodes are small integer handles into per-store arrays; 0 and 1 are the
terminals.  Structural equality is handle equality, so semantic
equivalence of two functions in the same store is `a == b`.  Variable
indices double as the order: smaller indices are closer to the root.
"""

import random

from .errors import (
    MissingAssignment,
    NodeBudgetExceeded,
    UnsatConstraint,
)

FALSE = 0
TRUE = 1
_TERMINAL_VAR = 1 << 60

DEFAULT_NODE_BUDGET = 50_000_000


class BddStore:
    """One BDD universe: unique table, operation caches, node budget.

    A store is single-threaded; nodes from different stores must never
    be mixed.
    """

    def __init__(self, node_budget=DEFAULT_NODE_BUDGET):
        self._var = [_TERMINAL_VAR, _TERMINAL_VAR]
        self._hi = [0, 1]
        self._lo = [0, 1]
        self._unique = {}
        self._not_cache = {}
        self._and_cache = {}
        self._or_cache = {}
        self._xor_cache = {}
        self._ite_cache = {}
        self.node_budget = node_budget

    @property
    def num_nodes(self):
        return len(self._var)

    def _mk(self, v, hi, lo):
        if hi == lo:
            return hi
        key = (v, hi, lo)
        node = self._unique.get(key)
        if node is None:
            node = len(self._var)
            if node > self.node_budget:
                raise NodeBudgetExceeded("BDD node budget exhausted")
            self._var.append(v)
            self._hi.append(hi)
            self._lo.append(lo)
            self._unique[key] = node
        return node

    def var(self, index):
        if index < 0 or index >= _TERMINAL_VAR:
            raise ValueError("bad variable index %r" % (index,))
        return self._mk(index, TRUE, FALSE)

    def const(self, flag):
        return TRUE if flag else FALSE

    def not_(self, f):
        if f == FALSE:
            return TRUE
        if f == TRUE:
            return FALSE
        r = self._not_cache.get(f)
        if r is None:
            r = self._mk(self._var[f], self.not_(self._hi[f]), self.not_(self._lo[f]))
            self._not_cache[f] = r
        return r

    def and_(self, f, g):
        if f == g:
            return f
        if f == FALSE or g == FALSE:
            return FALSE
        if f == TRUE:
            return g
        if g == TRUE:
            return f
        if f > g:
            f, g = g, f
        key = (f, g)
        r = self._and_cache.get(key)
        if r is None:
            var, hi, lo = self._var, self._hi, self._lo
            vf, vg = var[f], var[g]
            v = vf if vf < vg else vg
            f1, f0 = (hi[f], lo[f]) if vf == v else (f, f)
            g1, g0 = (hi[g], lo[g]) if vg == v else (g, g)
            r = self._mk(v, self.and_(f1, g1), self.and_(f0, g0))
            self._and_cache[key] = r
        return r

    def or_(self, f, g):
        if f == g:
            return f
        if f == TRUE or g == TRUE:
            return TRUE
        if f == FALSE:
            return g
        if g == FALSE:
            return f
        if f > g:
            f, g = g, f
        key = (f, g)
        r = self._or_cache.get(key)
        if r is None:
            var, hi, lo = self._var, self._hi, self._lo
            vf, vg = var[f], var[g]
            v = vf if vf < vg else vg
            f1, f0 = (hi[f], lo[f]) if vf == v else (f, f)
            g1, g0 = (hi[g], lo[g]) if vg == v else (g, g)
            r = self._mk(v, self.or_(f1, g1), self.or_(f0, g0))
            self._or_cache[key] = r
        return r

    def xor_(self, f, g):
        if f == g:
            return FALSE
        if f == FALSE:
            return g
        if g == FALSE:
            return f
        if f == TRUE:
            return self.not_(g)
        if g == TRUE:
            return self.not_(f)
        if f > g:
            f, g = g, f
        key = (f, g)
        r = self._xor_cache.get(key)
        if r is None:
            var, hi, lo = self._var, self._hi, self._lo
            vf, vg = var[f], var[g]
            v = vf if vf < vg else vg
            f1, f0 = (hi[f], lo[f]) if vf == v else (f, f)
            g1, g0 = (hi[g], lo[g]) if vg == v else (g, g)
            r = self._mk(v, self.xor_(f1, g1), self.xor_(f0, g0))
            self._xor_cache[key] = r
        return r

    def iff_(self, f, g):
        return self.not_(self.xor_(f, g))

    def ite(self, f, g, h):
        if f == TRUE:
            return g
        if f == FALSE:
            return h
        if g == h:
            return g
        if g == TRUE and h == FALSE:
            return f
        if g == FALSE and h == TRUE:
            return self.not_(f)
        if g == TRUE:
            return self.or_(f, h)
        if g == FALSE:
            return self.and_(self.not_(f), h)
        if h == FALSE:
            return self.and_(f, g)
        if h == TRUE:
            return self.or_(self.not_(f), g)
        key = (f, g, h)
        r = self._ite_cache.get(key)
        if r is None:
            var, hi, lo = self._var, self._hi, self._lo
            v = min(var[f], var[g], var[h])
            f1, f0 = (hi[f], lo[f]) if var[f] == v else (f, f)
            g1, g0 = (hi[g], lo[g]) if var[g] == v else (g, g)
            h1, h0 = (hi[h], lo[h]) if var[h] == v else (h, h)
            r = self._mk(v, self.ite(f1, g1, h1), self.ite(f0, g0, h0))
            self._ite_cache[key] = r
        return r

    def eval(self, f, env):
        """Evaluate under a map var-index -> bool; env must cover the
        variables actually consulted."""
        while f > TRUE:
            v = self._var[f]
            try:
                bit = env[v]
            except KeyError:
                raise MissingAssignment("no assignment for variable %d" % v) from None
            f = self._hi[f] if bit else self._lo[f]
        return f == TRUE

    def support(self, f):
        out = set()
        seen = set()
        stack = [f]
        while stack:
            n = stack.pop()
            if n <= TRUE or n in seen:
                continue
            seen.add(n)
            out.add(self._var[n])
            stack.append(self._hi[n])
            stack.append(self._lo[n])
        return frozenset(out)

    def witness(self, f, policy, indices=(), seed=0):
        """A satisfying environment, or None iff f is FALSE.

        zeros picks the lexicographically least satisfying assignment
        (variables read in increasing index order), ones the greatest;
        random makes seeded choices.  Every index in `indices` is
        assigned, using the policy default where the function does not
        force a value.
        """
        if f == FALSE:
            return None
        rng = random.Random(seed) if policy == "random" else None
        env = {}
        n = f
        while n > TRUE:
            v, hi, lo = self._var[n], self._hi[n], self._lo[n]
            if policy == "zeros":
                take_hi = lo == FALSE
            elif policy == "ones":
                take_hi = hi != FALSE
            elif policy == "random":
                if lo == FALSE:
                    take_hi = True
                elif hi == FALSE:
                    take_hi = False
                else:
                    take_hi = rng.random() < 0.5
            else:
                raise ValueError("unknown witness policy %r" % (policy,))
            env[v] = take_hi
            n = hi if take_hi else lo
        for v in sorted(set(indices) - env.keys()):
            if policy == "zeros":
                env[v] = False
            elif policy == "ones":
                env[v] = True
            else:
                env[v] = rng.random() < 0.5
        return env

    def restrict(self, f, index, val):
        """Cofactor: fix one variable to a constant."""
        memo = {}

        def rec(n):
            if n <= TRUE or self._var[n] > index:
                return n
            r = memo.get(n)
            if r is None:
                if self._var[n] == index:
                    r = self._hi[n] if val else self._lo[n]
                else:
                    r = self._mk(self._var[n], rec(self._hi[n]), rec(self._lo[n]))
                memo[n] = r
            return r

        return rec(f)

    def compose(self, f, sigma):
        """Simultaneous substitution of functions for variables.

        sigma must cover f's support; eval(compose(f, sigma), e) equals
        eval(f, i -> eval(sigma[i], e)).
        """
        memo = {}

        def rec(n):
            if n <= TRUE:
                return n
            r = memo.get(n)
            if r is None:
                v = self._var[n]
                try:
                    s = sigma[v]
                except KeyError:
                    raise MissingAssignment(
                        "no substitution entry for variable %d" % v) from None
                r = self.ite(s, rec(self._hi[n]), rec(self._lo[n]))
                memo[n] = r
            return r

        return rec(f)

    def parametrize(self, constraint, indices):
        """A substitution whose image over all environments is exactly
        the satisfying set of `constraint`, projected onto `indices`.

        `indices` must include the constraint's support.  Variables are
        peeled in increasing index order; at each level a forced value
        becomes a constant and a free one stays a variable, with the
        remaining substitution selected by that variable.
        """
        if constraint == FALSE:
            raise UnsatConstraint("cannot parametrize an unsatisfiable constraint")
        idxs = sorted(set(indices))
        missing = self.support(constraint) - set(idxs)
        if missing:
            raise MissingAssignment(
                "parametrize indices lack support variables %s" % sorted(missing))
        memo = {}

        def rec(n, k):
            if k == len(idxs):
                return {}
            key = (n, k)
            hit = memo.get(key)
            if hit is not None:
                return hit
            i = idxs[k]
            if n == TRUE:
                res = {j: self.var(j) for j in idxs[k:]}
            else:
                if self._var[n] == i:
                    c1, c0 = self._hi[n], self._lo[n]
                else:
                    c1 = c0 = n
                if c0 == FALSE:
                    res = {i: TRUE}
                    res.update(rec(c1, k + 1))
                elif c1 == FALSE:
                    res = {i: FALSE}
                    res.update(rec(c0, k + 1))
                else:
                    s1 = rec(c1, k + 1)
                    s0 = rec(c0, k + 1)
                    vi = self.var(i)
                    res = {i: vi}
                    for j in idxs[k + 1:]:
                        res[j] = self.ite(vi, s1[j], s0[j])
            memo[key] = res
            return res

        return dict(rec(constraint, 0))

    def check_invariants(self):
        """Walk the store asserting ordering and reducedness; test hook."""
        for n in range(2, len(self._var)):
            v, hi, lo = self._var[n], self._hi[n], self._lo[n]
            assert hi != lo, "unreduced node %d" % n
            assert v < self._var[hi], "ordering violated at %d (hi)" % n
            assert v < self._var[lo], "ordering violated at %d (lo)" % n
        assert len(self._unique) == len(self._var) - 2, "unique table out of sync"
