"""Hash-consed and-inverter graphs plus Tseitin CNF generation.

Nodes are signed integer handles: 1 is the constant true, negation is
sign flip, and positive handles above 1 name variable or AND nodes in
the store.  The only rewrites are the local ones: double negation,
and with a constant, and of equal or complementary children.  AIGs are
not canonical; equivalence checking is the SAT solver's job.
"""

from dataclasses import dataclass, field

from .errors import (
    MissingAssignment,
    NodeBudgetExceeded,
    SatBudgetExceeded,
    UnsatConstraint,
)

TRUE = 1
FALSE = -1

DEFAULT_NODE_BUDGET = 50_000_000


class AigStore:
    """One AIG universe; single-threaded, never share handles across stores."""

    def __init__(self, node_budget=DEFAULT_NODE_BUDGET):
        self._nodes = [None, ("const",)]  # index 0 unused; 1 is TRUE
        self._var_ids = {}
        self._and_unique = {}
        self.node_budget = node_budget

    @property
    def num_nodes(self):
        return len(self._nodes) - 2

    def _alloc(self, desc):
        node = len(self._nodes)
        if node > self.node_budget:
            raise NodeBudgetExceeded("AIG node budget exhausted")
        self._nodes.append(desc)
        return node

    def var(self, index):
        if index < 0:
            raise ValueError("bad variable index %r" % (index,))
        node = self._var_ids.get(index)
        if node is None:
            node = self._alloc(("var", index))
            self._var_ids[index] = node
        return node

    def const(self, flag):
        return TRUE if flag else FALSE

    def not_(self, x):
        return -x

    def and_(self, a, b):
        if a == FALSE or b == FALSE:
            return FALSE
        if a == TRUE:
            return b
        if b == TRUE:
            return a
        if a == b:
            return a
        if a == -b:
            return FALSE
        if (abs(a), a < 0) > (abs(b), b < 0):
            a, b = b, a
        key = (a, b)
        node = self._and_unique.get(key)
        if node is None:
            node = self._alloc(("and", a, b))
            self._and_unique[key] = node
        return node

    def or_(self, a, b):
        return -self.and_(-a, -b)

    def xor_(self, a, b):
        return self.or_(self.and_(a, -b), self.and_(-a, b))

    def iff_(self, a, b):
        return -self.xor_(a, b)

    def ite(self, c, t, e):
        return self.or_(self.and_(c, t), self.and_(-c, e))

    def _walk(self, root):
        """Positive node ids reachable from root, children first."""
        order = []
        seen = set()
        stack = [abs(root)]
        while stack:
            n = stack.pop()
            if n < 0:  # emit marker: children already handled
                order.append(-n)
                continue
            if n <= 1 or n in seen:
                continue
            seen.add(n)
            desc = self._nodes[n]
            if desc[0] == "and":
                stack.append(-n)
                stack.append(abs(desc[1]))
                stack.append(abs(desc[2]))
            else:
                order.append(n)
        return order

    def eval(self, x, env):
        """Evaluate under a map var-index -> bool."""
        vals = {1: True}
        for n in self._walk(x):
            desc = self._nodes[n]
            if desc[0] == "var":
                try:
                    vals[n] = env[desc[1]]
                except KeyError:
                    raise MissingAssignment(
                        "no assignment for variable %d" % desc[1]) from None
            else:
                _, a, b = desc
                va = vals[abs(a)] ^ (a < 0)
                vb = vals[abs(b)] ^ (b < 0)
                vals[n] = va and vb
        v = vals[abs(x)]
        return v ^ (x < 0)

    def support(self, x):
        out = set()
        for n in self._walk(x):
            desc = self._nodes[n]
            if desc[0] == "var":
                out.add(desc[1])
        return frozenset(out)

    def substitute(self, x, consts):
        """Rebuild with some variables replaced by boolean constants."""
        memo = {1: TRUE}
        for n in self._walk(x):
            desc = self._nodes[n]
            if desc[0] == "var":
                idx = desc[1]
                if idx in consts:
                    memo[n] = TRUE if consts[idx] else FALSE
                else:
                    memo[n] = n
            else:
                _, a, b = desc
                na = memo[abs(a)] * (-1 if a < 0 else 1)
                nb = memo[abs(b)] * (-1 if b < 0 else 1)
                memo[n] = self.and_(na, nb)
        out = memo[abs(x)]
        return -out if x < 0 else out

    def to_cnf(self, root):
        """Tseitin transformation.

        Returns (Cnf, output-literal): root is satisfiable iff the
        clauses plus the output literal as a unit are satisfiable, and
        any model of the clauses, read back through var_map, satisfies
        the corresponding evaluation of every encoded gate.
        """
        cnf = Cnf()
        if root == TRUE or root == FALSE:
            v = cnf.fresh()
            if root == FALSE:
                cnf.clauses.append([-v])
            return cnf, v
        lit = {}
        for n in self._walk(root):
            desc = self._nodes[n]
            v = cnf.fresh()
            lit[n] = v
            if desc[0] == "var":
                cnf.var_map[desc[1]] = v
            else:
                _, a, b = desc
                la = lit[abs(a)] * (-1 if a < 0 else 1)
                lb = lit[abs(b)] * (-1 if b < 0 else 1)
                cnf.clauses.append([-v, la])
                cnf.clauses.append([-v, lb])
                cnf.clauses.append([v, -la, -lb])
        out = lit[abs(root)]
        return cnf, (-out if root < 0 else out)


@dataclass
class Cnf:
    """Clause set in signed-literal form plus the AIG-variable mapping."""

    num_vars: int = 0
    clauses: list = field(default_factory=list)
    var_map: dict = field(default_factory=dict)

    def fresh(self):
        self.num_vars += 1
        return self.num_vars

    def to_dimacs(self):
        lines = ["p cnf %d %d" % (self.num_vars, len(self.clauses))]
        for clause in self.clauses:
            lines.append(" ".join(str(l) for l in clause) + " 0")
        return "\n".join(lines) + "\n"


def parse_dimacs(text):
    """Read DIMACS text into (num_vars, clauses)."""
    num_vars = 0
    clauses = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            num_vars = int(parts[2])
            continue
        lits = [int(tok) for tok in line.split()]
        if lits and lits[-1] == 0:
            lits = lits[:-1]
        if lits:
            clauses.append(lits)
    return num_vars, clauses


def forced_constants(store, constraint, indices, solve, conflict_budget=None):
    """Variables the constraint pins to one polarity.

    For each index, i -> True is reported when constraint AND NOT b_i is
    unsatisfiable, i -> False when constraint AND b_i is.  `solve` is
    sat.solve_cnf or a compatible callable.
    """
    from .sat import SAT, UNSAT  # local import keeps aig importable standalone

    cnf, out = store.to_cnf(constraint)
    kind, model = solve(cnf.num_vars, cnf.clauses, assumptions=[out],
                        conflict_budget=conflict_budget)
    if kind is UNSAT:
        raise UnsatConstraint("hypothesis constraint is unsatisfiable")
    if kind is not SAT:
        raise SatBudgetExceeded("forced-constant analysis ran out of conflicts")
    forced = {}
    for i in indices:
        cv = cnf.var_map.get(i)
        if cv is None:
            continue  # constraint does not mention it; nothing forced
        pol = model[cv]
        probe = -cv if pol else cv
        kind2, _ = solve(cnf.num_vars, cnf.clauses, assumptions=[out, probe],
                         conflict_budget=conflict_budget)
        if kind2 is UNSAT:
            forced[i] = pol
        elif kind2 is not SAT:
            raise SatBudgetExceeded("forced-constant analysis ran out of conflicts")
    return forced
