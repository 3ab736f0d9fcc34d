"""Uniform handle over the two Boolean-expression realizations.

All expressions flowing through one proof belong to one handle.  The
BDD side decides validity by node identity; the AIG side asks the SAT
solver.  Handles are single-threaded, like the stores they wrap.
"""

from . import aig as _aig
from . import bdd as _bdd
from . import sat as _sat
from .errors import SatBudgetExceeded

DEFAULT_SAT_CONFLICT_BUDGET = 2_000_000


class BddEngine:
    mode = "bdd"

    def __init__(self, node_budget=_bdd.DEFAULT_NODE_BUDGET):
        self.store = _bdd.BddStore(node_budget)
        self.true = _bdd.TRUE
        self.false = _bdd.FALSE

    def const(self, flag):
        return self.store.const(flag)

    def var(self, index):
        return self.store.var(index)

    def not_(self, x):
        return self.store.not_(x)

    def and_(self, a, b):
        return self.store.and_(a, b)

    def or_(self, a, b):
        return self.store.or_(a, b)

    def xor_(self, a, b):
        return self.store.xor_(a, b)

    def iff_(self, a, b):
        return self.store.iff_(a, b)

    def ite(self, c, t, e):
        return self.store.ite(c, t, e)

    def is_true(self, x):
        return x == _bdd.TRUE

    def is_false(self, x):
        return x == _bdd.FALSE

    def eval(self, x, env):
        return self.store.eval(x, env)

    def support(self, x):
        return self.store.support(x)

    def valid(self, x):
        return x == _bdd.TRUE

    def satisfiable(self, x):
        return x != _bdd.FALSE

    def witness(self, x, policy, indices=(), seed=0):
        return self.store.witness(x, policy, indices, seed)

    @property
    def num_nodes(self):
        return self.store.num_nodes


class AigEngine:
    mode = "aig"

    def __init__(self, node_budget=_aig.DEFAULT_NODE_BUDGET,
                 sat_conflict_budget=DEFAULT_SAT_CONFLICT_BUDGET, seed=0):
        self.store = _aig.AigStore(node_budget)
        self.true = _aig.TRUE
        self.false = _aig.FALSE
        self.sat_conflict_budget = sat_conflict_budget
        self.seed = seed

    def const(self, flag):
        return self.store.const(flag)

    def var(self, index):
        return self.store.var(index)

    def not_(self, x):
        return self.store.not_(x)

    def and_(self, a, b):
        return self.store.and_(a, b)

    def or_(self, a, b):
        return self.store.or_(a, b)

    def xor_(self, a, b):
        return self.store.xor_(a, b)

    def iff_(self, a, b):
        return self.store.iff_(a, b)

    def ite(self, c, t, e):
        return self.store.ite(c, t, e)

    def is_true(self, x):
        return x == _aig.TRUE

    def is_false(self, x):
        return x == _aig.FALSE

    def eval(self, x, env):
        return self.store.eval(x, env)

    def support(self, x):
        return self.store.support(x)

    def _solve(self, node, policy="zeros", seed=None):
        cnf, out = self.store.to_cnf(node)
        kind, model = _sat.solve_cnf(
            cnf.num_vars, cnf.clauses, assumptions=[out],
            conflict_budget=self.sat_conflict_budget, polarity=policy,
            seed=self.seed if seed is None else seed)
        if kind is _sat.BUDGET:
            raise SatBudgetExceeded("SAT conflict budget exhausted")
        return kind, model, cnf

    def valid(self, x):
        if x == _aig.TRUE:
            return True
        if x == _aig.FALSE:
            return False
        kind, _, _ = self._solve(self.store.not_(x))
        return kind is _sat.UNSAT

    def satisfiable(self, x):
        if x == _aig.TRUE:
            return True
        if x == _aig.FALSE:
            return False
        kind, _, _ = self._solve(x)
        return kind is _sat.SAT

    def witness(self, x, policy, indices=(), seed=0):
        if x == _aig.FALSE:
            return None
        cnf, out = self.store.to_cnf(x)
        return _sat.sat_witness(cnf, out, policy, indices, cnf.var_map,
                                conflict_budget=self.sat_conflict_budget,
                                seed=seed)

    @property
    def num_nodes(self):
        return self.store.num_nodes


def make_engine(mode, node_budget=None, sat_conflict_budget=None, seed=0):
    if node_budget is None:
        node_budget = _bdd.DEFAULT_NODE_BUDGET
    if sat_conflict_budget is None:
        sat_conflict_budget = DEFAULT_SAT_CONFLICT_BUDGET
    if mode == "bdd":
        return BddEngine(node_budget)
    if mode == "aig":
        return AigEngine(node_budget, sat_conflict_budget, seed)
    raise ValueError("unknown mode %r" % (mode,))
