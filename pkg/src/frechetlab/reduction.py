"""3SAT to all-points curve/point-set matching, and the inverse curve builder.

Every clause ``j`` gets a square gadget with corners ``s_j`` (lower left),
``g_j`` (upper right) and ``c_j``. Each variable contributes one subcurve
of ``P`` from ``u`` to ``v`` whose detour inside each gadget encodes the
variable's occurrence in that clause. A matching curve walks either the
"A" route (``s_1 g_2 s_3 ...``, variable true) or the "B" route
(``g_1 s_2 g_3 ...``, variable false) and can step into ``c_j`` only where
the literal it sets true occurs.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Dict, Iterator, List, Sequence, Tuple

import numpy as np

from .cpm import CpmInstance

Point = Tuple[float, float]


@dataclass(frozen=True)
class SatFormula:
    """CNF with exactly three literals per clause; ``+i`` is ``x_i``, ``-i`` its negation."""

    clauses: Tuple[Tuple[int, int, int], ...]
    n_vars: int

    def __post_init__(self):
        cl = tuple(tuple(int(x) for x in c) for c in self.clauses)
        if not cl:
            raise ValueError("formula needs at least one clause")
        for c in cl:
            if len(c) != 3:
                raise ValueError(f"clause {c!r} does not have exactly 3 literals")
            for lit in c:
                if lit == 0 or abs(lit) > self.n_vars:
                    raise ValueError(f"literal {lit} out of range 1..{self.n_vars}")
                if -lit in c:
                    raise ValueError(f"clause {c!r} holds a variable and its negation")
        object.__setattr__(self, "clauses", cl)

    @property
    def k(self) -> int:
        return len(self.clauses)

    def satisfied_by(self, assignment: Sequence[bool]) -> bool:
        return all(any((lit > 0) == bool(assignment[abs(lit) - 1]) for lit in c) for c in self.clauses)

    def is_satisfiable(self) -> bool:
        return any(self.satisfied_by(a) for a in product((False, True), repeat=self.n_vars))

    def occurrence(self, var: int) -> Tuple[int, ...]:
        """Per clause: ``+1`` if ``x_var`` occurs, ``-1`` if only its negation does, else ``0``."""
        out = []
        for c in self.clauses:
            out.append(1 if var in c else (-1 if -var in c else 0))
        return tuple(out)


@dataclass
class Gadgets:
    """Named points of the construction (clause index ``j`` is 0-based here)."""

    s: List[Point]
    g: List[Point]
    c: List[Point]
    w: List[Point]
    o: List[Point]
    u: Point
    v: Point
    t: Point
    eta: Point

    @property
    def k(self) -> int:
        return len(self.s)

    def route_a(self) -> List[Point]:
        return [self.s[j] if j % 2 == 0 else self.g[j] for j in range(self.k)]

    def route_b(self) -> List[Point]:
        return [self.g[j] if j % 2 == 0 else self.s[j] for j in range(self.k)]

    def path(self, true_route: bool, detours: Sequence[int] = ()) -> List[Point]:
        """``u``, the chosen route with ``c_j`` detours at the given clauses, ``v``."""
        route = self.route_a() if true_route else self.route_b()
        out: List[Point] = [self.u]
        for j, x in enumerate(route):
            out.append(x)
            if j in detours:
                out.extend([self.c[j], x])
        out.append(self.v)
        return out


def _mid(p: Point, q: Point) -> Point:
    return ((p[0] + q[0]) / 2, (p[1] + q[1]) / 2)


# Offsets of the end points. The literal values leave the route that
# enters the first (and leaves the last) gadget through the wrong corner
# 1.0786 away from ``w``; the corrected ones keep every route within 1.
_LITERAL = {"u": (-9.0, -1.0), "v_odd": (1.0, 9.0), "v_even": (9.0, 1.0)}
_CORRECTED = {"u": (-9.0, -3.0), "v_odd": (3.0, 9.0), "v_even": (9.0, 3.0)}


def build_gadgets(k: int, literal: bool = False) -> Gadgets:
    """Clause gadgets and end points; ``literal`` keeps the original end-point offsets."""
    ends = _LITERAL if literal else _CORRECTED
    s: List[Point] = []
    g: List[Point] = [(1.0, 1.0)]
    c: List[Point] = []
    w: List[Point] = []
    o: List[Point] = []
    for j in range(1, k + 1):
        gj = g[j - 1]
        sj = (gj[0] - 2, gj[1] - 2)
        oj = _mid(sj, gj)
        if j % 2 == 1:
            cj = (sj[0], gj[1])
            wj = (oj[0] + 1 / 4, oj[1] - 1 / 4)
            nxt = (sj[0] + 1 / 4 + 8, sj[1] + 7 / 4 + 15)
        else:
            cj = (gj[0], sj[1])
            wj = (oj[0] - 1 / 4, oj[1] + 1 / 4)
            nxt = (sj[0] + 7 / 4 + 15, sj[1] + 1 / 4 + 8)
        s.append(sj)
        o.append(oj)
        c.append(cj)
        w.append(wj)
        if j < k:
            g.append(nxt)
    ok = o[-1]
    if k % 2 == 1:
        eta = (ok[0] + 1, ok[1] + 4)
        dv = ends["v_odd"]
    else:
        eta = (ok[0] + 4, ok[1] + 1)
        dv = ends["v_even"]
    v = (ok[0] + dv[0], ok[1] + dv[1])
    u = ends["u"]
    t = (v[0], u[1] - 20)
    return Gadgets(s, g, c, w, o, u, v, t, eta)


def variable_curve(gd: Gadgets, occurrence: Sequence[int]) -> List[Point]:
    """Subcurve from ``u`` to ``v`` for one variable; ``occurrence`` as in :meth:`SatFormula.occurrence`."""
    out: List[Point] = [gd.u, (-4.0, -1.0)]
    k = gd.k
    for j in range(k):
        odd = (j + 1) % 2 == 1
        occ = occurrence[j]
        sj, gj, cj, wj = gd.s[j], gd.g[j], gd.c[j], gd.w[j]
        if (occ == 1 and odd) or (occ == -1 and not odd):
            out += [_mid(sj, cj), cj, wj]
        elif (occ == -1 and odd) or (occ == 1 and not odd):
            out += [wj, cj, _mid(gj, cj)]
        else:
            out += [wj, cj, wj]
        if j + 1 < k:
            g1, s1 = gd.g[j + 1], gd.s[j + 1]
            alpha = (4 / 5 * gj[0] + 1 / 5 * g1[0], 4 / 5 * gj[1] + 1 / 5 * g1[1])
            beta = (1 / 5 * sj[0] + 4 / 5 * s1[0], 1 / 5 * sj[1] + 4 / 5 * s1[1])
            out += [alpha, beta]
    out += [gd.eta, gd.v]
    return out


def all_configurations(k: int) -> Iterator[Tuple[int, ...]]:
    """Every per-clause occurrence pattern (``3**k`` of them)."""
    return product((1, -1, 0), repeat=k)


def reduce_3sat(phi: SatFormula, literal: bool = False) -> CpmInstance:
    """Point set, curve and ``eps = 1`` with all-points semantics.

    ``labels`` maps names such as ``"s1"``, ``"g3"``, ``"c2"``, ``"u"`` to
    indices into ``S``.
    """
    gd = build_gadgets(phi.k, literal)
    pts: List[Point] = []
    labels: Dict[str, int] = {}
    for j in range(phi.k):
        for name, p in (("s", gd.s[j]), ("g", gd.g[j]), ("c", gd.c[j])):
            labels[f"{name}{j + 1}"] = len(pts)
            pts.append(p)
    for name in ("u", "v", "t"):
        labels[name] = len(pts)
        pts.append(getattr(gd, name))
    P: List[Point] = [gd.t]
    for i in range(1, phi.n_vars + 3):
        occ = phi.occurrence(i) if i <= phi.n_vars else (0,) * phi.k
        P += variable_curve(gd, occ)
        P.append(gd.t)
    inst = CpmInstance(np.array(pts), np.array(P), 1.0, all_points=True, labels=labels)
    inst.gadgets = gd  # type: ignore[attr-defined]
    return inst


def build_assignment_curve(phi: SatFormula, assignment: Sequence[bool], literal: bool = False) -> np.ndarray:
    """Curve through the point set that realizes a truth assignment."""
    if len(assignment) != phi.n_vars:
        raise ValueError(f"assignment must give {phi.n_vars} values")
    gd = build_gadgets(phi.k, literal)
    Q: List[Point] = [gd.t]
    for i in range(1, phi.n_vars + 1):
        val = bool(assignment[i - 1])
        lit = i if val else -i
        detours = [j for j, c in enumerate(phi.clauses) if lit in c]
        Q += gd.path(val, detours)
        Q.append(gd.t)
    Q += gd.path(True)
    Q.append(gd.t)
    Q += gd.path(False)
    Q.append(gd.t)
    return np.array(Q)
