"""Independent ground truth for derivability claims.

Two bounded searches that share no code with the decision procedure in
`rc`:

* `prove_bounded` — goal-directed proof search over the Hilbert-style
  axiomatization itself.  Left-hand sides are explored by single-step
  rewrites, each certified by one axiom composition (projection,
  level lowering, duplication, one packing step, or a contraction), and
  diamond goals descend by monotonicity.  The result is a proof tree
  whose every node can be replayed against the bare axiom checker.

* `countermodel_bounded` — search over finite Kripke frames whose
  relations satisfy the three frame conditions sound for the calculus:
  every R_n is transitive, R_n is contained in R_m for m < n, and the
  packing condition (x R_n y and x R_m z imply y R_m z for m < n).  A
  returned model carries a witness world satisfying the left-hand side
  and falsifying the right-hand side, and is re-verified before being
  returned.

`decide_oracle` combines them; the first definitive answer wins, and on
bounded exhaustion the verdict is UNRESOLVED rather than a guess.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .rc import (
    Conj,
    Dia,
    RcFormula,
    TOP,
    Top,
    conj,
    flatten,
    format_formula,
    max_level,
    parse_formula,
    size,
)

# --- proof objects --------------------------------------------------------

AX_ID = "AX1-ID"
AX_TOP = "AX1-TOP"
AX_PROJ = "AX2"
AX4 = "AX4"
AX5 = "AX5"
AX6 = "AX6"
CUT = "CUT"
CONJ_INTRO = "CONJ-INTRO"
MONO = "MONO"


@dataclass(frozen=True)
class Proof:
    """One node of a replayable derivation of lhs |- rhs."""

    lhs: RcFormula
    rhs: RcFormula
    rule: str
    children: tuple["Proof", ...] = ()

    def __post_init__(self):
        object.__setattr__(
            self, "_h", hash((Proof, self.lhs, self.rhs, self.rule, self.children))
        )

    def __hash__(self):
        return self._h


def replay_proof(p: Proof) -> bool:
    """Re-check every node against the side conditions of its rule."""
    rule, a, b = p.rule, p.lhs, p.rhs
    kids = p.children
    if rule == AX_ID:
        return not kids and a == b
    if rule == AX_TOP:
        return not kids and isinstance(b, Top)
    if rule == AX_PROJ:
        return not kids and isinstance(a, Conj) and b in a.parts
    if rule == AX4:
        return (
            not kids
            and isinstance(a, Dia)
            and isinstance(a.body, Dia)
            and a.level == a.body.level
            and b == a.body
        )
    if rule == AX5:
        return (
            not kids
            and isinstance(a, Dia)
            and isinstance(b, Dia)
            and a.level > b.level
            and a.body == b.body
        )
    if rule == AX6:
        if kids or not isinstance(a, Conj) or len(a.parts) != 2:
            return False
        x, y = a.parts
        if not (isinstance(x, Dia) and isinstance(y, Dia) and x.level > y.level):
            return False
        return b == Dia(x.level, conj([x.body, y]))
    if rule == CUT:
        if len(kids) != 2:
            return False
        c1, c2 = kids
        return (
            c1.lhs == a
            and c2.rhs == b
            and c1.rhs == c2.lhs
            and replay_proof(c1)
            and replay_proof(c2)
        )
    if rule == CONJ_INTRO:
        if not isinstance(b, Conj) or len(kids) != len(b.parts) or len(kids) < 2:
            return False
        return all(
            c.lhs == a and c.rhs == part and replay_proof(c)
            for c, part in zip(kids, b.parts)
        )
    if rule == MONO:
        if len(kids) != 1 or not isinstance(a, Dia) or not isinstance(b, Dia):
            return False
        (c,) = kids
        return (
            a.level == b.level
            and c.lhs == a.body
            and c.rhs == b.body
            and replay_proof(c)
        )
    return False


def proof_to_json(p: Proof) -> dict:
    return {
        "sequent": {"lhs": format_formula(p.lhs), "rhs": format_formula(p.rhs)},
        "rule": p.rule,
        "children": [proof_to_json(c) for c in p.children],
    }


def proof_from_json(d: dict) -> Proof:
    return Proof(
        parse_formula(d["sequent"]["lhs"]),
        parse_formula(d["sequent"]["rhs"]),
        d["rule"],
        tuple(proof_from_json(c) for c in d.get("children", ())),
    )


# --- proof search ---------------------------------------------------------

_proof_cache: dict[tuple, Proof] = {}
_fail_cache: dict[tuple, tuple[int, int]] = {}
_size_cache: dict[RcFormula, int] = {}


def _sz(f: RcFormula) -> int:
    s = _size_cache.get(f)
    if s is None:
        s = size(f)
        _size_cache[f] = s
    return s


def _sort_key(f: RcFormula):
    if isinstance(f, Top):
        return (0,)
    if isinstance(f, Dia):
        return (1, f.level, _sort_key(f.body))
    return (2, tuple(_sort_key(p) for p in f.parts))


def _state_key(f: RcFormula):
    return tuple(sorted(set(flatten(f)), key=_sort_key))


def _compose(pre: Optional[Proof], post: Proof) -> Proof:
    """Chain a reach proof with one more step (None = starting point)."""
    if pre is None:
        return post
    return Proof(pre.lhs, post.rhs, CUT, (pre, post))


def _sub_conj_proof(big: RcFormula, small: RcFormula) -> Optional[Proof]:
    """A projection-shaped proof big |- small, when every conjunct of
    small appears literally among big's conjuncts."""
    if isinstance(small, Top):
        return Proof(big, small, AX_TOP)
    if big == small:
        return Proof(big, small, AX_ID)
    if not isinstance(big, Conj):
        return None
    if isinstance(small, Dia):
        return Proof(big, small, AX_PROJ) if small in big.parts else None
    kids = []
    for part in small.parts:
        if part not in big.parts:
            return None
        kids.append(Proof(big, part, AX_PROJ))
    return Proof(big, small, CONJ_INTRO, tuple(kids))


def _part_proof(L: RcFormula, parts: tuple[Dia, ...], i: int) -> Proof:
    """L |- parts[i], by identity or projection."""
    if len(parts) == 1:
        return Proof(L, parts[0], AX_ID)
    return Proof(L, parts[i], AX_PROJ)


def _replace_move(L, parts, i, new_part, inner):
    """Rewrite conjunct i via inner: parts[i] |- new_part."""
    if len(parts) == 1:
        return new_part, inner
    new_parts = parts[:i] + (new_part,) + parts[i + 1 :]
    target = conj(new_parts)
    kids = []
    for t, p in enumerate(parts):
        if t == i:
            kids.append(Proof(L, new_part, CUT, (_part_proof(L, parts, i), inner)))
        else:
            kids.append(Proof(L, p, AX_PROJ))
    return target, Proof(L, target, CONJ_INTRO, tuple(kids))


def _extend_move(L, parts, i, new_part, inner):
    """Adjoin a consequence of conjunct i: inner: parts[i] |- new_part."""
    target = conj(parts + (new_part,))
    kids = [_part_proof(L, parts, t) for t in range(len(parts))]
    if len(parts) == 1:
        kids.append(inner)  # inner.lhs == parts[0] == L
    else:
        kids.append(Proof(L, new_part, CUT, (_part_proof(L, parts, i), inner)))
    return target, Proof(L, target, CONJ_INTRO, tuple(kids))


def _pack_move(L, parts, i, k):
    """Fuse conjuncts i and k (levels n > m) into one diamond."""
    pi, pk = parts[i], parts[k]
    pair = Conj((pi, pk))
    packed = Dia(pi.level, conj([pi.body, pk]))
    ax6 = Proof(pair, packed, AX6)
    if L == pair:
        core = ax6
    else:
        intro = Proof(
            L, pair, CONJ_INTRO, (_part_proof(L, parts, i), _part_proof(L, parts, k))
        )
        core = Proof(L, packed, CUT, (intro, ax6))
    rest = tuple(p for t, p in enumerate(parts) if t not in (i, k))
    if not rest:
        return packed, core
    target = conj((packed,) + rest)
    kids = [core] + [Proof(L, p, AX_PROJ) for p in rest]
    return target, Proof(L, target, CONJ_INTRO, tuple(kids))


def _self_pack(p: Dia, m: int) -> tuple[Dia, Proof]:
    """p = <n>C proves <n>(C & <m>C) for m < n, via its own lowered copy."""
    low = Dia(m, p.body)
    pair = Conj((p, low))
    packed = Dia(p.level, conj([p.body, low]))
    intro = Proof(p, pair, CONJ_INTRO, (Proof(p, p, AX_ID), Proof(p, low, AX5)))
    return packed, Proof(p, packed, CUT, (intro, Proof(pair, packed, AX6)))


_moves_cache: dict = {}


def _moves(L: RcFormula, deep: bool, extends: bool = True) -> tuple:
    """One-step left rewrites from L, with their certificates.

    With `deep` the moves also apply, via monotonicity, at any depth
    inside diamond bodies — inner proofs like <1><2>T |- <0><2>T are
    unreachable by top-level rewriting alone.  Deep rewriting multiplies
    the branching enormously, so searches try the shallow repertoire
    first.  Copy-adjoining rewrites are generated at the top level only;
    inside a body, adjoining a lowered copy is already covered by the
    one-diamond duplication move.
    """
    key = (L, deep, extends)
    got = _moves_cache.get(key)
    if got is not None:
        return got
    out = []
    parts = flatten(L)
    if len(parts) >= 2:
        for i, p in enumerate(parts):
            out.append((p, Proof(L, p, AX_PROJ)))
        for i, pi in enumerate(parts):
            for k, pk in enumerate(parts):
                if i != k and pi.level > pk.level:
                    out.append(_pack_move(L, parts, i, k))
    for i, p in enumerate(parts):
        for m in range(p.level):
            low = Dia(m, p.body)
            out.append(_replace_move(L, parts, i, low, Proof(p, low, AX5)))
            if extends:
                out.append(_extend_move(L, parts, i, low, Proof(p, low, AX5)))
            packed, inner = _self_pack(p, m)
            out.append(_replace_move(L, parts, i, packed, inner))
        if isinstance(p.body, Dia) and p.body.level == p.level:
            out.append(_replace_move(L, parts, i, p.body, Proof(p, p.body, AX4)))
        if deep and not isinstance(p.body, Top):
            for body2, prf in _moves(p.body, deep, extends=False):
                deeper = Dia(p.level, body2)
                inner = Proof(p, deeper, MONO, (prf,))
                out.append(_replace_move(L, parts, i, deeper, inner))
    got = tuple(out)
    _moves_cache[key] = got
    return got


class _Pass:
    """One iterative-deepening pass: a per-BFS node allowance, plus a flag
    recording whether any branch was truncated by it."""

    __slots__ = ("allowance", "lossy")

    def __init__(self, allowance: int):
        self.allowance = allowance
        self.lossy = False


def prove_bounded(
    a: RcFormula, b: RcFormula, budget: int = 10, size_cap: Optional[int] = None
) -> Optional[Proof]:
    """Search for a replayable proof of a |- b.

    `budget` bounds the monotonicity-descent depth; `size_cap` bounds the
    size of intermediate left-hand sides (default twice the endpoint
    sizes).  The search runs in iteratively deepened passes: each pass
    gives every breadth-first exploration a node allowance, and a branch
    that overruns it is skipped rather than exhausted, so shallow proofs
    surface before hopeless subgoals soak up time.  A pass that needed no
    truncation is definitive.  Returns None on exhaustion — which is not
    a refutation.
    """
    cap = size_cap if size_cap is not None else 2 * (size(a) + size(b))
    cap = max(cap, size(a), size(b))
    cached = _proof_cache.get((a, b))
    if cached is not None:
        return cached
    planned = _plan_proof(a, b)
    if planned is not None and replay_proof(planned):
        _proof_cache[(a, b)] = planned
        return planned
    for deep in (False, True):
        allowance = 512
        while True:
            ctx = _Pass(allowance)
            found = _search(a, b, budget, cap, ctx, deep)
            if found is not None:
                return found
            if not ctx.lossy:
                break
            allowance *= 4
    return None


def _search(a, b, depth, cap, ctx, deep) -> Optional[Proof]:
    if isinstance(b, Top):
        return Proof(a, b, AX_TOP)
    if a == b:
        return Proof(a, b, AX_ID)
    if depth < 0:
        return None
    hit = _proof_cache.get((a, b))
    if hit is not None:
        return hit
    key = (a, b, deep)
    failed = _fail_cache.get(key)
    if failed is not None and depth <= failed[0] and cap <= failed[1]:
        return None
    outer_lossy = ctx.lossy
    ctx.lossy = False
    if isinstance(b, Conj):
        kids = []
        for part in b.parts:
            sub = _search(a, part, depth, cap, ctx, deep)
            if sub is None:
                result = None
                break
            kids.append(sub)
        else:
            result = Proof(a, b, CONJ_INTRO, tuple(kids))
    else:
        result = _search_dia(a, b, depth, cap, ctx, deep)
    if result is not None:
        _proof_cache[(a, b)] = result
    elif not ctx.lossy:
        # every branch ran to completion, so the failure is a fact about
        # (depth, cap) — cacheable regardless of the pass allowance
        old = _fail_cache.get(key, (-1, -1))
        if depth >= old[0] and cap >= old[1]:
            _fail_cache[key] = (depth, cap)
    ctx.lossy = ctx.lossy or outer_lossy
    return result


_live_frames: dict = {}
_live_cache: dict = {}
_live_sat_cache: dict = {}


def _live(L: RcFormula, b: RcFormula) -> bool:
    """Whether the sequent L |- b survives a one-frame semantic test.

    The closed unraveling of L is a genuine frame for the calculus with
    L true at its root, so if it falsifies b there, no proof of L |- b
    exists at all.  Every search move carries a certificate L |- L2, so
    a state that fails this test can be pruned together with everything
    reachable from it: a proof through a descendant would compose to a
    proof from L, contradicting the countermodel.
    """
    lkey = _state_key(L)
    key = (lkey, b)
    hit = _live_cache.get(key)
    if hit is not None:
        return hit
    frame = _live_frames.get(lkey)
    if frame is None:
        n_worlds, raw = _tree_model(L, max_level(L) + 1)
        frame = Frame(n_worlds, _close_frame(n_worlds, raw))
        _live_frames[lkey] = frame
    out = 0 in _sat(frame, b, _live_sat_cache)
    _live_cache[key] = out
    return out


# --- model-guided proof construction ---------------------------------
#
# Searching for a proof left-to-right explodes on sequents that need
# several interleaved duplication and lowering steps.  But when the
# closed unraveling of the left-hand side satisfies the goal at its
# root, that closure run IS a proof plan: every added edge carries the
# rule that produced it (inclusion, transitivity, or packing), and
# replaying those justifications as certified rewrites materializes
# exactly the conjuncts the goal needs.  The construction below walks
# the goal, pulls in the required edges by their justifications, and
# emits the same proof objects the search would have produced — so the
# result is validated by replay like any other, and the search remains
# as a fallback when the guided construction declines.


class _PlanFailed(Exception):
    """Internal: the guided constructor met a shape it cannot realize."""


_closure_cache: dict = {}


def _justified_closure(a: RcFormula):
    """Closed unraveling of a, with one rule justification per edge.

    Returns (n_worlds, rels, just, tails, children): rels maps levels to
    edge sets; just maps each edge (n, x, y) to ("base",), ("incl", e),
    ("trans", e1, e2) or ("pack", e_hi, e_lo), with premises always
    recorded before the edges they justify, so the justification graph
    is well-founded; tails holds each world's original subformula and
    children each world's tree edges in conjunct order.
    """
    hit = _closure_cache.get(a)
    if hit is not None:
        return hit
    n_levels = max_level(a) + 1
    rels: list[set] = [set() for _ in range(n_levels)]
    just: dict = {}
    tails: dict = {}
    children: dict = {}
    counter = itertools.count(1)

    def unravel(f: RcFormula, w: int):
        tails[w] = f
        lst = []
        for part in flatten(f):
            cw = next(counter)
            e = (part.level, w, cw)
            rels[part.level].add((w, cw))
            just[e] = ("base",)
            lst.append((e, cw))
            unravel(part.body, cw)
        children[w] = lst

    unravel(a, 0)
    n_worlds = next(counter)

    changed = True
    while changed:
        changed = False
        for n in range(n_levels - 1, 0, -1):
            for (x, y) in list(rels[n]):
                if (x, y) not in rels[n - 1]:
                    rels[n - 1].add((x, y))
                    just[(n - 1, x, y)] = ("incl", (n, x, y))
                    changed = True
        for n in range(n_levels):
            rel = rels[n]
            add: dict = {}
            for (x, y) in rel:
                for (y2, z) in rel:
                    if y2 == y and (x, z) not in rel and (x, z) not in add:
                        add[(x, z)] = ((n, x, y), (n, y, z))
            for (x, z), (e1, e2) in add.items():
                rel.add((x, z))
                just[(n, x, z)] = ("trans", e1, e2)
                changed = True
        for n in range(n_levels):
            for m in range(n):
                add = {}
                for (x, y) in rels[n]:
                    for (x2, z) in rels[m]:
                        if x2 == x and (y, z) not in rels[m] and (y, z) not in add:
                            add[(y, z)] = ((n, x, y), (m, x, z))
                for (y, z), (ehi, elo) in add.items():
                    rels[m].add((y, z))
                    just[(m, y, z)] = ("pack", ehi, elo)
                    changed = True

    out = (n_worlds, rels, just, tails, children)
    _closure_cache[a] = out
    return out


class _PlanNode:
    """A conjunct occurrence hosting one closure world: its current body
    formula and, per realized closure edge, the occurrence under it."""

    __slots__ = ("world", "formula", "kids")

    def __init__(self, world, formula, kids):
        self.world = world
        self.formula = formula
        self.kids = kids

    def clone(self):
        return _PlanNode(
            self.world, self.formula, {e: k.clone() for e, k in self.kids.items()}
        )


def _grow_plan_tree(world, tails, children) -> _PlanNode:
    kids = {e: _grow_plan_tree(w, tails, children) for (e, w) in children[world]}
    return _PlanNode(world, tails[world], kids)


class _Planner:
    """Rewrites the left-hand side along closure justifications until the
    goal follows by projections and monotone descent."""

    _MAX_STEPS = 600

    def __init__(self, a: RcFormula):
        self.a = a
        n_worlds, rels, just, tails, children = _justified_closure(a)
        self.rels = rels
        self.just = just
        self.root = _grow_plan_tree(0, tails, children)
        self.frame = Frame(n_worlds, tuple(frozenset(r) for r in rels))
        self.sat_cache: dict = {}
        self.total: Optional[Proof] = None
        self.steps = 0

    def sat(self, f: RcFormula) -> frozenset:
        return _sat(self.frame, f, self.sat_cache)

    def apply(self, path, mover):
        """Run mover at path[-1], wrap the rewrite up through the
        enclosing diamonds, and extend the global rewrite chain."""
        self.steps += 1
        if self.steps > self._MAX_STEPS:
            raise _PlanFailed
        bottom = path[-1][0]
        new_f, prf = mover(bottom.formula)
        updates = [(bottom, new_f)]
        cur_old, cur_new, cur_prf = bottom.formula, new_f, prf
        for i in range(len(path) - 1, 0, -1):
            edge = path[i][1]
            parent = path[i - 1][0]
            old_dia = Dia(edge[0], cur_old)
            new_dia = Dia(edge[0], cur_new)
            parts = flatten(parent.formula)
            idx = parts.index(old_dia)
            inner = Proof(old_dia, new_dia, MONO, (cur_prf,))
            p_new, p_prf = _replace_move(parent.formula, parts, idx, new_dia, inner)
            updates.append((parent, p_new))
            cur_old, cur_new, cur_prf = parent.formula, p_new, p_prf
        for node, f in updates:
            node.formula = f
        self.total = _compose(self.total, cur_prf)

    def _adjoin_lower(self, path, hi_edge, lo_edge):
        node = path[-1][0]
        kid = node.kids[hi_edge]
        kf = kid.formula
        n, m = hi_edge[0], lo_edge[0]

        def mover(F):
            parts = flatten(F)
            i = parts.index(Dia(n, kf))
            low = Dia(m, kf)
            return _extend_move(F, parts, i, low, Proof(Dia(n, kf), low, AX5))

        self.apply(path, mover)
        node.kids[lo_edge] = kid.clone()

    def _adjoin_extract(self, path, kid_edge, inner_edge):
        """Hoist a conjunct one diamond out: from <n>(.. & <m>X ..) with
        m <= n, adjoin <m>X beside it (monotone projection, a lowering
        when the levels differ, then one contraction)."""
        node = path[-1][0]
        kid = node.kids[kid_edge]
        gkid = kid.kids[inner_edge]
        n, m = kid_edge[0], inner_edge[0]
        kf, gf = kid.formula, gkid.formula

        def mover(F):
            parts = flatten(F)
            p = Dia(n, kf)
            i = parts.index(p)
            hoisted = Dia(m, gf)
            kparts = flatten(kf)
            sub = _part_proof(kf, kparts, kparts.index(hoisted))
            cur = Proof(p, Dia(n, hoisted), MONO, (sub,))
            if m < n:
                step = Proof(Dia(n, hoisted), Dia(m, hoisted), AX5)
                cur = Proof(p, Dia(m, hoisted), CUT, (cur, step))
            squash = Proof(Dia(m, hoisted), hoisted, AX4)
            cur = Proof(p, hoisted, CUT, (cur, squash))
            return _extend_move(F, parts, i, hoisted, cur)

        self.apply(path, mover)
        node.kids[(m, node.world, inner_edge[2])] = gkid.clone()

    def _pack_under(self, path, lo_edge):
        """Fuse a copy of the parent's lo_edge conjunct into this
        occurrence.  The registered conjunct itself is never consumed —
        a duplicate is adjoined and packed instead — so no occurrence
        ever moves and paths held by callers stay valid."""
        node = path[-1][0]
        my_edge = path[-1][1]
        parent_path = path[:-1]
        parent = parent_path[-1][0]
        no, m = my_edge[0], lo_edge[0]
        nf = node.formula
        zn = parent.kids[lo_edge]
        zf = zn.formula
        low = Dia(m, zf)

        def dup(F):
            parts = flatten(F)
            i = parts.index(low)
            return _extend_move(F, parts, i, low, Proof(low, low, AX_ID))

        self.apply(parent_path, dup)

        def mover(F):
            parts = flatten(F)
            i = parts.index(Dia(no, nf))
            k = parts.index(low)
            return _pack_move(F, parts, i, k)

        self.apply(parent_path, mover)
        node.formula = conj([nf, low])
        node.kids[(m, node.world, lo_edge[2])] = zn.clone()

    def ensure_sat(self, path, c: RcFormula):
        """Materialize, under this occurrence, witnesses for every
        diamond of c (c holds at the occurrence's world)."""
        node = path[-1][0]
        for part in flatten(c):
            m, body = part.level, part.body
            if m >= len(self.rels):
                raise _PlanFailed
            targets = self.sat(body)
            for z in sorted(
                z for (w, z) in self.rels[m] if w == node.world and z in targets
            ):
                try:
                    self.ensure(path, m, z, body)
                    break
                except _PlanFailed:
                    continue
            else:
                raise _PlanFailed

    def ensure(self, path, m, z, body):
        """Give path[-1] a kid along closure edge (m, ., z) whose subtree
        satisfies body.

        Enrichment always precedes copying: rewrites deep in an
        occurrence are throttled by the level of the diamond holding it
        (packing needs a strictly higher one), so a subtree is finished
        at the highest-level occurrence that carries its world and only
        then lowered, hoisted, or packed into place as a clone."""
        self.steps += 1
        if self.steps > self._MAX_STEPS:
            raise _PlanFailed
        node = path[-1][0]
        w = node.world
        e = (m, w, z)
        kid = node.kids.get(e)
        if kid is not None:
            try:
                self.ensure_sat(path + [(kid, e)], body)
                return
            except _PlanFailed:
                pass
        # hoist a finished copy out of an existing kid
        for ke, kn in list(node.kids.items()):
            if ke[0] < m:
                continue
            for ge, gn in list(kn.kids.items()):
                if ge[0] != m or ge[2] != z:
                    continue
                try:
                    self.ensure_sat(path + [(kn, ke), (gn, ge)], body)
                    self._adjoin_extract(path, ke, ge)
                    return
                except _PlanFailed:
                    continue
        # work at the highest level carrying the edge, then lower
        for n in range(len(self.rels) - 1, m - 1, -1):
            if (w, z) not in self.rels[n]:
                continue
            he = (n, w, z)
            hkid = node.kids.get(he)
            try:
                if hkid is not None:
                    if n == m:
                        continue
                    self.ensure_sat(path + [(hkid, he)], body)
                else:
                    self._realize(path, he, body)
                if n > m:
                    self._adjoin_lower(path, he, e)
                return
            except _PlanFailed:
                continue
        raise _PlanFailed

    def _realize(self, path, e, body):
        """Materialize closure edge e as a fresh kid whose subtree
        satisfies body, following the rule that justified the edge."""
        node = path[-1][0]
        n, w, z = e
        kind = self.just.get(e)
        if kind is None or kind[0] in ("base", "incl"):
            # base conjuncts either still exist (found earlier) or were
            # consumed by packing and live deeper (hoisting recovers
            # them); inclusions are the caller's higher-level rounds
            raise _PlanFailed
        if kind[0] == "trans":
            y = kind[1][2]
            self.ensure(path, n, y, TOP)
            ke = (n, w, y)
            kn = node.kids[ke]
            self.ensure(path + [(kn, ke)], n, z, body)
            self._adjoin_extract(path, ke, (n, y, z))
            return
        # packing: the parent grows a finished lower conjunct and fuses
        # it into this occurrence (needs this occurrence's own diamond
        # strictly above the new edge's level)
        if len(path) < 2:
            raise _PlanFailed
        my_edge = path[-1][1]
        if my_edge[0] <= n:
            raise _PlanFailed
        parent_path = path[:-1]
        parent = parent_path[-1][0]
        if (parent.world, z) not in self.rels[n]:
            raise _PlanFailed
        self.ensure(parent_path, n, z, body)
        self._pack_under(path, (n, parent.world, z))

    def emit(self, path, c: RcFormula) -> Proof:
        """The closing derivation: project to materialized conjuncts and
        descend monotonically, mirroring c's shape."""
        node = path[-1][0]
        F = node.formula
        if isinstance(c, Top):
            return Proof(F, c, AX_TOP)
        if F == c:
            return Proof(F, c, AX_ID)
        if isinstance(c, Conj):
            kids = tuple(self.emit(path, p) for p in c.parts)
            return Proof(F, c, CONJ_INTRO, kids)
        targets = self.sat(c.body)
        for e in sorted(node.kids):
            if e[0] != c.level or e[2] not in targets:
                continue
            kn = node.kids[e]
            try:
                sub = self.emit(path + [(kn, e)], c.body)
            except _PlanFailed:
                continue
            parts = flatten(F)
            held = Dia(c.level, kn.formula)
            mono = Proof(held, c, MONO, (sub,))
            pr = _part_proof(F, parts, parts.index(held))
            if pr.rule == AX_ID:
                return mono
            return Proof(F, c, CUT, (pr, mono))
        raise _PlanFailed


def _plan_proof(a: RcFormula, b: RcFormula) -> Optional[Proof]:
    """Construct a proof of a |- b guided by the closure of a's
    unraveling, or None when the construction declines.  The result is
    built from the same certified step builders as searched proofs and
    carries no special trust."""
    try:
        planner = _Planner(a)
        if 0 not in planner.sat(b):
            return None
        start = [(planner.root, None)]
        planner.ensure_sat(start, b)
        closing = planner.emit(start, b)
        return _compose(planner.total, closing)
    except _PlanFailed:
        return None


def _search_dia(a, b: Dia, depth, cap, ctx, deep) -> Optional[Proof]:
    """Left-reachability search for a diamond goal.

    Single-diamond states are explored before conjunctions: goal-closing
    happens at a lone diamond (by monotone descent), and the productive
    rewrite chains — iterated self-packing, then lowering — stay within
    single diamonds, while conjunction states mostly feed combinatorial
    churn.  Both queues drain, so reachability is unaffected.  States
    whose closed unraveling falsifies the goal are pruned (see `_live`);
    the pruning is semantic, so exhaustion remains meaningful.
    """
    if not _live(a, b):
        return None
    reach: set = {_state_key(a)}
    lone: deque = deque()
    bulky: deque = deque()
    (lone if isinstance(a, (Dia, Top)) else bulky).append((a, None))
    nodes = ctx.allowance
    while lone or bulky:
        nodes -= 1
        if nodes < 0:
            ctx.lossy = True
            return None
        L, pre = lone.popleft() if lone else bulky.popleft()
        closing = _sub_conj_proof(L, b)
        if closing is not None:
            return _compose(pre, closing)
        if isinstance(L, Dia) and L.level == b.level:
            sub = _search(L.body, b.body, depth - 1, cap, ctx, deep)
            if sub is not None:
                return _compose(pre, Proof(L, b, MONO, (sub,)))
        for L2, step in _moves(L, deep):
            if _sz(L2) > cap:
                continue
            k2 = _state_key(L2)
            if k2 in reach:
                continue
            reach.add(k2)
            if not _live(L2, b):
                continue
            entry = (L2, _compose(pre, step))
            (lone if isinstance(L2, Dia) else bulky).append(entry)
    return None


# --- countermodels --------------------------------------------------------


@dataclass(frozen=True)
class Frame:
    """A finite frame: worlds 0..n_worlds-1 and one relation per level."""

    n_worlds: int
    rels: tuple[frozenset, ...]

    def __post_init__(self):
        object.__setattr__(self, "_h", hash((Frame, self.n_worlds, self.rels)))

    def __hash__(self):
        return self._h


@dataclass(frozen=True)
class CounterModel:
    """A frame plus a witness world refuting a sequent."""

    n_worlds: int
    rels: tuple[frozenset, ...]
    witness: int


def frame_conditions_hold(n_worlds: int, rels: tuple[frozenset, ...]) -> bool:
    """Transitivity, downward inclusion, and packing, checked literally."""
    for rel in rels:
        for (x, y) in rel:
            if not (0 <= x < n_worlds and 0 <= y < n_worlds):
                return False
            for (y2, z) in rel:
                if y2 == y and (x, z) not in rel:
                    return False
    for n in range(1, len(rels)):
        if not rels[n] <= rels[n - 1]:
            return False
    for n in range(len(rels)):
        for m in range(n):
            for (x, y) in rels[n]:
                for (x2, z) in rels[m]:
                    if x2 == x and (y, z) not in rels[m]:
                        return False
    return True


def _close_frame(n_worlds: int, rels: list[set]) -> tuple[frozenset, ...]:
    """Least extension of the given relations satisfying the conditions."""
    changed = True
    while changed:
        changed = False
        for n in range(len(rels) - 1, 0, -1):
            if not rels[n] <= rels[n - 1]:
                rels[n - 1] |= rels[n]
                changed = True
        for rel in rels:
            added = {
                (x, z)
                for (x, y) in rel
                for (y2, z) in rel
                if y2 == y and (x, z) not in rel
            }
            if added:
                rel |= added
                changed = True
        for n in range(len(rels)):
            for m in range(n):
                added = {
                    (y, z)
                    for (x, y) in rels[n]
                    for (x2, z) in rels[m]
                    if x2 == x and (y, z) not in rels[m]
                }
                if added:
                    rels[m] |= added
                    changed = True
    return tuple(frozenset(r) for r in rels)


def _sat(frame: Frame, f: RcFormula, cache: dict) -> frozenset:
    key = (frame, f)
    got = cache.get(key)
    if got is not None:
        return got
    if isinstance(f, Top):
        out = frozenset(range(frame.n_worlds))
    elif isinstance(f, Dia):
        if f.level >= len(frame.rels):
            out = frozenset()
        else:
            body = _sat(frame, f.body, cache)
            out = frozenset(x for (x, y) in frame.rels[f.level] if y in body)
    else:
        out = frozenset(range(frame.n_worlds))
        for p in f.parts:
            out &= _sat(frame, p, cache)
    cache[key] = out
    return out


def check_countermodel(m: CounterModel, a: RcFormula, b: RcFormula) -> bool:
    """Frame conditions plus: witness satisfies a and falsifies b."""
    if not (0 <= m.witness < m.n_worlds):
        return False
    if not frame_conditions_hold(m.n_worlds, m.rels):
        return False
    frame = Frame(m.n_worlds, m.rels)
    cache: dict = {}
    return m.witness in _sat(frame, a, cache) and m.witness not in _sat(frame, b, cache)


def countermodel_to_json(m: CounterModel) -> dict:
    return {
        "worlds": list(range(m.n_worlds)),
        "relations": {
            str(n): sorted([x, y] for (x, y) in rel) for n, rel in enumerate(m.rels)
        },
        "witness": m.witness,
    }


def countermodel_from_json(d: dict) -> CounterModel:
    n = len(d["worlds"])
    levels = sorted(int(k) for k in d["relations"])
    rels = tuple(
        frozenset((x, y) for x, y in d["relations"][str(lv)]) for lv in levels
    )
    return CounterModel(n, rels, d["witness"])


# --- frame stores ---------------------------------------------------------


def _canonical_frame_key(n_worlds: int, rels: tuple[frozenset, ...]):
    best = None
    for perm in itertools.permutations(range(n_worlds)):
        key = tuple(
            tuple(sorted((perm[x], perm[y]) for (x, y) in rel)) for rel in rels
        )
        if best is None or key < best:
            best = key
    return (n_worlds, best)


def _transitive(rel: set) -> bool:
    for (x, y) in rel:
        for (y2, z) in rel:
            if y2 == y and (x, z) not in rel:
                return False
    return True


def _seed_frames(k: int, n_levels: int) -> Iterator[tuple[frozenset, ...]]:
    """Paths with an optional closing edge, completed to least frames.

    These shapes (chains, terminal loops, loops back into the path, and
    the clusters their closure creates) are the countermodels worm
    sequents actually need, so they are enumerated first.
    """
    levels = range(n_levels)
    if k == 1:
        yield tuple(frozenset() for _ in range(n_levels))
        for lv in levels:
            base = [set() for _ in range(n_levels)]
            base[lv].add((0, 0))
            yield _close_frame(1, base)
        return
    for path in itertools.product(levels, repeat=k - 1):
        extras: list[Optional[tuple[int, int, int]]] = [None]
        for target in range(k):
            for lv in levels:
                extras.append((k - 1, target, lv))
        for extra in extras:
            base = [set() for _ in range(n_levels)]
            for i, lv in enumerate(path):
                base[lv].add((i, i + 1))
            if extra is not None:
                src, dst, lv = extra
                base[lv].add((src, dst))
            yield _close_frame(k, base)


_ENUM_WORLD_LIMIT = 2


def _enum_frames(k: int, n_levels: int) -> Iterator[tuple[frozenset, ...]]:
    """Exhaustive enumeration of admissible frames, tiny world counts only.

    Beyond two worlds the raw space (every subset of k*k pairs per level)
    is out of reach, so larger frames come from the quotient and seed
    generators instead; this keeps the library's small end complete.
    """
    if k > _ENUM_WORLD_LIMIT:
        return
    pairs = [(i, j) for i in range(k) for j in range(k)]

    def subsets(edges: list) -> Iterator[set]:
        masks = sorted(range(1 << len(edges)), key=lambda m: (bin(m).count("1"), m))
        for m in masks:
            yield {edges[t] for t in range(len(edges)) if m >> t & 1}

    def admissible(lower: set) -> list:
        succ = {w: {y for (x, y) in lower if x == w} for w in range(k)}
        return [(x, y) for (x, y) in sorted(lower) if succ[x] <= succ[y]]

    def rec(levels_done: list) -> Iterator[tuple[frozenset, ...]]:
        if len(levels_done) == n_levels:
            yield tuple(frozenset(r) for r in levels_done)
            return
        for cand in subsets(admissible(levels_done[-1])):
            if _transitive(cand):
                yield from rec(levels_done + [cand])

    for r0 in subsets(pairs):
        if not _transitive(r0):
            continue
        if n_levels == 1:
            yield (frozenset(r0),)
        else:
            yield from rec([r0])


def _partitions(n: int, max_blocks: int) -> Iterator[list[int]]:
    """Set partitions of range(n) as block-index vectors, most blocks
    first (the finest fitting partitions distort the least)."""
    out: list[list[int]] = []

    def grow(vec: list[int], used: int):
        if len(vec) == n:
            out.append(vec[:])
            return
        for b in range(min(used + 1, max_blocks)):
            vec.append(b)
            grow(vec, max(used, b + 1))
            vec.pop()

    grow([0], 1)
    out.sort(key=lambda v: -max(v))
    yield from out


class _FrameStore:
    """Lazily generated, deduplicated frames for one relation count."""

    def __init__(self, n_levels: int):
        self.n_levels = n_levels
        self.sat_cache: dict = {}
        self._seen: set = set()
        self._seeds: dict[int, list[Frame]] = {}
        self._enum: dict[int, list[Frame]] = {}
        self._enum_gen: dict[int, Iterator] = {}
        self._enum_done: dict[int, bool] = {}

    def _admit(self, k: int, rels: tuple[frozenset, ...]) -> Optional[Frame]:
        key = _canonical_frame_key(k, rels)
        if key in self._seen:
            return None
        self._seen.add(key)
        return Frame(k, rels)

    def seeds(self, k: int) -> list[Frame]:
        if k not in self._seeds:
            out = []
            for rels in _seed_frames(k, self.n_levels):
                f = self._admit(k, rels)
                if f is not None:
                    out.append(f)
            self._seeds[k] = out
        return self._seeds[k]

    def frames(self, max_worlds: int, seeds_only: bool = False) -> Iterator[Frame]:
        for k in range(1, max_worlds + 1):
            yield from self.seeds(k)
        if seeds_only:
            return
        for k in range(1, max_worlds + 1):
            done = self._enum_done.get(k, False)
            got = self._enum.setdefault(k, [])
            yield from got
            if done:
                continue
            gen = self._enum_gen.setdefault(k, _enum_frames(k, self.n_levels))
            for rels in gen:
                f = self._admit(k, rels)
                if f is not None:
                    got.append(f)
                    yield f
            self._enum_done[k] = True


_stores: dict[int, _FrameStore] = {}


def _get_store(top_level: int) -> _FrameStore:
    n_levels = top_level + 1
    if n_levels not in _stores:
        _stores[n_levels] = _FrameStore(n_levels)
    return _stores[n_levels]


def _tree_model(a: RcFormula, n_levels: int) -> tuple[int, list[set]]:
    """The unraveling of a's diamond structure, before closure."""
    rels: list[set] = [set() for _ in range(n_levels)]
    counter = itertools.count(1)

    def build(f: RcFormula, world: int):
        for part in flatten(f):
            child = next(counter)
            rels[part.level].add((world, child))
            build(part.body, child)

    build(a, 0)
    n_worlds = next(counter)
    return n_worlds, rels


def _refutes(store: _FrameStore, frame: Frame, a, b) -> Optional[CounterModel]:
    sat_a = _sat(frame, a, store.sat_cache)
    if not sat_a:
        return None
    sat_b = _sat(frame, b, store.sat_cache)
    for w in sorted(sat_a - sat_b):
        model = CounterModel(frame.n_worlds, frame.rels, w)
        assert check_countermodel(model, a, b), "internal: unverified countermodel"
        return model
    return None


def _quotient_candidates(a: RcFormula, top: int, max_worlds: int) -> Iterator[Frame]:
    """Closures of quotients of a's unraveling onto at most max_worlds
    worlds.  Edges map through the world merging, so every candidate
    satisfies a at the image of the root; the finest partitions come
    first (the identity when the tree already fits the budget)."""
    n_worlds, raw = _tree_model(a, top + 1)
    seen = set()
    for vec in _partitions(n_worlds, max_worlds):
        k = max(vec) + 1
        merged = [{(vec[x], vec[y]) for (x, y) in rel} for rel in raw]
        rels = _close_frame(k, merged)
        key = (k, rels)
        if key in seen:
            continue
        seen.add(key)
        yield Frame(k, rels)


def countermodel_bounded(
    a: RcFormula, b: RcFormula, max_worlds: int = 4
) -> Optional[CounterModel]:
    """Search frames of up to max_worlds worlds for a model of a refuting b."""
    top = max(max_level(a), max_level(b))
    store = _get_store(top)
    for frame in _quotient_candidates(a, top, max_worlds):
        found = _refutes(store, frame, a, b)
        if found is not None:
            return found
    for frame in store.frames(max_worlds):
        found = _refutes(store, frame, a, b)
        if found is not None:
            return found
    return None


# --- combined decision ----------------------------------------------------

DERIVABLE = "DERIVABLE"
NOT_DERIVABLE = "NOT_DERIVABLE"
UNRESOLVED = "UNRESOLVED"


@dataclass(frozen=True)
class OracleBudgets:
    proof_depth: int = 10
    size_cap: Optional[int] = None
    max_worlds: int = 4
    # On double exhaustion, retry the proof search with the size cap
    # scaled by 2, 4, ... up to this factor (iterated duplication steps
    # double intermediate formulas, so proofs can legitimately need
    # room well past the endpoint sizes), then retry the model search
    # with two extra worlds.  0 disables escalation.
    escalation: int = 4


@dataclass(frozen=True)
class OracleVerdict:
    status: str
    proof: Optional[Proof] = None
    model: Optional[CounterModel] = None

    def __post_init__(self):
        # a proof and a countermodel together would contradict soundness
        assert not (self.proof is not None and self.model is not None)


def decide_oracle(
    a: RcFormula, b: RcFormula, budgets: Optional[OracleBudgets] = None
) -> OracleVerdict:
    """Prove or refute a |- b within budgets; UNRESOLVED if neither lands.

    When both searches exhaust their base budgets, the proof search is
    retried at escalated size caps (and the model search at a slightly
    wider world bound) before conceding — see OracleBudgets.escalation.
    """
    bud = budgets or OracleBudgets()
    top = max(max_level(a), max_level(b))
    store = _get_store(top)

    for frame in _quotient_candidates(a, top, bud.max_worlds):
        found = _refutes(store, frame, a, b)
        if found is not None:
            return OracleVerdict(NOT_DERIVABLE, model=found)

    proof = prove_bounded(a, b, bud.proof_depth, bud.size_cap)
    if proof is not None:
        assert replay_proof(proof), "internal: proof failed replay"
        return OracleVerdict(DERIVABLE, proof=proof)

    model = countermodel_bounded(a, b, bud.max_worlds)
    if model is not None:
        return OracleVerdict(NOT_DERIVABLE, model=model)

    base_cap = (
        bud.size_cap if bud.size_cap is not None else 2 * (size(a) + size(b))
    )
    mult = 2
    while mult <= bud.escalation:
        proof = prove_bounded(a, b, bud.proof_depth, mult * base_cap)
        if proof is not None:
            assert replay_proof(proof), "internal: proof failed replay"
            return OracleVerdict(DERIVABLE, proof=proof)
        mult *= 2
    if bud.escalation:
        model = countermodel_bounded(a, b, bud.max_worlds + 2)
        if model is not None:
            return OracleVerdict(NOT_DERIVABLE, model=model)
    return OracleVerdict(UNRESOLVED)
