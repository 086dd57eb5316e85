"""Canonical matched-paired domination on decomposition trees, near-linear time.

The solver folds the tree bottom-up.  Every node carries a summary of its
subtree graph: a canonical solution of the graph minus its isolated vertices,
pools of unmatched vertices, and a few O(1) aggregates (a restricted-free
witness edge, minimum-vertex exemplars).  A union concatenates the two child
summaries unchanged.  A join rebuilds: with sides ordered so the left one
holds at least as many restricted vertices, the whole right solution is
discarded and the left one is patched with cross pairs, dispatching on how
the left side's unmatched restricted supply compares with the right side's
restricted and free demand.  Every construction leaves at most one free pair.

The solver never looks at adjacency.  The two constructions that need a
restricted-free edge inside one side answer that question from the witness
edge maintained bottom-up, which exists exactly when such an edge exists.

All pair sequences and vertex pools are singly-linked chains threaded through
per-solve arenas, so concatenation and popping are O(1) and a union combine
costs constant time regardless of subtree size.  Summaries are flat mutable
records (plain lists) owned by their :class:`SolveContext`; inspect them with
:meth:`SolveContext.snapshot`.  Combines consume their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional

from .cotree import Cotree, LEAF, UNION
from .graphs import (
    EdgeClass,
    MPDSolution,
    NoSolutionError,
    PairedEdge,
    RestrictedSet,
)

__all__ = [
    "JointContext",
    "NodeSummary",
    "SolveContext",
    "SolverInternalError",
    "SummaryView",
    "solve",
]

# A node summary is a flat record (plain list) so the million-node fold stays
# allocation-light.  Pair chains are linked through the context's pair arena;
# vertex pools through per-vertex next slots.  Chains are sentinel-terminated
# (-1); heads of -1 mean empty.
_NV = 0  # vertices in the subtree graph
_NR = 1  # restricted vertices among them
_KC = 2  # full-pair count (chain below)
_SC = 3  # semi-pair count
_FC = 4  # free-pair count
_KH, _KT = 5, 6  # full-pair chain head/tail (pair ids)
_SH, _ST = 7, 8  # semi-pair chain; restricted endpoint stored first
_FH, _FT = 9, 10  # free-pair chain
_RH, _RT = 11, 12  # pool: unmatched restricted vertices
_UH, _UT = 13, 14  # pool: unmatched free vertices
_IRH, _IRT, _IRC = 15, 16, 17  # isolated restricted vertices (chain + count)
_IFH, _IFT, _IFC = 18, 19, 20  # isolated free vertices
_WR, _WF = 21, 22  # witness restricted-free edge inside the subtree (-1 none)
_XR, _XF = 23, 24  # exemplars: smallest restricted / free vertex (-1 none)
_CASE = 25  # tag of the rule that produced this summary

NodeSummary = list
"""Opaque summary record; owned by a :class:`SolveContext`."""


class SolverInternalError(RuntimeError):
    """A combine violated one of its counting guards; indicates a bug."""


class JointContext(NamedTuple):
    """Scalar state of the most recent join combine (diagnostics).

    ``left_spare`` counts the unmatched restricted vertices of the side with
    more restricted vertices; ``right_restricted``/``right_free`` describe
    the other side; ``case`` names the construction that fired.
    """

    left_spare: int
    right_restricted: int
    right_free: int
    case: str


@dataclass(frozen=True)
class SummaryView:
    """Readable snapshot of a node summary (testing and diagnostics)."""

    vertex_count: int
    restricted_count: int
    k: int
    s: int
    f: int
    full_pairs: tuple[tuple[int, int], ...]
    semi_pairs: tuple[tuple[int, int], ...]
    free_pairs: tuple[tuple[int, int], ...]
    unmatched_restricted: tuple[int, ...]
    unmatched_free: tuple[int, ...]
    isolated_restricted: tuple[int, ...]
    isolated_free: tuple[int, ...]
    rf_witness: Optional[tuple[int, int]]
    exemplar_restricted: Optional[int]
    exemplar_free: Optional[int]
    case: str


class SolveContext:
    """Arenas and combine rules for one solve run.

    One context serves one (vertex count, restricted set) instance; build
    leaf summaries and fold them with the combine methods, or let
    :func:`solve` drive the whole postorder.  A context is single-threaded;
    distinct contexts are fully independent.
    """

    def __init__(self, n: int, restricted: RestrictedSet | Iterable[int]) -> None:
        if not isinstance(restricted, RestrictedSet):
            restricted = RestrictedSet(n, restricted)
        if restricted.n != n:
            raise ValueError(
                f"restricted set is over {restricted.n} vertices, graph has {n}"
            )
        self.n = n
        self.restricted = restricted
        self.rflags = restricted.flags
        # Pair arena: endpoints plus the chain link.  Pair ids are never
        # reused; a pair removed from the middle of a chain is marked dead by
        # pu[pid] = -1 and skipped by walkers.
        self.pu: list[int] = []
        self.pv: list[int] = []
        self.pn: list[int] = []
        self.pof = [-1] * n  # vertex -> pair id; valid only while matched
        self.nxt = [-1] * n  # link slot for the unmatched pools
        self.inx = [-1] * n  # link slot for the isolated chains
        # claimed[v] > 0 means v was consumed out of turn by a construction
        # that picked it directly (exemplar or witness vertex); the pending
        # count is settled either by skipping v's pool entry when a pop or a
        # spill reaches it, or by suppressing v's next release.  A vertex is
        # never physically present in two pool positions at once.
        self.claimed = [0] * n
        self._last_joint: Optional[tuple[int, int, int, str]] = None

    @property
    def last_joint(self) -> Optional[JointContext]:
        """Scalar trace of the most recent join combine, if any."""
        if self._last_joint is None:
            return None
        return JointContext(*self._last_joint)

    # -- summary constructors -------------------------------------------------

    def leaf_summary(self, vertex: int) -> NodeSummary:
        """Summary of a single-vertex subtree.

        The vertex is isolated and unmatched; whether it lands in the
        restricted or the free pools follows the context's restricted set.
        """
        v = vertex
        self.nxt[v] = -1
        self.inx[v] = -1
        if self.rflags[v]:
            return [1, 1, 0, 0, 0, -1, -1, -1, -1, -1, -1,
                    v, v, -1, -1, v, v, 1, -1, -1, 0, -1, -1, v, -1, "leaf"]
        return [1, 0, 0, 0, 0, -1, -1, -1, -1, -1, -1,
                -1, -1, v, v, -1, -1, 0, v, v, 1, -1, -1, -1, v, "leaf"]

    # -- chain primitives ------------------------------------------------------

    def _add_full(self, summ: NodeSummary, u: int, v: int) -> None:
        pid = len(self.pu)
        self.pu.append(u)
        self.pv.append(v)
        self.pn.append(-1)
        self.pof[u] = pid
        self.pof[v] = pid
        tail = summ[_KT]
        if tail < 0:
            summ[_KH] = pid
        else:
            self.pn[tail] = pid
        summ[_KT] = pid
        summ[_KC] += 1

    def _add_semi(self, summ: NodeSummary, restricted_end: int, free_end: int) -> None:
        pid = len(self.pu)
        self.pu.append(restricted_end)
        self.pv.append(free_end)
        self.pn.append(-1)
        self.pof[restricted_end] = pid
        self.pof[free_end] = pid
        tail = summ[_ST]
        if tail < 0:
            summ[_SH] = pid
        else:
            self.pn[tail] = pid
        summ[_ST] = pid
        summ[_SC] += 1

    def _add_free(self, summ: NodeSummary, u: int, v: int) -> None:
        pid = len(self.pu)
        self.pu.append(u)
        self.pv.append(v)
        self.pn.append(-1)
        self.pof[u] = pid
        self.pof[v] = pid
        tail = summ[_FT]
        if tail < 0:
            summ[_FH] = pid
        else:
            self.pn[tail] = pid
        summ[_FT] = pid
        summ[_FC] += 1

    def _pop_full(self, summ: NodeSummary) -> tuple[int, int]:
        """Remove and return the first live full pair (endpoints)."""
        pn, pu = self.pn, self.pu
        h = summ[_KH]
        while True:
            if h < 0:
                raise SolverInternalError("full-pair pop from an empty chain")
            pid = h
            h = pn[pid]
            if pu[pid] < 0:  # dead
                continue
            break
        summ[_KH] = h
        if h < 0:
            summ[_KT] = -1
        summ[_KC] -= 1
        return self.pu[pid], self.pv[pid]

    def _pop_semi(self, summ: NodeSummary) -> tuple[int, int]:
        """Remove and return the first semi pair as (restricted, free)."""
        h = summ[_SH]
        if h < 0:
            raise SolverInternalError("semi-pair pop from an empty chain")
        summ[_SH] = self.pn[h]
        if summ[_SH] < 0:
            summ[_ST] = -1
        summ[_SC] -= 1
        return self.pu[h], self.pv[h]

    def _pop_restricted(self, summ: NodeSummary) -> int:
        """Pop one available vertex from the unmatched-restricted pool."""
        nxt, claimed = self.nxt, self.claimed
        h = summ[_RH]
        while True:
            if h < 0:
                raise SolverInternalError("restricted pop from an empty pool")
            v = h
            h = nxt[v]
            if claimed[v]:
                claimed[v] -= 1
                continue
            break
        summ[_RH] = h
        if h < 0:
            summ[_RT] = -1
        return v

    def _pop_free(self, summ: NodeSummary) -> int:
        """Pop one available vertex from the unmatched-free pool."""
        nxt, claimed = self.nxt, self.claimed
        h = summ[_UH]
        while True:
            if h < 0:
                raise SolverInternalError("free pop from an empty pool")
            v = h
            h = nxt[v]
            if claimed[v]:
                claimed[v] -= 1
                continue
            break
        summ[_UH] = h
        if h < 0:
            summ[_UT] = -1
        return v

    # Batched forms of the four hot loop shapes; same semantics as composing
    # the single-step helpers, with the chain plumbing hoisted out of the
    # per-pair path.

    def _cross_fulls(self, l: NodeSummary, r: NodeSummary, cnt: int) -> None:
        """cnt full pairs (left restricted pop, right restricted pop)."""
        if cnt <= 0:
            return
        pu, pv, pn = self.pu, self.pv, self.pn
        pof, nxt, claimed = self.pof, self.nxt, self.claimed
        lh = l[_RH]
        rh = r[_RH]
        head, tail = l[_KH], l[_KT]
        for _ in range(cnt):
            while True:
                u = lh
                if u < 0:
                    raise SolverInternalError("restricted pop from an empty pool")
                lh = nxt[u]
                if claimed[u]:
                    claimed[u] -= 1
                    continue
                break
            while True:
                v = rh
                if v < 0:
                    raise SolverInternalError("restricted pop from an empty pool")
                rh = nxt[v]
                if claimed[v]:
                    claimed[v] -= 1
                    continue
                break
            pid = len(pu)
            pu.append(u)
            pv.append(v)
            pn.append(-1)
            pof[u] = pid
            pof[v] = pid
            if tail < 0:
                head = pid
            else:
                pn[tail] = pid
            tail = pid
        l[_RH] = lh
        if lh < 0:
            l[_RT] = -1
        r[_RH] = rh
        if rh < 0:
            r[_RT] = -1
        l[_KH], l[_KT] = head, tail
        l[_KC] += cnt

    def _cross_semis(self, l: NodeSummary, r: NodeSummary, cnt: int) -> None:
        """cnt semi pairs (left restricted pop, right free pop)."""
        if cnt <= 0:
            return
        pu, pv, pn = self.pu, self.pv, self.pn
        pof, nxt, claimed = self.pof, self.nxt, self.claimed
        lh = l[_RH]
        rh = r[_UH]
        head, tail = l[_SH], l[_ST]
        for _ in range(cnt):
            while True:
                u = lh
                if u < 0:
                    raise SolverInternalError("restricted pop from an empty pool")
                lh = nxt[u]
                if claimed[u]:
                    claimed[u] -= 1
                    continue
                break
            while True:
                v = rh
                if v < 0:
                    raise SolverInternalError("free pop from an empty pool")
                rh = nxt[v]
                if claimed[v]:
                    claimed[v] -= 1
                    continue
                break
            pid = len(pu)
            pu.append(u)
            pv.append(v)
            pn.append(-1)
            pof[u] = pid
            pof[v] = pid
            if tail < 0:
                head = pid
            else:
                pn[tail] = pid
            tail = pid
        l[_RH] = lh
        if lh < 0:
            l[_RT] = -1
        r[_UH] = rh
        if rh < 0:
            r[_UT] = -1
        l[_SH], l[_ST] = head, tail
        l[_SC] += cnt

    def _semis_to_fulls(self, l: NodeSummary, r: NodeSummary, cnt: int) -> None:
        """Destroy cnt semi pairs; each restricted endpoint re-pairs with a
        right restricted pop (full), each free partner returns to the pool."""
        if cnt <= 0:
            return
        pu, pv, pn = self.pu, self.pv, self.pn
        pof, nxt, claimed = self.pof, self.nxt, self.claimed
        sh = l[_SH]
        rh = r[_RH]
        head, tail = l[_KH], l[_KT]
        uh, ut = l[_UH], l[_UT]
        for _ in range(cnt):
            spid = sh
            if spid < 0:
                raise SolverInternalError("semi-pair pop from an empty chain")
            sh = pn[spid]
            u = pu[spid]
            w = pv[spid]
            if claimed[w]:
                claimed[w] -= 1
            else:
                nxt[w] = -1
                if ut < 0:
                    uh = w
                else:
                    nxt[ut] = w
                ut = w
            while True:
                v = rh
                if v < 0:
                    raise SolverInternalError("restricted pop from an empty pool")
                rh = nxt[v]
                if claimed[v]:
                    claimed[v] -= 1
                    continue
                break
            pid = len(pu)
            pu.append(u)
            pv.append(v)
            pn.append(-1)
            pof[u] = pid
            pof[v] = pid
            if tail < 0:
                head = pid
            else:
                pn[tail] = pid
            tail = pid
        l[_SH] = sh
        if sh < 0:
            l[_ST] = -1
        l[_SC] -= cnt
        r[_RH] = rh
        if rh < 0:
            r[_RT] = -1
        l[_KH], l[_KT] = head, tail
        l[_KC] += cnt
        l[_UH], l[_UT] = uh, ut

    def _split_fulls(self, l: NodeSummary, r: NodeSummary, cnt: int) -> None:
        """Destroy cnt full pairs; all endpoints re-pair with right
        restricted pops, two new full pairs per old one.

        Callers guarantee cnt is strictly below the live full-pair count, so
        the head cursor below can never run into the pairs this loop appends
        at the tail, and the chain never empties mid-loop.
        """
        if cnt <= 0:
            return
        pu, pv, pn = self.pu, self.pv, self.pn
        pof, nxt, claimed = self.pof, self.nxt, self.claimed
        kh = l[_KH]
        rh = r[_RH]
        tail = l[_KT]
        for _ in range(cnt):
            while True:
                old = kh
                if old < 0:
                    raise SolverInternalError("full-pair pop from an empty chain")
                kh = pn[old]
                if pu[old] < 0:  # dead
                    continue
                break
            for u in (pu[old], pv[old]):
                while True:
                    v = rh
                    if v < 0:
                        raise SolverInternalError("restricted pop from an empty pool")
                    rh = nxt[v]
                    if claimed[v]:
                        claimed[v] -= 1
                        continue
                    break
                pid = len(pu)
                pu.append(u)
                pv.append(v)
                pn.append(-1)
                pof[u] = pid
                pof[v] = pid
                pn[tail] = pid
                tail = pid
        l[_KH] = kh
        l[_KT] = tail
        l[_KC] += cnt
        r[_RH] = rh
        if rh < 0:
            r[_RT] = -1

    def _push_restricted(self, summ: NodeSummary, v: int) -> None:
        claimed = self.claimed
        if claimed[v]:
            claimed[v] -= 1  # release suppressed: v was taken out of turn
            return
        nxt = self.nxt
        nxt[v] = -1
        tail = summ[_RT]
        if tail < 0:
            summ[_RH] = v
        else:
            nxt[tail] = v
        summ[_RT] = v

    def _push_free(self, summ: NodeSummary, v: int) -> None:
        claimed = self.claimed
        if claimed[v]:
            claimed[v] -= 1
            return
        nxt = self.nxt
        nxt[v] = -1
        tail = summ[_UT]
        if tail < 0:
            summ[_UH] = v
        else:
            nxt[tail] = v
        summ[_UT] = v

    def _spill(self, summ: NodeSummary) -> None:
        """Destroy the summary's entire solution; endpoints drop into pools."""
        pn, pu, pv = self.pn, self.pu, self.pv
        nxt, claimed = self.nxt, self.claimed
        rt, ut = summ[_RT], summ[_UT]
        rh, uh = summ[_RH], summ[_UH]
        pid = summ[_KH]
        while pid >= 0:
            u = pu[pid]
            if u >= 0:
                for w in (u, pv[pid]):
                    if claimed[w]:
                        claimed[w] -= 1
                        continue
                    nxt[w] = -1
                    if rt < 0:
                        rh = w
                    else:
                        nxt[rt] = w
                    rt = w
            pid = pn[pid]
        pid = summ[_SH]
        while pid >= 0:
            w = pu[pid]
            if claimed[w]:
                claimed[w] -= 1
            else:
                nxt[w] = -1
                if rt < 0:
                    rh = w
                else:
                    nxt[rt] = w
                rt = w
            w = pv[pid]
            if claimed[w]:
                claimed[w] -= 1
            else:
                nxt[w] = -1
                if ut < 0:
                    uh = w
                else:
                    nxt[ut] = w
                ut = w
            pid = pn[pid]
        pid = summ[_FH]
        while pid >= 0:
            for w in (pu[pid], pv[pid]):
                if claimed[w]:
                    claimed[w] -= 1
                    continue
                nxt[w] = -1
                if ut < 0:
                    uh = w
                else:
                    nxt[ut] = w
                ut = w
            pid = pn[pid]
        summ[_RH], summ[_RT] = rh, rt
        summ[_UH], summ[_UT] = uh, ut
        summ[_KC] = summ[_SC] = summ[_FC] = 0
        summ[_KH] = summ[_KT] = summ[_SH] = summ[_ST] = summ[_FH] = summ[_FT] = -1

    def _drop_free_pairs(self, summ: NodeSummary) -> None:
        """Discard all free pairs; their endpoints return to the free pool."""
        pn, pu, pv = self.pn, self.pu, self.pv
        pid = summ[_FH]
        while pid >= 0:
            self._push_free(summ, pu[pid])
            self._push_free(summ, pv[pid])
            pid = pn[pid]
        summ[_FC] = 0
        summ[_FH] = summ[_FT] = -1

    # -- specialized tiny combines -----------------------------------------
    #
    # Two thirds of the internal nodes of a random tree touch a leaf child;
    # these builders produce the exact result of composing leaf_summary with
    # the generic combines, without materializing the leaf records.

    def _leaf2_union(self, u: int, v: int) -> NodeSummary:
        """Union of two leaves (left u, right v)."""
        nxt, inx = self.nxt, self.inx
        if self.rflags[u]:
            if self.rflags[v]:
                nxt[u] = v
                nxt[v] = -1
                inx[u] = v
                inx[v] = -1
                return [2, 2, 0, 0, 0, -1, -1, -1, -1, -1, -1, u, v, -1, -1,
                        u, v, 2, -1, -1, 0, -1, -1, (u if u < v else v), -1, "union"]
            nxt[u] = -1
            nxt[v] = -1
            inx[u] = -1
            inx[v] = -1
            return [2, 1, 0, 0, 0, -1, -1, -1, -1, -1, -1, u, u, v, v,
                    u, u, 1, v, v, 1, -1, -1, u, v, "union"]
        if self.rflags[v]:
            nxt[u] = -1
            nxt[v] = -1
            inx[u] = -1
            inx[v] = -1
            return [2, 1, 0, 0, 0, -1, -1, -1, -1, -1, -1, v, v, u, u,
                    v, v, 1, u, u, 1, -1, -1, v, u, "union"]
        nxt[u] = v
        nxt[v] = -1
        inx[u] = v
        inx[v] = -1
        return [2, 0, 0, 0, 0, -1, -1, -1, -1, -1, -1, -1, -1, u, v,
                -1, -1, 0, u, v, 2, -1, -1, -1, (u if u < v else v), "union"]

    def _union_append_leaf(self, l: NodeSummary, v: int) -> NodeSummary:
        """Union with a right leaf: append v to the pools of l."""
        nxt, inx = self.nxt, self.inx
        l[_NV] += 1
        if self.rflags[v]:
            l[_NR] += 1
            nxt[v] = -1
            t = l[_RT]
            if t < 0:
                l[_RH] = v
            else:
                nxt[t] = v
            l[_RT] = v
            inx[v] = -1
            t = l[_IRT]
            if t < 0:
                l[_IRH] = v
            else:
                inx[t] = v
            l[_IRT] = v
            l[_IRC] += 1
            if l[_XR] < 0 or v < l[_XR]:
                l[_XR] = v
        else:
            nxt[v] = -1
            t = l[_UT]
            if t < 0:
                l[_UH] = v
            else:
                nxt[t] = v
            l[_UT] = v
            inx[v] = -1
            t = l[_IFT]
            if t < 0:
                l[_IFH] = v
            else:
                inx[t] = v
            l[_IFT] = v
            l[_IFC] += 1
            if l[_XF] < 0 or v < l[_XF]:
                l[_XF] = v
        l[_CASE] = "union"
        return l

    def _union_prepend_leaf(self, v: int, r: NodeSummary) -> NodeSummary:
        """Union with a left leaf: prepend v to the pools of r."""
        nxt, inx = self.nxt, self.inx
        r[_NV] += 1
        if self.rflags[v]:
            r[_NR] += 1
            h = r[_RH]
            nxt[v] = h
            r[_RH] = v
            if h < 0:
                r[_RT] = v
            h = r[_IRH]
            inx[v] = h
            r[_IRH] = v
            if h < 0:
                r[_IRT] = v
            r[_IRC] += 1
            if r[_XR] < 0 or v < r[_XR]:
                r[_XR] = v
        else:
            h = r[_UH]
            nxt[v] = h
            r[_UH] = v
            if h < 0:
                r[_UT] = v
            h = r[_IFH]
            inx[v] = h
            r[_IFH] = v
            if h < 0:
                r[_IFT] = v
            r[_IFC] += 1
            if r[_XF] < 0 or v < r[_XF]:
                r[_XF] = v
        r[_CASE] = "union"
        return r

    def _leaf2_joint(self, u: int, v: int) -> NodeSummary:
        """Join of two leaves: exactly one cross pair, nothing pooled."""
        pu, pv, pn, pof = self.pu, self.pv, self.pn, self.pof
        pid = len(pu)
        fu = self.rflags[u]
        if fu and self.rflags[v]:
            pu.append(u)
            pv.append(v)
            pn.append(-1)
            pof[u] = pid
            pof[v] = pid
            self._last_joint = (1, 1, 0, "balanced-cross")
            return [2, 2, 1, 0, 0, pid, pid, -1, -1, -1, -1, -1, -1, -1, -1,
                    -1, -1, 0, -1, -1, 0, -1, -1, (u if u < v else v), -1,
                    "balanced-cross"]
        if fu or self.rflags[v]:
            if not fu:
                u, v = v, u  # restricted endpoint first
            pu.append(u)
            pv.append(v)
            pn.append(-1)
            pof[u] = pid
            pof[v] = pid
            self._last_joint = (1, 0, 1, "cover-right")
            return [2, 1, 0, 1, 0, -1, -1, pid, pid, -1, -1, -1, -1, -1, -1,
                    -1, -1, 0, -1, -1, 0, u, v, u, v, "cover-right"]
        pu.append(u)
        pv.append(v)
        pn.append(-1)
        pof[u] = pid
        pof[v] = pid
        self._last_joint = (0, 0, 1, "free-cross")
        return [2, 0, 0, 0, 1, -1, -1, -1, -1, pid, pid, -1, -1, -1, -1,
                -1, -1, 0, -1, -1, 0, -1, -1, -1, (u if u < v else v),
                "free-cross"]

    # -- combines ---------------------------------------------------------

    def combine_union(self, left: NodeSummary, right: NodeSummary) -> NodeSummary:
        """Disjoint union: concatenate everything fieldwise, O(1).

        Both inputs are consumed; the merged record is returned.
        """
        l, r = left, right
        pn, nxt, inx = self.pn, self.nxt, self.inx

        l[_NV] += r[_NV]
        l[_NR] += r[_NR]
        l[_KC] += r[_KC]
        l[_SC] += r[_SC]
        l[_FC] += r[_FC]
        l[_IRC] += r[_IRC]
        l[_IFC] += r[_IFC]

        if r[_KH] >= 0:
            if l[_KH] < 0:
                l[_KH] = r[_KH]
            else:
                pn[l[_KT]] = r[_KH]
            l[_KT] = r[_KT]
        if r[_SH] >= 0:
            if l[_SH] < 0:
                l[_SH] = r[_SH]
            else:
                pn[l[_ST]] = r[_SH]
            l[_ST] = r[_ST]
        if r[_FH] >= 0:
            if l[_FH] < 0:
                l[_FH] = r[_FH]
            else:
                pn[l[_FT]] = r[_FH]
            l[_FT] = r[_FT]
        if r[_RH] >= 0:
            if l[_RH] < 0:
                l[_RH] = r[_RH]
            else:
                nxt[l[_RT]] = r[_RH]
            l[_RT] = r[_RT]
        if r[_UH] >= 0:
            if l[_UH] < 0:
                l[_UH] = r[_UH]
            else:
                nxt[l[_UT]] = r[_UH]
            l[_UT] = r[_UT]
        if r[_IRH] >= 0:
            if l[_IRH] < 0:
                l[_IRH] = r[_IRH]
            else:
                inx[l[_IRT]] = r[_IRH]
            l[_IRT] = r[_IRT]
        if r[_IFH] >= 0:
            if l[_IFH] < 0:
                l[_IFH] = r[_IFH]
            else:
                inx[l[_IFT]] = r[_IFH]
            l[_IFT] = r[_IFT]

        if l[_WR] < 0 and r[_WR] >= 0:
            l[_WR] = r[_WR]
            l[_WF] = r[_WF]
        xr = r[_XR]
        if xr >= 0 and (l[_XR] < 0 or xr < l[_XR]):
            l[_XR] = xr
        xf = r[_XF]
        if xf >= 0 and (l[_XF] < 0 or xf < l[_XF]):
            l[_XF] = xf
        l[_CASE] = "union"
        return l

    def combine_joint(self, left: NodeSummary, right: NodeSummary) -> NodeSummary:
        """Join: rebuild a canonical solution from the two child summaries.

        The children are reordered so the kept side ("left" below) has at
        least as many restricted vertices.  The right side's solution is
        always discarded; its vertices are re-paired across the cut or left
        in the pools.  The joint graph has no isolated vertices, so the
        output isolated pools are empty.  Consumes both inputs.
        """
        l, r = left, right
        if l[_NR] < r[_NR]:
            l, r = r, l
        rl = l[_NR]
        rr = r[_NR]
        spare0 = rl - 2 * l[_KC] - l[_SC]  # pre-combine, for the trace record
        right_free0 = r[_NV] - rr
        claimed = self.claimed

        # Witness and exemplars describe the graph, not the matching; compute
        # the merged values from the pre-combine slots now, install at the end.
        wr, wf = l[_WR], l[_WF]
        if l[_XR] >= 0 and r[_XF] >= 0:
            wr, wf = l[_XR], r[_XF]
        elif r[_XR] >= 0 and l[_XF] >= 0:
            wr, wf = r[_XR], l[_XF]
        elif wr < 0:
            wr, wf = r[_WR], r[_WF]
        xr = l[_XR] if r[_XR] < 0 or (0 <= l[_XR] < r[_XR]) else r[_XR]
        xf = l[_XF] if r[_XF] < 0 or (0 <= l[_XF] < r[_XF]) else r[_XF]

        if rl == rr == 0:
            # No restricted vertices at all: a single cross pair dominates
            # everything, and one pair is the least any solution can use.
            vl = l[_XF]
            vr = r[_XF]
            claimed[vl] += 1
            claimed[vr] += 1
            if l[_KC] or l[_SC] or l[_FC]:
                self._spill(l)
            if r[_KC] or r[_SC] or r[_FC]:
                self._spill(r)
            self._add_free(l, vl, vr)
            case = "free-cross"
        elif rl == rr:
            # Equal restricted counts: discard both solutions and pair the
            # restricted sets straight across; every pair is full, nothing
            # else is needed for domination.
            if l[_KC] or l[_SC] or l[_FC]:
                self._spill(l)
            if r[_KC] or r[_SC] or r[_FC]:
                self._spill(r)
            self._cross_fulls(l, r, rl)
            case = "balanced-cross"
        else:
            kl = l[_KC]
            sl = l[_SC]
            fl = l[_FC]
            spare = rl - 2 * kl - sl  # unmatched restricted on the kept side
            res_r = rr
            free_r = r[_NV] - rr
            if spare < 0 or 2 * kl + sl + spare <= res_r:
                raise SolverInternalError(
                    f"joint guard: spare={spare} kl={kl} sl={sl} res_r={res_r}"
                )
            if r[_KC] or r[_SC] or r[_FC]:
                self._spill(r)
            if spare > 0 and spare >= res_r:
                # The spare pool covers every right restricted vertex (full
                # pairs) and as many right free vertices as it can reach
                # (semi pairs).  Whatever it cannot reach stays unmatched;
                # whatever it can reach makes the kept solution only better.
                semis = spare - res_r
                if semis >= free_r:
                    semis = free_r
                    case = "cover-right"  # right side fully matched
                elif semis > 0:
                    case = "cover-plus"  # all spares matched, free right left over
                else:
                    case = "exact-cross"  # spare == res_r, spare pool exactly used
                self._drop_free_pairs(l)
                self._cross_fulls(l, r, res_r)
                self._cross_semis(l, r, semis)
            elif spare == res_r:  # both zero: the right side is entirely free
                if sl:
                    # Re-pair one semi's restricted endpoint across the cut;
                    # the cross pair dominates both sides, the old free
                    # partner is released.
                    self._drop_free_pairs(l)
                    u, v = self._pop_semi(l)
                    self._push_free(l, v)
                    self._add_semi(l, u, self._pop_free(r))
                    case = "move-semi"
                elif fl == 0 and l[_IRC] == 0 and l[_IFC] == 0:
                    # The kept full pairs already dominate their own side,
                    # and any matched left vertex dominates the whole right.
                    case = "keep-full"
                elif free_r >= 2:
                    # Split one full pair across two right free vertices:
                    # same matched count, no free pair.
                    self._drop_free_pairs(l)
                    a, b = self._pop_full(l)
                    self._add_semi(l, a, self._pop_free(r))
                    self._add_semi(l, b, self._pop_free(r))
                    case = "split-full"
                elif l[_WR] >= 0:
                    # One right free vertex only, and the left side has a
                    # restricted-free edge: split the witness's full pair,
                    # sending its partner across and re-pairing the witness
                    # endpoint along its own edge.
                    self._drop_free_pairs(l)
                    w_res, w_free = l[_WR], l[_WF]
                    pid = self.pof[w_res]
                    if pid < 0 or (self.pu[pid] != w_res and self.pv[pid] != w_res):
                        raise SolverInternalError("witness endpoint is not matched")
                    partner = self.pv[pid] if self.pu[pid] == w_res else self.pu[pid]
                    self.pu[pid] = -1  # dead; chain walkers skip it
                    l[_KC] -= 1
                    claimed[w_free] += 1
                    self._add_semi(l, partner, self._pop_free(r))
                    self._add_semi(l, w_res, w_free)
                    case = "witness-split"
                else:
                    # Every restricted vertex's whole neighborhood is
                    # restricted; one free pair is unavoidable.
                    self._drop_free_pairs(l)
                    self._add_free(l, self._pop_free(l), self._pop_free(r))
                    case = "free-bridge"
            else:
                # Deficit: more restricted vertices on the right than the
                # spare pool can absorb.  Cross-pair the spares, then feed
                # the leftover right restricted vertices from the kept
                # solution: first semi pairs give up their free partners,
                # then full pairs are split two-at-a-time.
                deficit = res_r - spare
                if 2 * kl + sl <= deficit:
                    raise SolverInternalError(
                        f"deficit guard: kl={kl} sl={sl} deficit={deficit}"
                    )
                self._drop_free_pairs(l)
                # With an odd full-pair leftover the parity fix may need the
                # right side's witness edge; its restricted endpoint must be
                # reserved now, before the loops below drain the pool.
                b = deficit - sl  # right restricted beyond what semis absorb
                odd_witness = None
                if deficit > sl and b & 1 and l[_NV] - rl == 0 and r[_WR] >= 0:
                    odd_witness = (r[_WR], r[_WF])
                    claimed[r[_WR]] += 1
                    claimed[r[_WF]] += 1
                self._cross_fulls(l, r, spare)
                if deficit <= sl:
                    self._semis_to_fulls(l, r, deficit)
                    case = "deficit-semi"
                else:
                    self._semis_to_fulls(l, r, sl)
                    if b & 1:
                        # Odd leftover: one semi pair (or one sacrificed
                        # vertex) restores even parity.
                        if l[_NV] - rl > 0:
                            # A free vertex exists on the kept side.
                            self._add_semi(
                                l, self._pop_restricted(r), self._pop_free(l)
                            )
                            case = "deficit-odd-left-free"
                        elif odd_witness is not None:
                            # The right side has a restricted-free edge; its
                            # free endpoint is necessarily non-isolated.
                            self._add_semi(l, odd_witness[0], odd_witness[1])
                            case = "deficit-odd-witness"
                        elif free_r > 0:
                            # Only unattached right free vertices: split one
                            # kept full pair to reach one of them.
                            a, partner = self._pop_full(l)
                            self._add_full(l, partner, self._pop_restricted(r))
                            self._add_semi(l, a, self._pop_free(r))
                            case = "deficit-odd-split"
                        else:
                            # Everything is restricted and the order is odd:
                            # one right vertex stays unmatched (it is
                            # dominated by any matched left vertex).
                            if sl != 0 or fl != 0 or l[_NV] != rl:
                                raise SolverInternalError(
                                    "all-restricted guard violated"
                                )
                            case = "all-restricted-odd"
                        b -= 1  # parity restored (or one vertex left pooled)
                    else:
                        case = "deficit-full"
                    self._split_fulls(l, r, b // 2)

        # Common tail: absorb the remaining right pools, clear isolation,
        # install graph-level aggregates, record the context.
        nxt = self.nxt
        if r[_RH] >= 0:
            if l[_RH] < 0:
                l[_RH] = r[_RH]
            else:
                nxt[l[_RT]] = r[_RH]
            l[_RT] = r[_RT]
        if r[_UH] >= 0:
            if l[_UH] < 0:
                l[_UH] = r[_UH]
            else:
                nxt[l[_UT]] = r[_UH]
            l[_UT] = r[_UT]
        l[_IRH] = l[_IRT] = l[_IFH] = l[_IFT] = -1
        l[_IRC] = l[_IFC] = 0
        l[_NV] += r[_NV]
        l[_NR] = rl + rr
        l[_WR], l[_WF] = wr, wf
        l[_XR], l[_XF] = xr, xf
        l[_CASE] = case
        if l[_NR] > 0 and l[_FC] > (1 if case == "free-bridge" else 0):
            raise SolverInternalError(f"free-pair guard after {case}")
        self._last_joint = (spare0, rr, right_free0, case)
        return l

    # -- extraction and inspection ------------------------------------------

    def extract_solution(self, summ: NodeSummary) -> MPDSolution:
        """Flatten a summary into a solution; fails on isolated vertices."""
        if summ[_IRC] or summ[_IFC]:
            isolated = sorted(
                self._walk_iso(summ[_IRH]) + self._walk_iso(summ[_IFH])
            )
            raise NoSolutionError(
                "no solution: the graph has isolated vertices "
                + " ".join(str(v) for v in isolated),
                isolated=isolated,
            )
        pu, pv, pn = self.pu, self.pv, self.pn
        pairs: list[PairedEdge] = []
        counts = []
        for head, cls in (
            (summ[_KH], EdgeClass.FULL),
            (summ[_SH], EdgeClass.SEMI),
            (summ[_FH], EdgeClass.FREE),
        ):
            cnt = 0
            pid = head
            while pid >= 0:
                if pu[pid] >= 0:
                    pairs.append(PairedEdge(pu[pid], pv[pid], cls))
                    cnt += 1
                pid = pn[pid]
            counts.append(cnt)
        k, s, f = counts
        if (k, s, f) != (summ[_KC], summ[_SC], summ[_FC]):
            raise SolverInternalError(
                f"chain counts {(k, s, f)} disagree with "
                f"{(summ[_KC], summ[_SC], summ[_FC])}"
            )
        return MPDSolution(
            pairs=tuple(pairs),
            k=k,
            s=s,
            f=f,
            matched_number=2 * k + s,
            case_trace=summ[_CASE],
        )

    def _walk_iso(self, head: int) -> list[int]:
        out = []
        inx = self.inx
        v = head
        while v >= 0:
            out.append(v)
            v = inx[v]
        return out

    def _walk_pool(self, head: int) -> list[int]:
        # Claimed vertices were consumed out of turn; a vertex sits in at
        # most one pool position, so membership is simply claimed[v] == 0.
        out = []
        nxt, claimed = self.nxt, self.claimed
        v = head
        while v >= 0:
            if not claimed[v]:
                out.append(v)
            v = nxt[v]
        return out

    def _walk_pairs(self, head: int) -> list[tuple[int, int]]:
        out = []
        pu, pv, pn = self.pu, self.pv, self.pn
        pid = head
        while pid >= 0:
            if pu[pid] >= 0:
                out.append((pu[pid], pv[pid]))
            pid = pn[pid]
        return out

    def snapshot(self, summ: NodeSummary) -> SummaryView:
        """Non-destructive readable view of a summary record."""
        return SummaryView(
            vertex_count=summ[_NV],
            restricted_count=summ[_NR],
            k=summ[_KC],
            s=summ[_SC],
            f=summ[_FC],
            full_pairs=tuple(self._walk_pairs(summ[_KH])),
            semi_pairs=tuple(self._walk_pairs(summ[_SH])),
            free_pairs=tuple(self._walk_pairs(summ[_FH])),
            unmatched_restricted=tuple(self._walk_pool(summ[_RH])),
            unmatched_free=tuple(self._walk_pool(summ[_UH])),
            isolated_restricted=tuple(self._walk_iso(summ[_IRH])),
            isolated_free=tuple(self._walk_iso(summ[_IFH])),
            rf_witness=(summ[_WR], summ[_WF]) if summ[_WR] >= 0 else None,
            exemplar_restricted=summ[_XR] if summ[_XR] >= 0 else None,
            exemplar_free=summ[_XF] if summ[_XF] >= 0 else None,
            case=summ[_CASE],
        )

    def check_invariants(self, summ: NodeSummary) -> None:
        """Verify the counting identities of a summary (test support)."""
        view = self.snapshot(summ)
        k, s, f = view.k, view.s, view.f
        if (len(view.full_pairs), len(view.semi_pairs), len(view.free_pairs)) != (k, s, f):
            raise AssertionError("pair chain lengths disagree with counts")
        ur = len(view.unmatched_restricted)
        uf = len(view.unmatched_free)
        if view.restricted_count != 2 * k + s + ur:
            raise AssertionError("restricted count identity violated")
        if view.vertex_count != 2 * (k + s + f) + ur + uf:
            raise AssertionError("vertex count identity violated")
        if not set(view.isolated_restricted) <= set(view.unmatched_restricted):
            raise AssertionError("isolated restricted not within unmatched")
        if not set(view.isolated_free) <= set(view.unmatched_free):
            raise AssertionError("isolated free not within unmatched")
        for u, v in view.semi_pairs:
            if not (self.rflags[u] and not self.rflags[v]):
                raise AssertionError("semi pair endpoint order violated")

    # -- driver ---------------------------------------------------------------

    def run(self, tree: Cotree) -> NodeSummary:
        """Postorder fold over the whole tree; returns the root summary."""
        if tree.leaf_count != self.n:
            raise ValueError(
                f"tree has {tree.leaf_count} leaves, context was built for {self.n}"
            )
        kind, aa = tree.kind, tree.a
        order = tree.postorder()
        # Leaves ride the value stack as bare vertex ids; a combine whose
        # operand is an int routes through the specialized tiny builders
        # (or materializes a real leaf record for the generic joint path).
        vals: list = []
        push = vals.append
        pop = vals.pop
        union = self.combine_union
        joint = self.combine_joint
        for i in order:
            knd = kind[i]
            if knd == LEAF:
                push(aa[i])
            elif knd == UNION:
                r = pop()
                l = vals[-1]
                if type(r) is int:
                    if type(l) is int:
                        vals[-1] = self._leaf2_union(l, r)
                    else:
                        vals[-1] = self._union_append_leaf(l, r)
                elif type(l) is int:
                    vals[-1] = self._union_prepend_leaf(l, r)
                else:
                    vals[-1] = union(l, r)
            else:
                r = pop()
                l = vals[-1]
                if type(r) is int:
                    if type(l) is int:
                        vals[-1] = self._leaf2_joint(l, r)
                        continue
                    r = self.leaf_summary(r)
                elif type(l) is int:
                    l = self.leaf_summary(l)
                vals[-1] = joint(l, r)
        root = vals[-1]
        if type(root) is int:
            root = self.leaf_summary(root)
        return root


def solve(tree: Cotree, restricted: RestrictedSet | Iterable[int]) -> MPDSolution:
    """Solve one instance: canonical solution of the tree's graph.

    The output matches as many restricted vertices as any solution can
    (its matched number) and, among such solutions, uses the fewest free
    pairs.  Deterministic: identical inputs give identical outputs.

    Raises :class:`NoSolutionError` when the graph has isolated vertices
    (in particular for a single-leaf tree).
    """
    ctx = SolveContext(tree.leaf_count, restricted)
    return ctx.extract_solution(ctx.run(tree))
