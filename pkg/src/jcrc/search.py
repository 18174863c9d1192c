"""Exhaustive search for completely regular codes with a prescribed intersection matrix.

Every vertex of J(n, w) gets a cell label 0..rho, one vertex at a time in colex
order.  Running neighbour counts bound each vertex's counts toward every cell
by the target matrix.  Exhausted cells and forced labels propagate through
the graph.  A labelling whose counts all match the matrix is exactly the
distance partition of its cell 0, because gamma_i > 0 and entries off the
band are zero.

Isomorph rejection keeps only labellings that are lexicographically minimal
under S_n acting on the ground set.  Each time all w-subsets of {1..j} are
labelled, a minimal-image test over permutations of {1..j} prunes the branch
if a smaller image exists.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

from .analysis import Code, check_crc, distance_partition
from .errors import BudgetExhausted, ParameterError
from .feasibility import ArrayTarget
from .johnson import JohnsonParams, elements, fmt, johnson_graph

log = logging.getLogger(__name__)

CHECKPOINT_VERSION = 1
PROGRESS_EVERY = 10**7


@dataclass(frozen=True)
class SearchOptions:
    isomorph_rejection: bool = True
    fix_first_vertex: bool = True
    workers: int = 1
    budget: int = 10**9
    split_depth: int = 0  # branching decisions fixed per subtree task; 0 picks a default
    checkpoint: str | None = None

    def __post_init__(self):
        if self.budget <= 0:
            raise ParameterError("budget must be positive")
        if self.workers < 1:
            raise ParameterError("workers must be at least 1")
        if self.split_depth < 0:
            raise ParameterError("split_depth must be nonnegative")


@dataclass
class SearchStats:
    nodes: int = 0
    leaves: int = 0
    iso_pruned: int = 0
    tasks: int = 0
    tasks_done: int = 0
    labelled_solutions: int = 0

    def merge(self, other: SearchStats):
        self.nodes += other.nodes
        self.leaves += other.leaves
        self.iso_pruned += other.iso_pruned
        self.labelled_solutions += other.labelled_solutions


@dataclass
class SearchResult:
    codes: list[Code]
    stats: SearchStats
    target: ArrayTarget
    options: SearchOptions
    orbit_counts: dict = field(default_factory=dict)  # canonical labels -> labelled hits


class _Budget(Exception):
    pass


# --- minimal image -----------------------------------------------------------


class _ImageTables:
    """Per-m lists of w-subsets of {1..m} containing m, in colex order."""

    def __init__(self, n: int, w: int):
        self.n, self.w = n, w
        g = johnson_graph(n, w)
        self.index = g.index
        self.blocks = []
        for m in range(n + 1):
            if m < w:
                self.blocks.append([])
                continue
            cs = [c + (m,) for c in combinations(range(1, m), w - 1)]
            cs.sort(key=lambda c: sum(1 << (e - 1) for e in c))
            self.blocks.append([tuple(e - 1 for e in c) for c in cs])
        self.positions = [[self.index[sum(1 << e for e in c)] for c in blk] for blk in self.blocks]


def _image_search(labels, tables: _ImageTables, j: int, want_smaller: bool):
    """Explore images of the labelling restricted to {1..j} under permutations of {1..j}.

    With ``want_smaller`` return True as soon as an image is lexicographically
    smaller than the labelling itself.  Otherwise return the lex-minimal image
    as a list of per-m blocks.
    """
    index = tables.index
    tau = [0] * j  # tau[i] = preimage (0-based element) of image element i
    used = [False] * j
    bits = [0] * j
    if want_smaller:
        ref = [[labels[p] for p in pos] for pos in tables.positions[: j + 1]]
    best: list = []

    def block(m):
        # labels of tau(y) for the w-subsets y with max m
        out = []
        for c in tables.blocks[m]:
            mask = 0
            for e in c:
                mask |= bits[e]
            out.append(labels[index[mask]])
        return out

    def rec(m):
        # m elements of the image fixed; choose the preimage of element m+1
        if m == j:
            return False if want_smaller else None
        for e in range(j):
            if used[e]:
                continue
            used[e] = True
            tau[m] = e
            bits[m] = 1 << e
            blk = block(m + 1)
            if want_smaller:
                r = ref[m + 1]
                if blk < r:
                    used[e] = False
                    return True
                if blk == r and rec(m + 1):
                    used[e] = False
                    return True
            else:
                if len(best) <= m or blk < best[m]:
                    del best[m:]
                    best.append(blk)
                    rec(m + 1)
                elif blk == best[m]:
                    rec(m + 1)
            used[e] = False
        return False if want_smaller else None

    if want_smaller:
        return rec(0)
    rec(0)
    return best


def canonical_labels(code: Code) -> tuple[int, ...]:
    """Lex-minimal distance-partition label vector over the S_n-orbit of the code."""
    labels = distance_partition(code).labels
    tables = _ImageTables(code.n, code.w)
    best = _image_search(labels, tables, code.n, want_smaller=False)
    return tuple(x for blk in best for x in blk)


def canonical_form(code: Code) -> Code:
    """Orbit representative: cell 0 of the lex-minimal labelling."""
    labels = canonical_labels(code)
    verts = code.params.graph().vertices
    return Code(code.params, tuple(verts[i] for i, lab in enumerate(labels) if lab == 0))


def is_isomorphic(a: Code, b: Code) -> bool:
    return a.params == b.params and canonical_labels(a) == canonical_labels(b)


# --- the labelling search ----------------------------------------------------


def _transversal_vectors(n: int, w: int, j: int, index):
    """Signed spanning vectors of the theta_j eigenspace of J(n, w).

    For j disjoint pairs {a_i, b_i}, the vector is sign(x) on every w-subset x
    holding exactly one element of each pair, where sign(x) = (-1)^(number of
    b_i in x); all other entries vanish.
    """
    out = []
    for support in combinations(range(1, n + 1), 2 * j):
        rest = [e for e in range(1, n + 1) if e not in support]
        for pairs in _pairings(list(support)):
            vec = []
            for pick in range(1 << j):
                core = 0
                sign = 1
                for i, (a, b) in enumerate(pairs):
                    if pick >> i & 1:
                        core |= 1 << (b - 1)
                        sign = -sign
                    else:
                        core |= 1 << (a - 1)
                for extra in combinations(rest, w - j):
                    mask = core
                    for e in extra:
                        mask |= 1 << (e - 1)
                    vec.append((index[mask], sign))
            out.append(vec)
    return out


def _pairings(items):
    if not items:
        yield []
        return
    a = items[0]
    for i in range(1, len(items)):
        rest = items[1:i] + items[i + 1:]
        for p in _pairings(rest):
            yield [(a, items[i])] + p


def _eigenspace_constraints(n, w, spectrum, index, have_point_caps):
    """Orthogonality of every cell to the eigenspaces missing from the spectrum."""
    cons = []
    for j in range(1, w + 1):
        if j in spectrum or (j == 1 and have_point_caps):
            continue
        cons.extend(_transversal_vectors(n, w, j, index))
    vcons = [[] for _ in range(comb(n, w))]
    for cid, vec in enumerate(cons):
        for v, sign in vec:
            vcons[v].append((cid, sign))
    return cons, vcons


class _Problem:
    """Read-only description shared by every subtree task."""

    def __init__(self, target: ArrayTarget, opts: SearchOptions):
        n, w = target.n, target.w
        self.n, self.w = n, w
        self.params = JohnsonParams(n, w)
        g = johnson_graph(n, w)
        self.order = len(g)
        self.adj = g.adjacency
        self.rho = target.rho
        self.R = target.rho + 1
        m = target.matrix
        self.M = [[m.entry(i, c) for c in range(self.R)] for i in range(self.R)]
        self.sizes = list(target.sizes)
        self.full = (1 << self.R) - 1
        # allowed[c][x]: labels l with M[l][c] >= x
        self.allowed = [
            [sum(1 << l for l in range(self.R) if self.M[l][c] >= x) for x in range(m.k + 1)]
            for c in range(self.R)
        ]
        self.points = [[e - 1 for e in elements(v)] for v in g.vertices]
        self.lam = None
        if 1 not in target.spectrum:
            # cells are then 1-designs: every point lies in w|C_c|/n blocks of C_c
            lam = [Fraction(w * s, n) for s in self.sizes]
            self.lam = [int(x) if x.denominator == 1 else -1 for x in lam]
        self.cons, self.vcons = _eigenspace_constraints(n, w, target.spectrum, g.index, self.lam is not None)
        self.iso = opts.isomorph_rejection
        self.fix = opts.fix_first_vertex
        self.tables = _ImageTables(n, w) if self.iso else None
        # prefix_j[p]: largest j with C(j, w) <= p
        self.prefix_j = [0] * (self.order + 1)
        j = w
        for p in range(self.order + 1):
            while j + 1 <= n and comb(j + 1, w) <= p:
                j += 1
            self.prefix_j[p] = j if comb(j, w) <= p else 0


class _State:
    def __init__(self, pb: _Problem):
        self.pb = pb
        R = pb.R
        self.lab = [-1] * pb.order
        self.dom = [pb.full] * pb.order
        self.cnt = [0] * (pb.order * R)
        self.cell = [0] * R
        self.pc = [0] * (pb.n * R)
        self.trail = []
        self.next_free = 0
        # per constraint: signed sum of labelled vertices in each cell but the
        # last, and counts of unlabelled +1 and -1 entries
        self.csum = [0] * (len(pb.cons) * R)
        self.cpos = [sum(1 for _, sg in vec if sg > 0) for vec in pb.cons]
        self.cneg = [len(vec) - p for vec, p in zip(pb.cons, self.cpos)]

    def mark(self):
        return len(self.trail)

    def undo(self, mark):
        t = self.trail
        while len(t) > mark:
            arr, i, old = t.pop()
            arr[i] = old

    def _set(self, arr, i, val):
        self.trail.append((arr, i, arr[i]))
        arr[i] = val

    def assign(self, v: int, l: int) -> bool:
        """Label v with l and propagate; False on contradiction (caller undoes)."""
        pb = self.pb
        R = pb.R
        M = pb.M
        allowed = pb.allowed
        lab, dom, cnt = self.lab, self.dom, self.cnt
        queue = [(v, l)]
        while queue:
            v, l = queue.pop()
            if lab[v] >= 0:
                if lab[v] != l:
                    return False
                continue
            if not dom[v] >> l & 1:
                return False
            if self.cell[l] >= pb.sizes[l]:
                return False
            if pb.lam is not None:
                lam = pb.lam[l]
                for p in pb.points[v]:
                    if self.pc[p * R + l] >= lam:
                        return False
                for p in pb.points[v]:
                    self._set(self.pc, p * R + l, self.pc[p * R + l] + 1)
            self._set(lab, v, l)
            self._set(dom, v, 1 << l)
            self._set(self.cell, l, self.cell[l] + 1)
            row = M[l]
            base = v * R
            for c in range(R):
                if cnt[base + c] > row[c]:
                    return False
            if pb.vcons[v] and not self._linear(v, l, queue):
                return False
            # saturated or single-deficit rows of v itself
            if not self._tighten(v, queue):
                return False
            for u in pb.adj[v]:
                k = u * R + l
                x = cnt[k] + 1
                self._set(cnt, k, x)
                lu = lab[u]
                if lu >= 0:
                    if x > M[lu][l]:
                        return False
                    if x == M[lu][l] and not self._tighten(u, queue):
                        return False
                else:
                    d = dom[u] & allowed[l][x]
                    if d != dom[u]:
                        if not d:
                            return False
                        self._set(dom, u, d)
                        if d & (d - 1) == 0:
                            queue.append((u, d.bit_length() - 1))
        return True

    def _linear(self, v: int, l: int, queue) -> bool:
        """Update the eigenspace constraints through v; force or fail when one is tight."""
        pb = self.pb
        R = pb.R
        last = R - 1
        csum, cpos, cneg = self.csum, self.cpos, self.cneg
        for cid, sign in pb.vcons[v]:
            if sign > 0:
                self._set(cpos, cid, cpos[cid] - 1)
            else:
                self._set(cneg, cid, cneg[cid] - 1)
            if l < last:
                k = cid * R + l
                self._set(csum, k, csum[k] + sign)
            P, N = cpos[cid], cneg[cid]
            for c in range(last):
                S = csum[cid * R + c]
                hi, lo = S + P, S - N
                if hi < 0 or lo > 0:
                    return False
                if (hi == 0 or lo == 0) and P + N:
                    # hi == 0: every free +1 entry joins c and no -1 entry does
                    plus_in = hi == 0
                    bit = 1 << c
                    lab, dom = self.lab, self.dom
                    for x, sg in pb.cons[cid]:
                        if lab[x] >= 0:
                            continue
                        d = dom[x] & bit if (sg > 0) == plus_in else dom[x] & ~bit
                        if d != dom[x]:
                            if not d:
                                return False
                            self._set(dom, x, d)
                            if d & (d - 1) == 0:
                                queue.append((x, d.bit_length() - 1))
        return True

    def _tighten(self, u: int, queue) -> bool:
        """Restrict the unlabelled neighbours of labelled u to its deficit cells."""
        pb = self.pb
        R = pb.R
        row = pb.M[self.lab[u]]
        base = u * R
        mask = 0
        for c in range(R):
            if self.cnt[base + c] < row[c]:
                mask |= 1 << c
        lab, dom = self.lab, self.dom
        for x in pb.adj[u]:
            if lab[x] < 0:
                d = dom[x] & mask
                if d != dom[x]:
                    if not d:
                        return False
                    self._set(dom, x, d)
                    if d & (d - 1) == 0:
                        queue.append((x, d.bit_length() - 1))
        return True

    def first_free(self) -> int:
        i = self.next_free
        lab = self.lab
        while i < len(lab) and lab[i] >= 0:
            i += 1
        return i


class _Walker:
    """Depth-first search over one subtree, counting nodes against a budget."""

    def __init__(self, pb: _Problem, budget: int, shared=None):
        self.pb = pb
        self.st = _State(pb)
        self.stats = SearchStats()
        self.budget = budget
        self.shared = shared  # multiprocessing.Value or None
        self.pending = 0
        self.solutions: list[tuple[int, ...]] = []
        self.frontier: list[tuple] | None = None
        self.next_progress = PROGRESS_EVERY

    def _tick(self):
        self.stats.nodes += 1
        if self.stats.nodes >= self.next_progress:
            self.next_progress += PROGRESS_EVERY
            log.info("search: %d nodes, %d solutions", self.stats.nodes, len(self.solutions))
        if self.shared is None:
            if self.stats.nodes > self.budget:
                raise _Budget
            return
        self.pending += 1
        if self.pending >= 4096:
            with self.shared.get_lock():
                self.shared.value += self.pending
                total = self.shared.value
            self.pending = 0
            if total > self.budget:
                raise _Budget

    def flush(self):
        if self.shared is not None and self.pending:
            with self.shared.get_lock():
                self.shared.value += self.pending
            self.pending = 0

    def root(self) -> bool:
        st = self.st
        if self.pb.fix:
            return st.assign(0, 0)
        return True

    def replay(self, path) -> bool:
        if not self.root():
            return False
        for v, l in path:
            if not self.st.assign(v, l):
                return False
        return True

    def _iso_ok(self, checked_j: int) -> tuple[bool, int]:
        pb = self.pb
        if not pb.iso:
            return True, checked_j
        j = pb.prefix_j[self.st.first_free()]
        if j <= checked_j or j <= pb.w:
            return True, checked_j
        if _image_search(self.st.lab, pb.tables, j, want_smaller=True):
            self.stats.iso_pruned += 1
            return False, checked_j
        return True, j

    def dfs(self, path, checked_j: int, split_at: int | None):
        self._tick()
        ok, checked_j = self._iso_ok(checked_j)
        if not ok:
            return
        st = self.st
        v = st.first_free()
        if v == self.pb.order:
            self.stats.leaves += 1
            self.solutions.append(tuple(st.lab))
            return
        if split_at is not None and len(path) >= split_at:
            self.frontier.append(tuple(path))
            return
        saved = st.next_free
        st.next_free = v
        d = st.dom[v]
        for l in range(self.pb.R):
            if not d >> l & 1:
                continue
            mark = st.mark()
            if st.assign(v, l):
                path.append((v, l))
                self.dfs(path, checked_j, split_at)
                path.pop()
            st.undo(mark)
        st.next_free = saved

    def run(self, path=(), split_at=None):
        if not self.replay(path):
            return
        self.dfs(list(path), 0, split_at)


def _verify_labels(pb: _Problem, target: ArrayTarget, labels) -> Code:
    verts = johnson_graph(pb.n, pb.w).vertices
    code = Code(pb.params, tuple(verts[i] for i, lab in enumerate(labels) if lab == 0))
    rep = check_crc(code)
    if not rep.is_crc or rep.matrix != target.matrix or tuple(rep.partition.labels) != tuple(labels):
        raise AssertionError(f"search produced a labelling that fails verification: {code}")
    return code


# --- task splitting, workers and checkpoints ---------------------------------

_WORKER = {}


def _init_worker(target, opts, shared):
    _WORKER["pb"] = _Problem(target, opts)
    _WORKER["budget"] = opts.budget
    _WORKER["shared"] = shared


def _run_task(path):
    w = _Walker(_WORKER["pb"], _WORKER["budget"], _WORKER["shared"])
    exhausted = False
    try:
        w.run(path)
    except _Budget:
        exhausted = True
    w.flush()
    return path, w.solutions, w.stats, exhausted


def _split(pb: _Problem, depth: int, budget: int):
    w = _Walker(pb, budget)
    w.frontier = []
    w.run((), split_at=depth)
    return w.frontier, w.solutions, w.stats


def _path_str(path) -> str:
    return " ".join(f"{v}:{l}" for v, l in path) or "-"


def _parse_path(s: str):
    if s == "-":
        return ()
    return tuple(tuple(int(x) for x in item.split(":")) for item in s.split())


def _header(target: ArrayTarget, opts: SearchOptions, depth: int) -> list[str]:
    return [
        f"jcrc-search-checkpoint {CHECKPOINT_VERSION}",
        f"graph {target.n} {target.w}",
        f"array {target.matrix.array_str()}",
        f"options iso={int(opts.isomorph_rejection)} fix={int(opts.fix_first_vertex)} split={depth}",
    ]


def _write_checkpoint(fname, header, tasks, done, sols, nodes):
    tmp = fname + ".tmp"
    with open(tmp, "w") as fh:
        for line in header:
            fh.write(line + "\n")
        fh.write(f"nodes {nodes}\n")
        for i, p in enumerate(tasks):
            fh.write(f"task {i} {'done' if i in done else 'todo'} {_path_str(p)}\n")
        for labels in sols:
            fh.write("solution " + "".join(map(str, labels)) + "\n")
    os.replace(tmp, fname)


def _read_checkpoint(fname, header):
    with open(fname) as fh:
        lines = fh.read().splitlines()
    if lines[: len(header)] != header:
        raise ParameterError(f"checkpoint {fname} was written for a different search")
    tasks, done, sols, nodes = [], set(), [], 0
    for line in lines[len(header):]:
        kind, _, rest = line.partition(" ")
        if kind == "nodes":
            nodes = int(rest)
        elif kind == "task":
            i, state, p = rest.split(" ", 2)
            tasks.append(_parse_path(p))
            if state == "done":
                done.add(int(i))
        elif kind == "solution":
            sols.append(tuple(int(ch) for ch in rest))
        else:
            raise ParameterError(f"checkpoint {fname}: unknown record {kind!r}")
    return tasks, done, sols, nodes


def search_crc(params: JohnsonParams, target: ArrayTarget, opts: SearchOptions | None = None) -> SearchResult:
    """All codes in J(n, w) with the target intersection matrix.

    With isomorph rejection one representative per S_n-orbit is returned, and
    ``orbit_counts`` maps each representative's canonical labels to the number
    of labelled solutions that reached it.  Codes come back sorted by their
    canonical label vectors, independent of the number of workers.
    """
    opts = opts or SearchOptions()
    if (target.n, target.w) != (params.n, params.w):
        raise ParameterError(f"target is for J({target.n},{target.w}), not {params}")
    pb = _Problem(target, opts)
    stats = SearchStats()
    if pb.lam is not None and -1 in pb.lam:
        return SearchResult([], stats, target, opts)

    depth = opts.split_depth or (4 if opts.workers > 1 or opts.checkpoint else 0)
    header = _header(target, opts, depth)
    sols: list[tuple[int, ...]] = []
    if opts.checkpoint and os.path.exists(opts.checkpoint):
        tasks, done, sols, stats.nodes = _read_checkpoint(opts.checkpoint, header)
    else:
        if depth:
            try:
                tasks, early, st = _split(pb, depth, opts.budget)
            except _Budget:
                raise BudgetExhausted("budget exhausted while splitting", stats, [])
            stats.merge(st)
            sols.extend(early)
        else:
            tasks = [()]
        done = set()
    stats.tasks = len(tasks)

    def save():
        if opts.checkpoint:
            _write_checkpoint(opts.checkpoint, header, tasks, done, sols, stats.nodes)

    save()
    todo = [i for i in range(len(tasks)) if i not in done]
    exhausted = False
    if opts.workers == 1:
        for i in todo:
            w = _Walker(pb, opts.budget - stats.nodes)
            try:
                w.run(tasks[i])
            except _Budget:
                exhausted = True
            stats.merge(w.stats)
            if exhausted:
                break
            sols.extend(w.solutions)
            done.add(i)
            save()
    else:
        import multiprocessing

        shared = multiprocessing.Value("q", stats.nodes)
        with ProcessPoolExecutor(
            opts.workers, initializer=_init_worker, initargs=(target, opts, shared)
        ) as ex:
            futs = {ex.submit(_run_task, tasks[i]): i for i in todo}
            for fut in futs:
                i = futs[fut]
                _, found, st, ex_hit = fut.result()
                stats.merge(st)
                if ex_hit:
                    exhausted = True
                    continue
                sols.extend(found)
                done.add(i)
                save()
    stats.tasks_done = len(done)

    codes, counts = _collect(pb, target, sols, opts.isomorph_rejection)
    stats.labelled_solutions = len(set(sols))
    if exhausted:
        raise BudgetExhausted(
            f"node budget {opts.budget} exhausted after {stats.tasks_done}/{stats.tasks} subtrees",
            stats,
            codes,
        )
    return SearchResult(codes, stats, target, opts, counts)


def _collect(pb, target, sols, iso):
    uniq = sorted(set(sols))
    if not iso:
        return [_verify_labels(pb, target, s) for s in uniq], {}
    counts: dict[tuple, int] = {}
    reps: dict[tuple, Code] = {}
    for s in uniq:
        code = _verify_labels(pb, target, s)
        key = canonical_labels(code)
        counts[key] = counts.get(key, 0) + 1
        if key not in reps:
            reps[key] = canonical_form(code)
    keys = sorted(reps)
    return [reps[k] for k in keys], {k: counts[k] for k in keys}


# --- refutation reports ------------------------------------------------------


@dataclass(frozen=True)
class Refutation:
    code: Code
    is_crc: bool
    cell: int | None = None
    toward: int | None = None  # the cell whose neighbour counts disagree
    vertex: int | None = None
    reference: int | None = None
    count: int | None = None
    expected: int | None = None

    def __str__(self):
        if self.is_crc:
            return "no refutation: the code is completely regular"
        return (
            f"{fmt(self.vertex)} and {fmt(self.reference)} lie in C_{self.cell} but have "
            f"{self.count} and {self.expected} neighbours in C_{self.toward}"
        )


def refute_candidate(code: Code) -> Refutation:
    """Two vertices of one cell with different neighbour counts toward some cell."""
    rep = check_crc(code)
    if rep.is_crc:
        return Refutation(code, True)
    wt = rep.witness
    return Refutation(
        code, False, wt.cell, wt.cell + wt.direction, wt.vertex, wt.reference, wt.count, wt.expected
    )
