# -*- coding: utf-8 -*-

import math
import time
import logging
import numpy as np
from tqdm import tqdm
from dataclasses import dataclass, field
from joblib import Parallel, delayed

from lib.core.errors import ConstructionError
from lib.covers.certificates import CoverCandidate, cover_degree_profile

logger = logging.getLogger(__name__)

UNDECIDED, IN, OUT = 0, 1, 2
EXHAUSTIVE, BUDGETED = 'exhaustive', 'budgeted'


class _BudgetExhausted(Exception):
    pass


@dataclass
class SearchConfig:
    mode: str = 'auto'
    budget_nodes: int = 2000000
    budget_seconds: float = 0.
    seed: int = -1
    dedup_sigma: bool = False
    force_in: tuple = ()
    force_out: tuple = ()
    workers: int = 1

    @classmethod
    def from_cfg(cls, cfg, workers=1):
        return cls(
            mode=cfg.SEARCH.MODE,
            budget_nodes=int(cfg.SEARCH.BUDGET_NODES),
            budget_seconds=float(cfg.SEARCH.BUDGET_SECONDS),
            seed=int(cfg.SEARCH.SEED),
            dedup_sigma=bool(cfg.SEARCH.DEDUP_SIGMA),
            force_in=tuple(cfg.SEARCH.FORCE_IN),
            force_out=tuple(cfg.SEARCH.FORCE_OUT),
            workers=workers,
        )


def resolve_mode(mode, q, m):
    """'auto' is budgeted where the tree is known to be large."""
    if mode != 'auto':
        return mode
    if q >= 4 or (q == 3 and m == 2):
        return BUDGETED
    return EXHAUSTIVE


@dataclass
class SearchOutcome:
    mode: str
    m: int
    solutions: list
    nodes: int
    elapsed: float
    exhausted: bool
    tree_closed: bool
    branches: int = 1
    raw_solutions: int = 0
    seed: int = -1
    dedup_sigma: bool = False
    forced: dict = field(default_factory=dict)

    def to_record(self, bundle, timings=False):
        rec = {
            'record': 'search',
            'q': bundle.q,
            'm': self.m,
            'mode': self.mode,
            'nodes': self.nodes,
            'exhausted': self.exhausted,
            'tree_closed': self.tree_closed,
            'branches': self.branches,
            'seed': self.seed,
            'dedup_sigma': self.dedup_sigma,
            'forced': self.forced,
            'raw_solutions': self.raw_solutions,
            'solutions': [serialize_solution(bundle, R) for R in self.solutions],
        }
        if timings:
            rec['elapsed'] = round(self.elapsed, 4)
        return rec


def serialize_solution(bundle, R):
    lines = R.global_lines(bundle)
    return {
        'size': len(R),
        'lines': lines,
        'matrices': [bundle.line_mats[line].tolist() for line in lines],
    }


class CoverSearch(object):
    """
    Exact m-multicover search over the external lines. Each external point
    keeps its degree (lines IN) and its free count (lines UNDECIDED); a point
    at degree m forces its free lines OUT, a point whose free lines are all
    needed forces them IN.
    """
    def __init__(self, point_lines, line_points, m, priority=None, budget_nodes=0, deadline=0.):
        self.point_lines = [tuple(int(l) for l in ls) for ls in point_lines]
        self.line_points = [tuple(int(p) for p in ps) for ps in line_points]
        self.m = m
        self.n_points = len(self.point_lines)
        self.n_lines = len(self.line_points)
        self.priority = list(range(self.n_lines)) if priority is None else [int(v) for v in priority]
        self.budget_nodes = budget_nodes
        self.deadline = deadline

        self.deg = [0] * self.n_points
        self.free = [len(ls) for ls in self.point_lines]
        self.status = [UNDECIDED] * self.n_lines
        self.trail = []
        self.nodes = 0
        self.solutions = []

    def assign(self, line, value):
        """Set a line and propagate. False on conflict; changes stay on the trail either way."""
        m = self.m
        stack = [(line, value)]
        while stack:
            line, value = stack.pop()
            current = self.status[line]
            if current != UNDECIDED:
                if current != value:
                    return False
                continue
            self.status[line] = value
            self.trail.append(line)
            pts = self.line_points[line]
            for p in pts:
                self.free[p] -= 1
                if value == IN:
                    self.deg[p] += 1
            for p in pts:
                d, f = self.deg[p], self.free[p]
                if d > m or d + f < m:
                    return False
                if f and (d == m or d + f == m):
                    forced = OUT if d == m else IN
                    for other in self.point_lines[p]:
                        if self.status[other] == UNDECIDED:
                            stack.append((other, forced))
        return True

    def undo(self, mark):
        while len(self.trail) > mark:
            line = self.trail.pop()
            value = self.status[line]
            for p in self.line_points[line]:
                self.free[p] += 1
                if value == IN:
                    self.deg[p] -= 1
            self.status[line] = UNDECIDED

    def choose_point(self):
        """Point still needing lines with the fewest free lines, lowest index on ties."""
        best, best_free = -1, None
        m = self.m
        for p in range(self.n_points):
            if self.deg[p] < m:
                f = self.free[p]
                if best_free is None or f < best_free:
                    best, best_free = p, f
        return best

    def candidates(self, point):
        return sorted((l for l in self.point_lines[point] if self.status[l] == UNDECIDED),
                      key=lambda l: self.priority[l])

    def _tick(self):
        self.nodes += 1
        if self.budget_nodes and self.nodes > self.budget_nodes:
            raise _BudgetExhausted()
        if self.deadline and self.nodes % 1024 == 0 and time.time() > self.deadline:
            raise _BudgetExhausted()

    def _record(self):
        self.solutions.append(tuple(l for l in range(self.n_lines) if self.status[l] == IN))

    def dfs(self):
        self._tick()
        point = self.choose_point()
        if point < 0:
            self._record()
            return
        level = len(self.trail)
        for line in self.candidates(point):
            mark = len(self.trail)
            if self.assign(line, IN):
                self.dfs()
            self.undo(mark)
            if not self.assign(line, OUT):
                break
        self.undo(level)

    def run(self):
        """Returns True when the tree under the current state closed within budget."""
        try:
            self.dfs()
        except _BudgetExhausted:
            return False
        return True


def _run_branch(point_lines, line_points, m, priority, force_in, force_out, prefix_out, take,
                budget_nodes, deadline):
    search = CoverSearch(point_lines, line_points, m, priority=priority,
                         budget_nodes=budget_nodes, deadline=deadline)
    ok = all(search.assign(l, IN) for l in force_in) and all(search.assign(l, OUT) for l in force_out)
    ok = ok and all(search.assign(l, OUT) for l in prefix_out)
    if ok and take is not None:
        ok = search.assign(take, IN)
    if not ok:
        return [], search.nodes, True
    closed = search.run()
    return search.solutions, search.nodes, closed


def _local_lines(bundle, lines):
    local = []
    for line in lines:
        if not bundle.is_external(int(line)):
            raise ValueError(f'forced line {line} is not an external line')
        local.append(int(bundle.ext_position[int(line)]))
    return tuple(local)


def sigma_orbit_key(R, sigma, q, m):
    """Smallest encoding among R, sigma(R) and, when 2m = q, their complements."""
    orbit = [R, R.image(sigma)]
    if 2 * m == q:
        orbit += [c.complement() for c in orbit]
    return min(c.members for c in orbit)


def search_covers(bundle, m, config=None):
    config = config or SearchConfig()
    q, n = bundle.q, bundle.n_ext
    if not 0 < m < q:
        raise ValueError(f'need 0 < m < q, got m={m} at q={q}')
    mode = resolve_mode(config.mode, q, m)
    if mode not in (EXHAUSTIVE, BUDGETED):
        raise ValueError(f'unknown search mode {config.mode!r}')

    force_in = _local_lines(bundle, config.force_in)
    force_out = _local_lines(bundle, config.force_out)

    X = bundle.ext_incidence
    point_lines = [np.flatnonzero(row) for row in X]
    line_points = [np.flatnonzero(col) for col in X.T]

    if config.seed >= 0:
        order = np.random.default_rng(config.seed).permutation(n)
        priority = np.empty(n, dtype=np.int64)
        priority[order] = np.arange(n)
    else:
        priority = np.arange(n)

    start = time.time()
    budget_nodes = config.budget_nodes if mode == BUDGETED else 0
    deadline = start + config.budget_seconds if (mode == BUDGETED and config.budget_seconds) else 0.

    # split on the root branching point
    root = CoverSearch(point_lines, line_points, m, priority=priority)
    ok = all(root.assign(l, IN) for l in force_in) and all(root.assign(l, OUT) for l in force_out)
    branches = []
    if ok:
        point = root.choose_point()
        if point < 0:
            branches = [((), None)]
        else:
            cands = root.candidates(point)
            branches = [(tuple(cands[:i]), c) for i, c in enumerate(cands)]
    per_branch = math.ceil(budget_nodes / len(branches)) if (budget_nodes and branches) else 0

    logger.info(f'Searching relative {m}-covers at q={q}: {mode}, {len(branches)} root branches, '
                f'{config.workers} workers')
    results = Parallel(n_jobs=config.workers)(
        delayed(_run_branch)(point_lines, line_points, m, priority, force_in, force_out,
                             prefix, take, per_branch, deadline)
        for prefix, take in tqdm(branches, desc=f'q={q} m={m} branches', leave=False)
    )

    raw = sorted({sol for sols, _, _ in results for sol in sols})
    nodes = sum(r[1] for r in results)
    tree_closed = all(r[2] for r in results)

    candidates = [CoverCandidate.from_lines(n, sol) for sol in raw]
    for R in candidates:
        profile = cover_degree_profile(bundle, R)
        if profile.m != m:
            raise ConstructionError(f'search returned a line set with degree profile {profile.m}, expected {m}')

    if config.dedup_sigma:
        keyed = {}
        for R in candidates:
            keyed.setdefault(sigma_orbit_key(R, bundle.ext_sigma, q, m), R)
        candidates = [CoverCandidate.from_lines(n, key) for key in sorted(keyed)]

    elapsed = time.time() - start
    outcome = SearchOutcome(
        mode=mode, m=m, solutions=candidates, nodes=nodes, elapsed=elapsed,
        exhausted=(mode == EXHAUSTIVE and tree_closed), tree_closed=tree_closed,
        branches=len(branches), raw_solutions=len(raw), seed=config.seed, dedup_sigma=config.dedup_sigma,
        forced={'in': list(config.force_in), 'out': list(config.force_out)},
    )
    logger.info(f'q={q} m={m}: {len(raw)} solutions ({len(candidates)} reported), {nodes} nodes, '
                f'exhausted={outcome.exhausted}, {elapsed:.2f}s')
    return outcome
