//! Exact-cover search over triple systems.
//!
//! A parallel class is an exact cover of the point set by disjoint triples,
//! so the search is phrased as the classic exact-cover problem and solved
//! with dancing links. Branching is deterministic: always the column with
//! the fewest remaining rows, ties broken by lowest column index, rows tried
//! in their stored order. Node counts are therefore reproducible run to run
//! in sequential mode.
//!
//! Time budgets are enforced by polling the clock every few thousand
//! explored nodes; a search cut short by the budget is always reported as
//! [`SearchStatus::Timeout`], never as a negative answer.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::construct::TripleSystem;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error("row {row} must hold three distinct columns below {columns}, got {cols:?}")]
    BadRow {
        row: usize,
        columns: u32,
        cols: [u32; 3],
    },
    #[error("time budget must be positive")]
    ZeroTimeBudget,
    #[error("no parallel class can exist on {v} points ({v} mod 6 = {rem}, need 3)")]
    ParallelClassUndefined { v: u32, rem: u32 },
}

/// An exact-cover instance whose rows each hold exactly three columns.
/// Row ids are positions in the row list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverInstance {
    columns: u32,
    rows: Vec<[u32; 3]>,
}

impl CoverInstance {
    pub fn new(columns: u32, rows: Vec<[u32; 3]>) -> Result<Self, CoverError> {
        for (i, row) in rows.iter().enumerate() {
            let mut sorted = *row;
            sorted.sort_unstable();
            if !(sorted[0] < sorted[1] && sorted[1] < sorted[2] && sorted[2] < columns) {
                return Err(CoverError::BadRow {
                    row: i,
                    columns,
                    cols: *row,
                });
            }
        }
        Ok(CoverInstance { columns, rows })
    }

    pub fn columns(&self) -> u32 {
        self.columns
    }

    pub fn rows(&self) -> &[[u32; 3]] {
        &self.rows
    }
}

/// The parallel-class instance of a system: one column per point, one row
/// per triple, row ids equal to triple indices.
pub fn build_cover_instance(sys: &TripleSystem) -> CoverInstance {
    CoverInstance::new(sys.v(), sys.triples().to_vec())
        .expect("system triples are strictly ascending below v")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Stop at the first solution.
    FindOne,
    /// Exhaust the space and count every solution.
    CountAll,
    /// Establish that no solution exists; stops early if one turns up.
    ProveNone,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStatus {
    /// A solution was found (fatal to a [`SearchMode::ProveNone`] run).
    Found,
    /// The space is exhausted and holds no solution.
    NoSolution,
    /// The space is exhausted; see `count` for the number of solutions.
    Exhausted,
    /// The time budget ran out before the question was settled.
    Timeout,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub mode: SearchMode,
    pub status: SearchStatus,
    /// Row ids of a solution, present exactly when `status` is `Found`.
    /// Deterministic in sequential mode; parallel mode may surface a
    /// different solution.
    pub witness: Option<Vec<u32>>,
    /// Complete solution count, present exactly when a `CountAll` run
    /// exhausted the space.
    pub count: Option<u64>,
    pub nodes_explored: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOptions {
    pub mode: SearchMode,
    /// Wall-clock budget; `None` means unbounded. Zero is rejected.
    pub time_budget: Option<Duration>,
    /// Split the search across first-level branches with rayon. Answers and
    /// counts match sequential mode; node totals and witnesses may not.
    pub parallel: bool,
}

impl SolveOptions {
    pub fn sequential(mode: SearchMode) -> Self {
        SolveOptions {
            mode,
            time_budget: None,
            parallel: false,
        }
    }
}

pub fn solve(
    inst: &CoverInstance,
    mode: SearchMode,
    time_budget: Option<Duration>,
) -> Result<SearchOutcome, CoverError> {
    solve_with(
        inst,
        &SolveOptions {
            mode,
            time_budget,
            parallel: false,
        },
    )
}

pub fn solve_with(inst: &CoverInstance, opts: &SolveOptions) -> Result<SearchOutcome, CoverError> {
    if opts.time_budget == Some(Duration::ZERO) {
        return Err(CoverError::ZeroTimeBudget);
    }
    let start = Instant::now();
    let deadline = opts.time_budget.map(|b| start + b);
    let outcome = if opts.parallel {
        solve_parallel(inst, opts.mode, deadline, start)
    } else {
        solve_sequential(inst, opts.mode, deadline, start)
    };
    Ok(outcome)
}

/// Searches a system for a parallel class. Only orders with `v = 3 (mod 6)`
/// can have one; other orders are rejected outright.
pub fn find_parallel_class(
    sys: &TripleSystem,
    mode: SearchMode,
    time_budget: Option<Duration>,
) -> Result<SearchOutcome, CoverError> {
    find_parallel_class_with(
        sys,
        &SolveOptions {
            mode,
            time_budget,
            parallel: false,
        },
    )
}

pub fn find_parallel_class_with(
    sys: &TripleSystem,
    opts: &SolveOptions,
) -> Result<SearchOutcome, CoverError> {
    if sys.v() % 6 != 3 {
        return Err(CoverError::ParallelClassUndefined {
            v: sys.v(),
            rem: sys.v() % 6,
        });
    }
    solve_with(&build_cover_instance(sys), opts)
}

/// Node store for dancing links. Node 0 is the root, nodes `1..=columns`
/// are column headers, the rest are row entries in row order.
#[derive(Clone)]
struct Dlx {
    left: Vec<u32>,
    right: Vec<u32>,
    up: Vec<u32>,
    down: Vec<u32>,
    col: Vec<u32>,
    size: Vec<u32>,
    row_id: Vec<u32>,
}

impl Dlx {
    fn new(inst: &CoverInstance) -> Dlx {
        let ncols = inst.columns() as usize;
        let total = 1 + ncols + 3 * inst.rows().len();
        let mut d = Dlx {
            left: vec![0; total],
            right: vec![0; total],
            up: vec![0; total],
            down: vec![0; total],
            col: vec![0; total],
            size: vec![0; ncols + 1],
            row_id: vec![u32::MAX; total],
        };
        for i in 0..=ncols {
            d.left[i] = ((i + ncols) % (ncols + 1)) as u32;
            d.right[i] = ((i + 1) % (ncols + 1)) as u32;
            d.up[i] = i as u32;
            d.down[i] = i as u32;
            d.col[i] = i as u32;
        }
        let mut next = ncols + 1;
        for (r, row) in inst.rows().iter().enumerate() {
            let first = next;
            for &c in row {
                let hdr = (c + 1) as usize;
                let tail = d.up[hdr];
                d.up[next] = tail;
                d.down[next] = hdr as u32;
                d.down[tail as usize] = next as u32;
                d.up[hdr] = next as u32;
                d.col[next] = hdr as u32;
                d.row_id[next] = r as u32;
                d.size[hdr] += 1;
                next += 1;
            }
            for k in 0..3 {
                d.left[first + k] = (first + (k + 2) % 3) as u32;
                d.right[first + k] = (first + (k + 1) % 3) as u32;
            }
        }
        d
    }

    fn cover(&mut self, c: u32) {
        let c = c as usize;
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l as usize] = r;
        self.left[r as usize] = l;
        let mut i = self.down[c];
        while i as usize != c {
            let mut j = self.right[i as usize];
            while j != i {
                let (u, dn) = (self.up[j as usize], self.down[j as usize]);
                self.down[u as usize] = dn;
                self.up[dn as usize] = u;
                self.size[self.col[j as usize] as usize] -= 1;
                j = self.right[j as usize];
            }
            i = self.down[i as usize];
        }
    }

    fn uncover(&mut self, c: u32) {
        let c = c as usize;
        let mut i = self.up[c];
        while i as usize != c {
            let mut j = self.left[i as usize];
            while j != i {
                self.size[self.col[j as usize] as usize] += 1;
                self.down[self.up[j as usize] as usize] = j;
                self.up[self.down[j as usize] as usize] = j;
                j = self.left[j as usize];
            }
            i = self.up[i as usize];
        }
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l as usize] = c as u32;
        self.left[r as usize] = c as u32;
    }

    /// Active column of least size; ties go to the lowest column index
    /// because the header list stays in index order.
    fn choose_column(&self) -> Option<u32> {
        let mut best: Option<(u32, u32)> = None;
        let mut h = self.right[0];
        while h != 0 {
            let s = self.size[h as usize];
            if best.is_none_or(|(bs, _)| s < bs) {
                best = Some((s, h));
                if s == 0 {
                    break;
                }
            }
            h = self.right[h as usize];
        }
        best.map(|(_, h)| h)
    }
}

/// Poll the clock once per this many explored nodes.
const POLL_MASK: u64 = (1 << 12) - 1;

struct Search<'a> {
    dlx: Dlx,
    mode: SearchMode,
    deadline: Option<Instant>,
    stop: Option<&'a AtomicBool>,
    partial: Vec<u32>,
    witness: Option<Vec<u32>>,
    count: u64,
    nodes: u64,
    timed_out: bool,
}

impl Search<'_> {
    fn new(dlx: Dlx, mode: SearchMode, deadline: Option<Instant>) -> Self {
        Search {
            dlx,
            mode,
            deadline,
            stop: None,
            partial: Vec::new(),
            witness: None,
            count: 0,
            nodes: 0,
            timed_out: false,
        }
    }

    fn poll(&mut self) -> bool {
        if let Some(stop) = self.stop {
            if stop.load(Ordering::Relaxed) {
                return true;
            }
        }
        if let Some(deadline) = self.deadline {
            if Instant::now() >= deadline {
                self.timed_out = true;
                return true;
            }
        }
        false
    }

    /// Depth-first search; the return value asks callers to unwind.
    fn run(&mut self) -> bool {
        if self.dlx.right[0] == 0 {
            self.count += 1;
            if self.witness.is_none() {
                self.witness = Some(self.partial.clone());
            }
            return self.mode != SearchMode::CountAll;
        }
        let c = self.dlx.choose_column().expect("columns remain");
        if self.dlx.size[c as usize] == 0 {
            return false;
        }
        self.dlx.cover(c);
        let mut abort = false;
        let mut r = self.dlx.down[c as usize];
        while r != c {
            self.nodes += 1;
            if self.nodes & POLL_MASK == 0 && self.poll() {
                abort = true;
                break;
            }
            self.partial.push(self.dlx.row_id[r as usize]);
            let mut j = self.dlx.right[r as usize];
            while j != r {
                self.dlx.cover(self.dlx.col[j as usize]);
                j = self.dlx.right[j as usize];
            }
            abort = self.run();
            let mut j = self.dlx.left[r as usize];
            while j != r {
                self.dlx.uncover(self.dlx.col[j as usize]);
                j = self.dlx.left[j as usize];
            }
            self.partial.pop();
            if abort {
                break;
            }
            r = self.dlx.down[r as usize];
        }
        self.dlx.uncover(c);
        abort
    }
}

fn finish(
    mode: SearchMode,
    witness: Option<Vec<u32>>,
    count: u64,
    nodes: u64,
    timed_out: bool,
    elapsed: Duration,
) -> SearchOutcome {
    let found = witness.is_some();
    let status = match mode {
        SearchMode::FindOne | SearchMode::ProveNone => {
            if found {
                SearchStatus::Found
            } else if timed_out {
                SearchStatus::Timeout
            } else {
                SearchStatus::NoSolution
            }
        }
        SearchMode::CountAll => {
            if timed_out {
                SearchStatus::Timeout
            } else {
                SearchStatus::Exhausted
            }
        }
    };
    SearchOutcome {
        mode,
        status,
        witness: if status == SearchStatus::Found {
            witness
        } else {
            None
        },
        count: if status == SearchStatus::Exhausted {
            Some(count)
        } else {
            None
        },
        nodes_explored: nodes,
        elapsed,
    }
}

fn solve_sequential(
    inst: &CoverInstance,
    mode: SearchMode,
    deadline: Option<Instant>,
    start: Instant,
) -> SearchOutcome {
    let mut search = Search::new(Dlx::new(inst), mode, deadline);
    if !search.poll() {
        search.run();
    }
    finish(
        mode,
        search.witness,
        search.count,
        search.nodes,
        search.timed_out,
        start.elapsed(),
    )
}

fn solve_parallel(
    inst: &CoverInstance,
    mode: SearchMode,
    deadline: Option<Instant>,
    start: Instant,
) -> SearchOutcome {
    let base = Dlx::new(inst);
    if base.right[0] == 0 {
        return finish(mode, Some(Vec::new()), 1, 0, false, start.elapsed());
    }
    let c = base.choose_column().expect("columns remain");
    let mut branches = Vec::new();
    let mut r = base.down[c as usize];
    while r != c {
        branches.push(r);
        r = base.down[r as usize];
    }
    let stop = AtomicBool::new(false);
    let results: Vec<(Option<Vec<u32>>, u64, u64, bool)> = branches
        .into_par_iter()
        .map(|r| {
            if stop.load(Ordering::Relaxed) {
                return (None, 0, 0, false);
            }
            let mut dlx = base.clone();
            dlx.cover(c);
            let row = dlx.row_id[r as usize];
            let mut j = dlx.right[r as usize];
            while j != r {
                dlx.cover(dlx.col[j as usize]);
                j = dlx.right[j as usize];
            }
            let mut search = Search::new(dlx, mode, deadline);
            search.stop = Some(&stop);
            search.partial.push(row);
            search.nodes = 1;
            if !search.poll() {
                search.run();
            }
            if search.witness.is_some() && mode != SearchMode::CountAll {
                stop.store(true, Ordering::Relaxed);
            }
            (search.witness, search.count, search.nodes, search.timed_out)
        })
        .collect();
    let witness = results.iter().find_map(|r| r.0.clone());
    let count = results.iter().map(|r| r.1).sum();
    let nodes = results.iter().map(|r| r.2).sum();
    let timed_out = results.iter().any(|r| r.3);
    finish(mode, witness, count, nodes, timed_out, start.elapsed())
}
