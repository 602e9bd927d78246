//! A compact CDCL solver: two watched literals, first-UIP clause learning,
//! chronological variable order and no restarts. Solutions are enumerated
//! by adding blocking clauses between calls to [`Solver::solve`].

use alloc::vec::Vec;
use core::fmt;
use core::ops::Not;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u32);

impl Var {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A literal, encoded as `2 * var + negated`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    #[inline]
    pub fn pos(v: Var) -> Lit {
        Lit(v.0 << 1)
    }

    #[inline]
    pub fn neg(v: Var) -> Lit {
        Lit(v.0 << 1 | 1)
    }

    #[inline]
    pub fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    #[inline]
    pub fn is_negated(self) -> bool {
        self.0 & 1 == 1
    }

    #[inline]
    fn code(self) -> usize {
        self.0 as usize
    }

    /// Signed one-based form used by DIMACS.
    pub fn to_dimacs(self) -> i64 {
        let v = self.var().0 as i64 + 1;
        if self.is_negated() {
            -v
        } else {
            v
        }
    }
}

impl Not for Lit {
    type Output = Lit;

    #[inline]
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Sat,
    Unsat,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
    pub learned: u64,
}

const UNDEF: i8 = 0;
const TRUE: i8 = 1;
const FALSE: i8 = -1;
const NO_REASON: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub struct Solver {
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<u32>>,
    assigns: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<u32>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    seen: Vec<bool>,
    branch_hint: usize,
    unsat: bool,
    stats: Stats,
}

impl Solver {
    pub fn new(num_vars: usize) -> Solver {
        Solver {
            clauses: Vec::new(),
            watches: alloc::vec![Vec::new(); 2 * num_vars],
            assigns: alloc::vec![UNDEF; num_vars],
            level: alloc::vec![0; num_vars],
            reason: alloc::vec![NO_REASON; num_vars],
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            seen: alloc::vec![false; num_vars],
            branch_hint: 0,
            unsat: false,
            stats: Stats::default(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.assigns.len()
    }

    pub fn stats(&self) -> Stats {
        self.stats
    }

    #[inline]
    fn lit_value(&self, l: Lit) -> i8 {
        let v = self.assigns[l.var().index()];
        if l.is_negated() {
            -v
        } else {
            v
        }
    }

    /// Value of `v` in the current assignment; after [`Status::Sat`] this is
    /// the model.
    pub fn value(&self, v: Var) -> Option<bool> {
        match self.assigns[v.index()] {
            TRUE => Some(true),
            FALSE => Some(false),
            _ => None,
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn enqueue(&mut self, l: Lit, reason: u32) {
        let v = l.var().index();
        debug_assert_eq!(self.assigns[v], UNDEF);
        self.assigns[v] = if l.is_negated() { FALSE } else { TRUE };
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn cancel_until(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let keep = self.trail_lim[level as usize];
        for l in self.trail.drain(keep..) {
            let v = l.var().index();
            self.assigns[v] = UNDEF;
            self.reason[v] = NO_REASON;
            self.branch_hint = self.branch_hint.min(v);
        }
        self.trail_lim.truncate(level as usize);
        self.qhead = self.trail.len();
    }

    /// Adds a clause. Returns `false` once the formula is known to be
    /// unsatisfiable. Any search state is discarded first.
    pub fn add_clause(&mut self, lits: &[Lit]) -> bool {
        self.cancel_until(0);
        if self.unsat {
            return false;
        }
        let mut clause: Vec<Lit> = lits.to_vec();
        clause.sort_unstable();
        clause.dedup();
        if clause.windows(2).any(|w| w[0] == !w[1]) {
            return true;
        }
        if clause.iter().any(|&l| self.lit_value(l) == TRUE) {
            return true;
        }
        clause.retain(|&l| self.lit_value(l) == UNDEF);
        match clause.len() {
            0 => {
                self.unsat = true;
                false
            }
            1 => {
                self.enqueue(clause[0], NO_REASON);
                if self.propagate().is_some() {
                    self.unsat = true;
                }
                !self.unsat
            }
            _ => {
                self.attach(clause);
                true
            }
        }
    }

    fn attach(&mut self, clause: Vec<Lit>) -> u32 {
        let ci = self.clauses.len() as u32;
        self.watches[clause[0].code()].push(ci);
        self.watches[clause[1].code()].push(ci);
        self.clauses.push(clause);
        ci
    }

    /// Unit propagation; returns a conflicting clause if one arises.
    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let falsified = !self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let mut ws = core::mem::take(&mut self.watches[falsified.code()]);
            let mut keep = 0;
            let mut conflict = None;
            let mut i = 0;
            while i < ws.len() {
                let ci = ws[i];
                i += 1;
                let c = &mut self.clauses[ci as usize];
                if c[0] == falsified {
                    c.swap(0, 1);
                }
                let first = c[0];
                if lit_value(&self.assigns, first) == TRUE {
                    ws[keep] = ci;
                    keep += 1;
                    continue;
                }
                let replacement = (2..c.len()).find(|&k| lit_value(&self.assigns, c[k]) != FALSE);
                if let Some(k) = replacement {
                    c.swap(1, k);
                    let watched = c[1];
                    self.watches[watched.code()].push(ci);
                    continue;
                }
                ws[keep] = ci;
                keep += 1;
                if lit_value(&self.assigns, first) == FALSE {
                    conflict = Some(ci);
                    while i < ws.len() {
                        ws[keep] = ws[i];
                        keep += 1;
                        i += 1;
                    }
                } else {
                    self.enqueue(first, ci);
                }
            }
            ws.truncate(keep);
            self.watches[falsified.code()] = ws;
            if conflict.is_some() {
                self.qhead = self.trail.len();
                return conflict;
            }
        }
        None
    }

    /// First-UIP conflict analysis. Returns the learned clause, asserting
    /// literal first, and the level to backtrack to.
    fn analyze(&mut self, mut confl: u32) -> (Vec<Lit>, u32) {
        let mut learnt = alloc::vec![Lit(0)];
        let mut pending = 0usize;
        let mut asserted: Option<Lit> = None;
        let mut index = self.trail.len();
        let current = self.decision_level();
        loop {
            let clause = &self.clauses[confl as usize];
            let skip = usize::from(asserted.is_some());
            for &q in &clause[skip..] {
                let v = q.var().index();
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    if self.level[v] >= current {
                        pending += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[self.trail[index].var().index()] {
                    break;
                }
            }
            let p = self.trail[index];
            self.seen[p.var().index()] = false;
            pending -= 1;
            asserted = Some(p);
            if pending == 0 {
                break;
            }
            confl = self.reason[p.var().index()];
            debug_assert_ne!(confl, NO_REASON);
        }
        learnt[0] = !asserted.expect("analysis visits the conflict level");
        for l in &learnt[1..] {
            self.seen[l.var().index()] = false;
        }
        let mut back = 0;
        if learnt.len() > 1 {
            let (k, lvl) = learnt[1..]
                .iter()
                .enumerate()
                .map(|(k, l)| (k + 1, self.level[l.var().index()]))
                .max_by_key(|&(_, lvl)| lvl)
                .expect("nonempty tail");
            learnt.swap(1, k);
            back = lvl;
        }
        (learnt, back)
    }

    fn pick_branch(&mut self) -> Option<Var> {
        while self.branch_hint < self.assigns.len() {
            if self.assigns[self.branch_hint] == UNDEF {
                return Some(Var(self.branch_hint as u32));
            }
            self.branch_hint += 1;
        }
        None
    }

    /// Searches for a model. Branches on the lowest-index unassigned
    /// variable, trying `true` first.
    pub fn solve(&mut self) -> Status {
        self.cancel_until(0);
        if self.unsat {
            return Status::Unsat;
        }
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                if self.decision_level() == 0 {
                    self.unsat = true;
                    return Status::Unsat;
                }
                let (learnt, back) = self.analyze(confl);
                self.cancel_until(back);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], NO_REASON);
                } else {
                    let asserting = learnt[0];
                    let ci = self.attach(learnt);
                    self.enqueue(asserting, ci);
                }
                self.stats.learned += 1;
            } else {
                match self.pick_branch() {
                    None => return Status::Sat,
                    Some(v) => {
                        self.stats.decisions += 1;
                        self.trail_lim.push(self.trail.len());
                        self.enqueue(Lit::pos(v), NO_REASON);
                    }
                }
            }
        }
    }

    /// The current total assignment, valid right after [`Status::Sat`].
    pub fn model(&self) -> Vec<bool> {
        self.assigns.iter().map(|&v| v == TRUE).collect()
    }
}

#[inline]
fn lit_value(assigns: &[i8], l: Lit) -> i8 {
    let v = assigns[l.var().index()];
    if l.is_negated() {
        -v
    } else {
        v
    }
}

/// Whether `model` satisfies every clause.
pub fn satisfies(clauses: &[Vec<Lit>], model: &[bool]) -> bool {
    clauses.iter().all(|c| {
        c.iter()
            .any(|&l| model[l.var().index()] != l.is_negated())
    })
}
