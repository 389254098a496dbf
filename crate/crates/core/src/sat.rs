//! A small CDCL SAT solver.
//!
//! Two watched literals, first-UIP clause learning, VSIDS branching with
//! phase saving and Luby restarts. Literals use the DIMACS convention at the
//! API boundary: variable `v >= 1` is the literal `v`, its negation `-v`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A formula in conjunctive normal form.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl Cnf {
    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                write!(s, "{l} ").expect("string write");
            }
            s.push_str("0\n");
        }
        s
    }

    pub fn from_dimacs(text: &str) -> Result<Cnf> {
        let bad = |line: usize, msg: &str| Error::Parse {
            path: "<dimacs>".into(),
            line,
            msg: msg.into(),
        };
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut cur = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            if line.starts_with('p') {
                let f: Vec<&str> = line.split_whitespace().collect();
                if f.len() != 4 || f[1] != "cnf" {
                    return Err(bad(i + 1, "malformed header"));
                }
                let v = f[2].parse().map_err(|_| bad(i + 1, "bad variable count"))?;
                let c = f[3].parse().map_err(|_| bad(i + 1, "bad clause count"))?;
                header = Some((v, c));
                continue;
            }
            let (nv, _) = header.ok_or_else(|| bad(i + 1, "clause before header"))?;
            for tok in line.split_whitespace() {
                let l: i32 = tok.parse().map_err(|_| bad(i + 1, "bad literal"))?;
                if l == 0 {
                    clauses.push(std::mem::take(&mut cur));
                } else if l.unsigned_abs() as usize > nv {
                    return Err(bad(i + 1, "literal out of range"));
                } else {
                    cur.push(l);
                }
            }
        }
        let (num_vars, nc) = header.ok_or_else(|| bad(0, "missing header"))?;
        if !cur.is_empty() {
            clauses.push(cur);
        }
        if clauses.len() != nc {
            return Err(bad(0, "clause count does not match header"));
        }
        Ok(Cnf { num_vars, clauses })
    }

    /// True iff `model` (indexed by variable - 1) satisfies every clause.
    pub fn satisfied_by(&self, model: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|&l| model[l.unsigned_abs() as usize - 1] == (l > 0)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveResult {
    Sat(Vec<bool>),
    Unsat,
    /// The conflict budget ran out first.
    Unknown,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolverStats {
    pub decisions: u64,
    pub conflicts: u64,
    pub propagations: u64,
    pub restarts: u64,
}

/// Internal literal: `2 * var + negated`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Lit(u32);

impl Lit {
    fn from_dimacs(l: i32) -> Lit {
        Lit(((l.unsigned_abs() - 1) << 1) | (l < 0) as u32)
    }
    fn var(self) -> usize {
        (self.0 >> 1) as usize
    }
    fn neg(self) -> Lit {
        Lit(self.0 ^ 1)
    }
    fn is_neg(self) -> bool {
        self.0 & 1 == 1
    }
    fn idx(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Scored(f64, usize);

impl Eq for Scored {}

impl PartialOrd for Scored {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Scored {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.total_cmp(&o.0).then(o.1.cmp(&self.1))
    }
}

const NO_REASON: usize = usize::MAX;

pub struct Solver {
    num_vars: usize,
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<usize>>,
    /// +1 true, -1 false, 0 unassigned.
    value: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<usize>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    heap: BinaryHeap<Scored>,
    phase: Vec<bool>,
    seen: Vec<bool>,
    inconsistent: bool,
    stats: SolverStats,
}

impl Solver {
    /// A solver over variables `1..=num_vars`; `seed` fixes initial phases and
    /// activity tie-breaks.
    pub fn new(num_vars: usize, seed: u64) -> Solver {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let activity: Vec<f64> = (0..num_vars).map(|_| rng.gen::<f64>() * 1e-3).collect();
        let phase = (0..num_vars).map(|_| rng.gen()).collect();
        let heap = activity.iter().enumerate().map(|(v, &a)| Scored(a, v)).collect();
        Solver {
            num_vars,
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * num_vars],
            value: vec![0; num_vars],
            level: vec![0; num_vars],
            reason: vec![NO_REASON; num_vars],
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            activity,
            var_inc: 1.0,
            heap,
            phase,
            seen: vec![false; num_vars],
            inconsistent: false,
            stats: SolverStats::default(),
        }
    }

    pub fn from_cnf(cnf: &Cnf, seed: u64) -> Solver {
        let mut s = Solver::new(cnf.num_vars, seed);
        for c in &cnf.clauses {
            s.add_clause(c);
        }
        s
    }

    /// Preferred value of variable `var` (1-based) at its next decision.
    pub fn set_phase(&mut self, var: usize, value: bool) {
        self.phase[var - 1] = value;
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn stats(&self) -> SolverStats {
        self.stats
    }

    fn lit_value(&self, l: Lit) -> i8 {
        let v = self.value[l.var()];
        if l.is_neg() {
            -v
        } else {
            v
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn enqueue(&mut self, l: Lit, reason: usize) {
        let v = l.var();
        self.value[v] = if l.is_neg() { -1 } else { 1 };
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Adds a clause between solves. Returns false once the formula is known
    /// to be unsatisfiable.
    pub fn add_clause(&mut self, lits: &[i32]) -> bool {
        if self.inconsistent {
            return false;
        }
        self.backtrack(0);
        let mut c: Vec<Lit> = lits.iter().map(|&l| Lit::from_dimacs(l)).collect();
        c.sort_by_key(|l| l.0);
        c.dedup();
        if c.windows(2).any(|w| w[0].var() == w[1].var()) {
            return true;
        }
        if c.iter().any(|&l| self.lit_value(l) > 0) {
            return true;
        }
        c.retain(|&l| self.lit_value(l) == 0);
        match c.len() {
            0 => {
                self.inconsistent = true;
                false
            }
            1 => {
                self.enqueue(c[0], NO_REASON);
                if self.propagate().is_some() {
                    self.inconsistent = true;
                }
                !self.inconsistent
            }
            _ => {
                self.attach(c);
                true
            }
        }
    }

    fn attach(&mut self, c: Vec<Lit>) -> usize {
        let cref = self.clauses.len();
        self.watches[c[0].idx()].push(cref);
        self.watches[c[1].idx()].push(cref);
        self.clauses.push(c);
        cref
    }

    /// Unit propagation; returns a conflicting clause if one arises.
    fn propagate(&mut self) -> Option<usize> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = p.neg();
            let mut ws = std::mem::take(&mut self.watches[false_lit.idx()]);
            let mut i = 0;
            let mut j = 0;
            let mut conflict = None;
            'clauses: while i < ws.len() {
                let cref = ws[i];
                i += 1;
                {
                    let c = &mut self.clauses[cref];
                    if c[0] == false_lit {
                        c.swap(0, 1);
                    }
                }
                let first = self.clauses[cref][0];
                if self.lit_value(first) > 0 {
                    ws[j] = cref;
                    j += 1;
                    continue;
                }
                for k in 2..self.clauses[cref].len() {
                    let l = self.clauses[cref][k];
                    if self.lit_value(l) >= 0 {
                        self.clauses[cref].swap(1, k);
                        self.watches[l.idx()].push(cref);
                        continue 'clauses;
                    }
                }
                ws[j] = cref;
                j += 1;
                if self.lit_value(first) < 0 {
                    conflict = Some(cref);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        i += 1;
                        j += 1;
                    }
                } else {
                    self.enqueue(first, cref);
                }
            }
            ws.truncate(j);
            self.watches[false_lit.idx()] = ws;
            if conflict.is_some() {
                return conflict;
            }
        }
        None
    }

    fn bump(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
            self.heap = (0..self.num_vars)
                .filter(|&u| self.value[u] == 0)
                .map(|u| Scored(self.activity[u], u))
                .collect();
        }
        if self.value[v] == 0 {
            self.heap.push(Scored(self.activity[v], v));
        }
    }

    /// First-UIP conflict analysis: returns the learnt clause (asserting
    /// literal first) and the backjump level.
    fn analyze(&mut self, mut confl: usize) -> (Vec<Lit>, u32) {
        let mut learnt = vec![Lit(0)];
        let mut counter = 0;
        let mut p: Option<Lit> = None;
        let mut idx = self.trail.len();
        loop {
            let start = usize::from(p.is_some());
            for k in start..self.clauses[confl].len() {
                let q = self.clauses[confl][k];
                let v = q.var();
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump(v);
                    if self.level[v] == self.decision_level() {
                        counter += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[self.trail[idx].var()] {
                    break;
                }
            }
            let lit = self.trail[idx];
            p = Some(lit);
            self.seen[lit.var()] = false;
            counter -= 1;
            if counter == 0 {
                break;
            }
            confl = self.reason[lit.var()];
        }
        learnt[0] = p.expect("conflict at positive level").neg();
        for l in &learnt[1..] {
            self.seen[l.var()] = false;
        }
        let mut bt = 0;
        if learnt.len() > 1 {
            let mut max_i = 1;
            for k in 2..learnt.len() {
                if self.level[learnt[k].var()] > self.level[learnt[max_i].var()] {
                    max_i = k;
                }
            }
            learnt.swap(1, max_i);
            bt = self.level[learnt[1].var()];
        }
        self.var_inc /= 0.95;
        (learnt, bt)
    }

    fn backtrack(&mut self, lvl: u32) {
        if self.decision_level() <= lvl {
            return;
        }
        let lim = self.trail_lim[lvl as usize];
        for k in (lim..self.trail.len()).rev() {
            let l = self.trail[k];
            let v = l.var();
            self.phase[v] = !l.is_neg();
            self.value[v] = 0;
            self.reason[v] = NO_REASON;
            self.heap.push(Scored(self.activity[v], v));
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(lvl as usize);
        self.qhead = lim;
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        while let Some(Scored(_, v)) = self.heap.pop() {
            if self.value[v] == 0 {
                let l = Lit((v as u32) << 1 | (!self.phase[v]) as u32);
                return Some(l);
            }
        }
        None
    }

    /// Solves under the current clause set. `conflict_limit` bounds the
    /// conflicts spent in this call.
    pub fn solve(&mut self, conflict_limit: Option<u64>) -> SolveResult {
        if self.inconsistent {
            return SolveResult::Unsat;
        }
        self.backtrack(0);
        if self.propagate().is_some() {
            self.inconsistent = true;
            return SolveResult::Unsat;
        }
        let start = self.stats.conflicts;
        let mut restart_idx = 1u64;
        let mut until_restart = 100 * luby(restart_idx);
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                if self.decision_level() == 0 {
                    self.inconsistent = true;
                    return SolveResult::Unsat;
                }
                let (learnt, bt) = self.analyze(confl);
                self.backtrack(bt);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], NO_REASON);
                } else {
                    let first = learnt[0];
                    let cref = self.attach(learnt);
                    self.enqueue(first, cref);
                }
                until_restart = until_restart.saturating_sub(1);
                continue;
            }
            if conflict_limit.is_some_and(|lim| self.stats.conflicts - start >= lim) {
                self.backtrack(0);
                return SolveResult::Unknown;
            }
            if until_restart == 0 {
                self.stats.restarts += 1;
                restart_idx += 1;
                until_restart = 100 * luby(restart_idx);
                self.backtrack(0);
                continue;
            }
            match self.pick_branch() {
                None => {
                    let model = self.value.iter().map(|&v| v > 0).collect();
                    self.backtrack(0);
                    return SolveResult::Sat(model);
                }
                Some(l) => {
                    self.stats.decisions += 1;
                    self.trail_lim.push(self.trail.len());
                    self.enqueue(l, NO_REASON);
                }
            }
        }
    }
}

/// The Luby sequence 1, 1, 2, 1, 1, 2, 4, ... (1-based).
pub fn luby(i: u64) -> u64 {
    let mut i = i;
    loop {
        let mut k = 1;
        while (1u64 << k) - 1 < i {
            k += 1;
        }
        if (1u64 << k) - 1 == i {
            return 1 << (k - 1);
        }
        i -= (1 << (k - 1)) - 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn luby_prefix() {
        let v: Vec<u64> = (1..=15).map(luby).collect();
        assert_eq!(v, [1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }

    #[test]
    fn pigeonhole_three_into_two_is_unsat() {
        // p(i, h) = 2 * i + h + 1
        let p = |i: i32, h: i32| 2 * i + h + 1;
        let mut cnf = Cnf {
            num_vars: 6,
            clauses: Vec::new(),
        };
        for i in 0..3 {
            cnf.clauses.push(vec![p(i, 0), p(i, 1)]);
        }
        for h in 0..2 {
            for i in 0..3 {
                for j in i + 1..3 {
                    cnf.clauses.push(vec![-p(i, h), -p(j, h)]);
                }
            }
        }
        assert_eq!(Solver::from_cnf(&cnf, 1).solve(None), SolveResult::Unsat);
    }

    #[test]
    fn dimacs_round_trip() {
        let cnf = Cnf {
            num_vars: 3,
            clauses: vec![vec![1, -2], vec![2, 3], vec![-1, -3]],
        };
        let back = Cnf::from_dimacs(&cnf.to_dimacs()).unwrap();
        assert_eq!(back, cnf);
        assert!(Cnf::from_dimacs("p cnf 2 1\n1 3 0\n").is_err());
    }

    #[test]
    fn empty_clause_is_unsat() {
        let mut s = Solver::new(2, 0);
        assert!(!s.add_clause(&[]));
        assert_eq!(s.solve(None), SolveResult::Unsat);
    }
}
