//! Depth-first search and branch-and-bound.

use std::time::{Duration, Instant};

use crate::contractor::ContractorRegistry;
use crate::engine::{Engine, PropStats};
use crate::interval::Interval;
use crate::model::Model;
use crate::real::select_real;
use crate::store::{Contradiction, IntVar, RealVar, Store};

#[derive(Clone, Debug, Default)]
pub struct SearchConfig {
    /// Branched on first with first-fail / smallest value. The remaining
    /// integer variables follow with the same rule, then the reals.
    pub decisions: Vec<IntVar>,
    pub node_limit: Option<u64>,
    pub time_limit: Option<Duration>,
    /// Snapshot the store at every level and check restoration on
    /// backtrack (slow; for testing).
    pub check_restore: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Objective {
    Int(IntVar),
    Real(RealVar),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub ints: Vec<i64>,
    pub reals: Vec<Interval>,
}

impl Solution {
    pub fn int(&self, v: IntVar) -> i64 {
        self.ints[v.index()]
    }

    pub fn real(&self, v: RealVar) -> Interval {
        self.reals[v.index()]
    }

    pub fn objective(&self, obj: Objective) -> Interval {
        match obj {
            Objective::Int(v) => Interval::point(self.int(v) as f64),
            Objective::Real(v) => self.real(v),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SearchEvent {
    Solution(Solution),
    /// The whole tree has been explored.
    Exhausted,
    /// A node or time limit stopped the search.
    Limit,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub fails: u64,
    pub solutions: u64,
    pub max_depth: usize,
    pub propagation: PropStats,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Decision {
    IntEq(IntVar, i64),
    IntNeq(IntVar, i64),
    RealAtMost(RealVar, f64),
    RealAtLeast(RealVar, f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Cut {
    Int(IntVar, i64),
    Real(RealVar, f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizeOutcome {
    pub best: Option<Solution>,
    /// True when the tree was exhausted, so `best` is optimal (or the
    /// problem is unsatisfiable when `best` is `None`).
    pub proven: bool,
}

pub struct Solver {
    store: Store,
    engine: Engine,
    registry: ContractorRegistry,
    int_names: Vec<String>,
    real_names: Vec<String>,
    decisions: Vec<IntVar>,
    others: Vec<IntVar>,
    reals: Vec<RealVar>,
    config: SearchConfig,
    stats: SearchStats,
    stack: Vec<(usize, Decision)>,
    started: Option<Instant>,
    pending_backtrack: bool,
    finished: Option<SearchEvent>,
    cut: Option<Cut>,
}

impl Solver {
    pub fn new(model: Model, config: SearchConfig) -> Solver {
        let Model {
            mut store,
            engine,
            registry,
            int_names,
            real_names,
        } = model;
        let mut seen = vec![false; store.num_ints()];
        let mut decisions = Vec::new();
        for &v in &config.decisions {
            if !seen[v.index()] {
                seen[v.index()] = true;
                decisions.push(v);
            }
        }
        let others = (0..store.num_ints())
            .filter(|&i| !seen[i])
            .map(IntVar)
            .collect();
        let reals = (0..store.num_reals()).map(RealVar).collect();
        if config.check_restore {
            store.enable_restore_checks();
        }
        Solver {
            store,
            engine,
            registry,
            int_names,
            real_names,
            decisions,
            others,
            reals,
            config,
            stats: SearchStats::default(),
            stack: Vec::new(),
            started: None,
            pending_backtrack: false,
            finished: None,
            cut: None,
        }
    }

    pub fn stats(&self) -> SearchStats {
        self.stats
    }

    pub fn store(&self) -> &Store {
        &self.store
    }

    pub fn restore_violations(&self) -> usize {
        self.store.restore_violations()
    }

    pub fn int_name(&self, v: IntVar) -> &str {
        &self.int_names[v.index()]
    }

    pub fn real_name(&self, v: RealVar) -> &str {
        &self.real_names[v.index()]
    }

    pub fn elapsed(&self) -> Duration {
        self.started.map_or(Duration::ZERO, |t| t.elapsed())
    }

    fn limit_reached(&self) -> bool {
        if let Some(n) = self.config.node_limit {
            if self.stats.nodes >= n {
                return true;
            }
        }
        if let Some(t) = self.config.time_limit {
            if self.elapsed() >= t {
                return true;
            }
        }
        false
    }

    fn apply(&mut self, d: Decision) -> Result<(), Contradiction> {
        match d {
            Decision::IntEq(v, x) => self.store.int_fix(v, x).map(drop),
            Decision::IntNeq(v, x) => self.store.int_remove(v, x).map(drop),
            Decision::RealAtMost(v, x) => self
                .store
                .real_restrict(v, f64::NEG_INFINITY, x, true)
                .map(drop),
            Decision::RealAtLeast(v, x) => self
                .store
                .real_restrict(v, x, f64::INFINITY, true)
                .map(drop),
        }
    }

    fn propagate(&mut self) -> Result<(), Contradiction> {
        match self.cut {
            Some(Cut::Int(v, ub)) => {
                self.store.int_restrict(v, i64::MIN, ub)?;
            }
            Some(Cut::Real(v, ub)) => {
                self.store.real_restrict(v, f64::NEG_INFINITY, ub, true)?;
            }
            None => {}
        }
        self.engine
            .fixpoint(&mut self.store, &self.registry, &mut self.stats.propagation)
    }

    /// First-fail over `vars`: smallest domain, ties to the lowest id.
    fn first_fail(&self, vars: &[IntVar]) -> Option<IntVar> {
        vars.iter()
            .filter(|&&v| !self.store.dom(v).is_fixed())
            .min_by_key(|&&v| (self.store.dom(v).size(), v.index()))
            .copied()
    }

    fn select(&self) -> Option<(Decision, Decision)> {
        if let Some(v) = self
            .first_fail(&self.decisions)
            .or_else(|| self.first_fail(&self.others))
        {
            let x = self.store.lb(v);
            return Some((Decision::IntEq(v, x), Decision::IntNeq(v, x)));
        }
        select_real(&self.store, &self.reals)
            .map(|(v, mid)| (Decision::RealAtMost(v, mid), Decision::RealAtLeast(v, mid)))
    }

    fn record(&self) -> Solution {
        Solution {
            ints: (0..self.store.num_ints())
                .map(|i| self.store.lb(IntVar(i)))
                .collect(),
            reals: (0..self.store.num_reals())
                .map(|i| self.store.real(RealVar(i)))
                .collect(),
        }
    }

    fn enter_node(&mut self, d: Decision) -> bool {
        self.store.push_level();
        self.stats.nodes += 1;
        self.stats.max_depth = self.stats.max_depth.max(self.store.depth());
        let ok = self.apply(d).is_ok() && self.propagate().is_ok();
        if !ok {
            self.stats.fails += 1;
        }
        ok
    }

    /// Continues the search to the next solution.
    pub fn next_solution(&mut self) -> SearchEvent {
        if let Some(done) = &self.finished {
            return done.clone();
        }
        if self.started.is_none() {
            self.started = Some(Instant::now());
            self.store.push_level();
            self.engine.schedule_all();
            if self.propagate().is_err() {
                self.stats.fails += 1;
                self.pending_backtrack = true;
            }
        }
        loop {
            if self.pending_backtrack {
                let Some((depth, right)) = self.stack.pop() else {
                    self.store.pop_to(0);
                    return self.finish(SearchEvent::Exhausted);
                };
                if self.limit_reached() {
                    return self.finish(SearchEvent::Limit);
                }
                self.store.pop_to(depth);
                if !self.enter_node(right) {
                    continue;
                }
                self.pending_backtrack = false;
            }
            match self.select() {
                None => {
                    self.stats.solutions += 1;
                    self.pending_backtrack = true;
                    return SearchEvent::Solution(self.record());
                }
                Some((left, right)) => {
                    if self.limit_reached() {
                        return self.finish(SearchEvent::Limit);
                    }
                    self.stack.push((self.store.depth(), right));
                    if !self.enter_node(left) {
                        self.pending_backtrack = true;
                    }
                }
            }
        }
    }

    fn finish(&mut self, e: SearchEvent) -> SearchEvent {
        self.finished = Some(e.clone());
        e
    }

    /// Every remaining solution, in search order.
    pub fn all_solutions(&mut self) -> (Vec<Solution>, bool) {
        let mut out = Vec::new();
        loop {
            match self.next_solution() {
                SearchEvent::Solution(s) => out.push(s),
                SearchEvent::Exhausted => return (out, true),
                SearchEvent::Limit => return (out, false),
            }
        }
    }

    /// Branch and bound. After each solution the objective is bounded to
    /// `ub - delta` (delta is 1 for integers, the precision for reals) and
    /// the search continues until the tree is exhausted or a limit hits.
    pub fn minimize(
        &mut self,
        obj: Objective,
        mut on_solution: impl FnMut(&Solution),
    ) -> OptimizeOutcome {
        let mut best = None;
        loop {
            match self.next_solution() {
                SearchEvent::Solution(s) => {
                    self.cut = Some(match obj {
                        Objective::Int(v) => Cut::Int(v, s.int(v).saturating_sub(1)),
                        Objective::Real(v) => {
                            Cut::Real(v, s.real(v).hi() - self.store.precision(v))
                        }
                    });
                    on_solution(&s);
                    best = Some(s);
                }
                SearchEvent::Exhausted => return OptimizeOutcome { best, proven: true },
                SearchEvent::Limit => {
                    return OptimizeOutcome {
                        best,
                        proven: false,
                    }
                }
            }
        }
    }
}
