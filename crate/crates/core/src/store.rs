//! Variable state with trail-based backtracking.

use thiserror::Error;

use crate::fd::IntDomain;
use crate::interval::Interval;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVar(pub(crate) usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RealVar(pub(crate) usize);

impl IntVar {
    pub fn index(self) -> usize {
        self.0
    }
}

impl RealVar {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarId {
    Int(IntVar),
    Real(RealVar),
}

/// Some domain became empty.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("contradiction")]
pub struct Contradiction;

#[derive(Clone, Debug)]
enum Saved {
    Int(usize, IntDomain),
    Real(usize, Interval),
    Passive(usize),
}

/// Full copy of the variable state, compared bit for bit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snapshot {
    ints: Vec<IntDomain>,
    reals: Vec<(u64, u64)>,
    passive: Vec<bool>,
}

#[derive(Clone, Debug)]
pub struct Store {
    ints: Vec<IntDomain>,
    reals: Vec<Interval>,
    precision: Vec<f64>,
    passive: Vec<bool>,

    trail: Vec<Saved>,
    markers: Vec<usize>,
    level_ids: Vec<u64>,
    next_level_id: u64,
    int_saved_at: Vec<u64>,
    real_saved_at: Vec<u64>,
    passive_saved_at: Vec<u64>,

    events: Vec<VarId>,

    snapshots: Option<Vec<Snapshot>>,
    restore_violations: usize,
}

impl Default for Store {
    fn default() -> Self {
        Store::new()
    }
}

impl Store {
    pub fn new() -> Store {
        Store {
            ints: Vec::new(),
            reals: Vec::new(),
            precision: Vec::new(),
            passive: Vec::new(),
            trail: Vec::new(),
            markers: Vec::new(),
            level_ids: vec![0],
            next_level_id: 1,
            int_saved_at: Vec::new(),
            real_saved_at: Vec::new(),
            passive_saved_at: Vec::new(),
            events: Vec::new(),
            snapshots: None,
            restore_violations: 0,
        }
    }

    pub fn new_int(&mut self, dom: IntDomain) -> IntVar {
        self.ints.push(dom);
        self.int_saved_at.push(u64::MAX);
        IntVar(self.ints.len() - 1)
    }

    pub fn new_real(&mut self, lo: f64, hi: f64, precision: f64) -> RealVar {
        let d = Interval::try_new(lo, hi).filter(|d| !d.is_empty());
        self.reals
            .push(d.unwrap_or_else(|| panic!("invalid real bounds [{lo}, {hi}]")));
        self.precision.push(precision);
        self.real_saved_at.push(u64::MAX);
        RealVar(self.reals.len() - 1)
    }

    pub(crate) fn new_passive_flag(&mut self) {
        self.passive.push(false);
        self.passive_saved_at.push(u64::MAX);
    }

    pub fn num_ints(&self) -> usize {
        self.ints.len()
    }

    pub fn num_reals(&self) -> usize {
        self.reals.len()
    }

    pub fn dom(&self, v: IntVar) -> &IntDomain {
        &self.ints[v.0]
    }

    pub fn lb(&self, v: IntVar) -> i64 {
        self.ints[v.0].lb()
    }

    pub fn ub(&self, v: IntVar) -> i64 {
        self.ints[v.0].ub()
    }

    pub fn real(&self, v: RealVar) -> Interval {
        self.reals[v.0]
    }

    pub fn precision(&self, v: RealVar) -> f64 {
        self.precision[v.0]
    }

    /// A real variable is instantiated once its width is within precision.
    pub fn real_instantiated(&self, v: RealVar) -> bool {
        self.reals[v.0].width() <= self.precision[v.0]
    }

    pub fn is_passive(&self, pid: usize) -> bool {
        self.passive[pid]
    }

    // ---- trail ----

    pub fn depth(&self) -> usize {
        self.markers.len()
    }

    fn level_id(&self) -> u64 {
        *self.level_ids.last().unwrap()
    }

    pub fn push_level(&mut self) {
        self.markers.push(self.trail.len());
        self.level_ids.push(self.next_level_id);
        self.next_level_id += 1;
        if self.snapshots.is_some() {
            let s = self.snapshot();
            if let Some(stack) = self.snapshots.as_mut() {
                stack.push(s);
            }
        }
    }

    /// Undoes every change made since the matching `push_level`.
    pub fn pop_level(&mut self) {
        let mark = self.markers.pop().expect("pop_level at root");
        self.level_ids.pop();
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                Saved::Int(v, d) => self.ints[v] = d,
                Saved::Real(v, d) => self.reals[v] = d,
                Saved::Passive(p) => self.passive[p] = false,
            }
        }
        self.events.clear();
        if let Some(stack) = self.snapshots.as_mut() {
            let expected = stack.pop().unwrap();
            if self.snapshot() != expected {
                self.restore_violations += 1;
            }
        }
    }

    /// Pops levels until `depth` remain.
    pub fn pop_to(&mut self, depth: usize) {
        while self.markers.len() > depth {
            self.pop_level();
        }
    }

    /// Records a full snapshot at each level and checks it on pop.
    pub fn enable_restore_checks(&mut self) {
        if self.snapshots.is_none() {
            self.snapshots = Some(Vec::new());
        }
    }

    pub fn restore_violations(&self) -> usize {
        self.restore_violations
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot {
            ints: self.ints.clone(),
            reals: self
                .reals
                .iter()
                .map(|d| (d.lo().to_bits(), d.hi().to_bits()))
                .collect(),
            passive: self.passive.clone(),
        }
    }

    fn save_int(&mut self, v: usize) {
        let id = self.level_id();
        if self.int_saved_at[v] != id {
            self.int_saved_at[v] = id;
            self.trail.push(Saved::Int(v, self.ints[v].clone()));
        }
    }

    fn save_real(&mut self, v: usize) {
        let id = self.level_id();
        if self.real_saved_at[v] != id {
            self.real_saved_at[v] = id;
            self.trail.push(Saved::Real(v, self.reals[v]));
        }
    }

    // ---- modifications ----

    fn apply_int(
        &mut self,
        v: IntVar,
        f: impl FnOnce(&mut IntDomain) -> Option<bool>,
    ) -> Result<bool, Contradiction> {
        let mut d = self.ints[v.0].clone();
        match f(&mut d) {
            None => Err(Contradiction),
            Some(false) => Ok(false),
            Some(true) => {
                self.save_int(v.0);
                self.ints[v.0] = d;
                self.events.push(VarId::Int(v));
                Ok(true)
            }
        }
    }

    pub fn int_restrict(&mut self, v: IntVar, lo: i64, hi: i64) -> Result<bool, Contradiction> {
        let d = &self.ints[v.0];
        if lo <= d.lb() && hi >= d.ub() {
            return Ok(false);
        }
        self.apply_int(v, |d| d.restrict(lo, hi))
    }

    pub fn int_fix(&mut self, v: IntVar, x: i64) -> Result<bool, Contradiction> {
        if !self.ints[v.0].contains(x) {
            return Err(Contradiction);
        }
        self.int_restrict(v, x, x)
    }

    pub fn int_remove(&mut self, v: IntVar, x: i64) -> Result<bool, Contradiction> {
        if !self.ints[v.0].contains(x) {
            return Ok(false);
        }
        self.apply_int(v, |d| d.remove(x))
    }

    pub fn int_retain(
        &mut self,
        v: IntVar,
        keep: impl FnMut(i64) -> bool,
    ) -> Result<bool, Contradiction> {
        self.apply_int(v, |d| d.retain(keep))
    }

    /// Intersects a real variable with `[lo, hi]`.
    ///
    /// Watchers are only notified when a bound moved by more than the
    /// variable's precision, a bound became finite, or the variable became
    /// instantiated; smaller moves are kept but do not trigger further
    /// propagation. `force` always notifies.
    pub fn real_restrict(
        &mut self,
        v: RealVar,
        lo: f64,
        hi: f64,
        force: bool,
    ) -> Result<bool, Contradiction> {
        let old = self.reals[v.0];
        let new = old.intersect(Interval::new(lo.max(old.lo()), hi.min(old.hi())));
        if new.is_empty() {
            return Err(Contradiction);
        }
        if new == old {
            return Ok(false);
        }
        self.save_real(v.0);
        self.reals[v.0] = new;
        let p = self.precision[v.0];
        let significant = force
            || (new.lo() - old.lo()) > p
            || (old.hi() - new.hi()) > p
            || (old.width() > p && new.width() <= p);
        if significant {
            self.events.push(VarId::Real(v));
        }
        Ok(true)
    }

    pub(crate) fn set_passive(&mut self, pid: usize) {
        if self.passive[pid] {
            return;
        }
        let id = self.level_id();
        if self.passive_saved_at[pid] != id {
            self.passive_saved_at[pid] = id;
            self.trail.push(Saved::Passive(pid));
        }
        self.passive[pid] = true;
    }

    pub(crate) fn take_events(&mut self, into: &mut Vec<VarId>) {
        into.append(&mut self.events);
    }

    pub(crate) fn clear_events(&mut self) {
        self.events.clear();
    }
}
