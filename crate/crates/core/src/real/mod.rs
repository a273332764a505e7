//! Continuous constraints: real variables, real views of integer variables,
//! and the propagators that hand their bounds to a contractor.

mod reif;

pub use reif::ReifiedReal;

use crate::contractor::ContractStatus;
use crate::engine::{Ctx, PropStatus, Propagator};
use crate::interval::Interval;
use crate::store::{Contradiction, IntVar, RealVar, Store, VarId};

/// A variable as seen by a continuous constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RealTerm {
    Var(RealVar),
    /// An integer variable read as a real.
    View(IntVar),
}

impl RealTerm {
    pub fn var_id(self) -> VarId {
        match self {
            RealTerm::Var(v) => VarId::Real(v),
            RealTerm::View(v) => VarId::Int(v),
        }
    }
}

/// Largest double not above `x`.
fn int_down(x: i64) -> f64 {
    let f = x as f64;
    if f as i128 > x as i128 {
        f.next_down()
    } else {
        f
    }
}

/// Smallest double not below `x`.
fn int_up(x: i64) -> f64 {
    let f = x as f64;
    if (f as i128) < x as i128 {
        f.next_up()
    } else {
        f
    }
}

pub fn bounds_of(store: &Store, t: RealTerm) -> Interval {
    match t {
        RealTerm::Var(v) => store.real(v),
        RealTerm::View(v) => Interval::new(int_down(store.lb(v)), int_up(store.ub(v))),
    }
}

/// Narrows `t` to `[lo, hi]`. A view rounds inward to the integers
/// `ceil(lo)..=floor(hi)` of its base variable.
pub fn update_bounds(
    store: &mut Store,
    t: RealTerm,
    lo: f64,
    hi: f64,
) -> Result<bool, Contradiction> {
    match t {
        RealTerm::Var(v) => store.real_restrict(v, lo, hi, false),
        RealTerm::View(v) => {
            let (ilo, ihi) = (lo.ceil(), hi.floor());
            if ilo > ihi {
                return Err(Contradiction);
            }
            // Saturating float-to-int conversion keeps out-of-range bounds
            // at the representable extremes.
            store.int_restrict(v, ilo as i64, ihi as i64)
        }
    }
}

/// Copies the scope's bounds into the flat `(lo, hi, lo, hi, ...)` layout.
pub(crate) fn marshal(store: &Store, scope: &[RealTerm], out: &mut Vec<f64>) {
    out.clear();
    for &t in scope {
        let d = bounds_of(store, t);
        out.push(d.lo());
        out.push(d.hi());
    }
}

pub(crate) fn write_back(
    store: &mut Store,
    scope: &[RealTerm],
    bounds: &[f64],
) -> Result<(), Contradiction> {
    for (k, &t) in scope.iter().enumerate() {
        update_bounds(store, t, bounds[2 * k], bounds[2 * k + 1])?;
    }
    Ok(())
}

/// Applies contractor `id` to `scope` and writes the result back.
pub(crate) fn enforce(
    ctx: &mut Ctx<'_>,
    id: usize,
    scope: &[RealTerm],
) -> Result<ContractStatus, Contradiction> {
    let mut bounds = Vec::with_capacity(2 * scope.len());
    marshal(ctx.store, scope, &mut bounds);
    let status = probe(ctx, id, &mut bounds);
    match status {
        ContractStatus::Fail => return Err(Contradiction),
        ContractStatus::Contract | ContractStatus::Entailed => {
            write_back(ctx.store, scope, &bounds)?;
            ctx.stats.marshalled += bounds.len() as u64;
        }
        ContractStatus::Nothing => {}
    }
    Ok(status)
}

/// Runs contractor `id` on `bounds` without touching the store.
pub(crate) fn probe(ctx: &mut Ctx<'_>, id: usize, bounds: &mut [f64]) -> ContractStatus {
    ctx.stats.contract_calls += 1;
    ctx.stats.marshalled += bounds.len() as u64;
    ctx.registry
        .contract(id, bounds)
        .unwrap_or_else(|e| panic!("contractor {id} rejected its own scope: {e}"))
}

/// One contractor over an ordered scope; `{k}` in the contractor's functions
/// denotes `scope[k]`.
pub struct RealPropagator {
    contractor: usize,
    scope: Vec<RealTerm>,
}

impl RealPropagator {
    pub fn new(contractor: usize, scope: Vec<RealTerm>) -> RealPropagator {
        RealPropagator { contractor, scope }
    }

    pub fn contractor(&self) -> usize {
        self.contractor
    }

    pub fn scope(&self) -> &[RealTerm] {
        &self.scope
    }
}

impl Propagator for RealPropagator {
    fn name(&self) -> &'static str {
        "real"
    }

    fn watched(&self) -> Vec<VarId> {
        self.scope.iter().map(|t| t.var_id()).collect()
    }

    fn propagate(&self, ctx: &mut Ctx<'_>) -> Result<PropStatus, Contradiction> {
        match enforce(ctx, self.contractor, &self.scope)? {
            ContractStatus::Entailed => Ok(PropStatus::Entailed),
            _ => Ok(PropStatus::Active),
        }
    }
}

/// Branching choice on a real variable: the one with the largest width
/// relative to `max(1, |mid|)` among those wider than their precision.
pub fn select_real(store: &Store, vars: &[RealVar]) -> Option<(RealVar, f64)> {
    let mut best: Option<(RealVar, f64, f64)> = None;
    for &v in vars {
        if store.real_instantiated(v) {
            continue;
        }
        let d = store.real(v);
        let mid = d.mid();
        // An interval with no double strictly inside cannot be split.
        if !(mid > d.lo() && mid < d.hi()) {
            continue;
        }
        let score = d.width() / mid.abs().max(1.0);
        if best.is_none_or(|(_, _, s)| score > s) {
            best = Some((v, mid, score));
        }
    }
    best.map(|(v, mid, _)| (v, mid))
}
