use crate::contractor::ContractStatus;
use crate::engine::{Ctx, PropStatus, Propagator};
use crate::store::{Contradiction, IntVar, VarId};

use super::{enforce, marshal, probe, RealTerm};

/// `b <=> (f1 and f2 and ...)` over inequalities `fi`.
///
/// `positive[i]` enforces `fi` and `negative[i]` its negation. With `b = 1`
/// every `fi` is enforced. With `b = 0` a negation is enforced once all but
/// one of the `fi` are known to hold. While `b` is open, each `fi` is probed
/// on a copy of the bounds: all entailed fixes `b = 1`, any failure `b = 0`.
pub struct ReifiedReal {
    b: IntVar,
    positive: Vec<usize>,
    negative: Vec<usize>,
    scope: Vec<RealTerm>,
}

impl ReifiedReal {
    pub fn new(
        b: IntVar,
        positive: Vec<usize>,
        negative: Vec<usize>,
        scope: Vec<RealTerm>,
    ) -> ReifiedReal {
        assert_eq!(positive.len(), negative.len());
        ReifiedReal {
            b,
            positive,
            negative,
            scope,
        }
    }

    /// Status of each relation over the current box, computed on copies.
    /// ENTAILED refers to the box a contractor returns, so it only proves
    /// the relation on the current box when no bound moved.
    fn probe_all(&self, ctx: &mut Ctx<'_>) -> Vec<ContractStatus> {
        let mut base = Vec::with_capacity(2 * self.scope.len());
        marshal(ctx.store, &self.scope, &mut base);
        self.positive
            .iter()
            .map(|&id| {
                let mut copy = base.clone();
                match probe(ctx, id, &mut copy) {
                    ContractStatus::Entailed if copy != base => ContractStatus::Contract,
                    s => s,
                }
            })
            .collect()
    }

    fn when_true(&self, ctx: &mut Ctx<'_>) -> Result<PropStatus, Contradiction> {
        let mut all = true;
        for &id in &self.positive {
            all &= enforce(ctx, id, &self.scope)? == ContractStatus::Entailed;
        }
        Ok(if all {
            PropStatus::Entailed
        } else {
            PropStatus::Active
        })
    }

    fn when_false(
        &self,
        ctx: &mut Ctx<'_>,
        statuses: &[ContractStatus],
    ) -> Result<PropStatus, Contradiction> {
        if statuses.contains(&ContractStatus::Fail) {
            return Ok(PropStatus::Entailed);
        }
        let open: Vec<usize> = (0..statuses.len())
            .filter(|&i| statuses[i] != ContractStatus::Entailed)
            .collect();
        match open.as_slice() {
            [] => Err(Contradiction),
            [i] => match enforce(ctx, self.negative[*i], &self.scope)? {
                ContractStatus::Entailed => Ok(PropStatus::Entailed),
                _ => Ok(PropStatus::Active),
            },
            _ => Ok(PropStatus::Active),
        }
    }
}

impl Propagator for ReifiedReal {
    fn name(&self) -> &'static str {
        "reified-real"
    }

    fn watched(&self) -> Vec<VarId> {
        let mut w: Vec<VarId> = self.scope.iter().map(|t| t.var_id()).collect();
        w.push(VarId::Int(self.b));
        w
    }

    fn propagate(&self, ctx: &mut Ctx<'_>) -> Result<PropStatus, Contradiction> {
        ctx.store.int_restrict(self.b, 0, 1)?;
        match ctx.store.dom(self.b).value() {
            Some(1) => self.when_true(ctx),
            Some(_) => {
                let statuses = self.probe_all(ctx);
                self.when_false(ctx, &statuses)
            }
            None => {
                let statuses = self.probe_all(ctx);
                if statuses.contains(&ContractStatus::Fail) {
                    ctx.store.int_fix(self.b, 0)?;
                    Ok(PropStatus::Entailed)
                } else if statuses.iter().all(|&s| s == ContractStatus::Entailed) {
                    ctx.store.int_fix(self.b, 1)?;
                    Ok(PropStatus::Entailed)
                } else {
                    Ok(PropStatus::Active)
                }
            }
        }
    }
}
