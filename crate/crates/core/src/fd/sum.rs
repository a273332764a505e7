use crate::engine::{Ctx, PropStatus, Propagator};
use crate::store::{Contradiction, IntVar, VarId};

/// `vars[0] + ... + vars[n-1] = total`, bounds consistent.
pub struct Sum {
    vars: Vec<IntVar>,
    total: IntVar,
}

impl Sum {
    pub fn new(vars: Vec<IntVar>, total: IntVar) -> Sum {
        Sum { vars, total }
    }
}

fn clamp(x: i128) -> i64 {
    x.clamp(i64::MIN as i128, i64::MAX as i128) as i64
}

impl Propagator for Sum {
    fn name(&self) -> &'static str {
        "sum"
    }

    fn watched(&self) -> Vec<VarId> {
        let mut w: Vec<VarId> = self.vars.iter().map(|&v| VarId::Int(v)).collect();
        w.push(VarId::Int(self.total));
        w
    }

    fn propagate(&self, ctx: &mut Ctx<'_>) -> Result<PropStatus, Contradiction> {
        let s = &mut *ctx.store;
        loop {
            let mut changed = false;
            let sum_lb: i128 = self.vars.iter().map(|&v| s.lb(v) as i128).sum();
            let sum_ub: i128 = self.vars.iter().map(|&v| s.ub(v) as i128).sum();
            changed |= s.int_restrict(self.total, clamp(sum_lb), clamp(sum_ub))?;
            let (t_lb, t_ub) = (s.lb(self.total) as i128, s.ub(self.total) as i128);
            for &v in &self.vars {
                let (lb, ub) = (s.lb(v) as i128, s.ub(v) as i128);
                let lo = t_lb - (sum_ub - ub);
                let hi = t_ub - (sum_lb - lb);
                changed |= s.int_restrict(v, clamp(lo), clamp(hi))?;
            }
            if !changed {
                break;
            }
        }
        let all_fixed = self.vars.iter().all(|&v| s.dom(v).is_fixed());
        Ok(if all_fixed && s.dom(self.total).is_fixed() {
            PropStatus::Entailed
        } else {
            PropStatus::Active
        })
    }
}
