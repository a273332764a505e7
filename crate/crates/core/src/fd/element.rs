use crate::engine::{Ctx, PropStatus, Propagator};
use crate::store::{Contradiction, IntVar, VarId};

/// `value = table[index]`, arc consistent (bounds only when `value` has a
/// bounded domain).
pub struct Element {
    value: IntVar,
    table: Vec<i64>,
    index: IntVar,
}

impl Element {
    pub fn new(value: IntVar, table: Vec<i64>, index: IntVar) -> Element {
        assert!(!table.is_empty(), "element table is empty");
        Element {
            value,
            table,
            index,
        }
    }
}

impl Propagator for Element {
    fn name(&self) -> &'static str {
        "element"
    }

    fn watched(&self) -> Vec<VarId> {
        vec![VarId::Int(self.value), VarId::Int(self.index)]
    }

    fn propagate(&self, ctx: &mut Ctx<'_>) -> Result<PropStatus, Contradiction> {
        let s = &mut *ctx.store;
        let last = self.table.len() as i64 - 1;
        s.int_restrict(self.index, 0, last)?;

        let mut supported: Vec<i64> = s
            .dom(self.index)
            .values()
            .map(|i| self.table[i as usize])
            .collect();
        supported.sort_unstable();
        supported.dedup();
        s.int_retain(self.value, |v| supported.binary_search(&v).is_ok())?;

        let table = &self.table;
        let value_dom = s.dom(self.value).clone();
        s.int_retain(self.index, |i| value_dom.contains(table[i as usize]))?;

        if s.dom(self.index).is_fixed() {
            Ok(PropStatus::Entailed)
        } else {
            Ok(PropStatus::Active)
        }
    }
}
