use std::fmt;

/// Domain of an integer variable.
///
/// A bounded domain is the range `[lb, ub]` and only ever loses values at
/// its ends; removing an interior value is a no-op. An enumerated domain is
/// an explicit sorted set and can have holes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum IntDomain {
    Bounded { lb: i64, ub: i64 },
    Enumerated(Vec<i64>),
}

impl IntDomain {
    pub fn bounded(lb: i64, ub: i64) -> IntDomain {
        assert!(lb <= ub, "empty range [{lb}, {ub}]");
        IntDomain::Bounded { lb, ub }
    }

    pub fn enumerated(lb: i64, ub: i64) -> IntDomain {
        assert!(lb <= ub, "empty range [{lb}, {ub}]");
        IntDomain::Enumerated((lb..=ub).collect())
    }

    /// From arbitrary values; sorted and deduplicated.
    pub fn from_values(values: impl IntoIterator<Item = i64>) -> IntDomain {
        let mut v: Vec<i64> = values.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        assert!(!v.is_empty(), "empty value set");
        IntDomain::Enumerated(v)
    }

    pub fn lb(&self) -> i64 {
        match self {
            IntDomain::Bounded { lb, .. } => *lb,
            IntDomain::Enumerated(v) => v[0],
        }
    }

    pub fn ub(&self) -> i64 {
        match self {
            IntDomain::Bounded { ub, .. } => *ub,
            IntDomain::Enumerated(v) => v[v.len() - 1],
        }
    }

    pub fn size(&self) -> u64 {
        match self {
            IntDomain::Bounded { lb, ub } => (*ub as i128 - *lb as i128 + 1) as u64,
            IntDomain::Enumerated(v) => v.len() as u64,
        }
    }

    pub fn is_fixed(&self) -> bool {
        self.lb() == self.ub()
    }

    pub fn value(&self) -> Option<i64> {
        self.is_fixed().then(|| self.lb())
    }

    pub fn is_enumerated(&self) -> bool {
        matches!(self, IntDomain::Enumerated(_))
    }

    pub fn contains(&self, x: i64) -> bool {
        match self {
            IntDomain::Bounded { lb, ub } => *lb <= x && x <= *ub,
            IntDomain::Enumerated(v) => v.binary_search(&x).is_ok(),
        }
    }

    pub fn values(&self) -> Box<dyn Iterator<Item = i64> + '_> {
        match self {
            IntDomain::Bounded { lb, ub } => Box::new(*lb..=*ub),
            IntDomain::Enumerated(v) => Box::new(v.iter().copied()),
        }
    }

    /// Smallest value `>= x`, if any.
    pub fn next_at_least(&self, x: i64) -> Option<i64> {
        match self {
            IntDomain::Bounded { lb, ub } => (x <= *ub).then(|| x.max(*lb)),
            IntDomain::Enumerated(v) => {
                let i = v.partition_point(|&y| y < x);
                v.get(i).copied()
            }
        }
    }

    /// Largest value `<= x`, if any.
    pub fn prev_at_most(&self, x: i64) -> Option<i64> {
        match self {
            IntDomain::Bounded { lb, ub } => (x >= *lb).then(|| x.min(*ub)),
            IntDomain::Enumerated(v) => {
                let i = v.partition_point(|&y| y <= x);
                (i > 0).then(|| v[i - 1])
            }
        }
    }

    /// Restricts to `[lo, hi]`. Returns `None` if nothing is left, otherwise
    /// whether the domain changed.
    pub(crate) fn restrict(&mut self, lo: i64, hi: i64) -> Option<bool> {
        let (cur_lo, cur_hi) = (self.lb(), self.ub());
        if lo <= cur_lo && hi >= cur_hi {
            return Some(false);
        }
        match self {
            IntDomain::Bounded { lb, ub } => {
                let (nlb, nub) = (lo.max(*lb), hi.min(*ub));
                if nlb > nub {
                    return None;
                }
                *lb = nlb;
                *ub = nub;
            }
            IntDomain::Enumerated(v) => {
                let start = v.partition_point(|&y| y < lo);
                let end = v.partition_point(|&y| y <= hi);
                if start >= end {
                    return None;
                }
                v.truncate(end);
                v.drain(..start);
            }
        }
        Some(true)
    }

    /// Removes `x`. Bounded domains only lose `x` when it is a bound.
    pub(crate) fn remove(&mut self, x: i64) -> Option<bool> {
        match self {
            IntDomain::Bounded { lb, ub } => {
                if x == *lb && x == *ub {
                    None
                } else if x == *lb {
                    *lb += 1;
                    Some(true)
                } else if x == *ub {
                    *ub -= 1;
                    Some(true)
                } else {
                    Some(false)
                }
            }
            IntDomain::Enumerated(v) => match v.binary_search(&x) {
                Ok(_) if v.len() == 1 => None,
                Ok(i) => {
                    v.remove(i);
                    Some(true)
                }
                Err(_) => Some(false),
            },
        }
    }

    /// Keeps the values satisfying `keep`. Bounded domains only shrink from
    /// the ends.
    pub(crate) fn retain(&mut self, mut keep: impl FnMut(i64) -> bool) -> Option<bool> {
        match self {
            IntDomain::Bounded { lb, ub } => {
                let mut lo = *lb;
                while lo <= *ub && !keep(lo) {
                    lo += 1;
                }
                if lo > *ub {
                    return None;
                }
                let mut hi = *ub;
                while hi > lo && !keep(hi) {
                    hi -= 1;
                }
                let changed = lo != *lb || hi != *ub;
                *lb = lo;
                *ub = hi;
                Some(changed)
            }
            IntDomain::Enumerated(v) => {
                let before = v.len();
                v.retain(|&x| keep(x));
                if v.is_empty() {
                    None
                } else {
                    Some(v.len() != before)
                }
            }
        }
    }
}

impl fmt::Display for IntDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntDomain::Bounded { lb, ub } => write!(f, "[{lb}..{ub}]"),
            IntDomain::Enumerated(v) => {
                f.write_str("{")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str("}")
            }
        }
    }
}
