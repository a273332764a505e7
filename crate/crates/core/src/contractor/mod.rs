//! HC4 contraction behind the `contract(index, bounds) -> status` protocol.
//!
//! Contractors are created once, identified by creation order, and are
//! immutable afterwards. [`ContractorRegistry::contract`] is a pure function
//! of its inputs and may be called from several threads at once.

mod tape;

use thiserror::Error;

use crate::expr::{ParseError, Relation};
use crate::interval::Interval;
use tape::{judge, Tape, Verdict};

/// Result of one contract call. The discriminants are the wire codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(i32)]
pub enum ContractStatus {
    /// No point of the box satisfies the constraint.
    Fail = 0,
    /// Every point of the (returned) box satisfies the constraint.
    Entailed = 1,
    /// At least one bound strictly changed.
    Contract = 2,
    /// No bound changed and nothing could be proven.
    Nothing = 3,
}

impl ContractStatus {
    pub fn code(self) -> i32 {
        self as i32
    }

    pub fn from_code(code: i32) -> Option<ContractStatus> {
        match code {
            0 => Some(ContractStatus::Fail),
            1 => Some(ContractStatus::Entailed),
            2 => Some(ContractStatus::Contract),
            3 => Some(ContractStatus::Nothing),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ContractStatus::Fail => "FAIL",
            ContractStatus::Entailed => "ENTAILED",
            ContractStatus::Contract => "CONTRACT",
            ContractStatus::Nothing => "NOTHING",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ContractError {
    #[error("function #{index} ({function:?}): {source}")]
    Parse {
        index: usize,
        function: String,
        #[source]
        source: ParseError,
    },
    #[error("a contractor needs at least one function")]
    NoFunctions,
    #[error("unknown contractor {0}")]
    UnknownContractor(usize),
    #[error("malformed bounds: {0}")]
    MalformedBounds(String),
}

/// Stopping rule of the propagation loop over a contractor's relations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixpointConfig {
    /// A round counts as progress only if some interval lost more than this
    /// fraction of its width.
    pub ratio: f64,
    /// Hard cap on rounds.
    pub max_rounds: usize,
}

impl Default for FixpointConfig {
    fn default() -> Self {
        FixpointConfig {
            ratio: 0.01,
            max_rounds: 1000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Contractor {
    relations: Vec<Relation>,
    tapes: Vec<Tape>,
    arity: usize,
}

impl Contractor {
    pub fn new(relations: Vec<Relation>, arity: usize) -> Contractor {
        assert!(
            relations.iter().all(|r| r.min_arity() <= arity),
            "relation references a variable beyond the arity"
        );
        let tapes = relations.iter().map(Tape::compile).collect();
        Contractor {
            relations,
            tapes,
            arity,
        }
    }

    /// Parses each function against `arity`.
    pub fn parse<S: AsRef<str>>(
        functions: &[S],
        arity: usize,
    ) -> Result<Contractor, ContractError> {
        if functions.is_empty() {
            return Err(ContractError::NoFunctions);
        }
        let relations = functions
            .iter()
            .enumerate()
            .map(|(index, f)| {
                Relation::parse(f.as_ref(), arity).map_err(|source| ContractError::Parse {
                    index,
                    function: f.as_ref().to_string(),
                    source,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Contractor::new(relations, arity))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    /// One HC4 sweep of relation `i`. Returns false if the box became empty.
    pub fn revise(&self, i: usize, domains: &mut [Interval]) -> bool {
        self.tapes[i].revise(domains, &mut Vec::with_capacity(self.tapes[i].len()))
    }

    /// Round-robin revision until no width shrinks by more than
    /// `config.ratio`. Returns false if the box became empty.
    pub fn fixpoint(&self, domains: &mut [Interval], config: &FixpointConfig) -> bool {
        if domains.iter().any(|d| d.is_empty()) {
            return false;
        }
        let mut values = Vec::with_capacity(self.tapes.iter().map(Tape::len).max().unwrap_or(0));
        let mut before = domains.to_vec();
        for _ in 0..config.max_rounds.max(1) {
            before.copy_from_slice(domains);
            for t in &self.tapes {
                if !t.revise(domains, &mut values) {
                    return false;
                }
            }
            let progress = before
                .iter()
                .zip(domains.iter())
                .any(|(&old, &new)| shrank(old, new, config.ratio));
            if !progress {
                break;
            }
        }
        true
    }

    /// Contracts `domains` in place and classifies the outcome. On
    /// [`ContractStatus::Fail`] the content of `domains` is unspecified.
    pub fn contract_box(
        &self,
        domains: &mut [Interval],
        config: &FixpointConfig,
    ) -> ContractStatus {
        debug_assert_eq!(domains.len(), self.arity);
        let input = domains.to_vec();
        if !self.fixpoint(domains, config) {
            return ContractStatus::Fail;
        }
        let mut all_hold = true;
        for r in &self.relations {
            match judge(r, domains) {
                Verdict::Violated => return ContractStatus::Fail,
                Verdict::Unknown => all_hold = false,
                Verdict::Holds => {}
            }
        }
        if all_hold {
            ContractStatus::Entailed
        } else if input != domains {
            ContractStatus::Contract
        } else {
            ContractStatus::Nothing
        }
    }
}

fn shrank(old: Interval, new: Interval, ratio: f64) -> bool {
    if old == new {
        return false;
    }
    let (w0, w1) = (old.width(), new.width());
    if w0.is_infinite() {
        // A bound that becomes finite is progress; moves of a finite bound
        // of a half-line are measured against the bound's magnitude.
        if w1.is_finite() || (old.lo().is_infinite() != new.lo().is_infinite()) {
            return true;
        }
        let moved = |a: f64, b: f64| a.is_finite() && (a - b).abs() > ratio * a.abs().max(1.0);
        return moved(old.lo(), new.lo()) || moved(old.hi(), new.hi());
    }
    w0 - w1 > ratio * w0
}

/// Contractors in creation order.
#[derive(Clone, Debug, Default)]
pub struct ContractorRegistry {
    contractors: Vec<Contractor>,
    config: FixpointConfig,
}

impl ContractorRegistry {
    pub fn new() -> ContractorRegistry {
        ContractorRegistry::default()
    }

    pub fn with_config(config: FixpointConfig) -> ContractorRegistry {
        ContractorRegistry {
            contractors: Vec::new(),
            config,
        }
    }

    pub fn config(&self) -> &FixpointConfig {
        &self.config
    }

    /// Parses `functions` (all over the same `arity` variables) into one
    /// contractor and returns its id.
    pub fn create_contractor<S: AsRef<str>>(
        &mut self,
        functions: &[S],
        arity: usize,
    ) -> Result<usize, ContractError> {
        let c = Contractor::parse(functions, arity)?;
        self.contractors.push(c);
        Ok(self.contractors.len() - 1)
    }

    pub fn len(&self) -> usize {
        self.contractors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.contractors.is_empty()
    }

    pub fn get(&self, id: usize) -> Option<&Contractor> {
        self.contractors.get(id)
    }

    /// Contracts the flat bounds `(x1-, x1+, ..., xn-, xn+)` in place.
    ///
    /// Only components that changed are written back, so an unchanged box
    /// keeps its exact input bits. On FAIL the buffer is left untouched.
    pub fn contract(&self, id: usize, bounds: &mut [f64]) -> Result<ContractStatus, ContractError> {
        let c = self
            .contractors
            .get(id)
            .ok_or(ContractError::UnknownContractor(id))?;
        let mut domains = read_bounds(bounds, c.arity)?;
        let status = c.contract_box(&mut domains, &self.config);
        if status != ContractStatus::Fail {
            for (k, d) in domains.iter().enumerate() {
                if bounds[2 * k] != d.lo() || bounds[2 * k + 1] != d.hi() {
                    bounds[2 * k] = d.lo();
                    bounds[2 * k + 1] = d.hi();
                }
            }
        }
        Ok(status)
    }
}

/// Validates a flat bounds sequence against `arity`.
pub fn read_bounds(bounds: &[f64], arity: usize) -> Result<Vec<Interval>, ContractError> {
    if !bounds.len().is_multiple_of(2) {
        return Err(ContractError::MalformedBounds(format!(
            "odd length {}",
            bounds.len()
        )));
    }
    if bounds.len() != 2 * arity {
        return Err(ContractError::MalformedBounds(format!(
            "expected {} values for arity {arity}, got {}",
            2 * arity,
            bounds.len()
        )));
    }
    bounds
        .chunks_exact(2)
        .enumerate()
        .map(|(k, pair)| {
            let (lo, hi) = (pair[0], pair[1]);
            if lo.is_nan()
                || hi.is_nan()
                || lo > hi
                || lo == f64::INFINITY
                || hi == f64::NEG_INFINITY
            {
                Err(ContractError::MalformedBounds(format!(
                    "variable {k}: [{lo}, {hi}] is not an interval"
                )))
            } else {
                Ok(Interval::new(lo, hi))
            }
        })
        .collect()
}
