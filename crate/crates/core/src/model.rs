//! Model construction.

use thiserror::Error;

use crate::contractor::{ContractError, ContractorRegistry, FixpointConfig};
use crate::engine::{Engine, Propagator};
use crate::expr::{RelOp, Relation};
use crate::fd::{AllDifferent, Element, IntDomain, Sum};
use crate::real::{RealPropagator, RealTerm, ReifiedReal};
use crate::search::{SearchConfig, Solver};
use crate::store::{IntVar, RealVar, Store};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ModelError {
    #[error(transparent)]
    Contract(#[from] ContractError),
    #[error("function {function:?} is an equality; only inequalities can be reified")]
    ReifiedEquality { function: String },
    #[error("invalid domain for {name}: {reason}")]
    Domain { name: String, reason: String },
    #[error("{0}")]
    Invalid(String),
}

/// Variables and constraints, before search.
pub struct Model {
    pub(crate) store: Store,
    pub(crate) engine: Engine,
    pub(crate) registry: ContractorRegistry,
    pub(crate) int_names: Vec<String>,
    pub(crate) real_names: Vec<String>,
}

impl Default for Model {
    fn default() -> Self {
        Model::new()
    }
}

impl Model {
    pub fn new() -> Model {
        Model::with_fixpoint_config(FixpointConfig::default())
    }

    pub fn with_fixpoint_config(config: FixpointConfig) -> Model {
        Model {
            store: Store::new(),
            engine: Engine::new(),
            registry: ContractorRegistry::with_config(config),
            int_names: Vec::new(),
            real_names: Vec::new(),
        }
    }

    fn add_int(&mut self, name: &str, dom: IntDomain) -> IntVar {
        self.int_names.push(name.to_string());
        self.store.new_int(dom)
    }

    fn check_range(name: &str, lb: i64, ub: i64) -> Result<(), ModelError> {
        if lb > ub {
            return Err(ModelError::Domain {
                name: name.to_string(),
                reason: format!("lb {lb} > ub {ub}"),
            });
        }
        Ok(())
    }

    /// Integer variable over the range `[lb, ub]` (bounds reasoning only).
    pub fn int_var(&mut self, name: &str, lb: i64, ub: i64) -> Result<IntVar, ModelError> {
        Model::check_range(name, lb, ub)?;
        Ok(self.add_int(name, IntDomain::bounded(lb, ub)))
    }

    /// Integer variable over the explicit set `lb..=ub`.
    pub fn int_var_enumerated(
        &mut self,
        name: &str,
        lb: i64,
        ub: i64,
    ) -> Result<IntVar, ModelError> {
        Model::check_range(name, lb, ub)?;
        if (ub as i128 - lb as i128) >= 1 << 24 {
            return Err(ModelError::Domain {
                name: name.to_string(),
                reason: "enumerated domain too large".into(),
            });
        }
        Ok(self.add_int(name, IntDomain::enumerated(lb, ub)))
    }

    pub fn int_var_values(&mut self, name: &str, values: &[i64]) -> Result<IntVar, ModelError> {
        if values.is_empty() {
            return Err(ModelError::Domain {
                name: name.to_string(),
                reason: "no values".into(),
            });
        }
        Ok(self.add_int(name, IntDomain::from_values(values.iter().copied())))
    }

    pub fn real_var(
        &mut self,
        name: &str,
        lb: f64,
        ub: f64,
        precision: f64,
    ) -> Result<RealVar, ModelError> {
        if lb.is_nan() || ub.is_nan() || lb > ub || lb == f64::INFINITY || ub == f64::NEG_INFINITY {
            return Err(ModelError::Domain {
                name: name.to_string(),
                reason: format!("[{lb}, {ub}] is not an interval"),
            });
        }
        if precision.is_nan() || precision <= 0.0 {
            return Err(ModelError::Domain {
                name: name.to_string(),
                reason: format!("precision must be positive, got {precision}"),
            });
        }
        self.real_names.push(name.to_string());
        Ok(self.store.new_real(lb, ub, precision))
    }

    pub fn add_propagator(&mut self, p: Box<dyn Propagator>) -> usize {
        self.engine.add(&mut self.store, p)
    }

    pub fn all_different(&mut self, vars: &[IntVar]) -> usize {
        self.add_propagator(Box::new(AllDifferent::new(vars.to_vec())))
    }

    /// `value = table[index]`
    pub fn element(
        &mut self,
        value: IntVar,
        table: &[i64],
        index: IntVar,
    ) -> Result<usize, ModelError> {
        if table.is_empty() {
            return Err(ModelError::Invalid("element table is empty".into()));
        }
        Ok(self.add_propagator(Box::new(Element::new(value, table.to_vec(), index))))
    }

    /// `sum(vars) = total`
    pub fn sum(&mut self, vars: &[IntVar], total: IntVar) -> usize {
        self.add_propagator(Box::new(Sum::new(vars.to_vec(), total)))
    }

    /// Posts each function as its own contractor and propagator over `scope`
    /// (`{k}` denotes `scope[k]`). Returns the propagator ids.
    pub fn real_constraint<S: AsRef<str>>(
        &mut self,
        functions: &[S],
        scope: &[RealTerm],
    ) -> Result<Vec<usize>, ModelError> {
        let ids = self.create_contractors(functions, scope.len())?;
        Ok(ids
            .into_iter()
            .map(|id| self.add_propagator(Box::new(RealPropagator::new(id, scope.to_vec()))))
            .collect())
    }

    /// `b <=> (all functions hold)`; every function must be an inequality.
    pub fn reified<S: AsRef<str>>(
        &mut self,
        b: IntVar,
        functions: &[S],
        scope: &[RealTerm],
    ) -> Result<usize, ModelError> {
        let mut negated = Vec::with_capacity(functions.len());
        for (index, f) in functions.iter().enumerate() {
            let r = Relation::parse(f.as_ref(), scope.len()).map_err(|source| {
                ContractError::Parse {
                    index,
                    function: f.as_ref().to_string(),
                    source,
                }
            })?;
            if r.op == RelOp::Eq {
                return Err(ModelError::ReifiedEquality {
                    function: f.as_ref().to_string(),
                });
            }
            negated.push(r.negated().unwrap().to_string());
        }
        let positive = self.create_contractors(functions, scope.len())?;
        let negative = self.create_contractors(&negated, scope.len())?;
        Ok(self.add_propagator(Box::new(ReifiedReal::new(
            b,
            positive,
            negative,
            scope.to_vec(),
        ))))
    }

    fn create_contractors<S: AsRef<str>>(
        &mut self,
        functions: &[S],
        arity: usize,
    ) -> Result<Vec<usize>, ModelError> {
        if functions.is_empty() {
            return Err(ContractError::NoFunctions.into());
        }
        // Parse everything first so a bad function leaves the registry as is.
        for (index, f) in functions.iter().enumerate() {
            Relation::parse(f.as_ref(), arity).map_err(|source| ContractError::Parse {
                index,
                function: f.as_ref().to_string(),
                source,
            })?;
        }
        functions
            .iter()
            .map(|f| Ok(self.registry.create_contractor(&[f.as_ref()], arity)?))
            .collect()
    }

    pub fn store(&self) -> &Store {
        &self.store
    }

    pub fn registry(&self) -> &ContractorRegistry {
        &self.registry
    }

    pub fn num_propagators(&self) -> usize {
        self.engine.len()
    }

    pub fn int_vars(&self) -> Vec<IntVar> {
        (0..self.store.num_ints()).map(IntVar).collect()
    }

    pub fn real_vars(&self) -> Vec<RealVar> {
        (0..self.store.num_reals()).map(RealVar).collect()
    }

    pub fn int_name(&self, v: IntVar) -> &str {
        &self.int_names[v.0]
    }

    pub fn real_name(&self, v: RealVar) -> &str {
        &self.real_names[v.0]
    }

    pub fn solver(self, config: SearchConfig) -> Solver {
        Solver::new(self, config)
    }
}
