//! Many boxes through one contractor.
//!
//! Boxes are stored back to back in one flat buffer, each in the usual
//! `(x1-, x1+, ..., xn-, xn+)` layout. With the `parallel` feature the boxes
//! are contracted on the rayon thread pool; without it, or through
//! [`contract_batch_sequential`], one after another. Both give identical
//! results since `contract` is a pure function.

use crate::contractor::{ContractError, ContractStatus, ContractorRegistry};

fn stride(registry: &ContractorRegistry, id: usize, flat: &[f64]) -> Result<usize, ContractError> {
    let c = registry
        .get(id)
        .ok_or(ContractError::UnknownContractor(id))?;
    let stride = 2 * c.arity();
    if stride == 0 {
        return Err(ContractError::MalformedBounds(
            "batch contraction needs a contractor with variables".into(),
        ));
    }
    if !flat.len().is_multiple_of(stride) {
        return Err(ContractError::MalformedBounds(format!(
            "buffer length {} is not a multiple of {stride}",
            flat.len()
        )));
    }
    Ok(stride)
}

pub fn contract_batch_sequential(
    registry: &ContractorRegistry,
    id: usize,
    flat: &mut [f64],
) -> Result<Vec<ContractStatus>, ContractError> {
    let stride = stride(registry, id, flat)?;
    flat.chunks_mut(stride)
        .map(|b| registry.contract(id, b))
        .collect()
}

#[cfg(feature = "parallel")]
pub fn contract_batch(
    registry: &ContractorRegistry,
    id: usize,
    flat: &mut [f64],
) -> Result<Vec<ContractStatus>, ContractError> {
    use rayon::prelude::*;
    let stride = stride(registry, id, flat)?;
    flat.par_chunks_mut(stride)
        .map(|b| registry.contract(id, b))
        .collect()
}

#[cfg(not(feature = "parallel"))]
pub fn contract_batch(
    registry: &ContractorRegistry,
    id: usize,
    flat: &mut [f64],
) -> Result<Vec<ContractStatus>, ContractError> {
    contract_batch_sequential(registry, id, flat)
}
