//! NIG summation and the mixture-of-NIG fold over pixels and grids.

use crate::error::{Error, Result};
use crate::maps::EvidentialMap;
use crate::nig::NigParams;

/// Combines two NIG distributions.
///
/// δ is the γ-weighted mean of the inputs, γ and α accumulate, and β picks up
/// the spread of each input δ around the fused δ. The result is symmetric in
/// its arguments bit for bit.
pub fn nig_sum(a: &NigParams, b: &NigParams) -> Result<NigParams> {
    a.validate()?;
    b.validate()?;
    let out = nig_sum_unchecked(a, b);
    out.validate()?;
    Ok(out)
}

pub(crate) fn nig_sum_unchecked(a: &NigParams, b: &NigParams) -> NigParams {
    let gamma = a.gamma + b.gamma;
    // Clamped so rounding never leaves [min δ, max δ]; equal inputs stay exact.
    let delta = ((a.gamma * a.delta + b.gamma * b.delta) / gamma)
        .clamp(a.delta.min(b.delta), a.delta.max(b.delta));
    let alpha = a.alpha + b.alpha + 0.5;
    let spread_a = 0.5 * a.gamma * (a.delta - delta).powi(2);
    let spread_b = 0.5 * b.gamma * (b.delta - delta).powi(2);
    let beta = (a.beta + b.beta) + (spread_a + spread_b);
    NigParams { delta, gamma, alpha, beta }
}

/// Left fold of [`nig_sum`]; a single input is returned unchanged.
pub fn monig_fold(inputs: &[NigParams]) -> Result<NigParams> {
    let (first, rest) = inputs
        .split_first()
        .ok_or(Error::EmptyInput("monig_fold needs at least one input"))?;
    first.validate()?;
    let mut acc = *first;
    for p in rest {
        acc = nig_sum(&acc, p)?;
    }
    Ok(acc)
}

/// Inputs and result of one fold, with the γ share of each input.
#[derive(Debug, Clone, PartialEq)]
pub struct FusionTrace {
    pub inputs: Vec<NigParams>,
    pub output: NigParams,
    pub weights: Vec<f64>,
}

pub fn trace(inputs: &[NigParams]) -> Result<FusionTrace> {
    let output = monig_fold(inputs)?;
    let total: f64 = inputs.iter().map(|p| p.gamma).sum();
    Ok(FusionTrace {
        inputs: inputs.to_vec(),
        output,
        weights: inputs.iter().map(|p| p.gamma / total).collect(),
    })
}

/// Per-pixel fold of three multi-scale branch outputs.
pub fn intra_fuse(maps: [&EvidentialMap; 3]) -> Result<EvidentialMap> {
    let dims = maps[0].dims();
    for m in &maps[1..] {
        if m.dims() != dims {
            return Err(Error::shape(dims, m.dims()));
        }
    }
    EvidentialMap::par_from_rows(dims.0, dims.1, |y| {
        (0..dims.0)
            .map(|x| {
                let pixel = [maps[0].get(x, y), maps[1].get(x, y), maps[2].get(x, y)];
                monig_fold(&pixel).map_err(|e| pixel_error(e, x, y))
            })
            .collect()
    })
}

/// Per-pixel [`nig_sum`] of the local and global branch outputs.
pub fn inter_fuse(local: &EvidentialMap, global: &EvidentialMap) -> Result<EvidentialMap> {
    let dims = local.dims();
    if global.dims() != dims {
        return Err(Error::shape(dims, global.dims()));
    }
    EvidentialMap::par_from_rows(dims.0, dims.1, |y| {
        (0..dims.0)
            .map(|x| nig_sum(&local.get(x, y), &global.get(x, y)).map_err(|e| pixel_error(e, x, y)))
            .collect()
    })
}

fn pixel_error(e: Error, x: usize, y: usize) -> Error {
    match e {
        Error::Domain(d) => Error::at_pixel(d, x, y),
        other => other,
    }
}
