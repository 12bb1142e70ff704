//! Grid-valued evidential parameters and disparity fields.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::nig::NigParams;

/// An H×W grid of [`NigParams`], stored as four row-major planes.
///
/// Every pixel is valid by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct EvidentialMap {
    width: usize,
    height: usize,
    delta: Vec<f64>,
    gamma: Vec<f64>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

impl EvidentialMap {
    /// Builds a map from row-major pixels, validating each one.
    pub fn from_params(width: usize, height: usize, pixels: &[NigParams]) -> Result<Self> {
        check_len(width, height, pixels.len())?;
        let mut map = EvidentialMap {
            width,
            height,
            delta: Vec::with_capacity(pixels.len()),
            gamma: Vec::with_capacity(pixels.len()),
            alpha: Vec::with_capacity(pixels.len()),
            beta: Vec::with_capacity(pixels.len()),
        };
        for (i, p) in pixels.iter().enumerate() {
            p.validate().map_err(|e| Error::at_pixel(e, i % width.max(1), i / width.max(1)))?;
            map.delta.push(p.delta);
            map.gamma.push(p.gamma);
            map.alpha.push(p.alpha);
            map.beta.push(p.beta);
        }
        Ok(map)
    }

    /// Builds a map from δ, γ, α, β planes.
    pub fn from_planes(width: usize, height: usize, planes: [Vec<f64>; 4]) -> Result<Self> {
        for plane in &planes {
            check_len(width, height, plane.len())?;
        }
        let [delta, gamma, alpha, beta] = planes;
        let map = EvidentialMap { width, height, delta, gamma, alpha, beta };
        for y in 0..height {
            for x in 0..width {
                map.get(x, y).validate().map_err(|e| Error::at_pixel(e, x, y))?;
            }
        }
        Ok(map)
    }

    pub fn uniform(width: usize, height: usize, params: NigParams) -> Result<Self> {
        Self::from_params(width, height, &vec![params; width * height])
    }

    /// Builds a map row by row in parallel. Rows are independent, so the result
    /// is bit-identical to a sequential pass; on failure the error of the
    /// first offending row (top to bottom) is returned.
    pub fn par_from_rows<F>(width: usize, height: usize, row: F) -> Result<Self>
    where
        F: Fn(usize) -> Result<Vec<NigParams>> + Sync,
    {
        let rows: Vec<Result<Vec<NigParams>>> = (0..height).into_par_iter().map(&row).collect();
        Self::assemble(width, height, rows)
    }

    /// Sequential counterpart of [`EvidentialMap::par_from_rows`].
    pub fn from_rows<F>(width: usize, height: usize, row: F) -> Result<Self>
    where
        F: Fn(usize) -> Result<Vec<NigParams>>,
    {
        let rows: Vec<Result<Vec<NigParams>>> = (0..height).map(row).collect();
        Self::assemble(width, height, rows)
    }

    fn assemble(width: usize, height: usize, rows: Vec<Result<Vec<NigParams>>>) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width * height);
        for (y, row) in rows.into_iter().enumerate() {
            let row = row?;
            if row.len() != width {
                return Err(Error::shape((width, 1), (row.len(), 1)));
            }
            for (x, p) in row.iter().enumerate() {
                p.validate().map_err(|e| Error::at_pixel(e, x, y))?;
            }
            pixels.extend(row);
        }
        Self::from_params(width, height, &pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn len(&self) -> usize {
        self.width * self.height
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Pixel at column `x`, row `y`. Panics when out of bounds.
    pub fn get(&self, x: usize, y: usize) -> NigParams {
        assert!(x < self.width && y < self.height, "pixel ({x}, {y}) out of bounds");
        self.at(y * self.width + x)
    }

    fn at(&self, i: usize) -> NigParams {
        NigParams {
            delta: self.delta[i],
            gamma: self.gamma[i],
            alpha: self.alpha[i],
            beta: self.beta[i],
        }
    }

    /// Row-major pixel iterator.
    pub fn pixels(&self) -> impl ExactSizeIterator<Item = NigParams> + '_ {
        (0..self.len()).map(|i| self.at(i))
    }

    /// δ, γ, α, β planes in that order.
    pub fn planes(&self) -> [&[f64]; 4] {
        [&self.delta, &self.gamma, &self.alpha, &self.beta]
    }

    pub fn row(&self, y: usize) -> Vec<NigParams> {
        (0..self.width).map(|x| self.get(x, y)).collect()
    }

    pub fn crop(&self, x0: usize, y0: usize, width: usize, height: usize) -> Result<Self> {
        if x0 + width > self.width || y0 + height > self.height {
            return Err(Error::shape(self.dims(), (x0 + width, y0 + height)));
        }
        let pixels: Vec<NigParams> = (y0..y0 + height)
            .flat_map(|y| (x0..x0 + width).map(move |x| (x, y)))
            .map(|(x, y)| self.get(x, y))
            .collect();
        Self::from_params(width, height, &pixels)
    }
}

/// An H×W scalar field with a per-pixel validity mask.
///
/// Values under a false mask are unspecified; comparisons ignore them.
#[derive(Debug, Clone)]
pub struct DisparityMap {
    width: usize,
    height: usize,
    values: Vec<f64>,
    mask: Vec<bool>,
}

impl DisparityMap {
    /// Non-finite values become invalid pixels.
    pub fn new(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        check_len(width, height, values.len())?;
        let mask = values.iter().map(|v| v.is_finite()).collect();
        Ok(DisparityMap { width, height, values, mask })
    }

    pub fn with_mask(width: usize, height: usize, values: Vec<f64>, mask: Vec<bool>) -> Result<Self> {
        check_len(width, height, values.len())?;
        check_len(width, height, mask.len())?;
        if values.iter().zip(&mask).any(|(v, &m)| m && !v.is_finite()) {
            return Err(Error::NonFinite("disparity map under a true mask"));
        }
        Ok(DisparityMap { width, height, values, mask })
    }

    pub fn from_fn<F: FnMut(usize, usize) -> f64>(width: usize, height: usize, mut f: F) -> Self {
        let values: Vec<f64> = (0..height)
            .flat_map(|y| (0..width).map(move |x| (x, y)))
            .map(|(x, y)| f(x, y))
            .collect();
        let mask = values.iter().map(|v| v.is_finite()).collect();
        DisparityMap { width, height, values, mask }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn get(&self, x: usize, y: usize) -> Option<f64> {
        let i = y * self.width + x;
        self.mask[i].then(|| self.values[i])
    }

    pub fn valid_count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    pub fn crop(&self, x0: usize, y0: usize, width: usize, height: usize) -> Result<Self> {
        if x0 + width > self.width || y0 + height > self.height {
            return Err(Error::shape(self.dims(), (x0 + width, y0 + height)));
        }
        let idx: Vec<usize> = (y0..y0 + height)
            .flat_map(|y| (x0..x0 + width).map(move |x| y * self.width + x))
            .collect();
        Ok(DisparityMap {
            width,
            height,
            values: idx.iter().map(|&i| self.values[i]).collect(),
            mask: idx.iter().map(|&i| self.mask[i]).collect(),
        })
    }

    /// Row-major `(value, other_value)` pairs where both maps are valid.
    pub(crate) fn joint_valid<'a>(
        &'a self,
        other: &'a DisparityMap,
    ) -> Result<impl Iterator<Item = (f64, f64)> + 'a> {
        if self.dims() != other.dims() {
            return Err(Error::shape(self.dims(), other.dims()));
        }
        Ok((0..self.values.len())
            .filter(|&i| self.mask[i] && other.mask[i])
            .map(|i| (self.values[i], other.values[i])))
    }
}

impl PartialEq for DisparityMap {
    fn eq(&self, other: &Self) -> bool {
        self.dims() == other.dims()
            && self.mask == other.mask
            && self
                .values
                .iter()
                .zip(&other.values)
                .zip(&self.mask)
                .all(|((a, b), &m)| !m || a == b)
    }
}

/// Per-pixel moments of an [`EvidentialMap`].
#[derive(Debug, Clone, PartialEq)]
pub struct DecodedMaps {
    pub disparity: DisparityMap,
    pub aleatoric: DisparityMap,
    pub epistemic: DisparityMap,
}

pub fn decode(map: &EvidentialMap) -> DecodedMaps {
    let (w, h) = map.dims();
    let n = map.len();
    let (mut d, mut al, mut ep) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    for p in map.pixels() {
        let m = p.moments_unchecked();
        d.push(m.disparity);
        al.push(m.aleatoric);
        ep.push(m.epistemic);
    }
    let full = || DisparityMap { width: w, height: h, values: Vec::new(), mask: vec![true; n] };
    DecodedMaps {
        disparity: DisparityMap { values: d, ..full() },
        aleatoric: DisparityMap { values: al, ..full() },
        epistemic: DisparityMap { values: ep, ..full() },
    }
}

fn check_len(width: usize, height: usize, len: usize) -> Result<()> {
    if width.checked_mul(height) != Some(len) {
        return Err(Error::shape((width, height), (len, 1)));
    }
    Ok(())
}
