use rayon::prelude::*;

use crate::bounds::{
    depolarizing_breakpoint, depolarizing_upper, depolarizing_upper_formula, erasure_capacity,
    transposition_bound_closed,
};
use crate::capacity::{depolarizing_holevo, erasure_holevo};
use crate::error::{check_dimension, check_probability, Error, Result};
use crate::matcore::entropy::h;

/// Assisting channel family for an amplification margin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MarginKind {
    Erasure,
    Depolarizing,
}

impl MarginKind {
    /// Name of the noise parameter on the first sweep axis.
    pub fn axis1_name(self) -> &'static str {
        match self {
            MarginKind::Erasure => "lambda",
            MarginKind::Depolarizing => "p",
        }
    }
}

/// Which depolarizing cases count when searching for amplification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseFilter {
    Any,
    Case1,
    Case2,
}

impl CaseFilter {
    fn admits(self, case: Option<u8>) -> bool {
        match (self, case) {
            (CaseFilter::Any, _) | (_, None) => true,
            (CaseFilter::Case1, Some(c)) => c == 1,
            (CaseFilter::Case2, Some(c)) => c == 2,
        }
    }
}

/// `Q(N_{q,d}) + Q(E_{λ,d})` upper bound minus the `1 − λh(q)` lower bound
/// on `Q(N_{q,d} ⊗ E_{λ,d})`. Negative values certify strict
/// superadditivity.
pub fn erasure_margin(q: f64, d: usize, lambda: f64) -> Result<f64> {
    let lhs = transposition_bound_closed(q, d)? + erasure_capacity(lambda, d)?;
    Ok(lhs - (1.0 - h(q) + erasure_holevo(q, lambda)?))
}

/// Depolarizing margin with its case label: case 1 (`p < d/(2(d+1))`)
/// uses the depolarizing upper bound, case 2 uses zero.
pub fn depol_margin(q: f64, d: usize, p: f64) -> Result<(f64, u8)> {
    check_probability("p", p)?;
    check_dimension("d", d, 2)?;
    let case = if p < depolarizing_breakpoint(d) { 1 } else { 2 };
    let lhs = transposition_bound_closed(q, d)? + depolarizing_upper(p, d)?;
    Ok((lhs - depol_rhs(q, d, p)?, case))
}

/// Depolarizing margin evaluated with the formula of the given case,
/// regardless of where `p` lies.
pub fn depol_margin_with_case(q: f64, d: usize, p: f64, case: u8) -> Result<f64> {
    check_probability("p", p)?;
    let upper = match case {
        1 => depolarizing_upper_formula(p, d),
        2 => 0.0,
        _ => return Err(Error::Domain(format!("case {case} is not 1 or 2"))),
    };
    Ok(transposition_bound_closed(q, d)? + upper - depol_rhs(q, d, p)?)
}

fn depol_rhs(q: f64, d: usize, p: f64) -> Result<f64> {
    Ok(1.0 - h(q) + depolarizing_holevo(q, p, d)?)
}

fn margin_at(kind: MarginKind, d: usize, a1: f64, q: f64) -> Result<(f64, Option<u8>)> {
    match kind {
        MarginKind::Erasure => Ok((erasure_margin(q, d, a1)?, None)),
        MarginKind::Depolarizing => depol_margin(q, d, a1).map(|(m, c)| (m, Some(c))),
    }
}

/// A uniform axis sampled at its cell centers.
#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub resolution: usize,
}

impl Axis {
    pub fn unit(name: &str, resolution: usize) -> Self {
        Self {
            name: name.to_string(),
            lo: 0.0,
            hi: 1.0,
            resolution,
        }
    }

    pub fn value(&self, k: usize) -> f64 {
        self.lo + (k as f64 + 0.5) * (self.hi - self.lo) / self.resolution as f64
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.resolution).map(|k| self.value(k)).collect()
    }
}

/// Margins on a `(noise, q)` grid, stored axis1-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepGrid {
    pub kind: MarginKind,
    pub d: usize,
    pub axis1: Axis,
    pub axis2: Axis,
    margins: Vec<f64>,
    cases: Option<Vec<u8>>,
}

/// One cell of a [`SweepGrid`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub axis1: f64,
    pub axis2: f64,
    pub margin: f64,
    pub case: Option<u8>,
}

impl SweepGrid {
    /// Assembles a grid from precomputed margins, checking the shape and
    /// that every entry is finite.
    pub fn from_parts(
        kind: MarginKind,
        d: usize,
        axis1: Axis,
        axis2: Axis,
        margins: Vec<f64>,
        cases: Option<Vec<u8>>,
    ) -> Result<Self> {
        let n = axis1.resolution * axis2.resolution;
        if margins.len() != n || cases.as_ref().is_some_and(|c| c.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "{} margins for a {}x{} grid",
                margins.len(),
                axis1.resolution,
                axis2.resolution
            )));
        }
        if let Some(bad) = margins.iter().find(|m| !m.is_finite()) {
            return Err(Error::Domain(format!("non-finite margin {bad}")));
        }
        Ok(Self {
            kind,
            d,
            axis1,
            axis2,
            margins,
            cases,
        })
    }

    pub fn margin(&self, i: usize, j: usize) -> f64 {
        self.margins[i * self.axis2.resolution + j]
    }

    pub fn case(&self, i: usize, j: usize) -> Option<u8> {
        self.cases.as_ref().map(|c| c[i * self.axis2.resolution + j])
    }

    pub fn margins(&self) -> &[f64] {
        &self.margins
    }

    pub fn cases(&self) -> Option<&[u8]> {
        self.cases.as_deref()
    }

    /// Cells in axis1-major ascending order.
    pub fn rows(&self) -> impl Iterator<Item = SweepRow> + '_ {
        let r2 = self.axis2.resolution;
        (0..self.margins.len()).map(move |k| SweepRow {
            axis1: self.axis1.value(k / r2),
            axis2: self.axis2.value(k % r2),
            margin: self.margins[k],
            case: self.cases.as_ref().map(|c| c[k]),
        })
    }

    pub fn has_negative(&self, filter: CaseFilter) -> bool {
        self.rows().any(|r| r.margin < 0.0 && filter.admits(r.case))
    }

    pub fn min_margin(&self) -> f64 {
        self.margins.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Margins at the cell centers of `(0,1)²` with `resolution` cells per
/// axis; axis1 is `λ` or `p`, axis2 is `q`.
pub fn sweep(kind: MarginKind, d: usize, resolution: usize) -> Result<SweepGrid> {
    if resolution < 2 {
        return Err(Error::Domain(format!("resolution {resolution} must be at least 2")));
    }
    check_dimension("d", d, 2)?;
    let axis1 = Axis::unit(kind.axis1_name(), resolution);
    let axis2 = Axis::unit("q", resolution);
    let qs = axis2.values();
    let cells = axis1
        .values()
        .into_par_iter()
        .map(|a| {
            qs.iter()
                .map(|&q| margin_at(kind, d, a, q))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let flat: Vec<(f64, Option<u8>)> = cells.into_iter().flatten().collect();
    let margins = flat.iter().map(|c| c.0).collect();
    let cases = match kind {
        MarginKind::Erasure => None,
        MarginKind::Depolarizing => Some(flat.iter().map(|c| c.1.unwrap_or(0)).collect()),
    };
    SweepGrid::from_parts(kind, d, axis1, axis2, margins, cases)
}

/// Offset used to sample just inside case 1 next to `p = d/(2(d+1))`.
pub const BREAKPOINT_OFFSET: f64 = 1e-9;

/// Whether the margin is negative anywhere on the cell-center grid or on
/// the breakpoint lines of the bounds: `q = (d+1)/(2d)` where the
/// transposition bound is smallest, `λ = 1/2` for erasure, and
/// `p = d/(2(d+1))` (approached from case 1 and taken in case 2) for
/// depolarizing noise.
pub fn has_amplification(
    kind: MarginKind,
    filter: CaseFilter,
    d: usize,
    resolution: usize,
) -> Result<bool> {
    let grid = sweep(kind, d, resolution)?;
    if grid.has_negative(filter) {
        return Ok(true);
    }
    let line_a1 = match kind {
        MarginKind::Erasure => vec![0.5],
        MarginKind::Depolarizing => {
            let p = depolarizing_breakpoint(d);
            vec![p - BREAKPOINT_OFFSET, p]
        }
    };
    let line_q = (d + 1) as f64 / (2 * d) as f64;
    let mut a1 = grid.axis1.values();
    a1.extend(&line_a1);
    let mut qs = grid.axis2.values();
    qs.push(line_q);
    let points = a1
        .iter()
        .map(|&a| (a, line_q))
        .chain(line_a1.iter().flat_map(|&a| qs.iter().map(move |&q| (a, q))));
    for (a, q) in points {
        let (m, case) = margin_at(kind, d, a, q)?;
        if m < 0.0 && filter.admits(case) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Smallest `d ∈ [2, d_max]` for which [`has_amplification`] finds a
/// negative margin.
pub fn min_amplification_dimension(
    kind: MarginKind,
    filter: CaseFilter,
    d_max: usize,
    resolution: usize,
) -> Result<Option<usize>> {
    check_dimension("d_max", d_max, 2)?;
    for d in 2..=d_max {
        if has_amplification(kind, filter, d, resolution)? {
            return Ok(Some(d));
        }
    }
    Ok(None)
}
