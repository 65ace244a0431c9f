//! The torsion pair cut out by a degree set `S = m + U`, `U = ∪_k [kn, kn + r]`.

use crate::error::{Error, Result};
use crate::linalg::Subspace;

use super::GradedModule;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TorsionParams {
    pub n: usize,
    pub r: usize,
    pub m: i64,
}

impl TorsionParams {
    pub fn new(n: usize, r: usize, m: i64) -> Result<Self> {
        let ok = n >= 2 && (2 * r < n || (2 * r == n && n == 2));
        if !ok {
            return Err(Error::Precondition(format!("need 2r < n, or 2r = n = 2 (got n = {n}, r = {r})")));
        }
        Ok(TorsionParams { n, r, m })
    }

    pub fn in_u(&self, d: i64) -> bool {
        (d.rem_euclid(self.n as i64) as usize) <= self.r
    }

    pub fn in_s(&self, d: i64) -> bool {
        self.in_u(d - self.m)
    }

    /// Membership in `(S:U)`: `m + nZ`, or all of `Z` when `2r = n = 2`.
    pub fn in_quotient(&self, d: i64) -> bool {
        (2 * self.r == self.n && self.n == 2) || (d - self.m).rem_euclid(self.n as i64) == 0
    }
}

/// The largest submodule supported outside `S`, per degree of the window.
pub fn torsion_submodule(m: &GradedModule, params: &TorsionParams) -> Vec<Subspace> {
    let f = m.field();
    let mut t: Vec<Subspace> = m
        .degrees()
        .map(|d| if params.in_s(d) { Subspace::zero(f, m.dim(d)) } else { Subspace::full(f, m.dim(d)) })
        .collect();
    loop {
        let mut changed = false;
        for d in m.degrees() {
            let i = (d - m.lo()) as usize;
            if t[i].is_zero() {
                continue;
            }
            let mut keep = t[i].clone();
            for (g, gen) in m.algebra().generators().iter().enumerate() {
                let tgt = d + gen.degree as i64;
                if m.dim(tgt) == 0 {
                    continue;
                }
                let j = (tgt - m.lo()) as usize;
                // {x in keep : x·g in T_tgt}: preimage of T_tgt, intersected with keep
                let a = m.action(g, d);
                let quotient = complement_projector(&t[j]);
                let pre = quotient.mul_unchecked(&a).kernel();
                keep = keep.intersect(&pre).expect("same ambient");
            }
            if keep.dim() < t[i].dim() {
                t[i] = keep;
                changed = true;
            }
        }
        if !changed {
            return t;
        }
    }
}

/// A matrix whose kernel is exactly `s`.
fn complement_projector(s: &Subspace) -> crate::linalg::Matrix {
    let f = s.field();
    let n = s.ambient_dim();
    let np = s.non_pivots();
    let mut p = crate::linalg::Matrix::zeros(f, np.len(), n);
    for c in 0..n {
        let mut unit = vec![0; n];
        unit[c] = 1;
        let nf = s.normal_form(&unit);
        for (r, &k) in np.iter().enumerate() {
            p.set(r, c, nf[k]);
        }
    }
    p
}

/// Whether no nonzero submodule is supported outside `S`: the socle vanishes off `S`.
pub fn is_torsionfree(m: &GradedModule, params: &TorsionParams) -> bool {
    m.degrees().filter(|&d| !params.in_s(d)).all(|d| {
        let degree_one = |g: usize| m.algebra().generators()[g].degree == 1;
        m.annihilator(d, degree_one).is_zero()
    })
}
