//! Minimal graded projective resolutions and the checks built on them: n-Koszulity,
//! Ext dimensions, n-coKoszul modules and liftability of their coresolutions.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{AlgebraKind, DegreeMap, GradedAlgebra};
use crate::complexes::{in_y, ComplexOfGraded};
use crate::corpus::AlgebraBundle;
use crate::error::{Error, Result};
use crate::grmod::{projective_cover, GradedModule, GradedMorphism, TorsionParams};
use crate::linalg::Matrix;

/// `P^bound -> ... -> P^0 -> M -> 0`, minimal.
#[derive(Debug, Clone)]
pub struct ResolutionSegment {
    pub module: GradedModule,
    pub bound: usize,
    pub terms: Vec<GradedModule>,
    /// Generators `(vertex, degree)` of each term.
    pub generators: Vec<Vec<(usize, i64)>>,
    /// `maps[0]: P^0 -> M`, `maps[j]: P^j -> P^{j-1}`.
    pub maps: Vec<GradedMorphism>,
    /// Terms are cut above this degree when Λ is infinite.
    pub cap: Option<i64>,
    /// A syzygy vanished before the bound; the last syzygy is not computed otherwise.
    pub finished: bool,
}

impl ResolutionSegment {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree -> generator count per vertex, for term `j` (empty past the end).
    pub fn multiplicities(&self, j: usize) -> BTreeMap<i64, Vec<usize>> {
        let mut out = BTreeMap::new();
        for &(v, d) in self.generators.get(j).map(|g| g.as_slice()).unwrap_or(&[]) {
            out.entry(d).or_insert_with(|| vec![0; self.module.algebra().vertex_count()])[v] += 1;
        }
        out
    }

    pub fn generation_degrees(&self, j: usize) -> Vec<i64> {
        self.multiplicities(j).into_keys().collect()
    }

    /// Exactness at each position (`dim Ker = dim Im` degreewise) and minimality
    /// (each image inside the radical of the next term down).
    pub fn check(&self) -> Result<()> {
        for j in 0..self.terms.len() {
            let p = &self.terms[j];
            let target = if j == 0 { &self.module } else { &self.terms[j - 1] };
            let ker = self.maps[j].kernel(p, target);
            match self.terms.get(j + 1) {
                Some(next) => {
                    let img = self.maps[j + 1].image(next, p);
                    for (d, (k, i)) in p.degrees().zip(ker.iter().zip(&img)) {
                        if k != i && self.cap.is_none_or(|c| d <= c) {
                            return Err(Error::Dimension(format!("not exact at position {j}, degree {d}")));
                        }
                    }
                    if !crate::complexes::contained(&img, &p.radical()) {
                        return Err(Error::Dimension(format!("image at position {j} leaves the radical")));
                    }
                }
                None if self.finished && ker.iter().any(|k| !k.is_zero()) => {
                    return Err(Error::Dimension(format!("last map at position {j} is not injective")));
                }
                None => {}
            }
            if j == 0 {
                let img = self.maps[0].image(p, target);
                if img.iter().zip(target.degrees()).any(|(s, d)| s.dim() != target.dim(d)) {
                    return Err(Error::Dimension("augmentation is not onto".into()));
                }
            }
        }
        Ok(())
    }
}

/// Iterated minimal projective covers, at most `bound + 1` terms. Over an infinite Λ all
/// terms are cut at `M.lo + window`; generators found below the cut are exact.
pub fn minimal_projective_resolution(m: &GradedModule, bound: usize) -> Result<ResolutionSegment> {
    let alg = m.algebra();
    if alg.kind() != AlgebraKind::Path {
        return Err(Error::Precondition("resolutions are computed over path-graded algebras".into()));
    }
    let top = alg.base().top_nonzero_degree();
    let module = m.trimmed();
    let cap = match top {
        Some(_) => None,
        None => Some(module.lo() + alg.base().top() as i64),
    };
    let mut seg = ResolutionSegment {
        module: module.clone(),
        bound,
        terms: vec![],
        generators: vec![],
        maps: vec![],
        cap,
        finished: false,
    };
    let mut current = module;
    let mut inclusion: Option<GradedMorphism> = None;
    let mut prev: Option<GradedModule> = None;
    for j in 0..=bound {
        if current.is_zero() {
            seg.finished = true;
            break;
        }
        let hi = match (cap, top) {
            (Some(c), _) => c,
            (None, Some(t)) => current.hi() + t as i64,
            (None, None) => unreachable!(),
        };
        let (layout, cover) = projective_cover(&current, hi)?;
        let p = layout.module;
        let map = match (&inclusion, &prev) {
            (Some(inc), Some(pp)) => cover.then(inc, &p, &current, pp),
            _ => cover.clone(),
        };
        seg.generators.push(layout.gens);
        seg.terms.push(p.clone());
        seg.maps.push(map);
        if j == bound {
            break;
        }
        let ker = cover.kernel(&p, &current);
        let (omega, inc) = p.submodule(&ker)?;
        inclusion = Some(inc);
        prev = Some(p);
        current = omega.trimmed();
    }
    Ok(seg)
}

/// `Λ_0 = ⊕_v S_v` in degree 0.
pub fn degree_zero_part(lambda: &Arc<GradedAlgebra>) -> GradedModule {
    let nv = lambda.vertex_count();
    let f = lambda.field();
    let actions = lambda.generators().iter().map(|_| vec![Matrix::zeros(f, 0, nv)]).collect();
    GradedModule::from_parts(lambda.clone(), 0, vec![vec![1; nv]], actions).expect("semisimple")
}

fn require_window(seg: &ResolutionSegment, dm: &DegreeMap) -> Result<()> {
    if let Some(c) = seg.cap {
        let need = dm.delta(seg.bound as i64) + 1;
        if need > c {
            return Err(Error::Window(format!("checking up to {} needs degree {need}, window ends at {c}", seg.bound)));
        }
    }
    Ok(())
}

/// Whether `P^j`, in the minimal resolution of `Λ_0`, is generated in degree `δ(j)` for
/// every `j <= bound`. Nothing is claimed beyond the bound.
pub fn is_n_koszul(lambda: &Arc<GradedAlgebra>, bound: usize) -> Result<bool> {
    let dm = DegreeMap::new(0, lambda.n());
    let seg = minimal_projective_resolution(&degree_zero_part(lambda), bound)?;
    require_window(&seg, &dm)?;
    Ok((0..seg.len()).all(|j| seg.generators[j].iter().all(|&(_, d)| d == dm.delta(j as i64))))
}

/// `dim Ext^j(S_u, S_v)` as `table[j][u][v]`, read off the generators of the minimal
/// resolution of each simple in degree 0.
pub fn ext_dims(lambda: &Arc<GradedAlgebra>, bound: usize) -> Result<Vec<Vec<Vec<usize>>>> {
    let nv = lambda.vertex_count();
    let mut table = vec![vec![vec![0; nv]; nv]; bound + 1];
    for u in 0..nv {
        let seg = minimal_projective_resolution(&GradedModule::simple(lambda.clone(), u, 0), bound)?;
        for (j, gens) in seg.generators.iter().enumerate() {
            for &(v, _) in gens {
                table[j][u][v] += 1;
            }
        }
    }
    Ok(table)
}

/// The minimal almost injective coresolution of `m` as a 2-complex over Λ, obtained by
/// dualizing the minimal projective resolution of `D(m)` over Λ^op (`op_lambda`).
pub fn injective_coresolution(
    m: &GradedModule,
    bound: usize,
    op_lambda: &Arc<GradedAlgebra>,
) -> Result<(ComplexOfGraded, ResolutionSegment)> {
    let lambda = m.algebra().clone();
    if lambda.base().top_nonzero_degree().is_none() {
        return Err(Error::InfiniteAlgebra);
    }
    let dm = m.graded_dual(op_lambda.clone())?;
    let seg = minimal_projective_resolution(&dm, bound)?;
    if seg.is_empty() {
        return Ok((ComplexOfGraded::zero(lambda, 2), seg));
    }
    // the projective complex sits at positions -len+1..0 with d = maps[j]: P^j -> P^{j-1}
    let len = seg.len();
    let terms: Vec<GradedModule> = (0..len).rev().map(|j| seg.terms[j].clone()).collect();
    let diffs: Vec<GradedMorphism> = (1..len).rev().map(|j| seg.maps[j].clone()).collect();
    let proj = ComplexOfGraded::new(op_lambda.clone(), 2, -(len as i64) + 1, terms, diffs)?;
    Ok((proj.dual(lambda)?, seg))
}

/// `M` cogenerated in degree 0 whose minimal almost injective coresolution has its
/// `j`-th term cogenerated in degree `-δ(j)`, for `j <= bound`.
pub fn is_n_cokoszul(m: &GradedModule, bound: usize, op_lambda: &Arc<GradedAlgebra>) -> Result<bool> {
    let dm = DegreeMap::new(0, m.algebra().n());
    let dual = m.graded_dual(op_lambda.clone())?;
    let seg = minimal_projective_resolution(&dual, bound)?;
    Ok((0..seg.len()).all(|j| seg.generators[j].iter().all(|&(_, d)| d == dm.delta(j as i64))))
}

/// Feeds the coresolution segment of an n-coKoszul module, extended by zeros, to the
/// membership test of `Y(S, U)` with `m = 0`.
pub fn is_h0_liftable_resolution(
    m: &GradedModule,
    bound: usize,
    b: &AlgebraBundle,
    op: &AlgebraBundle,
) -> Result<bool> {
    if m.is_zero() {
        return Ok(true);
    }
    if !is_n_cokoszul(m, bound, &op.lambda)? {
        return Err(Error::Precondition("module is not n-coKoszul up to the bound".into()));
    }
    let (c, _) = injective_coresolution(m, bound, &op.lambda)?;
    let params = TorsionParams::new(b.n(), 1, 0)?;
    Ok(in_y(&c, &params, &b.u)?.0)
}

#[cfg(test)]
mod tests;
