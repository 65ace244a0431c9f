//! Complexes of graded modules over Λ: n-complexes built by the functors Ψ and ν,
//! their contractions to ordinary complexes, chain maps and linearity certificates.
//!
//! A complex is stored as concrete graded modules with degree-0 morphisms between
//! consecutive positions. Positions outside `[lo, hi]` carry the zero module, so every
//! condition quantified over all positions is checked exactly.

mod equivalence;
mod functors;
#[cfg(test)]
mod tests;

pub use equivalence::{
    canonical_section, conditions_y, conditions_yo, equivalence_f, equivalence_f_dual, extract_module, in_g_star,
    in_t_star, in_y, in_yo, random_section, xi_maps,
};
pub use functors::{coinduced, induced, nu, nu_twisted, psi, rotate_parallel_arrows};

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{DegreeMap, GradedAlgebra};
use crate::error::{Error, Result};
use crate::grmod::{check_same_algebra, GradedModule, GradedMorphism, HomLayout, ISO_TRIALS};
use crate::linalg::{EquationSystem, Subspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    Projective,
    AlmostInjective,
}

#[derive(Debug, Clone)]
pub struct ComplexOfGraded {
    algebra: Arc<GradedAlgebra>,
    period: usize,
    lo: i64,
    terms: Vec<GradedModule>,
    /// `diffs[i]`: `terms[i] -> terms[i + 1]`.
    diffs: Vec<GradedMorphism>,
}

/// A family of module morphisms, one per position starting at `lo`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainMap {
    pub lo: i64,
    pub maps: Vec<GradedMorphism>,
}

/// Each term is isomorphic to a sum of shifted indecomposable projectives `e_v Λ`
/// (or almost injectives `D(Λ e_v)`) generated (cogenerated) in one degree.
#[derive(Debug, Clone)]
pub struct LinearityCertificate {
    pub flavor: Flavor,
    pub lo: i64,
    /// Per position: the degree the term is (co)generated in.
    pub degrees: Vec<i64>,
    /// Per position: multiplicity of each vertex.
    pub multiplicities: Vec<Vec<usize>>,
}

impl ComplexOfGraded {
    /// Checks shapes and that every differential is a module morphism. The period is
    /// declared, not enforced; see [`ComplexOfGraded::is_n_complex`].
    pub fn new(
        algebra: Arc<GradedAlgebra>,
        period: usize,
        lo: i64,
        terms: Vec<GradedModule>,
        diffs: Vec<GradedMorphism>,
    ) -> Result<Self> {
        if period < 2 {
            return Err(Error::Precondition(format!("period must be at least 2, got {period}")));
        }
        if diffs.len() != terms.len().saturating_sub(1) {
            return Err(Error::Dimension(format!(
                "{} terms need {} differentials",
                terms.len(),
                terms.len().saturating_sub(1)
            )));
        }
        let probe = GradedModule::zero(algebra.clone());
        for t in &terms {
            check_same_algebra(&probe, t)?;
        }
        for (i, d) in diffs.iter().enumerate() {
            if !terms[i].is_morphism(d, &terms[i + 1]) {
                return Err(Error::Precondition(format!(
                    "differential at position {} is not a module map",
                    lo + i as i64
                )));
            }
        }
        Ok(ComplexOfGraded { algebra, period, lo, terms, diffs })
    }

    pub(crate) fn from_parts(
        algebra: Arc<GradedAlgebra>,
        period: usize,
        lo: i64,
        terms: Vec<GradedModule>,
        diffs: Vec<GradedMorphism>,
    ) -> Self {
        debug_assert_eq!(diffs.len(), terms.len().saturating_sub(1));
        ComplexOfGraded { algebra, period, lo, terms, diffs }
    }

    pub fn zero(algebra: Arc<GradedAlgebra>, period: usize) -> Self {
        ComplexOfGraded { algebra, period, lo: 0, terms: vec![], diffs: vec![] }
    }

    /// `m` at position `k`, zero elsewhere.
    pub fn stalk(m: GradedModule, k: i64, period: usize) -> Self {
        ComplexOfGraded { algebra: m.algebra().clone(), period, lo: k, terms: vec![m], diffs: vec![] }
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        &self.algebra
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    pub fn positions(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi()
    }

    fn idx(&self, k: i64) -> Option<usize> {
        let i = k - self.lo;
        (i >= 0 && (i as usize) < self.terms.len()).then_some(i as usize)
    }

    /// The term at position `k` (the zero module outside the window).
    pub fn term(&self, k: i64) -> GradedModule {
        match self.idx(k) {
            Some(i) => self.terms[i].clone(),
            None => GradedModule::zero(self.algebra.clone()),
        }
    }

    pub fn terms(&self) -> &[GradedModule] {
        &self.terms
    }

    /// The differential leaving position `k`.
    pub fn diff(&self, k: i64) -> GradedMorphism {
        match self.idx(k) {
            Some(i) if i < self.diffs.len() => self.diffs[i].clone(),
            _ => GradedMorphism::zero(&self.term(k), &self.term(k + 1)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.is_zero())
    }

    /// `d^{k+len-1} ∘ ... ∘ d^k`, from position `k` to `k + len`.
    pub fn composite(&self, k: i64, len: usize) -> GradedMorphism {
        let mut acc = GradedMorphism::identity(&self.term(k));
        for step in 0..len as i64 {
            let (a, b, c) = (self.term(k), self.term(k + step), self.term(k + step + 1));
            acc = acc.then(&self.diff(k + step), &a, &b, &c);
        }
        acc
    }

    /// Whether every composite of `n` consecutive differentials vanishes.
    pub fn is_n_complex(&self, n: usize) -> bool {
        if self.terms.len() <= n {
            return true;
        }
        (self.lo..=self.hi() - n as i64).all(|k| self.composite(k, n).is_zero())
    }

    /// Renumbers positions: the result has `self.term(k + shift)` at position `k`.
    pub fn shift_positions(&self, shift: i64) -> Self {
        ComplexOfGraded { lo: self.lo - shift, ..self.clone() }
    }

    /// Drops zero terms at both ends of the window.
    pub fn trimmed(&self) -> Self {
        let nonzero: Vec<i64> = self.positions().filter(|&k| !self.term(k).is_zero()).collect();
        match (nonzero.first(), nonzero.last()) {
            (Some(&a), Some(&b)) => self.restrict(a, b),
            _ => ComplexOfGraded::zero(self.algebra.clone(), self.period),
        }
    }

    /// The same complex on the window `[a, b]` (zero terms added or dropped).
    pub fn restrict(&self, a: i64, b: i64) -> Self {
        let terms: Vec<GradedModule> = (a..=b).map(|k| self.term(k)).collect();
        let diffs = (a..b).map(|k| self.diff(k)).collect();
        ComplexOfGraded { algebra: self.algebra.clone(), period: self.period, lo: a, terms, diffs }
    }

    /// `D(C)`, with `D(C)^k = D(C^{-k})` and differentials the transposes, over the
    /// opposite algebra `target`.
    pub fn dual(&self, target: Arc<GradedAlgebra>) -> Result<Self> {
        if self.terms.is_empty() {
            return Ok(ComplexOfGraded::zero(target, self.period));
        }
        let terms: Vec<GradedModule> =
            (-self.hi()..=-self.lo).map(|k| self.term(-k).graded_dual(target.clone())).collect::<Result<_>>()?;
        let mut diffs = Vec::new();
        for k in -self.hi()..-self.lo {
            // D(d^{-k-1}): D(C^{-k}) -> D(C^{-k-1})
            let (src, tgt) = (self.term(-k - 1), self.term(-k));
            let d = self.diff(-k - 1);
            let a = &terms[(k + self.hi()) as usize];
            let maps = a.degrees().map(|deg| d.at(-deg, &src, &tgt).transpose()).collect();
            diffs.push(GradedMorphism { lo: a.lo(), maps });
        }
        Ok(ComplexOfGraded { algebra: target, period: self.period, lo: -self.hi(), terms, diffs })
    }

    /// Termwise direct sum on the union of the windows.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.period != other.period {
            return Err(Error::Precondition("direct sum of complexes of different periods".into()));
        }
        let (a, b) = window_union(self, other);
        let mut terms = Vec::new();
        let mut parts = Vec::new();
        for k in a..=b {
            let (s, maps) = self.term(k).direct_sum(&other.term(k))?;
            terms.push(s);
            parts.push(maps);
        }
        let mut diffs = Vec::new();
        for k in a..b {
            let i = (k - a) as usize;
            let [_, _, p1, p2] = &parts[i];
            let [i1, i2, _, _] = &parts[i + 1];
            let (x, y) = (&terms[i], &terms[i + 1]);
            let first = p1.then(&self.diff(k), x, &self.term(k), &self.term(k + 1)).then(i1, x, &self.term(k + 1), y);
            let second =
                p2.then(&other.diff(k), x, &other.term(k), &other.term(k + 1)).then(i2, x, &other.term(k + 1), y);
            diffs.push(first.add(&second, x, y));
        }
        Ok(ComplexOfGraded { algebra: self.algebra.clone(), period: self.period, lo: a, terms, diffs })
    }

    /// Per position, per degree, per vertex dimensions over the window `[a, b]`.
    fn shape(&self, a: i64, b: i64) -> Vec<Vec<(i64, Vec<usize>)>> {
        (a..=b)
            .map(|k| {
                let t = self.term(k);
                t.support().into_iter().map(|d| (d, t.vertex_dims(d))).collect()
            })
            .collect()
    }
}

fn window_union(c: &ComplexOfGraded, d: &ComplexOfGraded) -> (i64, i64) {
    match (c.terms.is_empty(), d.terms.is_empty()) {
        (true, true) => (0, -1),
        (true, false) => (d.lo, d.hi()),
        (false, true) => (c.lo, c.hi()),
        (false, false) => (c.lo.min(d.lo), c.hi().max(d.hi())),
    }
}

/// Chain maps `c -> d`: degree-0 module maps at each position commuting with the
/// differentials. Returned as a canonical basis.
pub fn hom_complexes(c: &ComplexOfGraded, d: &ComplexOfGraded) -> Result<Vec<ChainMap>> {
    let (sys, layouts, (a, _)) = chain_system(c, d)?;
    Ok(sys
        .solutions()
        .basis_vectors()
        .iter()
        .map(|v| ChainMap {
            lo: a,
            maps: layouts
                .iter()
                .enumerate()
                .map(|(i, l)| l.morphism(v, &c.term(a + i as i64), &d.term(a + i as i64)))
                .collect(),
        })
        .collect())
}

pub fn hom_complexes_dim(c: &ComplexOfGraded, d: &ComplexOfGraded) -> Result<usize> {
    Ok(chain_system(c, d)?.0.nullity())
}

type ChainSystem = (EquationSystem, Vec<HomLayout>, (i64, i64));

fn chain_system(c: &ComplexOfGraded, d: &ComplexOfGraded) -> Result<ChainSystem> {
    if c.period != d.period {
        return Err(Error::Precondition("chain maps between complexes of different periods".into()));
    }
    check_same_algebra(&GradedModule::zero(c.algebra.clone()), &GradedModule::zero(d.algebra.clone()))?;
    let (a, b) = window_union(c, d);
    let mut layouts = Vec::new();
    let mut start = 0;
    for k in a..=b {
        let l = HomLayout::with_start(&c.term(k), &d.term(k), start);
        start += l.unknowns;
        layouts.push(l);
    }
    let f = c.algebra.field();
    let mut sys = EquationSystem::new(f, start);
    for k in a..=b {
        let i = (k - a) as usize;
        let (s, t) = (c.term(k), d.term(k));
        layouts[i].add_commutation(&mut sys, &s, &t);
        if k == b {
            continue;
        }
        // f^{k+1} ∘ c.d^k = d.d^k ∘ f^k
        let (s1, t1) = (c.term(k + 1), d.term(k + 1));
        let (dc, dd) = (c.diff(k), d.diff(k));
        for deg in s.degrees() {
            let (x, y) = (dc.at(deg, &s, &s1), dd.at(deg, &t, &t1));
            for r in 0..t1.dim(deg) {
                for col in 0..s.dim(deg) {
                    let mut terms = Vec::new();
                    for m in 0..s1.dim(deg) {
                        let v = x.get(m, col);
                        if v != 0 {
                            if let Some(u) = layouts[i + 1].var(&s1, &t1, deg, r, m) {
                                terms.push((u, v));
                            }
                        }
                    }
                    for m in 0..t.dim(deg) {
                        let v = y.get(r, m);
                        if v != 0 {
                            if let Some(u) = layouts[i].var(&s, &t, deg, m, col) {
                                terms.push((u, f.neg(v)));
                            }
                        }
                    }
                    sys.add_equation(&terms);
                }
            }
        }
    }
    Ok((sys, layouts, (a, b)))
}

/// Whether `c` and `d` are isomorphic complexes: equal dimensions everywhere and an
/// invertible chain map among random combinations of a Hom basis.
pub fn iso_complexes(c: &ComplexOfGraded, d: &ComplexOfGraded) -> Result<bool> {
    Ok(find_chain_iso(c, d)?.is_some())
}

pub fn find_chain_iso(c: &ComplexOfGraded, d: &ComplexOfGraded) -> Result<Option<ChainMap>> {
    let (a, b) = window_union(c, d);
    if c.shape(a, b) != d.shape(a, b) {
        return Ok(None);
    }
    let basis = hom_complexes(c, d)?;
    let f = c.algebra.field();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..ISO_TRIALS {
        let coeffs: Vec<u32> = basis.iter().map(|_| rng.gen_range(0..f.modulus())).collect();
        let maps: Vec<GradedMorphism> = (a..=b)
            .map(|k| {
                let (s, t) = (c.term(k), d.term(k));
                let mut acc = GradedMorphism::zero(&s, &t);
                for (bm, &co) in basis.iter().zip(&coeffs) {
                    let m = &bm.maps[(k - a) as usize];
                    let scaled = GradedMorphism { lo: m.lo, maps: m.maps.iter().map(|x| x.scale(co)).collect() };
                    acc = acc.add(&scaled, &s, &t);
                }
                acc
            })
            .collect();
        if (a..=b).all(|k| maps[(k - a) as usize].is_iso(&c.term(k), &d.term(k))) {
            return Ok(Some(ChainMap { lo: a, maps }));
        }
    }
    Ok(None)
}

/// Certificate that each term at position `k` is projective generated in degree
/// `degree(k)` (or almost injective cogenerated there); `None` when some term is not.
///
/// A term generated in one degree is a quotient of the projective on its top, and one
/// with socle in one degree embeds in the coinduced module on its socle, so matching
/// vertex dimensions in every degree decide isomorphism.
pub fn certify(
    c: &ComplexOfGraded,
    flavor: Flavor,
    degree: impl Fn(i64) -> i64,
) -> Result<Option<LinearityCertificate>> {
    let mut cert = LinearityCertificate { flavor, lo: c.lo, degrees: vec![], multiplicities: vec![] };
    let nv = c.algebra.vertex_count();
    for k in c.positions() {
        let t = c.term(k);
        let deg = degree(k);
        let layer = match flavor {
            Flavor::Projective => t.top_dims(),
            Flavor::AlmostInjective => t.socle_dims(),
        };
        let mut mults = vec![0; nv];
        for (d, dims) in layer {
            if dims.iter().all(|&x| x == 0) {
                continue;
            }
            if d != deg {
                return Ok(None);
            }
            mults = dims;
        }
        let std = match flavor {
            Flavor::Projective => induced(c.algebra(), &mults, -deg, None)?,
            Flavor::AlmostInjective => coinduced(c.algebra(), &mults, -deg, false)?,
        };
        let (lo, hi) = (std.lo().min(t.lo()), std.hi().max(t.hi()));
        if (lo..=hi).any(|d| std.vertex_dims(d) != t.vertex_dims(d)) {
            return Ok(None);
        }
        cert.degrees.push(deg);
        cert.multiplicities.push(mults);
    }
    Ok(Some(cert))
}

/// Linearity in the sense of n-complexes: term `k` (co)generated in degree `-k`.
pub fn certify_linear(c: &ComplexOfGraded, flavor: Flavor) -> Result<Option<LinearityCertificate>> {
    certify(c, flavor, |k| -k)
}

/// Keeps the positions `pos(k)` of a strictly increasing `pos` and composes the
/// differentials in between.
fn contract(c: &ComplexOfGraded, pos: impl Fn(i64) -> i64) -> ComplexOfGraded {
    if c.terms.is_empty() {
        return ComplexOfGraded::zero(c.algebra.clone(), 2);
    }
    let span = c.hi() - c.lo + 2;
    let bound = 2 * (c.lo.abs().max(c.hi().abs()) + span) + 4;
    let ks: Vec<i64> = (-bound..=bound).filter(|&k| pos(k) >= c.lo && pos(k) <= c.hi()).collect();
    let (Some(&a), Some(&b)) = (ks.first(), ks.last()) else {
        return ComplexOfGraded::zero(c.algebra.clone(), 2);
    };
    let terms = (a..=b).map(|k| c.term(pos(k))).collect();
    let diffs = (a..b).map(|k| c.composite(pos(k), (pos(k + 1) - pos(k)) as usize)).collect();
    ComplexOfGraded { algebra: c.algebra.clone(), period: 2, lo: a, terms, diffs }
}

/// `H_m`: position `k` of the result is position `δ_m(k)` of `c`.
pub fn contract_h(c: &ComplexOfGraded, m: i64) -> ComplexOfGraded {
    let dm = DegreeMap::new(m, c.period);
    contract(c, |k| dm.delta(k))
}

/// `G_m`: position `j` of the result is position `-δ_m(-j)` of `c`.
pub fn contract_g(c: &ComplexOfGraded, m: i64) -> ComplexOfGraded {
    let dm = DegreeMap::new(m, c.period);
    contract(c, |j| -dm.delta(-j))
}

/// Whether `sub ⊆ sup` degree by degree (both per degree of the module window).
pub(crate) fn contained(sub: &[Subspace], sup: &[Subspace]) -> bool {
    sub.iter().zip(sup).all(|(a, b)| b.contains(a).unwrap_or(false))
}
