//! Finite quivers and their path spaces.
//!
//! Paths compose left to right: `pq` is "first `p`, then `q`" and requires
//! `target(p) == source(q)`. Paths of a fixed length are always listed in
//! lexicographic order of their arrow index sequences; that order fixes
//! every basis used downstream.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Field;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quiver {
    vertex_count: usize,
    arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new(vertex_count: usize, arrows: Vec<Arrow>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::Quiver("a quiver needs at least one vertex".into()));
        }
        let mut seen = HashMap::new();
        for (i, a) in arrows.iter().enumerate() {
            if a.source >= vertex_count || a.target >= vertex_count {
                return Err(Error::Quiver(format!("arrow '{}' has an endpoint outside 0..{vertex_count}", a.name)));
            }
            if a.name.is_empty() || a.name.contains('.') {
                return Err(Error::Quiver(format!("arrow name '{}' must be nonempty and free of '.'", a.name)));
            }
            if let Some(j) = seen.insert(a.name.clone(), i) {
                return Err(Error::Quiver(format!("arrow name '{}' used twice (arrows {j} and {i})", a.name)));
            }
        }
        Ok(Quiver { vertex_count, arrows })
    }

    /// Convenience constructor from `(name, source, target)` triples.
    pub fn from_triples(vertex_count: usize, arrows: &[(&str, usize, usize)]) -> Result<Self> {
        Self::new(
            vertex_count,
            arrows.iter().map(|&(n, s, t)| Arrow { name: n.to_string(), source: s, target: t }).collect(),
        )
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, i: usize) -> &Arrow {
        &self.arrows[i]
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    /// The opposite quiver. Arrow `i` of the result is the reversal of arrow `i`,
    /// named with a `^o` suffix (removed again when taking the opposite twice).
    pub fn opposite(&self) -> Quiver {
        let arrows = self
            .arrows
            .iter()
            .map(|a| Arrow {
                name: match a.name.strip_suffix("^o") {
                    Some(base) => base.to_string(),
                    None => format!("{}^o", a.name),
                },
                source: a.target,
                target: a.source,
            })
            .collect();
        Quiver { vertex_count: self.vertex_count, arrows }
    }

    /// Number of paths of length `k`, via powers of the adjacency count matrix.
    pub fn path_count(&self, k: usize) -> u128 {
        let v = self.vertex_count;
        let mut adj = vec![vec![0u128; v]; v];
        for a in &self.arrows {
            adj[a.source][a.target] += 1;
        }
        let mut walk: Vec<Vec<u128>> = (0..v).map(|i| (0..v).map(|j| u128::from(i == j)).collect()).collect();
        for _ in 0..k {
            let mut next = vec![vec![0u128; v]; v];
            for i in 0..v {
                for m in 0..v {
                    if walk[i][m] == 0 {
                        continue;
                    }
                    for j in 0..v {
                        next[i][j] += walk[i][m] * adj[m][j];
                    }
                }
            }
            walk = next;
        }
        walk.iter().flatten().sum()
    }

    pub fn parse_path(&self, text: &str) -> Result<Path> {
        let text = text.trim();
        if let Some(v) = text.strip_prefix('e').and_then(|s| s.parse::<usize>().ok()) {
            if self.arrow_index(text).is_none() {
                if v >= self.vertex_count {
                    return Err(Error::Quiver(format!("trivial path '{text}' names a missing vertex")));
                }
                return Ok(Path::trivial(v));
            }
        }
        let mut arrows = Vec::new();
        for name in text.split('.') {
            let i = self.arrow_index(name.trim()).ok_or_else(|| Error::Quiver(format!("unknown arrow '{name}'")))?;
            arrows.push(i);
        }
        Path::new(self, arrows)
    }

    pub fn format_path(&self, path: &Path) -> String {
        if path.arrows.is_empty() {
            format!("e{}", path.vertex)
        } else {
            path.arrows.iter().map(|&a| self.arrows[a].name.as_str()).collect::<Vec<_>>().join(".")
        }
    }
}

/// A path, stored as its arrow sequence plus its source vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Path {
    vertex: usize,
    arrows: Vec<usize>,
}

impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.arrows
            .len()
            .cmp(&other.arrows.len())
            .then_with(|| self.arrows.cmp(&other.arrows))
            .then(self.vertex.cmp(&other.vertex))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Path {
    pub fn trivial(vertex: usize) -> Self {
        Path { vertex, arrows: vec![] }
    }

    pub fn new(q: &Quiver, arrows: Vec<usize>) -> Result<Self> {
        let Some(&first) = arrows.first() else {
            return Err(Error::Quiver("use Path::trivial for paths of length zero".into()));
        };
        for w in arrows.windows(2) {
            if q.arrows[w[0]].target != q.arrows[w[1]].source {
                return Err(Error::Quiver(format!(
                    "arrows '{}' and '{}' do not compose",
                    q.arrows[w[0]].name, q.arrows[w[1]].name
                )));
            }
        }
        Ok(Path { vertex: q.arrows[first].source, arrows })
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn arrows(&self) -> &[usize] {
        &self.arrows
    }

    pub fn source(&self) -> usize {
        self.vertex
    }

    pub fn target(&self, q: &Quiver) -> usize {
        self.arrows.last().map_or(self.vertex, |&a| q.arrows[a].target)
    }

    /// The reversed path, read in the opposite quiver; `(pq)^o = q^o p^o`.
    pub fn opposite(&self, q: &Quiver) -> Path {
        let mut arrows = self.arrows.clone();
        arrows.reverse();
        Path { vertex: self.target(q), arrows }
    }

    /// `self` followed by `other`, or `None` when they do not compose.
    pub fn concat(&self, q: &Quiver, other: &Path) -> Option<Path> {
        if self.target(q) != other.vertex {
            return None;
        }
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&other.arrows);
        Some(Path { vertex: self.vertex, arrows })
    }

    /// Sub-path made of arrows `range`.
    pub fn slice(&self, q: &Quiver, from: usize, to: usize) -> Path {
        if from == to {
            let v = if from == 0 { self.vertex } else { q.arrows[self.arrows[from - 1]].target };
            return Path::trivial(v);
        }
        Path { vertex: q.arrows[self.arrows[from]].source, arrows: self.arrows[from..to].to_vec() }
    }
}

/// All paths of length `k`, in canonical order.
pub fn enumerate_paths(q: &Quiver, k: usize) -> Vec<Path> {
    let mut level: Vec<Path> = (0..q.vertex_count).map(Path::trivial).collect();
    for _ in 0..k {
        let mut next = Vec::new();
        for p in &level {
            let t = p.target(q);
            for (i, a) in q.arrows.iter().enumerate() {
                if a.source == t {
                    let mut arrows = p.arrows.clone();
                    arrows.push(i);
                    next.push(Path { vertex: if p.arrows.is_empty() { a.source } else { p.vertex }, arrows });
                }
            }
        }
        // trivial paths of different vertices would otherwise interleave arrows
        next.sort();
        level = next;
    }
    level
}

/// Indexed list of the paths of one length.
#[derive(Debug, Clone)]
pub struct PathTable {
    pub paths: Vec<Path>,
    index: HashMap<Path, usize>,
}

impl PathTable {
    pub fn new(q: &Quiver, k: usize) -> Self {
        let paths = enumerate_paths(q, k);
        let index = paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        PathTable { paths, index }
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn index_of(&self, p: &Path) -> Option<usize> {
        self.index.get(p).copied()
    }
}

/// A homogeneous linear combination of paths of one length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathElement {
    degree: usize,
    terms: BTreeMap<Path, u32>,
}

impl PathElement {
    pub fn zero(degree: usize) -> Self {
        PathElement { degree, terms: BTreeMap::new() }
    }

    pub fn from_terms(field: Field, degree: usize, terms: impl IntoIterator<Item = (Path, i64)>) -> Result<Self> {
        let mut e = Self::zero(degree);
        for (p, c) in terms {
            if p.len() != degree {
                return Err(Error::Presentation(format!(
                    "inhomogeneous element: path of length {} in degree {degree}",
                    p.len()
                )));
            }
            e.add_term(field, p, field.reduce(c));
        }
        Ok(e)
    }

    pub fn add_term(&mut self, field: Field, p: Path, c: u32) {
        let slot = self.terms.entry(p).or_insert(0);
        *slot = field.add(*slot, c);
        self.terms.retain(|_, v| *v != 0);
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Path, u32)> {
        self.terms.iter().map(|(p, &c)| (p, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coordinates in the canonical path basis of the given table.
    pub fn to_vector(&self, table: &PathTable) -> Vec<u32> {
        let mut v = vec![0; table.len()];
        for (p, c) in self.terms() {
            v[table.index_of(p).expect("path belongs to the table")] = c;
        }
        v
    }

    pub fn from_vector(degree: usize, table: &PathTable, v: &[u32]) -> Self {
        let terms = v.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (table.paths[i].clone(), c)).collect();
        PathElement { degree, terms }
    }

    /// The element read in the opposite quiver.
    pub fn opposite(&self, q: &Quiver) -> PathElement {
        PathElement { degree: self.degree, terms: self.terms.iter().map(|(p, &c)| (p.opposite(q), c)).collect() }
    }

    /// Splits into the components `e_i * self * e_j`.
    pub fn split_by_endpoints(&self, q: &Quiver) -> Vec<PathElement> {
        let mut parts: BTreeMap<(usize, usize), PathElement> = BTreeMap::new();
        for (p, c) in self.terms() {
            parts
                .entry((p.source(), p.target(q)))
                .or_insert_with(|| PathElement::zero(self.degree))
                .terms
                .insert(p.clone(), c);
        }
        parts.into_values().collect()
    }

    pub fn format(&self, q: &Quiver) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms.iter().map(|(p, c)| format!("{c}*{}", q.format_path(p))).collect::<Vec<_>>().join(" + ")
    }
}

/// `KQ_0`-valued pairing between `KQ_k^op` (elements over `q.opposite()`) and `KQ_k`:
/// `<p^o, q> = delta_{p,q} e_{t(p)}`. Returns the coefficient of each vertex idempotent.
pub fn pairing(field: Field, q: &Quiver, u: &PathElement, v: &PathElement) -> Result<Vec<u32>> {
    if u.degree != v.degree {
        return Err(Error::Dimension(format!("pairing degrees {} and {}", u.degree, v.degree)));
    }
    let op = q.opposite();
    let mut out = vec![0u32; q.vertex_count];
    for (w, cu) in u.terms() {
        let p = w.opposite(&op);
        if let Some(&cv) = v.terms.get(&p) {
            let t = p.target(q);
            out[t] = field.add(out[t], field.mul(cu, cv));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(q: &Quiver, ps: &[Path]) -> Vec<String> {
        ps.iter().map(|p| q.format_path(p)).collect()
    }

    #[test]
    fn enumeration_examples() {
        let one = Quiver::from_triples(1, &[("a", 0, 0)]).unwrap();
        assert_eq!(names(&one, &enumerate_paths(&one, 3)), vec!["a.a.a"]);
        let two = Quiver::from_triples(1, &[("x", 0, 0), ("y", 0, 0)]).unwrap();
        assert_eq!(names(&two, &enumerate_paths(&two, 2)), vec!["x.x", "x.y", "y.x", "y.y"]);
        let line = Quiver::from_triples(3, &[("a", 0, 1), ("b", 1, 2)]).unwrap();
        assert_eq!(names(&line, &enumerate_paths(&line, 2)), vec!["a.b"]);
        assert_eq!(names(&line, &enumerate_paths(&line, 0)), vec!["e0", "e1", "e2"]);
    }

    #[test]
    fn counts_match_adjacency_powers() {
        let q = Quiver::from_triples(3, &[("a", 0, 1), ("b", 1, 0), ("c", 1, 2), ("d", 2, 2)]).unwrap();
        for k in 0..7 {
            assert_eq!(enumerate_paths(&q, k).len() as u128, q.path_count(k));
        }
    }

    #[test]
    fn opposite_paths() {
        let q = Quiver::from_triples(3, &[("a", 0, 1), ("b", 1, 2)]).unwrap();
        let op = q.opposite();
        assert_eq!(Path::trivial(1).opposite(&q), Path::trivial(1));
        let a = q.parse_path("a").unwrap();
        let ao = a.opposite(&q);
        assert_eq!((ao.source(), ao.target(&op)), (1, 0));
        let ab = q.parse_path("a.b").unwrap();
        assert_eq!(op.format_path(&ab.opposite(&q)), "b^o.a^o");
        assert_eq!(ab.opposite(&q).opposite(&op), ab);
        assert_eq!(op.opposite(), q);
    }

    #[test]
    fn pairing_examples() {
        let f = Field::new(5).unwrap();
        let q = Quiver::from_triples(1, &[("x", 0, 0), ("y", 0, 0)]).unwrap();
        let op = q.opposite();
        let el = |quiver: &Quiver, terms: &[(&str, i64)]| {
            PathElement::from_terms(f, 2, terms.iter().map(|&(t, c)| (quiver.parse_path(t).unwrap(), c))).unwrap()
        };
        let xx = el(&q, &[("x.x", 1)]);
        assert_eq!(pairing(f, &q, &el(&op, &[("x^o.x^o", 1)]), &xx).unwrap(), vec![1]);
        assert_eq!(pairing(f, &q, &el(&op, &[("x^o.y^o", 1)]), &xx).unwrap(), vec![0]);
        let u = el(&op, &[("x^o.y^o", 1), ("y^o.x^o", 1)]);
        let v = el(&q, &[("x.y", 1), ("y.x", -1)]);
        assert_eq!(pairing(f, &q, &u, &v).unwrap(), vec![0]);
        assert!(pairing(f, &q, &u, &PathElement::zero(1)).is_err());
    }

    #[test]
    fn pairing_is_dual_basis() {
        let f = Field::new(101).unwrap();
        let q = Quiver::from_triples(2, &[("a", 0, 1), ("b", 1, 0), ("c", 0, 0)]).unwrap();
        let op = q.opposite();
        for k in 0..=5 {
            let ps = enumerate_paths(&q, k);
            for p in &ps {
                for r in &ps {
                    let u = PathElement::from_terms(f, k, [(p.opposite(&q), 1)]).unwrap();
                    let v = PathElement::from_terms(f, k, [(r.clone(), 1)]).unwrap();
                    let val = pairing(f, &q, &u, &v).unwrap();
                    assert_eq!(val.iter().any(|&c| c != 0), p == r);
                }
            }
            let _ = &op;
        }
    }

    #[test]
    fn rejects_bad_quivers() {
        assert!(Quiver::from_triples(1, &[("a", 0, 1)]).is_err());
        assert!(Quiver::from_triples(1, &[("a", 0, 0), ("a", 0, 0)]).is_err());
        let q = Quiver::from_triples(2, &[("a", 0, 1)]).unwrap();
        assert!(q.parse_path("a.a").is_err());
    }
}
